#pragma once

namespace fracmin {

// Entry point behind main(): parses the subcommand grammar
//
//   fracmin <check-hypotheses|minimize|scan-mass|dilation-test|subadd-test|
//            theta-test|cc-classify|validate-kinetic>
//           --config <file.json> [--out <dir>]
//
// runs the command, and writes its JSON/CSV/field outputs plus one manifest
// into the output directory (default: $FRACMIN_OUT_ROOT or ./runs, plus the
// command name).  Returns 0 on success, 1 on domain errors (the error's
// symbolic name goes to stderr), 2 on usage errors.
int cli_dispatch(int argc, const char* const* argv);

}  // namespace fracmin
