#include "fracmin/cli.hpp"

int main(int argc, char** argv) { return fracmin::cli_dispatch(argc, argv); }
