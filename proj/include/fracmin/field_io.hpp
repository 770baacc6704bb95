#pragma once

#include <string>

#include "fracmin/field.hpp"

namespace fracmin {

// Binary field format: one JSON header line
//   {"box_length":..,"dim":..,"points_per_dim":..,"s":..}\n
// followed by M^N little-endian float64 node values. Round-trips bit-exactly.
void write_field_binary(const Field& u, const std::string& path);
Field read_field_binary(const std::string& path);

// CSV variant: header "x[,y],u" then one node per line (full precision).
void write_field_csv(const Field& u, const std::string& path);

}  // namespace fracmin
