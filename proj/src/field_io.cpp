#include "fracmin/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "fracmin/errors.hpp"

namespace fracmin {

namespace {

static_assert(std::endian::native == std::endian::little,
              "field binary format assumes a little-endian host");

nlohmann::json header_json(const Grid& g) {
    return {{"dim", g.dim()},
            {"box_length", g.box_length()},
            {"points_per_dim", g.points_per_dim()},
            {"s", g.s()}};
}

}  // namespace

void write_field_binary(const Field& u, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open for writing: " + path);
    out << header_json(u.grid()).dump() << '\n';
    out.write(reinterpret_cast<const char*>(u.values().data()),
              static_cast<std::streamsize>(u.size() * sizeof(double)));
    if (!out) throw ConfigError("write failed: " + path);
}

Field read_field_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open for reading: " + path);
    std::string header;
    if (!std::getline(in, header)) throw ConfigError("missing field header: " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(header);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("bad field header in " + path + ": " + e.what());
    }
    Grid grid(j.at("dim").get<int>(), j.at("box_length").get<double>(),
              j.at("points_per_dim").get<int>(), j.at("s").get<double>());
    std::vector<double> vals(grid.total_points());
    in.read(reinterpret_cast<char*>(vals.data()),
            static_cast<std::streamsize>(vals.size() * sizeof(double)));
    if (in.gcount() != static_cast<std::streamsize>(vals.size() * sizeof(double)))
        throw ConfigError("truncated field payload: " + path);
    return Field(grid, std::move(vals));
}

void write_field_csv(const Field& u, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open for writing: " + path);
    const Grid& g = u.grid();
    out << (g.dim() == 1 ? "x,u\n" : "x,y,u\n");
    char line[96];
    for (std::size_t j = 0; j < u.size(); ++j) {
        const Point p = g.node(j);
        if (g.dim() == 1)
            std::snprintf(line, sizeof line, "%.17g,%.17g\n", p[0], u[j]);
        else
            std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", p[0], p[1], u[j]);
        out << line;
    }
    if (!out) throw ConfigError("write failed: " + path);
}

}  // namespace fracmin
