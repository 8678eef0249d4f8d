#include "exlb/grid.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

#include "exlb/errors.hpp"

namespace exlb {

GridSpec GridSpec::from_resolution(double side, double min_wavelength,
                                   double points_per_wavelength) {
    if (!(side > 0.0) || !(min_wavelength > 0.0) || !(points_per_wavelength > 1.0))
        throw ConfigError("invalid grid resolution request");
    const double h = min_wavelength / points_per_wavelength;
    const int n = static_cast<int>(std::lround(side / h)) + 1;
    if (n < 3) throw ConfigError("grid too small");
    return GridSpec{(n - 1) * h, n};
}

void write_field(const FieldGrid& g, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open for writing: " + path);
    char header[16] = {};
    std::memcpy(header, "EXLB", 4);
    const std::uint32_t n = static_cast<std::uint32_t>(g.spec.points_per_side);
    const double h = g.spec.spacing();
    std::memcpy(header + 4, &n, 4);
    std::memcpy(header + 8, &h, 8);
    out.write(header, 16);
    out.write(reinterpret_cast<const char*>(g.values.data()),
              static_cast<std::streamsize>(g.values.size() * sizeof(double)));
    if (!out) throw ConfigError("short write: " + path);
}

FieldGrid read_field(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open field file: " + path);
    char header[16];
    in.read(header, 16);
    if (!in || std::memcmp(header, "EXLB", 4) != 0)
        throw ConfigError("bad field file magic: " + path);
    std::uint32_t n = 0;
    double h = 0.0;
    std::memcpy(&n, header + 4, 4);
    std::memcpy(&h, header + 8, 8);
    if (n < 2 || !(h > 0.0)) throw ConfigError("bad field header: " + path);
    FieldGrid g;
    g.spec = GridSpec{(n - 1) * h, static_cast<int>(n)};
    g.values.resize(static_cast<std::size_t>(n) * n);
    in.read(reinterpret_cast<char*>(g.values.data()),
            static_cast<std::streamsize>(g.values.size() * sizeof(double)));
    if (!in) throw ConfigError("truncated field file: " + path);
    return g;
}

} // namespace exlb
