#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace exlb {

// Uniform grid over the square [0, side_length]^2, vertex (r, c) at
// (c * spacing, r * spacing), row-major storage.
struct GridSpec {
    double side_length = 0.0;
    int points_per_side = 0;

    double spacing() const { return side_length / (points_per_side - 1); }
    double area() const { return side_length * side_length; }

    // Snaps the requested side to a whole number of steps of
    // min_wavelength / points_per_wavelength.
    static GridSpec from_resolution(double side, double min_wavelength,
                                    double points_per_wavelength);
};

struct FieldGrid {
    GridSpec spec;
    std::vector<double> values; // points_per_side^2, row-major
    std::uint64_t seed = 0;
    std::string model_label;

    int n() const { return spec.points_per_side; }
    double at(int r, int c) const { return values[static_cast<std::size_t>(r) * n() + c]; }
    double& at(int r, int c) { return values[static_cast<std::size_t>(r) * n() + c]; }
};

// Flat binary dump: 16-byte header (magic "EXLB", u32 points_per_side,
// f64 spacing), then points_per_side^2 little-endian f64 values.
void write_field(const FieldGrid& g, const std::string& path);
FieldGrid read_field(const std::string& path);

} // namespace exlb
