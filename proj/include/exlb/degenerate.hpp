#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "exlb/rng.hpp"
#include "exlb/spectral.hpp"

namespace exlb {

// The 4/5-atom doubly periodic field
//   f(x) = X0 + Y1 cos(2 pi K.x + th1) + Y2 cos(2 pi L.x + th2),
// X0 ~ N(0, alpha), Y1 ~ Ray(sqrt beta), Y2 ~ Ray(sqrt gamma). The 4-atom
// case is alpha = 0.
struct DegenerateModel {
    double alpha = 0.0;
    double beta = 0.5;
    double gamma = 0.5;
    Vec2 K{1.0, 0.0};
    Vec2 L{0.0, 1.0};

    double cross_area() const { return std::abs(cross(K, L)); }
    void validate() const;
    SpectralMeasure measure() const;
};

// Excursion constant: |K x L| * P(|Y1-Y2| <= l + X0 <= Y1+Y2) by nested
// quadrature (outer Gaussian skipped when alpha = 0), abs tolerance ~1e-8.
double ces_exact(double level, const DegenerateModel& m);

// Level-set constant: |K x L| * P(|Y1-Y2| <= |l + X0| <= Y1+Y2)
// = ces_exact(l) + ces_exact(-l).
double cns_exact(double level, const DegenerateModel& m);

struct DegenerateDensityPair {
    double p_max;          // |K x L| * density of X0 + Y1 + Y2
    double p_lower_saddle; // |K x L| * density of X0 + |Y1 - Y2|
};

// Densities by 1-D quadrature of the Rayleigh-pair integrals, convolved with
// the Gaussian when alpha > 0 (alpha = 0 keeps the jump of p_|Y1-Y2| at 0 exact).
DegenerateDensityPair degenerate_densities(double x, const DegenerateModel& m);

// Tail integrals Int_l^inf of the two densities (for the integral identity
// Int_l^inf (p_max - p_lower_saddle) = ces_exact(l)).
double degenerate_max_tail(double level, const DegenerateModel& m);
double degenerate_lower_saddle_tail(double level, const DegenerateModel& m);

// One sample of the L^1 limit of N_ES,R(l)/Area: |K x L| * 1{l - X0 in
// (|Y1-Y2|, Y1+Y2]}. Always 0 or |K x L|; its mean is ces_exact(l).
double nonergodic_limit(double level, const DegenerateModel& m, Rng& rng);

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::int64_t n = 0;
};

// Direct Monte Carlo over (X0, Y1, Y2); the oracle for the quadrature routes.
// absolute_band selects the |l + X0| event (the level-set constant).
McEstimate mc_band_probability(double level, const DegenerateModel& m, std::int64_t n,
                               std::uint64_t seed, bool absolute_band);

std::string degenerate_curves_csv(const DegenerateModel& m,
                                  const std::vector<double>& levels);

} // namespace exlb
