#pragma once

#include <string>
#include <vector>

namespace exlb {

// Difference identity c_ES(l) - c_ES(-l) = grad_factor * l/(2 pi) phi(l).
// grad_factor is the gradient-variance coefficient of the field: for
// isotropic kernels -K''(0) = 2 lambda^2/eta^2, the square root of
// det grad^2 kappa(0). Doubles as a c_ES lower bound for l > 0.
double ces_difference(double level, double grad_factor);

// Flip-point upper bound on c_NS for isotropic fields; stated for l >= 0 and
// extended to negative levels by the symmetry c_NS(l) = c_NS(-l).
double cns_upper(double level, double lambda, double eta_sq);

// max(ces_difference(|l|), 0): the lower-bound curve of the figures.
double cns_lower(double level, double grad_factor);

// True iff lambda^2 > 6e/(2e + pi), which forces c_NS(0) < c_NS(1).
bool is_bimodal_guaranteed(double lambda);

// Levels beyond sqrt(2)/lambda have strictly decreasing c_NS and c_ES.
double monotone_threshold(double lambda);

struct BoundsRow {
    double level;
    double ces_diff;
    double ces_lower;
    double cns_lower;
    double cns_upper;
};

std::vector<BoundsRow> bounds_table(const std::vector<double>& levels, double lambda,
                                    double eta_sq);
std::string bounds_to_csv(const std::vector<BoundsRow>& rows);

} // namespace exlb
