#pragma once

#include <cmath>

namespace exlb {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSqrt2 = 1.41421356237309504880;

// Standard normal density.
inline double norm_pdf(double x) {
    static const double inv_sqrt_2pi = 0.39894228040143267794;
    return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

// Standard normal CDF via erfc; relative error ~1e-15 in double.
inline double norm_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

inline double norm_tail(double x) { return 0.5 * std::erfc(x / kSqrt2); }

} // namespace exlb
