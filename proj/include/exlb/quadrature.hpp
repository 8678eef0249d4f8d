#pragma once

#include <functional>
#include <limits>

namespace exlb {

// Adaptive Gauss-Kronrod integration (boost.math behind the interface).
// Throws QuadratureError when the error estimate exceeds abs_tol by a wide
// margin. Infinite endpoints are allowed.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-10);

inline double integrate_to_inf(const std::function<double(double)>& f, double a,
                               double abs_tol = 1e-10) {
    return integrate(f, a, std::numeric_limits<double>::infinity(), abs_tol);
}

inline double integrate_real_line(const std::function<double(double)>& f,
                                  double abs_tol = 1e-10) {
    return integrate(f, -std::numeric_limits<double>::infinity(),
                     std::numeric_limits<double>::infinity(), abs_tol);
}

} // namespace exlb
