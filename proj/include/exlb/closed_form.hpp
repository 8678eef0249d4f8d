#pragma once

#include <string>

#include "exlb/spectral.hpp"

namespace exlb {

enum class CriticalKind { MaxPlus, MinMinus, Saddle };

// Exact critical-point level densities of planar isotropic Gaussian fields,
// parameterised by (lambda, eta^2). Two regimes: subcritical lambda < sqrt 2
// and critical lambda = sqrt 2 (where p_max carries an indicator on x >= 0).
class ClosedFormDensities {
  public:
    ClosedFormDensities(double lambda, double eta_sq);
    static ClosedFormDensities from_kernel(const IsotropicKernel& k);

    double lambda() const { return lambda_; }
    double eta_sq() const { return eta_sq_; }
    bool critical_case() const { return critical_; }

    // Densities per unit area per unit level.
    double p_max(double x) const;
    double p_min(double x) const { return p_max(-x); }
    double p_saddle(double x) const;

    // Int_l^inf p_h(x) dx by adaptive quadrature (abs tol 1e-10); l = -inf allowed.
    double tail_integral(CriticalKind h, double level) const;
    double total(CriticalKind h) const;

    // Gradient-variance factor -K''(0) = 2 lambda^2 / eta^2; equals the square
    // root of det grad^2 kappa(0) for isotropic kernels. This is the constant
    // in the Euler-characteristic difference identity.
    double gradient_factor() const { return 2.0 * lambda_ * lambda_ / eta_sq_; }

    // Right side of the Euler-characteristic identity:
    // Int_l^inf (p_max - p_saddle + p_min) = gradient_factor * l phi(l) / (2 pi).
    double euler_difference(double level) const;
    // Left side, by quadrature of the three densities.
    double euler_difference_by_quadrature(double level, double abs_tol = 1e-8) const;

    std::string density_table_csv(double lo, double hi, double step) const;

  private:
    double lambda_;
    double eta_sq_;
    bool critical_;
};

} // namespace exlb
