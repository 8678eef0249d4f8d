#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "exlb/grid.hpp"
#include "exlb/spectral.hpp"

namespace exlb {

// Exact sampler for atomic symmetric measures: one independent
// (Rayleigh amplitude, uniform phase) pair per symmetric atom pair plus an
// N(0, alpha) constant for an atom at the origin. Deterministic given seed.
FieldGrid sample_atomic(const SpectralMeasure& m, const GridSpec& spec, std::uint64_t seed);

// Random plane wave approximation: m_directions equispaced unit-circle
// directions (angular frequency 1) with independent Gaussian coefficients of
// variance 1/M. Exactly Gaussian; covariance (1/M) sum_k cos(<theta_k, x>),
// which converges to J0(|x|). m_directions must be even and >= 2.
FieldGrid sample_rpw(int m_directions, const GridSpec& spec, std::uint64_t seed);

// Spectral synthesis for isotropic radial densities on a padded frequency
// grid (complex Gaussian weights, inverse FFT, real part). pad_factor >= 2
// keeps the periodization error in covariance below 1e-3 at usable lags.
FieldGrid sample_spectral_grid(const SpectralMeasure& m, const GridSpec& spec,
                               std::uint64_t seed, double pad_factor = 2.0);

// Named model wrapper so the estimator and CLI can sample uniformly.
class FieldModel {
  public:
    static FieldModel rpw(int m_directions = 256);
    static FieldModel bargmann_fock();
    static FieldModel atomic(SpectralMeasure m);

    FieldGrid sample(const GridSpec& spec, std::uint64_t seed) const;
    double min_wavelength() const;
    const std::string& label() const { return label_; }
    // Closed-form kernel when the model is isotropic with known derivatives.
    std::optional<IsotropicKernel> kernel() const { return kernel_; }
    const std::optional<SpectralMeasure>& measure() const { return measure_; }

  private:
    enum class Type { Rpw, BargmannFock, Atomic };
    Type type_ = Type::Rpw;
    int m_directions_ = 256;
    std::optional<SpectralMeasure> measure_;
    std::optional<IsotropicKernel> kernel_;
    std::string label_;
};

} // namespace exlb
