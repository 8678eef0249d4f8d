#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace exlb {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }

enum class MeasureKind { AtomicSymmetric, IsotropicRadial, UniformCircle };

// Atom of an atomic spectral measure. Frequencies are in cycles per unit
// length: a symmetric pair at +-t with total mass m contributes
// m * cos(2 pi <t,x>) to the covariance.
struct Atom {
    Vec2 freq;
    double mass = 0.0;
};

// Radial profile of an isotropic spectral measure in angular frequency units:
// d rho = psi(|w|) dw over R^2, so kappa(r) = 2 pi Int psi(w) J0(w r) w dw.
struct RadialDensity {
    std::function<double(double)> psi;
    double support_radius = 0.0; // radius carrying all but ~1e-8 of the mass
    std::string label;
};

// Hermitian probability measure on R^2 (the law of the field's frequencies).
// Immutable after validation; shareable across threads.
class SpectralMeasure {
  public:
    static SpectralMeasure atomic(std::vector<Atom> atoms);
    // rho = alpha d0 + beta/2 (dK + d-K) + gamma/2 (dL + d-L), K,L independent.
    static SpectralMeasure degenerate_five_atom(double alpha, double beta, double gamma,
                                                Vec2 K, Vec2 L);
    // Uniform measure on the circle |w| = angular_radius (angular units);
    // kappa(r) = J0(angular_radius * r). Radius 1 is the random plane wave.
    static SpectralMeasure uniform_circle(double angular_radius);
    static SpectralMeasure isotropic_radial(RadialDensity density);
    static SpectralMeasure bargmann_fock();

    static SpectralMeasure from_json_text(const std::string& text);
    static SpectralMeasure from_json_file(const std::string& path);

    MeasureKind kind() const { return kind_; }
    const std::vector<Atom>& atoms() const { return atoms_; }
    const RadialDensity& radial() const { return radial_; }
    double circle_radius() const { return circle_radius_; }

    bool validated() const { return validated_; }
    // Support contained in at most two lines through the origin (atomic only).
    bool degenerate_support() const { return degenerate_support_; }

    // kappa(lag) = Int cos(<w, lag>) d rho(w).
    double covariance(Vec2 lag) const;

    // Int |w|^p d rho in angular units (atomic atoms are converted via w = 2 pi t).
    double radial_moment(int power) const;

    // Matrix of second spectral moments Int w_i w_j d rho (angular units); this
    // is the covariance of grad f(0) and equals -grad^2 kappa(0).
    std::array<double, 4> second_moment_matrix() const;
    double gradient_covariance_det() const;

    // Largest angular frequency carrying appreciable mass; grid resolution
    // checks derive the shortest wavelength 2 pi / w from it.
    double max_angular_frequency() const;

    const std::string& label() const { return label_; }
    void set_label(std::string label) { label_ = std::move(label); }

  private:
    SpectralMeasure() = default;
    friend SpectralMeasure validate_measure(SpectralMeasure m);

    MeasureKind kind_ = MeasureKind::AtomicSymmetric;
    std::vector<Atom> atoms_;
    RadialDensity radial_;
    double circle_radius_ = 0.0;
    bool validated_ = false;
    bool degenerate_support_ = false;
    std::string label_;
};

// Enforces the probability-measure assumptions: total mass 1 (1e-12),
// Hermitian symmetry, atom dedup within 1e-12. Flags (not rejects) atomic
// measures supported on at most two lines through the origin. Idempotent.
SpectralMeasure validate_measure(SpectralMeasure m);

// Isotropic covariance kernel summarized by its derivatives at 0.
struct IsotropicKernel {
    double k2 = 0.0; // K''(0), must be negative
    double k4 = 0.0; // K''''(0), must be positive
    std::string name;

    static IsotropicKernel rpw() { return {-0.5, 0.375, "rpw"}; }
    static IsotropicKernel bargmann_fock() { return {-1.0, 3.0, "bargmann-fock"}; }

    // Kernel derivatives from spectral moments: K''(0) = -(1/2) Int |w|^2 d rho,
    // K''''(0) = (3/8) Int |w|^4 d rho.
    static IsotropicKernel from_measure(const SpectralMeasure& m, std::string name);
};

// (lambda, eta^2) = (-sqrt(3) K''(0) / sqrt(K''''(0)), -6 K''(0) / K''''(0)).
std::pair<double, double> isotropic_params(const IsotropicKernel& k);

} // namespace exlb
