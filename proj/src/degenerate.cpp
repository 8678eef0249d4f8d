#include "exlb/degenerate.hpp"

#include <cmath>
#include <sstream>

#include "exlb/errors.hpp"
#include "exlb/normal.hpp"
#include "exlb/quadrature.hpp"

namespace exlb {

namespace {

double rayleigh_pdf(double y, double s2) {
    return y > 0.0 ? y / s2 * std::exp(-y * y / (2.0 * s2)) : 0.0;
}

double rayleigh_cdf(double y, double s2) {
    return y > 0.0 ? 1.0 - std::exp(-y * y / (2.0 * s2)) : 0.0;
}

// P(|Y1 - Y2| <= w <= Y1 + Y2) for fixed w; zero for w <= 0. The admissible
// y2 range for given y1 is [|y1 - w|, y1 + w].
double band_probability(double w, const DegenerateModel& m) {
    if (w <= 0.0) return 0.0;
    const double b = m.beta, g = m.gamma;
    auto f = [b, g, w](double y1) {
        return rayleigh_pdf(y1, b) *
               (rayleigh_cdf(y1 + w, g) - rayleigh_cdf(std::abs(y1 - w), g));
    };
    const double hi = 10.0 * std::sqrt(b) + w;
    // Integrand kinks at y1 = w.
    if (w < hi)
        return integrate(f, 0.0, w, 5e-11) + integrate(f, w, hi, 5e-11);
    return integrate(f, 0.0, hi, 1e-10);
}

double gaussian_average(double level, const DegenerateModel& m,
                        const std::function<double(double)>& inner) {
    if (m.alpha == 0.0) return inner(level);
    const double sd = std::sqrt(m.alpha);
    auto f = [&](double t) { return norm_pdf(t) * inner(level + sd * t); };
    // Split at the w = 0 kink (t = -level/sd) when it lies in range.
    const double kink = -level / sd;
    const double span = 10.0;
    if (kink > -span && kink < span)
        return integrate(f, -span, kink, 5e-9) + integrate(f, kink, span, 5e-9);
    return integrate(f, -span, span, 1e-8);
}

// Density of Y1 + Y2 at s (zero for s <= 0).
double sum_density(double s, const DegenerateModel& m) {
    if (s <= 0.0) return 0.0;
    const double b = m.beta, g = m.gamma;
    auto f = [b, g, s](double y) { return rayleigh_pdf(y, b) * rayleigh_pdf(s - y, g); };
    return integrate(f, 0.0, s, 1e-10);
}

// Density of |Y1 - Y2| at d (zero for d < 0; jump at 0).
double diff_density(double d, const DegenerateModel& m) {
    if (d < 0.0) return 0.0;
    const double b = m.beta, g = m.gamma;
    auto f = [b, g, d](double y) {
        return rayleigh_pdf(y + d, b) * rayleigh_pdf(y, g) +
               rayleigh_pdf(y, b) * rayleigh_pdf(y + d, g);
    };
    return integrate(f, 0.0, 12.0 * std::sqrt(std::max(b, g)) + d, 1e-10);
}

// Tail P(Z > l) with Z = one of the two nonnegative variables, Gaussian-shifted
// when alpha > 0: P(X0 + Z > l) = Int p_Z(z) Qbar((l - z)/sd) dz.
double shifted_tail(double level, const DegenerateModel& m, bool use_sum) {
    auto dens = [&](double z) { return use_sum ? sum_density(z, m) : diff_density(z, m); };
    const double zmax = 12.0 * (std::sqrt(m.beta) + std::sqrt(m.gamma));
    if (m.alpha == 0.0) {
        const double lo = std::max(level, 0.0);
        if (lo >= zmax) return 0.0;
        return integrate(dens, lo, zmax, 1e-9);
    }
    const double sd = std::sqrt(m.alpha);
    auto f = [&](double z) { return dens(z) * norm_tail((level - z) / sd); };
    return integrate(f, 0.0, zmax, 1e-9);
}

} // namespace

void DegenerateModel::validate() const {
    if (!(beta > 0.0) || !(gamma > 0.0))
        throw ConfigError("degenerate model requires beta, gamma > 0");
    if (alpha < 0.0 || std::abs(alpha + beta + gamma - 1.0) > 1e-12)
        throw ConfigError("degenerate model requires alpha + beta + gamma = 1, alpha >= 0");
    if (cross_area() <= 1e-14)
        throw ConfigError("degenerate model requires linearly independent K, L");
}

SpectralMeasure DegenerateModel::measure() const {
    validate();
    return SpectralMeasure::degenerate_five_atom(alpha, beta, gamma, K, L);
}

double ces_exact(double level, const DegenerateModel& m) {
    m.validate();
    return m.cross_area() *
           gaussian_average(level, m, [&m](double w) { return band_probability(w, m); });
}

double cns_exact(double level, const DegenerateModel& m) {
    return ces_exact(level, m) + ces_exact(-level, m);
}

DegenerateDensityPair degenerate_densities(double x, const DegenerateModel& m) {
    m.validate();
    const double cr = m.cross_area();
    if (m.alpha == 0.0)
        return {cr * sum_density(x, m), cr * diff_density(x, m)};
    const double sd = std::sqrt(m.alpha);
    const double zmax = 12.0 * (std::sqrt(m.beta) + std::sqrt(m.gamma));
    auto conv = [&](auto dens) {
        return integrate(
            [&, x](double z) { return dens(z) * norm_pdf((x - z) / sd) / sd; }, 0.0, zmax,
            1e-8);
    };
    return {cr * conv([&](double z) { return sum_density(z, m); }),
            cr * conv([&](double z) { return diff_density(z, m); })};
}

double degenerate_max_tail(double level, const DegenerateModel& m) {
    m.validate();
    return m.cross_area() * shifted_tail(level, m, /*use_sum=*/true);
}

double degenerate_lower_saddle_tail(double level, const DegenerateModel& m) {
    m.validate();
    return m.cross_area() * shifted_tail(level, m, /*use_sum=*/false);
}

double nonergodic_limit(double level, const DegenerateModel& m, Rng& rng) {
    const double x0 = m.alpha > 0.0 ? rng.normal(std::sqrt(m.alpha)) : 0.0;
    const double y1 = rng.rayleigh(std::sqrt(m.beta));
    const double y2 = rng.rayleigh(std::sqrt(m.gamma));
    const double w = level - x0;
    const bool inside = w > std::abs(y1 - y2) && w <= y1 + y2;
    return inside ? m.cross_area() : 0.0;
}

McEstimate mc_band_probability(double level, const DegenerateModel& m, std::int64_t n,
                               std::uint64_t seed, bool absolute_band) {
    m.validate();
    Rng rng(seed);
    std::int64_t hits = 0;
    for (std::int64_t i = 0; i < n; ++i) {
        const double x0 = m.alpha > 0.0 ? rng.normal(std::sqrt(m.alpha)) : 0.0;
        const double y1 = rng.rayleigh(std::sqrt(m.beta));
        const double y2 = rng.rayleigh(std::sqrt(m.gamma));
        const double w = absolute_band ? std::abs(level + x0) : level + x0;
        if (std::abs(y1 - y2) <= w && w <= y1 + y2) ++hits;
    }
    const double p = static_cast<double>(hits) / static_cast<double>(n);
    McEstimate e;
    e.mean = m.cross_area() * p;
    e.std_error = m.cross_area() * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
    e.n = n;
    return e;
}

std::string degenerate_curves_csv(const DegenerateModel& m,
                                  const std::vector<double>& levels) {
    std::ostringstream os;
    os << "level,cns_exact,ces_exact,p_max,p_lower_saddle\n";
    os.precision(12);
    for (double l : levels) {
        const auto d = degenerate_densities(l, m);
        os << l << ',' << cns_exact(l, m) << ',' << ces_exact(l, m) << ',' << d.p_max << ','
           << d.p_lower_saddle << '\n';
    }
    return os.str();
}

} // namespace exlb
