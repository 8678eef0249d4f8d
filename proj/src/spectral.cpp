#include "exlb/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "exlb/errors.hpp"
#include "exlb/normal.hpp"
#include "exlb/quadrature.hpp"

namespace exlb {

namespace {

constexpr double kAtomTol = 1e-12;

bool same_point(Vec2 a, Vec2 b) {
    return std::abs(a.x - b.x) <= kAtomTol && std::abs(a.y - b.y) <= kAtomTol;
}

bool is_origin(Vec2 a) { return std::abs(a.x) <= kAtomTol && std::abs(a.y) <= kAtomTol; }

// Number of distinct lines through the origin spanned by the atom support.
int count_support_lines(const std::vector<Atom>& atoms) {
    std::vector<Vec2> dirs;
    for (const auto& a : atoms) {
        if (is_origin(a.freq)) continue;
        bool found = false;
        for (const auto& d : dirs) {
            if (std::abs(cross(d, a.freq)) <= 1e-10 * std::hypot(a.freq.x, a.freq.y)) {
                found = true;
                break;
            }
        }
        if (!found) dirs.push_back(a.freq);
        if (dirs.size() > 2) break;
    }
    return static_cast<int>(dirs.size());
}

} // namespace

SpectralMeasure SpectralMeasure::atomic(std::vector<Atom> atoms) {
    SpectralMeasure m;
    m.kind_ = MeasureKind::AtomicSymmetric;
    m.atoms_ = std::move(atoms);
    m.label_ = "atomic";
    return m;
}

SpectralMeasure SpectralMeasure::degenerate_five_atom(double alpha, double beta,
                                                      double gamma, Vec2 K, Vec2 L) {
    if (!(beta > 0.0) || !(gamma > 0.0))
        throw ConfigError("degenerate measure requires beta, gamma > 0");
    if (std::abs(alpha + beta + gamma - 1.0) > 1e-12)
        throw MassNotOneError("degenerate measure requires alpha + beta + gamma = 1");
    if (std::abs(cross(K, L)) <= 1e-14)
        throw ConfigError("degenerate measure requires linearly independent K, L");
    std::vector<Atom> atoms;
    if (alpha > 0.0) atoms.push_back({{0.0, 0.0}, alpha});
    atoms.push_back({K, beta / 2});
    atoms.push_back({{-K.x, -K.y}, beta / 2});
    atoms.push_back({L, gamma / 2});
    atoms.push_back({{-L.x, -L.y}, gamma / 2});
    SpectralMeasure m = atomic(std::move(atoms));
    m.label_ = "degenerate";
    return validate_measure(std::move(m));
}

SpectralMeasure SpectralMeasure::uniform_circle(double angular_radius) {
    if (!(angular_radius > 0.0)) throw ConfigError("circle radius must be positive");
    SpectralMeasure m;
    m.kind_ = MeasureKind::UniformCircle;
    m.circle_radius_ = angular_radius;
    m.validated_ = true;
    m.label_ = "uniform-circle";
    return m;
}

SpectralMeasure SpectralMeasure::isotropic_radial(RadialDensity density) {
    if (!density.psi || !(density.support_radius > 0.0))
        throw ConfigError("isotropic radial density requires psi and a support radius");
    SpectralMeasure m;
    m.kind_ = MeasureKind::IsotropicRadial;
    m.radial_ = std::move(density);
    m.label_ = m.radial_.label.empty() ? "isotropic-radial" : m.radial_.label;
    m.validated_ = true;
    return m;
}

SpectralMeasure SpectralMeasure::bargmann_fock() {
    RadialDensity d;
    d.psi = [](double w) { return std::exp(-0.5 * w * w) / (2.0 * kPi); };
    // 2-D Gaussian: P(|w| > r) = exp(-r^2/2); truncation error ~7e-13 at 7.5.
    d.support_radius = 7.5;
    d.label = "bargmann-fock";
    return isotropic_radial(std::move(d));
}

SpectralMeasure validate_measure(SpectralMeasure m) {
    if (m.kind_ != MeasureKind::AtomicSymmetric) {
        m.validated_ = true;
        return m;
    }
    // Deduplicate: merge atoms closer than 1e-12 in frequency space.
    std::vector<Atom> merged;
    for (const auto& a : m.atoms_) {
        if (a.mass < 0.0) throw ConfigError("atom mass must be nonnegative");
        bool found = false;
        for (auto& b : merged) {
            if (same_point(a.freq, b.freq)) {
                b.mass += a.mass;
                found = true;
                break;
            }
        }
        if (!found) merged.push_back(a);
    }
    double mass = 0.0;
    for (const auto& a : merged) mass += a.mass;
    if (std::abs(mass - 1.0) > 1e-12) {
        std::ostringstream os;
        os << "total mass " << mass << " != 1";
        throw MassNotOneError(os.str());
    }
    // Hermitian symmetry: every atom needs a mirror of equal mass.
    for (const auto& a : merged) {
        if (is_origin(a.freq)) continue;
        const Vec2 neg{-a.freq.x, -a.freq.y};
        bool found = false;
        for (const auto& b : merged) {
            if (same_point(b.freq, neg)) {
                if (std::abs(a.mass - b.mass) > 1e-12)
                    throw NonHermitianError("mirror atom has unequal mass");
                found = true;
                break;
            }
        }
        if (!found) {
            std::ostringstream os;
            os << "atom at (" << a.freq.x << ", " << a.freq.y << ") has no mirror";
            throw NonHermitianError(os.str());
        }
    }
    // Canonical order fixes the draw order of samplers.
    std::sort(merged.begin(), merged.end(), [](const Atom& a, const Atom& b) {
        if (a.freq.x != b.freq.x) return a.freq.x < b.freq.x;
        return a.freq.y < b.freq.y;
    });
    m.atoms_ = std::move(merged);
    m.degenerate_support_ = count_support_lines(m.atoms_) <= 2;
    m.validated_ = true;
    return m;
}

double SpectralMeasure::covariance(Vec2 lag) const {
    switch (kind_) {
        case MeasureKind::AtomicSymmetric: {
            double s = 0.0;
            for (const auto& a : atoms_)
                s += a.mass * std::cos(2.0 * kPi * dot(a.freq, lag));
            return s;
        }
        case MeasureKind::UniformCircle:
            return std::cyl_bessel_j(0, circle_radius_ * std::hypot(lag.x, lag.y));
        case MeasureKind::IsotropicRadial: {
            const double r = std::hypot(lag.x, lag.y);
            const auto psi = radial_.psi;
            return 2.0 * kPi *
                   integrate(
                       [psi, r](double w) {
                           return psi(w) * w * std::cyl_bessel_j(0, w * r);
                       },
                       0.0, radial_.support_radius, 1e-10);
        }
    }
    return 0.0;
}

double SpectralMeasure::radial_moment(int power) const {
    switch (kind_) {
        case MeasureKind::AtomicSymmetric: {
            double s = 0.0;
            for (const auto& a : atoms_)
                s += a.mass * std::pow(2.0 * kPi * std::hypot(a.freq.x, a.freq.y), power);
            return s;
        }
        case MeasureKind::UniformCircle:
            return std::pow(circle_radius_, power);
        case MeasureKind::IsotropicRadial: {
            const auto psi = radial_.psi;
            return 2.0 * kPi *
                   integrate([psi, power](double w) { return psi(w) * std::pow(w, power + 1); },
                             0.0, radial_.support_radius, 1e-12);
        }
    }
    return 0.0;
}

std::array<double, 4> SpectralMeasure::second_moment_matrix() const {
    switch (kind_) {
        case MeasureKind::AtomicSymmetric: {
            double xx = 0.0, xy = 0.0, yy = 0.0;
            for (const auto& a : atoms_) {
                const double wx = 2.0 * kPi * a.freq.x, wy = 2.0 * kPi * a.freq.y;
                xx += a.mass * wx * wx;
                xy += a.mass * wx * wy;
                yy += a.mass * wy * wy;
            }
            return {xx, xy, xy, yy};
        }
        default: {
            // Isotropic: Int w1^2 = (1/2) Int |w|^2, off-diagonals vanish.
            const double half = 0.5 * radial_moment(2);
            return {half, 0.0, 0.0, half};
        }
    }
}

double SpectralMeasure::gradient_covariance_det() const {
    const auto m = second_moment_matrix();
    return m[0] * m[3] - m[1] * m[2];
}

double SpectralMeasure::max_angular_frequency() const {
    switch (kind_) {
        case MeasureKind::AtomicSymmetric: {
            double w = 0.0;
            for (const auto& a : atoms_)
                w = std::max(w, 2.0 * kPi * std::hypot(a.freq.x, a.freq.y));
            return w;
        }
        case MeasureKind::UniformCircle:
            return circle_radius_;
        case MeasureKind::IsotropicRadial: {
            // Radius containing all but 1e-4 of the mass; bisection on the tail.
            const auto psi = radial_.psi;
            const double total = radial_moment(0);
            double lo = 0.0, hi = radial_.support_radius;
            for (int it = 0; it < 60; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double tail = 2.0 * kPi *
                                    integrate([psi](double w) { return psi(w) * w; }, mid,
                                              radial_.support_radius, 1e-12);
                if (tail > 1e-4 * total)
                    lo = mid;
                else
                    hi = mid;
            }
            return hi;
        }
    }
    return 0.0;
}

SpectralMeasure SpectralMeasure::from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("measure JSON parse error: ") + e.what());
    }
    const std::string kind = j.value("kind", "atomic");
    if (kind == "atomic") {
        std::vector<Atom> atoms;
        if (j.contains("atoms")) {
            for (const auto& row : j.at("atoms")) {
                if (!row.is_array() || row.size() != 3)
                    throw ConfigError("atom rows must be [x, y, mass]");
                atoms.push_back({{row[0].get<double>(), row[1].get<double>()},
                                 row[2].get<double>()});
            }
        }
        if (j.contains("alpha") || j.contains("beta") || j.contains("gamma")) {
            const double alpha = j.value("alpha", 0.0);
            const double beta = j.value("beta", 0.0);
            const double gamma = j.value("gamma", 0.0);
            Vec2 K{1.0, 0.0}, L{0.0, 1.0};
            if (j.contains("K")) K = {j["K"][0].get<double>(), j["K"][1].get<double>()};
            if (j.contains("L")) L = {j["L"][0].get<double>(), j["L"][1].get<double>()};
            if (atoms.empty())
                return degenerate_five_atom(alpha, beta, gamma, K, L);
            throw ConfigError("give either atoms or alpha/beta/gamma, not both");
        }
        return validate_measure(atomic(std::move(atoms)));
    }
    if (kind == "uniform_circle")
        return uniform_circle(j.value("radius", 1.0));
    throw ConfigError("unknown measure kind: " + kind);
}

SpectralMeasure SpectralMeasure::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open measure file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

IsotropicKernel IsotropicKernel::from_measure(const SpectralMeasure& m, std::string name) {
    IsotropicKernel k;
    k.k2 = -0.5 * m.radial_moment(2);
    k.k4 = 0.375 * m.radial_moment(4);
    k.name = std::move(name);
    return k;
}

std::pair<double, double> isotropic_params(const IsotropicKernel& k) {
    if (!(k.k2 < 0.0) || !(k.k4 > 0.0))
        throw InvalidDerivativesError("need K''(0) < 0 and K''''(0) > 0");
    const double lambda = -std::sqrt(3.0) * k.k2 / std::sqrt(k.k4);
    const double eta_sq = -6.0 * k.k2 / k.k4;
    if (!(lambda > 0.0) || lambda > kSqrt2 + 1e-9)
        throw InvalidDerivativesError("lambda outside (0, sqrt 2]");
    return {lambda, eta_sq};
}

} // namespace exlb
