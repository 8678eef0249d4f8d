#include "exlb/sampler.hpp"

#include <fftw3.h>

#include <atomic>
#include <cmath>
#include <complex>
#include <cstdio>
#include <map>
#include <mutex>
#include <vector>

#include "exlb/errors.hpp"
#include "exlb/normal.hpp"
#include "exlb/rng.hpp"

namespace exlb {

namespace {

void warn_resolution(const GridSpec& spec, double max_w, const char* what) {
    if (max_w <= 0.0) return;
    const double min_wavelength = 2.0 * kPi / max_w;
    if (spec.spacing() > min_wavelength / 6.0 + 1e-12) {
        static std::atomic<int> emitted{0};
        if (emitted.fetch_add(1) < 3) {
            std::fprintf(stderr,
                         "[exlb] warning: %s spacing %.4g exceeds wavelength/6 = %.4g; "
                         "saddle classification may be unreliable\n",
                         what, spec.spacing(), min_wavelength / 6.0);
        }
    }
}

// Adds amplitude * cos(<w, x> + phase) over the grid. Phases advance by exact
// per-row trig with incremental complex rotation along columns; the rotation
// drift over one row is ~n ulp.
void add_wave(FieldGrid& g, double wx, double wy, double amplitude, double phase) {
    const int n = g.n();
    const double h = g.spec.spacing();
    const std::complex<double> col_step{std::cos(wx * h), std::sin(wx * h)};
    for (int r = 0; r < n; ++r) {
        const double row_phase = wy * h * r + phase;
        std::complex<double> z{std::cos(row_phase), std::sin(row_phase)};
        double* row = g.values.data() + static_cast<std::size_t>(r) * n;
        for (int c = 0; c < n; ++c) {
            row[c] += amplitude * z.real();
            z *= col_step;
        }
    }
}

// FFTW planning is not thread-safe; executing a cached plan on fresh arrays is.
class FftPlanCache {
  public:
    void execute_backward(int size, std::vector<std::complex<double>>& data) {
        fftw_plan plan = nullptr;
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto it = plans_.find(size);
            if (it == plans_.end()) {
                std::vector<std::complex<double>> scratch(
                    static_cast<std::size_t>(size) * size);
                plan = fftw_plan_dft_2d(size, size,
                                        reinterpret_cast<fftw_complex*>(scratch.data()),
                                        reinterpret_cast<fftw_complex*>(scratch.data()),
                                        FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
                plans_.emplace(size, plan);
            } else {
                plan = it->second;
            }
        }
        fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(data.data()),
                         reinterpret_cast<fftw_complex*>(data.data()));
    }

  private:
    std::mutex mu_;
    std::map<int, fftw_plan> plans_;
};

FftPlanCache& plan_cache() {
    static FftPlanCache cache;
    return cache;
}

} // namespace

FieldGrid sample_atomic(const SpectralMeasure& m, const GridSpec& spec,
                        std::uint64_t seed) {
    if (m.kind() != MeasureKind::AtomicSymmetric || !m.validated())
        throw ConfigError("sample_atomic requires a validated atomic measure");
    warn_resolution(spec, m.max_angular_frequency(), m.label().c_str());

    FieldGrid g;
    g.spec = spec;
    g.seed = seed;
    g.model_label = m.label();
    g.values.assign(static_cast<std::size_t>(spec.points_per_side) * spec.points_per_side,
                    0.0);

    Rng rng(seed);
    double constant = 0.0;
    // Atoms are in canonical order after validation, so draws are reproducible.
    for (const auto& a : m.atoms()) {
        const bool origin = std::abs(a.freq.x) <= 1e-12 && std::abs(a.freq.y) <= 1e-12;
        if (origin) {
            constant += rng.normal(std::sqrt(a.mass));
            continue;
        }
        // Take each symmetric pair once, from its lexicographically positive member.
        if (a.freq.x < 0.0 || (a.freq.x == 0.0 && a.freq.y < 0.0)) continue;
        const double pair_mass = 2.0 * a.mass;
        const double amplitude = rng.rayleigh(std::sqrt(pair_mass));
        const double phase = rng.uniform_angle();
        add_wave(g, 2.0 * kPi * a.freq.x, 2.0 * kPi * a.freq.y, amplitude, phase);
    }
    if (constant != 0.0)
        for (auto& v : g.values) v += constant;
    return g;
}

FieldGrid sample_rpw(int m_directions, const GridSpec& spec, std::uint64_t seed) {
    if (m_directions < 2 || m_directions % 2 != 0)
        throw ConfigError("sample_rpw requires an even direction count >= 2");
    warn_resolution(spec, 1.0, "rpw");

    FieldGrid g;
    g.spec = spec;
    g.seed = seed;
    g.model_label = "rpw";
    g.values.assign(static_cast<std::size_t>(spec.points_per_side) * spec.points_per_side,
                    0.0);

    Rng rng(seed);
    const double sigma = 1.0 / std::sqrt(static_cast<double>(m_directions));
    for (int k = 0; k < m_directions; ++k) {
        const double theta = 2.0 * kPi * k / m_directions;
        const double a = rng.normal(sigma);
        const double b = rng.normal(sigma);
        // a cos(<t,x>) + b sin(<t,x>) = R cos(<t,x> - atan2(b,a))
        const double amplitude = std::hypot(a, b);
        const double phase = -std::atan2(b, a);
        add_wave(g, std::cos(theta), std::sin(theta), amplitude, phase);
    }
    return g;
}

FieldGrid sample_spectral_grid(const SpectralMeasure& m, const GridSpec& spec,
                               std::uint64_t seed, double pad_factor) {
    if (m.kind() != MeasureKind::IsotropicRadial)
        throw ConfigError("sample_spectral_grid requires an isotropic radial measure");
    if (pad_factor < 2.0) throw ConfigError("pad_factor must be >= 2");
    const int n = spec.points_per_side;
    const double h = spec.spacing();
    warn_resolution(spec, m.max_angular_frequency(), m.label().c_str());

    // Nyquist check: the frequency grid must cover the density's support.
    if (kPi / h < 0.999 * m.max_angular_frequency())
        throw ResolutionTooCoarseError("grid spacing undersamples the spectral density");

    int size = static_cast<int>(std::ceil(pad_factor * n));
    if (size % 2 != 0) ++size;
    const double dw = 2.0 * kPi / (size * h);

    // Discretized spectral masses; index j maps to signed frequency.
    std::vector<double> mass(static_cast<std::size_t>(size) * size);
    double total = 0.0;
    const auto& psi = m.radial().psi;
    for (int j = 0; j < size; ++j) {
        const double wy = dw * (j <= size / 2 ? j : j - size);
        for (int i = 0; i < size; ++i) {
            const double wx = dw * (i <= size / 2 ? i : i - size);
            const double w = psi(std::hypot(wx, wy)) * dw * dw;
            mass[static_cast<std::size_t>(j) * size + i] = w;
            total += w;
        }
    }
    if (std::abs(total - 1.0) > 0.05)
        throw ResolutionTooCoarseError("frequency grid captures mass " + std::to_string(total) +
                                       "; refine the grid or enlarge padding");

    std::vector<std::complex<double>> coeff(mass.size());
    Rng rng(seed);
    for (std::size_t idx = 0; idx < mass.size(); ++idx) {
        // Complex standard normal scaled so Re(sum c xi e^{iwx}) has the target
        // covariance: c = sqrt(2 mass), xi with Re/Im ~ N(0, 1/2).
        const double re = rng.normal(std::sqrt(0.5));
        const double im = rng.normal(std::sqrt(0.5));
        coeff[idx] = std::sqrt(2.0 * mass[idx] / total) * std::complex<double>(re, im);
    }

    plan_cache().execute_backward(size, coeff);

    FieldGrid g;
    g.spec = spec;
    g.seed = seed;
    g.model_label = m.label();
    g.values.resize(static_cast<std::size_t>(n) * n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            g.at(r, c) = coeff[static_cast<std::size_t>(r) * size + c].real();
    return g;
}

FieldModel FieldModel::rpw(int m_directions) {
    FieldModel f;
    f.type_ = Type::Rpw;
    f.m_directions_ = m_directions;
    f.kernel_ = IsotropicKernel::rpw();
    f.label_ = "rpw";
    return f;
}

FieldModel FieldModel::bargmann_fock() {
    FieldModel f;
    f.type_ = Type::BargmannFock;
    f.measure_ = SpectralMeasure::bargmann_fock();
    f.kernel_ = IsotropicKernel::bargmann_fock();
    f.label_ = "bargmann-fock";
    return f;
}

FieldModel FieldModel::atomic(SpectralMeasure m) {
    FieldModel f;
    f.type_ = Type::Atomic;
    f.label_ = m.label();
    f.measure_ = validate_measure(std::move(m));
    return f;
}

FieldGrid FieldModel::sample(const GridSpec& spec, std::uint64_t seed) const {
    switch (type_) {
        case Type::Rpw:
            return sample_rpw(m_directions_, spec, seed);
        case Type::BargmannFock:
            return sample_spectral_grid(*measure_, spec, seed);
        case Type::Atomic:
            return sample_atomic(*measure_, spec, seed);
    }
    throw ConfigError("unreachable");
}

double FieldModel::min_wavelength() const {
    switch (type_) {
        case Type::Rpw:
            return 2.0 * kPi;
        case Type::BargmannFock:
        case Type::Atomic:
            return 2.0 * kPi / measure_->max_angular_frequency();
    }
    throw ConfigError("unreachable");
}

} // namespace exlb
