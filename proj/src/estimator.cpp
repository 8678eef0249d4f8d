#include "exlb/estimator.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "exlb/errors.hpp"
#include "exlb/normal.hpp"
#include "exlb/rng.hpp"

namespace exlb {

namespace {

int resolve_threads(int requested, int n_tasks) {
    int t = requested;
    if (t <= 0) {
        if (const char* env = std::getenv("EXLB_THREADS")) t = std::atoi(env);
    }
    if (t <= 0) t = static_cast<int>(std::thread::hardware_concurrency());
    if (t <= 0) t = 1;
    return std::min(t, std::max(1, n_tasks));
}

// Per-realization census, reduced in index order afterwards.
struct RealizationStats {
    std::vector<std::int64_t> super_contained;
    std::vector<std::int64_t> sub_contained;
    std::vector<std::int64_t> levelset_contained;
    std::vector<std::int64_t> hist; // 4 kinds x bins, kind-major
    std::int64_t boundary_tangents = 0;
    std::int64_t max_abs_delta_all = 0;
    std::int64_t max_contained_excess = 0;
};

struct Welford {
    double mean = 0.0;
    double m2 = 0.0;
    std::int64_t n = 0;
    void add(double x) {
        ++n;
        const double d = x - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (x - mean);
    }
    double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
    double std_error() const { return n > 1 ? std::sqrt(variance() / static_cast<double>(n)) : 0.0; }
};

int kind_slot(EventKind k) {
    switch (k) {
        case EventKind::Max: return 0;
        case EventKind::Min: return 1;
        case EventKind::LowerSaddle: return 2;
        case EventKind::UpperSaddle: return 3;
    }
    return 0;
}

} // namespace

std::vector<double> level_grid(double lo, double hi, double step) {
    if (!(step > 0.0) || hi < lo) throw ConfigError("bad level grid");
    std::vector<double> ls;
    for (int i = 0;; ++i) {
        double l = lo + i * step;
        if (l > hi + step * 1e-9) break;
        if (std::abs(l) < step * 1e-9) l = 0.0;
        ls.push_back(l);
    }
    return ls;
}

EstimatorReport estimate_curves(const EstimatorConfig& cfg) {
    if (cfg.n_realizations < 1) throw ConfigError("need at least one realization");
    if (cfg.levels.empty()) throw ConfigError("need a level grid");
    const auto t0 = std::chrono::steady_clock::now();

    const int n = cfg.spec.points_per_side;
    int margin = cfg.trim_margin;
    if (margin < 0)
        margin = static_cast<int>(std::lround(cfg.model.min_wavelength() / cfg.spec.spacing()));
    if (2 * margin >= n - 2) throw ConfigError("trim margin leaves no interior window");

    const int n_bins =
        static_cast<int>(std::lround((cfg.hist_hi - cfg.hist_lo) / cfg.hist_bin_width));
    const std::size_t n_levels = cfg.levels.size();

    std::vector<RealizationStats> stats(cfg.n_realizations);
    std::atomic<int> next{0};
    std::mutex err_mu;
    std::exception_ptr first_error;

    auto worker = [&]() {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= cfg.n_realizations) return;
            try {
                FieldGrid g = cfg.model.sample(cfg.spec, mix_seed(cfg.master_seed, i));
                SweepResult sr = sweep(g, cfg.conn, cfg.levels);
                AuditReport audit = audit_morse_identity(sr, cfg.levels);

                RealizationStats& rs = stats[i];
                rs.super_contained.reserve(n_levels);
                rs.sub_contained.reserve(n_levels);
                rs.levelset_contained.reserve(n_levels);
                for (const auto& cc : sr.component_counts) {
                    rs.super_contained.push_back(cc.super_contained);
                    rs.sub_contained.push_back(cc.sub_contained);
                    rs.levelset_contained.push_back(cc.levelset_contained);
                }
                rs.hist.assign(static_cast<std::size_t>(4) * n_bins, 0);
                auto bin_event = [&](const CriticalEvent& e) {
                    const int r = static_cast<int>(e.grid_index) / n;
                    const int c = static_cast<int>(e.grid_index) % n;
                    if (r < margin || r >= n - margin || c < margin || c >= n - margin)
                        return;
                    if (e.level < cfg.hist_lo || e.level >= cfg.hist_hi) return;
                    const int b =
                        static_cast<int>((e.level - cfg.hist_lo) / cfg.hist_bin_width);
                    if (b < 0 || b >= n_bins) return;
                    rs.hist[static_cast<std::size_t>(kind_slot(e.kind)) * n_bins + b] +=
                        e.multiplicity;
                };
                // Max/LowerSaddle from the descending pass already in sr; the
                // Min/UpperSaddle densities come from a mirror ascending pass
                // at the same (superlevel) connectivity.
                for (const auto& e : sr.events)
                    if (e.kind == EventKind::Max || e.kind == EventKind::LowerSaddle)
                        bin_event(e);
                for (const auto& e : sweep_events(g, cfg.conn.superlevel, false))
                    bin_event(e);
                rs.boundary_tangents = sr.boundary_tangents;
                rs.max_abs_delta_all = audit.max_abs_delta_all;
                std::int64_t excess = 0;
                for (const auto& row : audit.rows)
                    excess = std::max(excess, std::abs(row.delta_contained) -
                                                  (sr.boundary_tangents + 2));
                rs.max_contained_excess = excess;
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mu);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };

    const int n_threads = resolve_threads(cfg.threads, cfg.n_realizations);
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    EstimatorReport rep;
    rep.model_label = cfg.model.label();
    rep.spec = cfg.spec;
    rep.n_realizations = cfg.n_realizations;
    rep.master_seed = cfg.master_seed;
    rep.conn = cfg.conn;
    rep.trim_margin = margin;
    rep.area = cfg.spec.area();
    const double trimmed_side = cfg.spec.side_length - 2.0 * margin * cfg.spec.spacing();
    rep.trimmed_area = trimmed_side * trimmed_side;

    // In-order reduction keeps the report bit-identical across thread counts.
    std::vector<Welford> w_es(n_levels), w_sub(n_levels), w_ns(n_levels);
    std::vector<std::int64_t> hist_total(static_cast<std::size_t>(4) * n_bins, 0);
    double tangents = 0.0;
    for (const auto& rs : stats) {
        for (std::size_t l = 0; l < n_levels; ++l) {
            w_es[l].add(static_cast<double>(rs.super_contained[l]) / rep.area);
            w_sub[l].add(static_cast<double>(rs.sub_contained[l]) / rep.area);
            w_ns[l].add(static_cast<double>(rs.levelset_contained[l]) / rep.area);
        }
        for (std::size_t k = 0; k < hist_total.size(); ++k) hist_total[k] += rs.hist[k];
        tangents += static_cast<double>(rs.boundary_tangents);
        rep.audit_max_abs_delta_all =
            std::max(rep.audit_max_abs_delta_all, rs.max_abs_delta_all);
        rep.audit_max_contained_excess =
            std::max(rep.audit_max_contained_excess, rs.max_contained_excess);
    }
    rep.mean_boundary_tangents = tangents / cfg.n_realizations;

    rep.levels.reserve(n_levels);
    for (std::size_t l = 0; l < n_levels; ++l) {
        LevelEstimate e;
        e.level = cfg.levels[l];
        e.c_es = w_es[l].mean;
        e.c_es_lower = w_sub[l].mean;
        e.c_ns = w_ns[l].mean;
        e.se_es = w_es[l].std_error();
        e.se_es_lower = w_sub[l].std_error();
        e.se_ns = w_ns[l].std_error();
        e.ci_half_width_ns = 1.96 * e.se_ns;
        rep.levels.push_back(e);
    }

    const double norm = static_cast<double>(cfg.n_realizations) * rep.trimmed_area *
                        cfg.hist_bin_width;
    rep.histogram.reserve(n_bins);
    for (int b = 0; b < n_bins; ++b) {
        HistogramBin bin;
        bin.center = cfg.hist_lo + (b + 0.5) * cfg.hist_bin_width;
        bin.n_max = hist_total[static_cast<std::size_t>(0) * n_bins + b];
        bin.n_min = hist_total[static_cast<std::size_t>(1) * n_bins + b];
        bin.n_lower_saddle = hist_total[static_cast<std::size_t>(2) * n_bins + b];
        bin.n_upper_saddle = hist_total[static_cast<std::size_t>(3) * n_bins + b];
        bin.p_max = static_cast<double>(bin.n_max) / norm;
        bin.p_min = static_cast<double>(bin.n_min) / norm;
        bin.p_lower_saddle = static_cast<double>(bin.n_lower_saddle) / norm;
        bin.p_upper_saddle = static_cast<double>(bin.n_upper_saddle) / norm;
        bin.p_saddle = bin.p_lower_saddle + bin.p_upper_saddle;
        rep.histogram.push_back(bin);
    }

    rep.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

std::vector<IdentityRow> integral_identity_check(const EstimatorReport& r,
                                                 const ClosedFormDensities& cf) {
    // Histogram tail sums with partial-bin proration at the query level.
    auto hist_tail = [&r](double level, auto field) {
        double s = 0.0;
        const double bw = r.histogram.size() > 1
                              ? r.histogram[1].center - r.histogram[0].center
                              : 0.1;
        for (const auto& bin : r.histogram) {
            const double lo = bin.center - bw / 2, hi = bin.center + bw / 2;
            if (hi <= level) continue;
            const double frac = lo >= level ? 1.0 : (hi - level) / bw;
            s += field(bin) * bw * frac;
        }
        return s;
    };
    std::vector<IdentityRow> rows;
    rows.reserve(r.levels.size());
    for (const auto& le : r.levels) {
        IdentityRow row;
        row.level = le.level;
        row.c_es_hat = le.c_es;
        const double s_minus_tail =
            hist_tail(le.level, [](const HistogramBin& b) { return b.p_lower_saddle; });
        row.via_closed_max =
            cf.tail_integral(CriticalKind::MaxPlus, le.level) - s_minus_tail;
        row.via_empirical_max =
            hist_tail(le.level, [](const HistogramBin& b) { return b.p_max; }) - s_minus_tail;
        const double denom = std::abs(le.c_es) > 1e-12 ? le.c_es : 1e-12;
        row.rel_closed = (row.via_closed_max - le.c_es) / denom;
        row.rel_empirical = (row.via_empirical_max - le.c_es) / denom;
        rows.push_back(row);
    }
    return rows;
}

ScalingTable convergence_diagnostics(const FieldModel& model, const std::vector<double>& sides,
                                     double level, double points_per_wavelength,
                                     int n_realizations, std::uint64_t master_seed,
                                     Connectivity conn) {
    if (sides.size() < 3) throw ConfigError("convergence diagnostics needs >= 3 sides");
    ScalingTable table;
    table.level = level;
    for (std::size_t s = 0; s < sides.size(); ++s) {
        EstimatorConfig cfg;
        cfg.model = model;
        cfg.spec = GridSpec::from_resolution(sides[s], model.min_wavelength(),
                                             points_per_wavelength);
        cfg.n_realizations = n_realizations;
        cfg.levels = {level};
        cfg.master_seed = mix_seed(master_seed, 1000 + s);
        cfg.conn = conn;
        EstimatorReport rep = estimate_curves(cfg);
        ScalingRow row;
        row.side = sides[s];
        row.mean_per_area = rep.levels[0].c_es;
        const double se = rep.levels[0].se_es;
        row.variance_per_area = se * se * n_realizations;
        row.n_realizations = n_realizations;
        table.rows.push_back(row);
    }
    // Least squares of mean against x = 1/side: mean = intercept + slope * x.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(table.rows.size());
    for (const auto& row : table.rows) {
        const double x = 1.0 / row.side;
        sx += x;
        sy += row.mean_per_area;
        sxx += x * x;
        sxy += x * row.mean_per_area;
    }
    const double denom = m * sxx - sx * sx;
    table.slope = (m * sxy - sx * sy) / denom;
    table.intercept = (sy - table.slope * sx) / m;
    return table;
}

std::vector<CheckRow> symmetry_and_monotonicity_checks(const EstimatorReport& r,
                                                       std::optional<double> lambda) {
    // Dual connectivity (8 super / 4 sub) biases the two sides of the level-0
    // identities against each other; pilot runs at 6 pts/wavelength measured
    // the asymmetry at ~2-3%, so a 5% allowance is applied on top of 3 SE.
    constexpr double kConnectivityAllowance = 0.05;
    std::vector<CheckRow> rows;
    auto find_level = [&r](double l) -> const LevelEstimate* {
        for (const auto& e : r.levels)
            if (std::abs(e.level - l) < 1e-9) return &e;
        return nullptr;
    };
    for (const auto& e : r.levels) {
        if (!(e.level > 1e-12)) continue;
        const LevelEstimate* m = find_level(-e.level);
        if (!m) continue;
        CheckRow row;
        std::ostringstream name;
        name << "c_ns_symmetry@" << e.level;
        row.name = name.str();
        row.value = std::abs(e.c_ns - m->c_ns);
        row.threshold = 3.0 * std::hypot(e.se_ns, m->se_ns) +
                        kConnectivityAllowance * std::max(e.c_ns, m->c_ns);
        row.pass = row.value <= row.threshold;
        rows.push_back(row);
    }
    if (const LevelEstimate* z = find_level(0.0)) {
        CheckRow row;
        row.name = "c_ns(0)=2c_es(0)";
        row.value = std::abs(z->c_ns - 2.0 * z->c_es);
        row.threshold = 3.0 * std::hypot(z->se_ns, 2.0 * z->se_es) +
                        kConnectivityAllowance * z->c_ns;
        row.pass = row.value <= row.threshold;
        rows.push_back(row);
    }
    if (lambda) {
        const double threshold_level = kSqrt2 / *lambda;
        double violation = 0.0, var = 0.0;
        const LevelEstimate* prev = nullptr;
        for (const auto& e : r.levels) {
            if (e.level < threshold_level - 1e-9) continue;
            if (prev) {
                violation += std::max(0.0, e.c_ns - prev->c_ns);
                var += e.se_ns * e.se_ns + prev->se_ns * prev->se_ns;
            }
            prev = &e;
        }
        CheckRow row;
        row.name = "c_ns_decreasing_beyond_threshold";
        row.value = violation;
        row.threshold = 3.0 * std::sqrt(var);
        row.pass = row.value <= row.threshold;
        rows.push_back(row);
    }
    return rows;
}

std::string EstimatorReport::curves_csv() const {
    std::ostringstream os;
    os << "level,c_ns_hat,c_es_upper_hat,c_es_lower_hat,ci_ns,ci_es_upper,ci_es_lower\n";
    os.precision(12);
    for (const auto& e : levels)
        os << e.level << ',' << e.c_ns << ',' << e.c_es << ',' << e.c_es_lower << ','
           << 1.96 * e.se_ns << ',' << 1.96 * e.se_es << ',' << 1.96 * e.se_es_lower << '\n';
    return os.str();
}

std::string EstimatorReport::histogram_csv() const {
    std::ostringstream os;
    os << "x,p_max_hat,p_min_hat,p_lower_saddle_hat,p_upper_saddle_hat,p_saddle_hat\n";
    os.precision(12);
    for (const auto& b : histogram)
        os << b.center << ',' << b.p_max << ',' << b.p_min << ',' << b.p_lower_saddle << ','
           << b.p_upper_saddle << ',' << b.p_saddle << '\n';
    return os.str();
}

std::string EstimatorReport::to_json() const {
    nlohmann::ordered_json j;
    j["model"] = model_label;
    j["side_length"] = spec.side_length;
    j["points_per_side"] = spec.points_per_side;
    j["spacing"] = spec.spacing();
    j["n_realizations"] = n_realizations;
    j["master_seed"] = master_seed;
    j["connectivity"] = {{"superlevel", conn.superlevel}, {"sublevel", conn.sublevel}};
    j["trim_margin"] = trim_margin;
    j["area"] = area;
    j["trimmed_area"] = trimmed_area;
    j["audit"] = {{"max_abs_delta_all", audit_max_abs_delta_all},
                  {"max_contained_excess", audit_max_contained_excess},
                  {"mean_boundary_tangents", mean_boundary_tangents}};
    j["wall_seconds"] = wall_seconds;
    return j.dump(2);
}

} // namespace exlb
