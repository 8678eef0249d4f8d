#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "exlb/closed_form.hpp"
#include "exlb/grid.hpp"
#include "exlb/sampler.hpp"
#include "exlb/sweep.hpp"

namespace exlb {

struct EstimatorConfig {
    FieldModel model = FieldModel::rpw();
    GridSpec spec;
    int n_realizations = 100;
    std::vector<double> levels;
    double hist_lo = -4.0;
    double hist_hi = 4.0;
    double hist_bin_width = 0.1;
    std::uint64_t master_seed = 1;
    Connectivity conn;
    // Events are histogrammed only for vertices at least trim_margin rows/cols
    // from the window edge; grid-edge vertices produce spurious extremum
    // events at an O(perimeter) rate. -1 selects one nominal wavelength.
    int trim_margin = -1;
    int threads = 0; // 0: EXLB_THREADS env, else hardware
};

struct LevelEstimate {
    double level = 0.0;
    double c_es = 0.0;       // contained upper-excursion components per unit area
    double c_es_lower = 0.0; // contained lower-excursion components per unit area
    double c_ns = 0.0;       // contained level-set components per unit area
    double se_es = 0.0;
    double se_es_lower = 0.0;
    double se_ns = 0.0;
    double ci_half_width_ns = 0.0; // 95% normal approximation
};

struct HistogramBin {
    double center = 0.0;
    std::int64_t n_max = 0, n_min = 0, n_lower_saddle = 0, n_upper_saddle = 0;
    double p_max = 0.0, p_min = 0.0, p_lower_saddle = 0.0, p_upper_saddle = 0.0;
    double p_saddle = 0.0;
};

struct EstimatorReport {
    std::string model_label;
    GridSpec spec;
    int n_realizations = 0;
    std::uint64_t master_seed = 0;
    Connectivity conn;
    int trim_margin = 0;
    double area = 0.0;
    double trimmed_area = 0.0;

    std::vector<LevelEstimate> levels;
    std::vector<HistogramBin> histogram;

    std::int64_t audit_max_abs_delta_all = 0;       // must be 0
    std::int64_t audit_max_contained_excess = 0;    // max(|delta_c| - slack), <= 0 ok
    double mean_boundary_tangents = 0.0;

    double wall_seconds = 0.0;

    std::string curves_csv() const;
    std::string histogram_csv() const;
    std::string to_json() const; // metadata + audit
};

// Monte Carlo orchestration: realization-parallel with per-realization seeds
// mix_seed(master, i), single-threaded in-order reduction, hard failure on
// any Morse-identity violation.
EstimatorReport estimate_curves(const EstimatorConfig& cfg);

struct IdentityRow {
    double level;
    double c_es_hat;
    double via_closed_max;    // Int_l (p_max closed - p_s- hat)
    double via_empirical_max; // Int_l (p_max hat - p_s- hat)
    double rel_closed;
    double rel_empirical;
};

// Checks c_ES(l) = Int_l^inf (p_m+ - p_s-) with the empirical lower-saddle
// density; isotropic models only.
std::vector<IdentityRow> integral_identity_check(const EstimatorReport& r,
                                                 const ClosedFormDensities& cf);

struct ScalingRow {
    double side = 0.0;
    double mean_per_area = 0.0;     // contained N_ES / Area
    double variance_per_area = 0.0; // across realizations
    int n_realizations = 0;
};

struct ScalingTable {
    double level = 0.0;
    std::vector<ScalingRow> rows;
    double intercept = 0.0; // least-squares fit of mean against 1/side
    double slope = 0.0;
};

// E[N]/Area against 1/side across window sides; intercept estimates c_ES and
// the variance column separates ergodic decay from the degenerate plateau.
ScalingTable convergence_diagnostics(const FieldModel& model, const std::vector<double>& sides,
                                     double level, double points_per_wavelength,
                                     int n_realizations, std::uint64_t master_seed,
                                     Connectivity conn = {});

struct CheckRow {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

// c_NS symmetry, c_NS(0) = 2 c_ES(0) (with the documented connectivity-bias
// allowance), and isotonic decrease beyond sqrt(2)/lambda.
std::vector<CheckRow> symmetry_and_monotonicity_checks(const EstimatorReport& r,
                                                       std::optional<double> lambda);

std::vector<double> level_grid(double lo, double hi, double step);

} // namespace exlb
