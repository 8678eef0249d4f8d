// Command line front end: estimate / bounds / densities / degenerate / audit.
// Exit codes: 0 ok, 1 usage or config error, 2 Morse-audit failure,
// 3 numeric failure.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>

#include "exlb/bounds.hpp"
#include "exlb/closed_form.hpp"
#include "exlb/degenerate.hpp"
#include "exlb/errors.hpp"
#include "exlb/estimator.hpp"
#include "exlb/io.hpp"
#include "exlb/normal.hpp"
#include "exlb/sampler.hpp"
#include "exlb/sweep.hpp"

namespace {

using namespace exlb;

std::vector<double> parse_levels(const std::string& text) {
    double lo = 0, hi = 0, step = 0;
    char c1 = 0, c2 = 0;
    std::istringstream is(text);
    if (!(is >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':')
        throw ConfigError("levels must be lo:hi:step, got '" + text + "'");
    return level_grid(lo, hi, step);
}

FieldModel parse_model(const std::string& text, int rpw_directions) {
    if (text == "rpw") return FieldModel::rpw(rpw_directions);
    if (text == "bargmann-fock") return FieldModel::bargmann_fock();
    if (text.rfind("atomic:", 0) == 0)
        return FieldModel::atomic(SpectralMeasure::from_json_file(text.substr(7)));
    throw ConfigError("unknown model '" + text + "' (rpw | bargmann-fock | atomic:<file>)");
}

Connectivity parse_connectivity(const std::string& text) {
    if (text == "8-4") return Connectivity{8, 4};
    if (text == "4-8") return Connectivity{4, 8};
    throw ConfigError("connectivity must be 8-4 or 4-8");
}

std::string seed_tag(std::uint64_t seed) {
    std::ostringstream os;
    os << "seed" << seed;
    return os.str();
}

int cmd_estimate(const std::string& model_name, double side, double resolution, int reals,
                 const std::string& levels_text, std::uint64_t seed,
                 const std::string& out_dir, const std::string& conn_text,
                 int rpw_directions, int trim_margin, bool resolution_study) {
    FieldModel model = parse_model(model_name, rpw_directions);
    EstimatorConfig cfg;
    cfg.model = model;
    cfg.spec = GridSpec::from_resolution(side, model.min_wavelength(), resolution);
    cfg.n_realizations = reals;
    cfg.levels = parse_levels(levels_text);
    cfg.master_seed = seed;
    cfg.conn = parse_connectivity(conn_text);
    cfg.trim_margin = trim_margin;

    std::filesystem::create_directories(out_dir);
    std::ostringstream summary;
    summary << "model=" << model.label() << " side=" << side << " resolution=" << resolution
            << " reals=" << reals << " levels=" << levels_text;
    append_manifest(out_dir, "estimate", summary.str(), seed);

    auto run_one = [&](const EstimatorConfig& c, const std::string& suffix) {
        EstimatorReport rep = estimate_curves(c);
        const std::string tag = rep.model_label + "_" + seed_tag(seed) + suffix;
        write_text_file(out_dir + "/curves_" + tag + ".csv", rep.curves_csv());
        write_text_file(out_dir + "/hist_" + tag + ".csv", rep.histogram_csv());
        write_text_file(out_dir + "/report_" + tag + ".json", rep.to_json());
        Series ns{"c_ns_hat", {}, {}}, es{"c_es_hat", {}, {}};
        for (const auto& e : rep.levels) {
            ns.x.push_back(e.level);
            ns.y.push_back(e.c_ns);
            es.x.push_back(e.level);
            es.y.push_back(e.c_es);
        }
        write_text_file(out_dir + "/curves_" + tag + ".svg",
                        render_line_chart_svg({ns, es}, "level curves: " + rep.model_label));
        std::printf("estimate %s: %d realizations, area %.1f, audit max|delta_all|=%lld, "
                    "%.1fs\n",
                    tag.c_str(), rep.n_realizations, rep.area,
                    static_cast<long long>(rep.audit_max_abs_delta_all), rep.wall_seconds);
        return rep;
    };

    run_one(cfg, "");
    if (resolution_study) {
        // Mandated calibration artifact: the same model at 3 resolutions.
        for (double factor : {resolution * 0.75, resolution * 1.5}) {
            EstimatorConfig c = cfg;
            c.spec = GridSpec::from_resolution(side, model.min_wavelength(), factor);
            std::ostringstream suffix;
            suffix << "_res" << factor;
            run_one(c, suffix.str());
        }
    }
    return 0;
}

int cmd_bounds(double lambda, double eta_sq, const std::string& levels_text,
               const std::string& out_dir) {
    if (!(lambda > 0.0) || lambda > kSqrt2 + 1e-9) {
        std::fprintf(stderr, "lambda %.6g outside (0, sqrt(2)]\n", lambda);
        return 1;
    }
    const auto levels = parse_levels(levels_text);
    const auto rows = bounds_table(levels, lambda, eta_sq);
    std::filesystem::create_directories(out_dir);
    append_manifest(out_dir, "bounds", "lambda=" + std::to_string(lambda), 0);
    write_text_file(out_dir + "/bounds.csv", bounds_to_csv(rows));
    Series lo{"cns_lower", {}, {}}, up{"cns_upper", {}, {}};
    for (const auto& r : rows) {
        lo.x.push_back(r.level);
        lo.y.push_back(r.cns_lower);
        up.x.push_back(r.level);
        up.y.push_back(r.cns_upper);
    }
    write_text_file(out_dir + "/bounds.svg",
                    render_line_chart_svg({lo, up}, "c_NS bounds"));
    std::printf("bimodal: %s, threshold: %.6g\n",
                is_bimodal_guaranteed(lambda) ? "yes" : "no", monotone_threshold(lambda));
    return 0;
}

int cmd_densities(const std::string& model_name, const std::string& levels_text,
                  const std::string& out_dir) {
    FieldModel model = parse_model(model_name, 256);
    if (!model.kernel())
        throw ConfigError("densities requires an isotropic model with a known kernel");
    ClosedFormDensities cf = ClosedFormDensities::from_kernel(*model.kernel());
    const auto levels = parse_levels(levels_text);
    std::filesystem::create_directories(out_dir);
    append_manifest(out_dir, "densities", "model=" + model.label(), 0);
    write_text_file(out_dir + "/densities_" + model.label() + ".csv",
                    cf.density_table_csv(levels.front(), levels.back(),
                                         levels.size() > 1 ? levels[1] - levels[0] : 0.1));
    Series pm{"p_max", {}, {}}, ps{"p_saddle", {}, {}};
    for (double x : levels) {
        pm.x.push_back(x);
        pm.y.push_back(cf.p_max(x));
        ps.x.push_back(x);
        ps.y.push_back(cf.p_saddle(x));
    }
    write_text_file(out_dir + "/densities_" + model.label() + ".svg",
                    render_line_chart_svg({pm, ps}, "critical point densities: " + model.label()));
    std::printf("densities %s: lambda=%.6g eta^2=%.6g\n", model.label().c_str(), cf.lambda(),
                cf.eta_sq());
    return 0;
}

int cmd_degenerate(double alpha, double beta, double gamma, std::vector<double> K,
                   std::vector<double> L, const std::string& levels_text,
                   const std::string& out_dir, bool figures) {
    const auto levels = parse_levels(levels_text);
    std::filesystem::create_directories(out_dir);
    append_manifest(out_dir, "degenerate", "alpha=" + std::to_string(alpha), 0);
    auto emit = [&](const DegenerateModel& m, const std::string& tag) {
        write_text_file(out_dir + "/degenerate_" + tag + ".csv",
                        degenerate_curves_csv(m, levels));
        Series ns{"cns_exact", {}, {}}, es{"ces_exact", {}, {}};
        for (double l : levels) {
            ns.x.push_back(l);
            ns.y.push_back(cns_exact(l, m));
            es.x.push_back(l);
            es.y.push_back(ces_exact(l, m));
        }
        write_text_file(out_dir + "/degenerate_" + tag + ".svg",
                        render_line_chart_svg({ns, es}, "degenerate constants " + tag));
    };
    if (figures) {
        // The figure data grids: alpha = 0 with beta-gamma in {0, 0.5, 0.9},
        // then beta = gamma with alpha in {0.1, 0.3, 0.6}.
        for (double bg : {0.0, 0.5, 0.9}) {
            DegenerateModel m;
            m.alpha = 0.0;
            m.beta = (1.0 + bg) / 2.0;
            m.gamma = (1.0 - bg) / 2.0;
            std::ostringstream tag;
            tag << "alpha0_bg" << bg;
            emit(m, tag.str());
        }
        for (double a : {0.1, 0.3, 0.6}) {
            DegenerateModel m;
            m.alpha = a;
            m.beta = m.gamma = (1.0 - a) / 2.0;
            std::ostringstream tag;
            tag << "alpha" << a << "_bg0";
            emit(m, tag.str());
        }
        return 0;
    }
    DegenerateModel m;
    m.alpha = alpha;
    m.beta = beta;
    m.gamma = gamma;
    if (K.size() == 2) m.K = {K[0], K[1]};
    if (L.size() == 2) m.L = {L[0], L[1]};
    std::ostringstream tag;
    tag << "a" << alpha << "_b" << beta << "_g" << gamma;
    emit(m, tag.str());
    return 0;
}

int cmd_audit(const std::string& model_name, double side, double resolution, int reals,
              std::uint64_t seed, const std::string& levels_text,
              const std::string& conn_text, int rpw_directions, bool inject_bug) {
    FieldModel model = parse_model(model_name, rpw_directions);
    const GridSpec spec =
        GridSpec::from_resolution(side, model.min_wavelength(), resolution);
    const auto levels = parse_levels(levels_text);
    const Connectivity conn = parse_connectivity(conn_text);
    for (int i = 0; i < reals; ++i) {
        FieldGrid g = model.sample(spec, mix_seed(seed, i));
        SweepResult sr = sweep(g, conn, levels);
        if (inject_bug && !sr.events.empty()) {
            // Test hook: corrupt one event level so the census disagrees with
            // the component counts.
            sr.events.back().level = -sr.events.back().level * 2.0 - 1.0;
        }
        AuditReport rep = audit_morse_identity(sr, levels); // throws on violation
        std::printf("realization %d: levels=%zu max|delta_all|=%lld max|delta_contained|=%lld "
                    "tangents=%lld slack=%lld\n",
                    i, rep.rows.size(), static_cast<long long>(rep.max_abs_delta_all),
                    static_cast<long long>(rep.max_abs_delta_contained),
                    static_cast<long long>(rep.boundary_tangents),
                    static_cast<long long>(rep.boundary_tangents + 2));
        if (!rep.contained_within_slack) {
            std::fprintf(stderr, "contained-count deviation exceeded tangent slack\n");
            return 2;
        }
    }
    std::printf("audit ok: %d realizations of %s, all delta_all = 0\n", reals,
                model.label().c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"excursion/level-set census of stationary planar Gaussian fields"};
    app.require_subcommand(1);

    std::string model = "rpw", levels = "-3:3:0.3", out = "out", conn = "8-4";
    double side = 60.0, resolution = 6.0, lambda = kSqrt2, eta_sq = 8.0;
    double alpha = 0.0, beta = 0.5, gamma = 0.5;
    std::vector<double> K{1.0, 0.0}, L{0.0, 1.0};
    int reals = 50, rpw_directions = 256, trim_margin = -1;
    std::uint64_t seed = 1;
    bool figures = false, resolution_study = false, inject_bug = false;

    auto* est = app.add_subcommand("estimate", "Monte Carlo level-curve estimation");
    est->add_option("--model", model, "rpw | bargmann-fock | atomic:<file>");
    est->add_option("--side", side, "window side length");
    est->add_option("--resolution", resolution, "grid points per shortest wavelength");
    est->add_option("--reals", reals, "number of realizations");
    est->add_option("--levels", levels, "level grid lo:hi:step");
    est->add_option("--seed", seed, "master seed");
    est->add_option("--out", out, "output directory");
    est->add_option("--connectivity", conn, "8-4 or 4-8");
    est->add_option("--rpw-directions", rpw_directions, "direction count for the rpw sampler");
    est->add_option("--trim-margin", trim_margin, "histogram trim margin in vertices (-1: auto)");
    est->add_flag("--resolution-study", resolution_study,
                  "also run 0.75x and 1.5x resolutions");

    auto* bnd = app.add_subcommand("bounds", "analytic c_NS / c_ES bounds");
    bnd->add_option("--lambda", lambda, "isotropic lambda in (0, sqrt 2]");
    bnd->add_option("--eta-sq", eta_sq, "isotropic eta^2");
    bnd->add_option("--levels", levels, "level grid lo:hi:step");
    bnd->add_option("--out", out, "output directory");

    auto* den = app.add_subcommand("densities", "closed-form critical point densities");
    den->add_option("--model", model, "rpw | bargmann-fock");
    den->add_option("--levels", levels, "level grid lo:hi:step");
    den->add_option("--out", out, "output directory");

    auto* deg = app.add_subcommand("degenerate", "exact 4/5-atom field theory");
    deg->add_option("--alpha", alpha, "mass at the origin");
    deg->add_option("--beta", beta, "mass of the +-K pair");
    deg->add_option("--gamma", gamma, "mass of the +-L pair");
    deg->add_option("--K", K, "frequency K (two reals)")->expected(2);
    deg->add_option("--L", L, "frequency L (two reals)")->expected(2);
    deg->add_option("--levels", levels, "level grid lo:hi:step");
    deg->add_option("--out", out, "output directory");
    deg->add_flag("--figures", figures, "emit the standard figure parameter grid");

    auto* aud = app.add_subcommand("audit", "exact Morse-identity audit per realization");
    aud->add_option("--model", model, "rpw | bargmann-fock | atomic:<file>");
    aud->add_option("--side", side, "window side length");
    aud->add_option("--resolution", resolution, "grid points per shortest wavelength");
    aud->add_option("--reals", reals, "number of realizations");
    aud->add_option("--levels", levels, "level grid lo:hi:step");
    aud->add_option("--seed", seed, "master seed");
    aud->add_option("--connectivity", conn, "8-4 or 4-8");
    aud->add_option("--rpw-directions", rpw_directions, "direction count for the rpw sampler");
    aud->add_flag("--inject-audit-bug", inject_bug)->group(""); // test hook, hidden

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (est->parsed())
            return cmd_estimate(model, side, resolution, reals, levels, seed, out, conn,
                                rpw_directions, trim_margin, resolution_study);
        if (bnd->parsed()) return cmd_bounds(lambda, eta_sq, levels, out);
        if (den->parsed()) return cmd_densities(model, levels, out);
        if (deg->parsed())
            return cmd_degenerate(alpha, beta, gamma, K, L, levels, out, figures);
        if (aud->parsed())
            return cmd_audit(model, side, resolution, reals, seed, levels, conn,
                             rpw_directions, inject_bug);
    } catch (const IdentityViolationError& e) {
        std::fprintf(stderr, "audit failure: %s\n", e.what());
        return 2;
    } catch (const QuadratureError& e) {
        std::fprintf(stderr, "numeric failure: %s\n", e.what());
        return 3;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
