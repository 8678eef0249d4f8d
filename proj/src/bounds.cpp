#include "exlb/bounds.hpp"

#include <cmath>
#include <sstream>

#include "exlb/errors.hpp"
#include "exlb/normal.hpp"

namespace exlb {

double ces_difference(double level, double grad_factor) {
    if (!(grad_factor >= 0.0)) throw ConfigError("gradient factor must be >= 0");
    return grad_factor * level / (2.0 * kPi) * norm_pdf(level);
}

double cns_upper(double level, double lambda, double eta_sq) {
    if (!(lambda > 0.0) || lambda > kSqrt2 + 1e-9 || !(eta_sq > 0.0))
        throw ConfigError("cns_upper requires lambda in (0, sqrt 2] and eta^2 > 0");
    const double l = std::abs(level);
    const double s3 = std::sqrt(3.0 - lambda * lambda);
    const double arg = lambda * l / s3;
    return lambda * lambda / (kPi * eta_sq) * norm_pdf(l) *
           ((2.0 * s3 / lambda) * norm_pdf(arg) + l * (2.0 * norm_cdf(arg) - 1.0));
}

double cns_lower(double level, double grad_factor) {
    return std::max(ces_difference(std::abs(level), grad_factor), 0.0);
}

bool is_bimodal_guaranteed(double lambda) {
    static const double threshold = 6.0 * M_E / (2.0 * M_E + kPi); // ~1.9013
    return lambda * lambda > threshold;
}

double monotone_threshold(double lambda) {
    if (!(lambda > 0.0)) throw ConfigError("lambda must be positive");
    return kSqrt2 / lambda;
}

std::vector<BoundsRow> bounds_table(const std::vector<double>& levels, double lambda,
                                    double eta_sq) {
    const double grad = 2.0 * lambda * lambda / eta_sq;
    std::vector<BoundsRow> rows;
    rows.reserve(levels.size());
    for (double l : levels) {
        BoundsRow r;
        r.level = l;
        r.ces_diff = ces_difference(l, grad);
        r.ces_lower = std::max(r.ces_diff, 0.0);
        r.cns_lower = cns_lower(l, grad);
        r.cns_upper = cns_upper(l, lambda, eta_sq);
        rows.push_back(r);
    }
    return rows;
}

std::string bounds_to_csv(const std::vector<BoundsRow>& rows) {
    std::ostringstream os;
    os << "level,ces_diff,ces_lower,cns_lower,cns_upper\n";
    os.precision(12);
    for (const auto& r : rows)
        os << r.level << ',' << r.ces_diff << ',' << r.ces_lower << ',' << r.cns_lower << ','
           << r.cns_upper << '\n';
    return os.str();
}

} // namespace exlb
