#include "exlb/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <sstream>

#include "exlb/errors.hpp"

namespace exlb {

double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol) {
    using boost::math::quadrature::gauss_kronrod;
    double error = 0.0, l1 = 0.0;
    // boost terminates on a relative-to-L1 target; drive it below abs_tol and
    // validate the returned absolute error estimate ourselves.
    double result = gauss_kronrod<double, 31>::integrate(f, a, b, 15, 1e-13, &error, &l1);
    const double limit = abs_tol + 1e-13 * l1;
    if (!(std::isfinite(result)) || error > 50.0 * limit) {
        std::ostringstream os;
        os << "quadrature did not converge: result=" << result << " error=" << error
           << " abs_tol=" << abs_tol;
        throw QuadratureError(os.str());
    }
    return result;
}

} // namespace exlb
