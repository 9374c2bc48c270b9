#include "fplab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>

namespace fplab {

namespace {

double panel(const std::function<double(double)>& f, double a, double b) {
    return boost::math::quadrature::gauss<double, 16>::integrate(f, a, b);
}

} // namespace

double integrate(const std::function<double(double)>& f, double a, double b, int panels) {
    if (panels < 1) throw std::invalid_argument("integrate: panels must be >= 1");
    if (a == b) return 0.0;
    const double w = (b - a) / panels;
    double s = 0.0;
    for (int k = 0; k < panels; ++k) s += panel(f, a + k * w, (k + 1 == panels) ? b : a + (k + 1) * w);
    return s;
}

double integrate_graded(const std::function<double(double)>& f, double a, double b, double ratio,
                        double max_width) {
    if (!(a > 0.0) || !(b > a) || !(ratio > 1.0) || !(max_width > 0.0))
        throw std::invalid_argument("integrate_graded: need 0 < a < b, ratio > 1, max_width > 0");
    double s = 0.0;
    double lo = a;
    while (lo < b) {
        const double hi = std::min(b, lo * ratio);
        const int sub = std::max(1, static_cast<int>(std::ceil((hi - lo) / max_width)));
        s += integrate(f, lo, hi, sub);
        lo = hi;
    }
    return s;
}

double integrate_breaks(const std::function<double(double)>& f, const std::vector<double>& breaks,
                        int panels_per_segment) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
        s += integrate(f, breaks[i], breaks[i + 1], panels_per_segment);
    return s;
}

} // namespace fplab
