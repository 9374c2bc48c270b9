#pragma once

#include <functional>
#include <vector>

namespace fplab {

// Composite 16-point Gauss-Legendre over [a, b] with `panels` equal panels.
double integrate(const std::function<double(double)>& f, double a, double b, int panels);

// Same, but panels are laid out geometrically between a > 0 and b, so that
// integrands with |x|^{-s} behaviour near a are resolved; `max_width` caps
// the panel length (use it to resolve oscillations).
double integrate_graded(const std::function<double(double)>& f, double a, double b, double ratio,
                        double max_width);

// Panel over each consecutive pair of breakpoints.
double integrate_breaks(const std::function<double(double)>& f, const std::vector<double>& breaks,
                        int panels_per_segment);

} // namespace fplab
