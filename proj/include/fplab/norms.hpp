#pragma once

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "fplab/grid.hpp"

namespace fplab {

// Weight m(x) = <x>^q, exponent p, and Sobolev order s.
struct WeightSpec {
    int p = 1;
    double q = 0.0;
    int s = 0;

    void validate() const;
    std::string describe() const;  // e.g. "W^{1,2}(<x>^0.5)"
    static WeightSpec parse(const std::string& text);  // "p,q" or "p,q,s"
};

inline double japanese_bracket(double x) { return std::sqrt(1.0 + x * x); }
double weight(double x, double q);
Eigen::VectorXd weight_vector(const Grid1D& g, double q);

// 2nd-order centered difference, one-sided 2nd order at the ends.
Eigen::VectorXd derivative(const Eigen::VectorXd& v, double h);

// (int |f m|^p)^{1/p} for s = 0; for s >= 1 the derivative norms are combined
// as (sum_k ||f^{(k)} m||_p^p)^{1/p}.
double weighted_norm(const Eigen::VectorXd& v, const Grid1D& g, const WeightSpec& w);
double weighted_norm(const Field& f, const WeightSpec& w);

} // namespace fplab
