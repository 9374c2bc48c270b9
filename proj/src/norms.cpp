#include "fplab/norms.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fplab {

void WeightSpec::validate() const {
    if (p != 1 && p != 2) throw std::invalid_argument("weight exponent p must be 1 or 2");
    if (!(q >= 0.0) || !std::isfinite(q)) throw std::invalid_argument("weight power q must be >= 0");
    if (s < 0 || s > 3) throw std::invalid_argument("sobolev order s must be in {0,1,2,3}");
}

std::string WeightSpec::describe() const {
    std::ostringstream os;
    if (s == 0)
        os << "L^" << p;
    else
        os << "W^{" << s << "," << p << "}";
    os << "(<x>^" << q << ")";
    return os.str();
}

namespace {

std::vector<double> split_numbers(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        const double v = std::stod(item, &used);
        if (used != item.size()) throw std::invalid_argument("");
        out.push_back(v);
    }
    return out;
}

} // namespace

WeightSpec WeightSpec::parse(const std::string& text) {
    std::vector<double> v;
    try {
        v = split_numbers(text);
    } catch (const std::exception&) {
        v.clear();
    }
    if (v.size() < 2 || v.size() > 3 || v[0] != std::round(v[0]) || (v.size() == 3 && v[2] != std::round(v[2])))
        throw std::invalid_argument("weight '" + text + "': expected p,q or p,q,s");
    WeightSpec w{static_cast<int>(v[0]), v[1], v.size() == 3 ? static_cast<int>(v[2]) : 0};
    w.validate();
    return w;
}

double weight(double x, double q) {
    if (q == 0.0) return 1.0;
    return std::pow(1.0 + x * x, 0.5 * q);
}

Eigen::VectorXd weight_vector(const Grid1D& g, double q) {
    Eigen::VectorXd m(g.size());
    for (int i = 0; i < g.size(); ++i) m[i] = weight(g.node(i), q);
    return m;
}

Eigen::VectorXd derivative(const Eigen::VectorXd& v, double h) {
    const Eigen::Index n = v.size();
    Eigen::VectorXd d(n);
    if (n < 3) throw std::invalid_argument("derivative needs at least 3 samples");
    for (Eigen::Index i = 1; i + 1 < n; ++i) d[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
    d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
    d[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
    return d;
}

double weighted_norm(const Eigen::VectorXd& v, const Grid1D& g, const WeightSpec& w) {
    w.validate();
    if (v.size() != g.size()) throw std::invalid_argument("weighted_norm: size mismatch");
    const Eigen::VectorXd m = weight_vector(g, w.q);
    const double h = g.spacing();
    double total = 0.0;
    Eigen::VectorXd d = v;
    for (int k = 0; k <= w.s; ++k) {
        if (k > 0) d = derivative(d, h);
        const Eigen::VectorXd a = d.cwiseProduct(m).cwiseAbs();
        total += (w.p == 1) ? trapezoid(a, h) : trapezoid(a.cwiseAbs2(), h);
    }
    return w.p == 1 ? total : std::sqrt(total);
}

double weighted_norm(const Field& f, const WeightSpec& w) { return weighted_norm(f.values(), f.grid(), w); }

} // namespace fplab
