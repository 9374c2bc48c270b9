#include "fplab/grid.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace fplab {

Grid1D::Grid1D(double half_width, int n) : L_(half_width), n_(n), h_(0.0) {
    if (!(half_width > 0.0) || !std::isfinite(half_width))
        throw std::invalid_argument("grid half width L must be positive, got " + std::to_string(half_width));
    if (n < 3)
        throw std::invalid_argument("grid needs at least 3 nodes, got " + std::to_string(n));
    if (n % 2 == 0)
        throw std::invalid_argument("n must be odd (got " + std::to_string(n) + ") so that x = 0 is a node");
    h_ = 2.0 * L_ / (n - 1);
}

Eigen::VectorXd Grid1D::nodes() const {
    Eigen::VectorXd x(n_);
    for (int i = 0; i < n_; ++i) x[i] = node(i);
    return x;
}

Grid1D make_grid(double L, int n) { return Grid1D(L, n); }

Grid1D grid_with_spacing(double L_min, double h) {
    if (!(h > 0.0) || !(L_min > 0.0))
        throw std::invalid_argument("grid_with_spacing: need h > 0 and L > 0");
    const long half = static_cast<long>(std::ceil(L_min / h - 1e-9));
    if (half > 1 << 20) throw std::invalid_argument("grid_with_spacing: grid too large");
    return Grid1D(half * h, static_cast<int>(2 * half + 1));
}

Field::Field(Grid1D grid, Eigen::VectorXd values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size())
        throw std::invalid_argument("field length " + std::to_string(values_.size()) +
                                    " does not match grid size " + std::to_string(grid_.size()));
    for (Eigen::Index i = 0; i < values_.size(); ++i)
        if (!std::isfinite(values_[i]))
            throw std::invalid_argument("field value at node " + std::to_string(i) + " is not finite");
}

Field Field::zeros(const Grid1D& grid) { return Field(grid, Eigen::VectorXd::Zero(grid.size())); }

Field Field::sample(const Grid1D& grid, const std::function<double(double)>& fn) {
    Eigen::VectorXd v(grid.size());
    for (int i = 0; i < grid.size(); ++i) v[i] = fn(grid.node(i));
    return Field(grid, std::move(v));
}

double trapezoid(const Eigen::VectorXd& v, double h) {
    if (v.size() == 0) return 0.0;
    return h * (v.sum() - 0.5 * (v[0] + v[v.size() - 1]));
}

double mass(const Field& f) { return trapezoid(f.values(), f.grid().spacing()); }

double l1_distance(const Field& f, const Field& g) {
    if (f.grid() != g.grid()) throw std::invalid_argument("l1_distance: grid mismatch");
    return trapezoid((f.values() - g.values()).cwiseAbs(), f.grid().spacing());
}

void write_csv(std::ostream& os, const Field& f) {
    os.precision(17);
    os << "x,value\n";
    for (int i = 0; i < f.size(); ++i) os << f.grid().node(i) << ',' << f[i] << '\n';
}

void write_csv(const std::string& path, const Field& f) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    write_csv(os, f);
}

Field read_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path);
    std::string line;
    std::getline(is, line); // header
    std::vector<double> xs, vs;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        double x, v;
        char comma;
        if (!(ls >> x >> comma >> v)) throw std::runtime_error("malformed CSV line: " + line);
        xs.push_back(x);
        vs.push_back(v);
    }
    if (xs.size() < 3) throw std::runtime_error(path + ": too few rows");
    Grid1D g(xs.back(), static_cast<int>(xs.size()));
    if (std::abs(xs.front() + g.half_width()) > 1e-9 * g.half_width())
        throw std::runtime_error(path + ": grid is not symmetric");
    return Field(g, Eigen::Map<Eigen::VectorXd>(vs.data(), static_cast<Eigen::Index>(vs.size())));
}

double gaussian_density(double x, double mean, double sigma) {
    const double z = (x - mean) / sigma;
    return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * std::numbers::pi));
}

} // namespace fplab
