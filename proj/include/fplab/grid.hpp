#pragma once

#include <functional>
#include <iosfwd>
#include <string>

#include <Eigen/Dense>

namespace fplab {

// Uniform grid on [-L, L] with an odd number of nodes, so x = 0 is a node.
class Grid1D {
public:
    Grid1D(double half_width, int n);

    double half_width() const { return L_; }
    int size() const { return n_; }
    double spacing() const { return h_; }
    int center() const { return (n_ - 1) / 2; }

    // computed from the center so that node(i) == -node(n-1-i) bit-exactly
    double node(int i) const { return (i - center()) * h_; }
    Eigen::VectorXd nodes() const;

    bool operator==(const Grid1D& o) const { return L_ == o.L_ && n_ == o.n_; }
    bool operator!=(const Grid1D& o) const { return !(*this == o); }

private:
    double L_;
    int n_;
    double h_;
};

Grid1D make_grid(double L, int n);

// Smallest odd grid with spacing exactly h whose half width is >= L_min.
Grid1D grid_with_spacing(double L_min, double h);

class Field {
public:
    Field(Grid1D grid, Eigen::VectorXd values);
    static Field zeros(const Grid1D& grid);
    static Field sample(const Grid1D& grid, const std::function<double(double)>& fn);

    const Grid1D& grid() const { return grid_; }
    const Eigen::VectorXd& values() const { return values_; }
    double operator[](int i) const { return values_[i]; }
    int size() const { return grid_.size(); }

private:
    Grid1D grid_;
    Eigen::VectorXd values_;
};

// Trapezoid rule.
double mass(const Field& f);
double trapezoid(const Eigen::VectorXd& v, double h);

// L1 distance ||f - g|| (same grid required).
double l1_distance(const Field& f, const Field& g);

// two-column CSV: x,value
void write_csv(std::ostream& os, const Field& f);
void write_csv(const std::string& path, const Field& f);
Field read_csv(const std::string& path);

// Standard Gaussian (2 pi)^{-1/2} exp(-x^2/2) and the shifted/rescaled variant.
double gaussian_density(double x, double mean = 0.0, double sigma = 1.0);

} // namespace fplab
