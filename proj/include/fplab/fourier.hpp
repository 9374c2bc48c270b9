#pragma once

#include <complex>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fplab/grid.hpp"

namespace fplab {

// Continuum-normalized transform, fhat(xi) = int f(x) e^{-i x xi} dx,
// sampled on the FFT frequencies of the zero-padded grid (ascending order).
struct SpectralField {
    Grid1D grid;     // physical grid the transform came from
    int padded = 0;  // internal FFT length (power of two)
    Eigen::VectorXd xi;
    Eigen::VectorXcd values;

    double dxi() const { return xi.size() > 1 ? xi[1] - xi[0] : 0.0; }
};

SpectralField fourier_transform(const Field& f, int pad_factor = 1);
Field inverse_fourier(const SpectralField& g);

// Physical field from a closed-form transform ghat(xi), evaluated on the FFT
// frequencies of `grid` padded by pad_factor.
Field inverse_fourier(const Grid1D& grid, const std::function<std::complex<double>(double)>& ghat,
                      int pad_factor = 1);

// (1/2pi) int |fhat|^2 dxi via the discrete sum
double plancherel_l2_squared(const SpectralField& g);

// three-column CSV: xi,re,im
void write_csv(std::ostream& os, const SpectralField& g);

int next_pow2(int n);

} // namespace fplab

namespace fplab {
// Frequencies (ascending) that fourier_transform would produce for this grid,
// with zero values; fill `values` and pass to inverse_fourier.
SpectralField spectral_layout(const Grid1D& grid, int pad_factor = 1);
}
