#include "fplab/fourier.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include <unsupported/Eigen/FFT>

namespace fplab {

int next_pow2(int n) {
    int p = 1;
    while (p < n) p <<= 1;
    return p;
}

namespace {

int padded_length(int n, int pad_factor) {
    if (pad_factor < 1) throw std::invalid_argument("pad_factor must be >= 1");
    return next_pow2(n) * next_pow2(pad_factor);
}

// frequency of FFT bin k (k in [0, N)), mapped to (-N/2, N/2]
double bin_frequency(int k, int N, double h) {
    const int kk = (k < N / 2) ? k : k - N;
    return 2.0 * std::numbers::pi * kk / (N * h);
}

} // namespace

SpectralField fourier_transform(const Field& f, int pad_factor) {
    const Grid1D& g = f.grid();
    const int n = g.size();
    const int N = padded_length(n, pad_factor);
    const double h = g.spacing();
    const double x0 = g.node(0);

    std::vector<std::complex<double>> in(N, 0.0), out;
    for (int j = 0; j < n; ++j) in[j] = f[j];
    Eigen::FFT<double> fft;
    fft.fwd(out, in);

    SpectralField s{g, N, Eigen::VectorXd(N), Eigen::VectorXcd(N)};
    for (int k = 0; k < N; ++k) {
        const int pos = (k + N / 2) % N;  // ascending order: bin N/2 (= -N/2) first
        const double xi = bin_frequency(k, N, h);
        s.xi[pos] = xi;
        s.values[pos] = h * std::polar(1.0, -xi * x0) * out[k];
    }
    return s;
}

Field inverse_fourier(const SpectralField& s) {
    const Grid1D& g = s.grid;
    const int N = s.padded;
    const int n = g.size();
    const double h = g.spacing();
    const double x0 = g.node(0);
    if (s.values.size() != N) throw std::invalid_argument("inverse_fourier: corrupt spectral field");

    std::vector<std::complex<double>> in(N), out;
    for (int pos = 0; pos < N; ++pos) {
        const int k = (pos + N / 2) % N;
        in[k] = s.values[pos] * std::polar(1.0, s.xi[pos] * x0) / h;
    }
    Eigen::FFT<double> fft;
    fft.inv(out, in);  // includes the 1/N factor
    Eigen::VectorXd v(n);
    for (int j = 0; j < n; ++j) v[j] = out[j].real();
    return Field(g, std::move(v));
}

Field inverse_fourier(const Grid1D& grid, const std::function<std::complex<double>(double)>& ghat, int pad_factor) {
    const int N = padded_length(grid.size(), pad_factor);
    SpectralField s{grid, N, Eigen::VectorXd(N), Eigen::VectorXcd(N)};
    for (int pos = 0; pos < N; ++pos) {
        const int k = (pos + N / 2) % N;
        s.xi[pos] = bin_frequency(k, N, grid.spacing());
        s.values[pos] = ghat(s.xi[pos]);
    }
    return inverse_fourier(s);
}

double plancherel_l2_squared(const SpectralField& g) {
    return g.values.squaredNorm() * g.dxi() / (2.0 * std::numbers::pi);
}

void write_csv(std::ostream& os, const SpectralField& g) {
    os.precision(17);
    os << "xi,re,im\n";
    for (Eigen::Index k = 0; k < g.xi.size(); ++k)
        os << g.xi[k] << ',' << g.values[k].real() << ',' << g.values[k].imag() << '\n';
}

} // namespace fplab

namespace fplab {
SpectralField spectral_layout(const Grid1D& grid, int pad_factor) {
    const int N = padded_length(grid.size(), pad_factor);
    SpectralField s{grid, N, Eigen::VectorXd(N), Eigen::VectorXcd::Zero(N)};
    for (int pos = 0; pos < N; ++pos) s.xi[pos] = bin_frequency((pos + N / 2) % N, N, grid.spacing());
    return s;
}
}
