#include "fplab/probes.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace fplab {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double hermite_function(int n, double u) {
    if (n < 0) throw std::invalid_argument("hermite_function: negative order");
    double prev = 0.0;
    double cur = std::exp(-0.5 * u * u) / std::pow(std::numbers::pi, 0.25);
    for (int k = 0; k < n; ++k) {
        const double next = std::sqrt(2.0 / (k + 1)) * u * cur - std::sqrt(static_cast<double>(k) / (k + 1)) * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

std::vector<Field> make_probes(const Grid1D& g, int count, std::uint64_t seed, const ProbeOptions& opt) {
    if (count < 0) throw std::invalid_argument("probe count must be >= 0");
    if (!(opt.sigma_min > 0.0) || opt.sigma_max < opt.sigma_min || opt.max_order < 0)
        throw std::invalid_argument("invalid probe options");
    std::mt19937_64 rng(mix_seed(seed, 0x70726f6265ULL));
    std::uniform_int_distribution<int> order(0, opt.max_order);
    std::uniform_real_distribution<double> sig(opt.sigma_min, opt.sigma_max);
    std::uniform_real_distribution<double> shift(-opt.max_shift, opt.max_shift);

    std::vector<Field> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
        int nn = order(rng);
        double s = sig(rng);
        double c = shift(rng);
        const int kind = i % 4;
        // symmetrizing an unshifted Hermite function of the wrong parity gives 0
        if (kind >= 2 && std::abs(c) < 0.25) c = (c < 0.0 ? -0.25 : 0.25) + c;
        // keep the oscillatory zone |u| <= sqrt(2n+1) plus a decay margin inside the grid
        const double room = 0.9 * g.half_width() - std::abs(c);
        auto extent = [&] { return s * (std::sqrt(2.0 * nn + 1.0) + 6.0); };
        if (extent() > room) s = std::max(opt.sigma_min, room / (std::sqrt(2.0 * nn + 1.0) + 6.0));
        while (nn > 0 && extent() > room) --nn;
        if (extent() > room) throw std::invalid_argument("probes do not fit on the grid (increase L)");
        auto base = [&](double x) {
            double v = hermite_function(nn, (x - c) / s);
            if (kind == 1) v /= 1.0 + x * x;
            return v;
        };
        Field f = Field::sample(g, [&](double x) {
            switch (kind) {
            case 2: return 0.5 * (base(x) + base(-x));
            case 3: return 0.5 * (base(x) - base(-x));
            default: return base(x);
            }
        });
        out.push_back(std::move(f));
    }
    return out;
}

} // namespace fplab
