#pragma once

#include <cstdint>
#include <vector>

#include "fplab/grid.hpp"

namespace fplab {

// Seeded family of smooth decaying test functions: Hermite functions with
// random order/scale/shift, the same times a <x>^{-2} envelope, and their
// even/odd symmetrizations. Used as lower-bound proxies for operator norms.
struct ProbeOptions {
    int max_order = 24;
    double sigma_min = 0.4;
    double sigma_max = 1.5;
    double max_shift = 2.0;
};

std::vector<Field> make_probes(const Grid1D& g, int count, std::uint64_t seed, const ProbeOptions& opt = {});

// psi_n(u), L2-normalized Hermite function, stable three-term recurrence
double hermite_function(int n, double u);

// splitmix64 finalizer; used to derive independent seeds
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

} // namespace fplab
