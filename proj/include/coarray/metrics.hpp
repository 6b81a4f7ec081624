#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace coarray {

/// min_k |a - b + k|
double torus_distance(double a, double b);

struct Matching {
    double distance = 0;
    /// est index paired with truth index j is permutation[j].
    std::vector<std::size_t> permutation;
    /// per-source torus errors under `permutation`, indexed by truth index.
    std::vector<double> errors;
};

inline constexpr std::size_t kMaxMatchingSources = 10;

/// min over permutations of max_j torus error. Brute force, S <= 10.
Matching match_frequencies(std::span<const double> truth, std::span<const double> est);

double matching_distance(std::span<const double> truth, std::span<const double> est);

/// Smallest pairwise torus distance; requires S >= 2.
double min_separation(std::span<const double> omegas);

/// Every per-source error under the optimal pairing is <= delta / 10.
bool resolution_success(std::span<const double> truth, std::span<const double> est,
                        double delta);

}  // namespace coarray
