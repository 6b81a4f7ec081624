#include "coarray/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace coarray {

double torus_distance(double a, double b) {
    double d = std::fabs(a - b);
    d -= std::floor(d);
    return std::min(d, 1.0 - d);
}

Matching match_frequencies(std::span<const double> truth, std::span<const double> est) {
    if (truth.size() != est.size()) {
        throw std::invalid_argument("matching distance needs sets of equal size");
    }
    if (truth.size() > kMaxMatchingSources) {
        throw std::invalid_argument("matching distance supports at most 10 sources");
    }
    const std::size_t s = truth.size();
    std::vector<std::size_t> perm(s);
    std::iota(perm.begin(), perm.end(), 0);

    Matching best;
    best.distance = std::numeric_limits<double>::infinity();
    do {
        double worst = 0;
        for (std::size_t j = 0; j < s && worst < best.distance; ++j) {
            worst = std::max(worst, torus_distance(est[perm[j]], truth[j]));
        }
        if (worst < best.distance) {
            best.distance = worst;
            best.permutation = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));

    if (s == 0) best.distance = 0;
    best.errors.resize(s);
    for (std::size_t j = 0; j < s; ++j) {
        best.errors[j] = torus_distance(est[best.permutation[j]], truth[j]);
    }
    return best;
}

double matching_distance(std::span<const double> truth, std::span<const double> est) {
    return match_frequencies(truth, est).distance;
}

double min_separation(std::span<const double> omegas) {
    if (omegas.size() < 2) throw std::invalid_argument("min_separation needs at least two sources");
    double best = 0.5;
    for (std::size_t i = 0; i < omegas.size(); ++i) {
        for (std::size_t j = i + 1; j < omegas.size(); ++j) {
            best = std::min(best, torus_distance(omegas[i], omegas[j]));
        }
    }
    return best;
}

bool resolution_success(std::span<const double> truth, std::span<const double> est,
                        double delta) {
    const Matching m = match_frequencies(truth, est);
    const double tol = delta / 10.0;
    return std::all_of(m.errors.begin(), m.errors.end(), [tol](double e) { return e <= tol; });
}

}  // namespace coarray
