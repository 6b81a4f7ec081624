#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "coarray/types.hpp"

namespace coarray {

/// Linear array with sensors on the half-wavelength integer grid.
///
/// Positions are non-negative, strictly increasing, and there are at least
/// two of them. Objects are immutable once built.
class SensorArray {
public:
    explicit SensorArray(std::vector<int> positions);

    std::span<const int> positions() const { return positions_; }
    std::size_t size() const { return positions_.size(); }
    int operator[](std::size_t i) const { return positions_[i]; }

    /// True when positions are consecutive integers.
    bool is_ula() const;

    bool operator==(const SensorArray&) const = default;

private:
    std::vector<int> positions_;
};

/// Generalized nested array {1..n1} U {m(n1+1) : m = 1..n2}, requires n1 >= n2 > 0.
SensorArray nested(int n1, int n2);

/// Nested array with n1 = ceil(P/2), n2 = floor(P/2).
SensorArray balanced_nested(int num_sensors);

/// ULA {1..P}, identical to nested(P-1, 1).
SensorArray ula(int num_sensors);

/// ULA {0..P-1}.
SensorArray ula_zero_based(int num_sensors);

/// Arbitrary positions; sorted before validation, duplicates rejected.
SensorArray custom_array(std::vector<int> positions);

/// Parses `nested:N1,N2`, `ula:P` or `custom:[d1,d2,...]`.
SensorArray parse_array_spec(const std::string& spec);

/// One (m, n) sensor pair, 0-based.
struct SensorPair {
    int m;
    int n;
};

/// Difference set, weight function and contiguous segment of an array.
struct CoarrayStructure {
    std::vector<int> difference_set;  // sorted ascending
    int max_lag = 0;                  // largest element of the difference set
    int m_ca = 0;                     // largest M with {0..M} in the difference set
    bool hole_free = false;
    std::size_t num_sensors = 0;

    /// weights_by_lag[i + max_lag] = |Omega_i|, zero when i is not a difference.
    std::vector<int> weights_by_lag;

    /// pairs_by_lag[i] lists all (m, n) with d_m - d_n = i for i = 0..m_ca,
    /// in column-major order of the P x P covariance (n outer, m inner).
    std::vector<std::vector<SensorPair>> pairs_by_lag;

    int weight(int lag) const;
};

CoarrayStructure coarray_structure(const SensorArray& array);

/// Sum of 1/|Omega_i| over i = 0..M_ca. Throws NotHoleFree.
double redundancy_coefficient(const CoarrayStructure& c);

/// Dense redundancy-averaging matrix of size (2 M_ca + 1) x P^2.
///
/// Row i + M_ca (0-based) holds 1/|Omega_i| in column m + P n for every pair
/// with d_m - d_n = i. Only meant for small arrays and verification; the
/// estimator uses pairs_by_lag. Throws NotHoleFree.
RMatrix averaging_matrix(const CoarrayStructure& c, const SensorArray& array);

}  // namespace coarray
