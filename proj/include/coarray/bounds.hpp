#pragma once

#include <array>
#include <span>
#include <stdexcept>
#include <string>

#include "coarray/geometry.hpp"
#include "coarray/signal_model.hpp"

namespace coarray {

/// Constants entering the finite-snapshot bounds.
///
/// Only c2 is pinned down analytically; c is the Hanson-Wright universal
/// constant and is a free knob (default 1), so every absolute bound value is
/// correct only up to that constant.
struct BoundConstants {
    double c = 1.0;
    double c2 = 3.0 / (16.0 * 1.4142135623730951);
    double gamma = 2.0;

    /// Sub-Gaussian norm of N(0, 1/2).
    static constexpr double kSubGaussianK = 1.1547005383792515;  // 2 / sqrt(3)

    double c1() const;
    double c3() const { return 1.0 / c1(); }
    void validate() const;
};

/// Parses `c=1.5,gamma=3,c2=0.1`; unspecified keys keep their defaults.
BoundConstants parse_constants(const std::string& text);

/// Raised when a bound needs beta > 0.
class EigenGapViolation : public std::domain_error {
public:
    explicit EigenGapViolation(double beta);
    double beta() const { return beta_; }

private:
    double beta_;
};

/// sigma_S of the coarray steering matrix on {0..M_ca}, by SVD.
double coarray_sigma_min(const CoarrayStructure& c, const SourceScene& scene);

/// beta = p_min sigma_S(A_U)^2 - sigma^2. May be negative.
double eigen_gap(const SourceScene& scene, const CoarrayStructure& c);

struct SubspaceConstants {
    double c_s;        // 2^-S / (4 sqrt 2)
    double c_s_prime;  // 14 pi sqrt(2) S^{3/2} 4^S
};
SubspaceConstants subspace_constants(int s);

struct QFactor {
    double q;
    double q1;
    double l0;
};

/// q = C'_S sqrt(M+1) / (beta sigma_S), q1 = q ||R_y||, L0 = ||R_y|| sqrt(Delta) / (C_S beta).
/// Throws EigenGapViolation when beta <= 0.
QFactor q_factor(double beta, double sigma_s, int m_ca, double ry_norm, double redundancy,
                 int num_sources);
QFactor q_factor(const SourceScene& scene, const SensorArray& array,
                 const CoarrayStructure& c);

/// Spectral norm of the true physical covariance.
double covariance_norm(const SensorArray& array, const SourceScene& scene);

/// 8 M exp(-c1 L min(c2 eps^2 / (||R||^2 Delta), eps / (||R|| sqrt Delta))), clipped to [0, 1].
double tail_bound(double epsilon, double num_snapshots, double ry_norm, double redundancy,
                  int m_ca, const BoundConstants& k = {});
double tail_bound(double epsilon, double num_snapshots, const SourceScene& scene,
                  const SensorArray& array, const CoarrayStructure& c,
                  const BoundConstants& k = {});

/// Smallest epsilon with tail_bound(epsilon) <= target, by bisection.
double tail_bound_inverse(double target, double num_snapshots, double ry_norm,
                          double redundancy, int m_ca, const BoundConstants& k = {});

struct SnapshotRequirement {
    double value = 0;
    /// Four candidate terms, before multiplying by c3 ln(8 M / delta):
    /// q1^2 Delta / (c2 eps^2), q1 sqrt(Delta) / eps, L0^2 / c2, L0.
    std::array<double, 4> terms{};
    int active_term = 0;  // index into terms
    double log_factor = 0;
    double epsilon_cap = 0;  // q min(C_S beta, p_min P sqrt(Delta) / c2)
    bool small_eps_regime = false;
};

/// Snapshot count sufficient for md <= epsilon with probability 1 - delta.
/// In the small-epsilon regime (epsilon <= epsilon_cap) this is the
/// single-term form; otherwise the four-term maximum. Throws
/// EigenGapViolation when beta <= 0.
SnapshotRequirement snapshot_requirement(double epsilon, double delta, const SourceScene& scene,
                                         const SensorArray& array, const CoarrayStructure& c,
                                         const BoundConstants& k = {});

enum class Regime { ula, nested };

struct SpecializedParams {
    int num_sensors = 0;
    int num_sources = 1;
    double p_min = 1;
    double p_max = 1;
    double noise_power = 0;
    double epsilon = 0.01;
    double delta = 0.05;
    double separation = 0.5;  // minimum torus separation of the scene
};

struct SpecializedBound {
    double value = 0;
    double geometry_constant = 0;  // C_ula or C_nest
    double c_prime = 0;            // C' or C'_n
    double epsilon_cap = 0;        // C_1(S) or C_2(S)
    bool separation_ok = false;
    bool snr_ok = false;
    bool epsilon_ok = false;
    bool sensors_ok = false;
    bool delta_ok = false;

    bool preconditions_hold() const {
        return separation_ok && snr_ok && epsilon_ok && sensors_ok && delta_ok;
    }
};

/// Closed-form snapshot bounds for the ULA and the balanced nested array in
/// the well-separated regime. Violated preconditions are flagged, not thrown.
SpecializedBound specialized_bounds(Regime regime, const SpecializedParams& p,
                                    const BoundConstants& k = {});

/// k / C' with C' = gamma / (gamma - 1): floor on sigma_S(V)^2 for a k-row
/// Vandermonde matrix with nodes separated by at least gamma / k. Throws
/// std::invalid_argument when the separation or size precondition fails.
double vandermonde_floor(int k, std::span<const double> omegas, double gamma);

/// P^2 / C'_n, C'_n = 5 gamma / (gamma - 1), for the balanced nested array
/// when separation >= 5 gamma / P^2.
double nested_vandermonde_floor(int num_sensors, std::span<const double> omegas, double gamma);

/// Smallest singular value squared of the k x S Vandermonde matrix.
double vandermonde_sigma_min_sq(int k, std::span<const double> omegas);

struct BoundReport {
    double beta = 0;
    double sigma_s_coarray = 0;
    double q = 0;
    double q1 = 0;
    double l0 = 0;
    double redundancy = 0;
    double l_required = 0;
    double c_s = 0;
    double c_s_prime = 0;
    double ry_norm = 0;
    int m_ca = 0;
    bool eigen_gap_ok = false;
    SnapshotRequirement requirement;
};

/// All scalar quantities for a scene and geometry. When beta <= 0 the
/// q-dependent fields stay zero and eigen_gap_ok is false.
BoundReport bound_report(const SourceScene& scene, const SensorArray& array, double epsilon,
                         double delta, const BoundConstants& k = {});

struct ExceedanceObservation {
    double epsilon;
    double num_snapshots;
    double ry_norm;
    double redundancy;
    int m_ca;
    double empirical_probability;
    int trials;
};

/// True when the bound is not undercut by more than `num_se` standard errors.
bool tail_bound_sound(const ExceedanceObservation& obs, const BoundConstants& k,
                      double num_se = 3.0);

/// Largest c in [lo, hi] for which every observation stays sound, by
/// bisection on c (the bound is monotone decreasing in c).
double calibrate_constant(std::span<const ExceedanceObservation> obs, double lo = 1e-3,
                          double hi = 1e3, double num_se = 3.0);

}  // namespace coarray
