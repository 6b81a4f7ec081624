#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include "coarray/geometry.hpp"
#include "coarray/types.hpp"

namespace coarray {

/// Uncorrelated narrowband sources on the frequency torus [0, 1).
class SourceScene {
public:
    /// Frequencies are wrapped into [0, 1). Throws std::invalid_argument when
    /// sizes differ, S == 0, powers are not positive, noise is negative or two
    /// frequencies coincide modulo 1.
    SourceScene(std::vector<double> omegas, std::vector<double> powers, double noise_power);

    /// Directions in degrees, mapped through omega = sin(theta) / 2.
    static SourceScene from_degrees(std::span<const double> theta_deg,
                                    std::vector<double> powers, double noise_power);

    /// Noise set from SNR relative to the weakest source: sigma^2 = p_min 10^(-snr/10).
    static SourceScene with_snr_db(std::vector<double> omegas, std::vector<double> powers,
                                   double snr_db);

    std::span<const double> omegas() const { return omegas_; }
    std::span<const double> powers() const { return powers_; }
    double noise_power() const { return noise_power_; }
    std::size_t num_sources() const { return omegas_.size(); }
    double p_min() const;
    double p_max() const;

private:
    std::vector<double> omegas_;
    std::vector<double> powers_;
    double noise_power_;
};

/// Wraps a real number into [0, 1).
double wrap_unit(double x);

/// P x S matrix with entries exp(j 2 pi d_p omega_i).
CMatrix steering_matrix(std::span<const int> positions, std::span<const double> omegas);

/// R_y = A P A^H + sigma^2 I.
CMatrix true_covariance(const SensorArray& array, const SourceScene& scene);

/// Exact lag vector t_{-M}..t_{M} of the virtual ULA {0..M}.
CVector true_lag_vector(int m_ca, const SourceScene& scene);

/// A_U P A_U^H + sigma^2 I on U = {0..M_ca}. Throws NotHoleFree.
CMatrix true_coarray_covariance(const CoarrayStructure& c, const SourceScene& scene);

/// Derives a 64-bit stream seed from a base seed and a list of indices.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> indices);

struct SnapshotMatrix {
    CMatrix data;  // P x L
    std::uint64_t seed = 0;

    Eigen::Index num_sensors() const { return data.rows(); }
    Eigen::Index num_snapshots() const { return data.cols(); }
};

/// Factor F with F F^H = R for a Hermitian PSD R. Uses Cholesky when R is
/// positive definite and an eigenvalue square root otherwise.
CMatrix covariance_factor(const CMatrix& r);

/// L i.i.d. CN(0, R_y) snapshots. Deterministic in (array, scene, L, seed).
SnapshotMatrix sample_snapshots(const SensorArray& array, const SourceScene& scene,
                                int num_snapshots, std::uint64_t seed);

}  // namespace coarray
