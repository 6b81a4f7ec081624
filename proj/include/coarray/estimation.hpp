#pragma once

#include <cstdint>
#include <variant>

#include "coarray/geometry.hpp"
#include "coarray/signal_model.hpp"
#include "coarray/types.hpp"

namespace coarray {

struct ExactProvenance {};
struct EstimatedProvenance {
    int num_snapshots = 0;
    std::uint64_t seed = 0;
};
using Provenance = std::variant<ExactProvenance, EstimatedProvenance>;

/// Hermitian Toeplitz coarray covariance T = Toeplitz(t), T(m, n) = t_{m-n}.
///
/// `t` stores t_{-M}..t_{M}, so t_i lives at index i + M.
struct CoarrayCovariance {
    int m_ca = 0;
    CVector t;
    CMatrix matrix;
    Provenance provenance = ExactProvenance{};

    Complex lag(int i) const { return t(i + m_ca); }
};

/// Builds (M+1) x (M+1) Toeplitz matrix from a length 2M+1 lag vector.
CMatrix toeplitz_from_lags(const CVector& t);

CoarrayCovariance make_coarray_covariance(CVector t, Provenance provenance = ExactProvenance{});

CoarrayCovariance exact_coarray_covariance(const CoarrayStructure& c, const SourceScene& scene);

/// (1/L) sum_t y(t) y(t)^H. Parallel over output entries; each entry is
/// accumulated in snapshot order so the result does not depend on the
/// thread count.
CMatrix sample_covariance(const SnapshotMatrix& y);
CMatrix sample_covariance(const CMatrix& y);

/// Reference outer-product accumulation, single threaded.
CMatrix sample_covariance_serial(const CMatrix& y);

/// Redundancy averaging through the lag groups. t_0 is forced real and
/// t_{-i} = conj(t_i). Throws NotHoleFree.
CoarrayCovariance redundancy_average(const CMatrix& r_hat, const CoarrayStructure& c,
                                     const SensorArray& array,
                                     Provenance provenance = ExactProvenance{});

/// Same averaging through the dense averaging matrix applied to vec(r_hat).
CVector redundancy_average_dense(const CMatrix& r_hat, const CoarrayStructure& c,
                                 const SensorArray& array);

/// Largest |eigenvalue| of a Hermitian matrix.
double hermitian_spectral_norm(const CMatrix& h);

/// ||T_exact - T_est||_2. Throws std::invalid_argument on size mismatch.
double covariance_error(const CoarrayCovariance& exact, const CoarrayCovariance& est);

/// [Lambda(theta)]_{m,n} = exp(j (d_m - d_n) theta) / |Omega_{d_m - d_n}|.
CMatrix lambda_matrix(double theta, const CoarrayStructure& c, const SensorArray& array);

/// f_e(theta) = sum_k e_k exp(-j theta k), e_k = t_k - t_hat_k.
Complex spectral_function_error(const CoarrayCovariance& exact, const CoarrayCovariance& est,
                                double theta);

/// tr(E_y Lambda(theta)) with [E_y]_{m,n} = e_{d_m - d_n}. Equals the above.
Complex spectral_function_trace(const CoarrayCovariance& exact, const CoarrayCovariance& est,
                                const CoarrayStructure& c, const SensorArray& array,
                                double theta);

/// Grid theta_k = (k - 2N) 2 pi / (4N), k = 1..4N, with N = grid_mult * M_ca.
std::vector<double> sup_grid(int m_ca, int grid_mult = 1);

/// |f_e| on the grid, OpenMP parallel over grid points.
RVector spectral_magnitudes(const CoarrayCovariance& exact, const CoarrayCovariance& est,
                            std::span<const double> thetas);
RVector spectral_magnitudes_serial(const CoarrayCovariance& exact,
                                   const CoarrayCovariance& est,
                                   std::span<const double> thetas);

/// 2 max_k |f_e(theta_k)| over sup_grid(M_ca, grid_mult). Upper-bounds
/// covariance_error(exact, est).
double grid_sup_bound(const CoarrayCovariance& exact, const CoarrayCovariance& est,
                      int grid_mult = 1);

}  // namespace coarray
