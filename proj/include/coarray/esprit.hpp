#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "coarray/estimation.hpp"
#include "coarray/geometry.hpp"
#include "coarray/signal_model.hpp"
#include "coarray/types.hpp"

namespace coarray {

enum class FailureStage { input, averaging, subspace, rotation };

const char* to_string(FailureStage stage);

/// Estimation failure tagged with the pipeline stage that raised it.
class EstimationError : public std::runtime_error {
public:
    EstimationError(FailureStage stage, const std::string& what)
        : std::runtime_error(std::string(to_string(stage)) + ": " + what), stage_(stage) {}

    FailureStage stage() const { return stage_; }

private:
    FailureStage stage_;
};

struct SignalSubspace {
    CMatrix basis;              // n x s, orthonormal columns
    RVector eigenvalues;        // s largest, descending
    double next_eigenvalue = 0; // (s+1)-th eigenvalue, or 0 when s == n
    bool degenerate_gap = false;
};

/// Top-s eigenpairs of a Hermitian matrix. Each eigenvector is rotated so
/// that its first entry with modulus above 1e-12 is real positive. Flags
/// `degenerate_gap` when lambda_s - lambda_{s+1} <= 1e-9 lambda_1.
SignalSubspace signal_subspace(const CMatrix& hermitian, int s);

struct EspritDiagnostics {
    RVector subspace_eigenvalues;
    double next_eigenvalue = 0;
    bool degenerate_gap = false;
    double u0_condition = 0;  // sigma_1(U0) / sigma_S(U0)
};

struct DoaEstimate {
    std::vector<double> omegas_hat;       // ascending, in [0, 1)
    std::vector<Complex> psi_eigenvalues; // same order as omegas_hat
    EspritDiagnostics diagnostics;
};

/// Relative singular value cutoff applied to U0 before inversion.
inline constexpr double kRankCutoff = 1e-10;

/// Psi = pinv(U0) U1 with U0/U1 the first/last n-1 rows of `basis`; returns
/// the phases of its eigenvalues as torus frequencies. Throws
/// EstimationError(rotation) when sigma_S(U0) < kRankCutoff sigma_1(U0).
DoaEstimate esprit_rotation(const CMatrix& basis);
DoaEstimate esprit_rotation(const SignalSubspace& u);

/// Eigenvalues of pinv(U0) U1 in solver order, without phase mapping.
std::vector<Complex> rotation_eigenvalues(const CMatrix& basis);

/// ESPRIT on an arbitrary Hermitian matrix (coarray or physical).
DoaEstimate esprit_on_covariance(const CMatrix& hermitian, int s);

/// sample covariance -> redundancy averaging -> subspace -> rotation.
DoaEstimate coarray_esprit(const SnapshotMatrix& y, const SensorArray& array,
                           const CoarrayStructure& c, int s);

/// Same pipeline on a precomputed sample covariance.
DoaEstimate coarray_esprit_from_covariance(const CMatrix& r_hat, const SensorArray& array,
                                           const CoarrayStructure& c, int s);

/// ESPRIT on the physical sample covariance of a ULA.
DoaEstimate direct_esprit(const SnapshotMatrix& y, const SensorArray& array, int s);
DoaEstimate direct_esprit_from_covariance(const CMatrix& r_hat, const SensorArray& array, int s);

}  // namespace coarray
