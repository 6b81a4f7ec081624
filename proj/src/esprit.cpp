#include "coarray/esprit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace coarray {

const char* to_string(FailureStage stage) {
    switch (stage) {
        case FailureStage::input: return "input";
        case FailureStage::averaging: return "averaging";
        case FailureStage::subspace: return "subspace";
        case FailureStage::rotation: return "rotation";
    }
    return "unknown";
}

SignalSubspace signal_subspace(const CMatrix& hermitian, int s) {
    const Eigen::Index n = hermitian.rows();
    if (hermitian.cols() != n) {
        throw EstimationError(FailureStage::subspace, "matrix is not square");
    }
    if (s < 1 || s > n) {
        throw EstimationError(FailureStage::subspace, "subspace dimension out of range");
    }
    if (!hermitian.allFinite()) {
        throw EstimationError(FailureStage::subspace, "matrix has non-finite entries");
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian);
    if (es.info() != Eigen::Success) {
        throw EstimationError(FailureStage::subspace, "eigensolver did not converge");
    }
    // Eigen returns ascending eigenvalues.
    const RVector& lam = es.eigenvalues();
    SignalSubspace out;
    out.basis.resize(n, s);
    out.eigenvalues.resize(s);
    for (int k = 0; k < s; ++k) {
        const Eigen::Index src = n - 1 - k;
        out.eigenvalues(k) = lam(src);
        CVector v = es.eigenvectors().col(src);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double mag = std::abs(v(i));
            if (mag > 1e-12) {
                v *= std::conj(v(i)) / mag;
                v(i) = Complex(v(i).real(), 0.0);
                break;
            }
        }
        out.basis.col(k) = v;
    }
    out.next_eigenvalue = s < n ? lam(n - 1 - s) : 0.0;
    if (s < n) {
        const double top = std::abs(lam(n - 1));
        out.degenerate_gap = (out.eigenvalues(s - 1) - out.next_eigenvalue) <= 1e-9 * top;
    }
    return out;
}

namespace {

struct Rotation {
    CMatrix psi;
    double condition = 0;
};

Rotation rotation_matrix(const CMatrix& basis) {
    const Eigen::Index rows = basis.rows();
    const Eigen::Index s = basis.cols();
    if (rows < 2 || s < 1 || s > rows - 1) {
        throw EstimationError(FailureStage::rotation, "basis too small for a shift of one row");
    }
    const CMatrix u0 = basis.topRows(rows - 1);
    const CMatrix u1 = basis.bottomRows(rows - 1);
    Eigen::JacobiSVD<CMatrix> svd(u0, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RVector& sv = svd.singularValues();
    if (!(sv(0) > 0) || sv(s - 1) < kRankCutoff * sv(0)) {
        throw EstimationError(FailureStage::rotation, "U0 is rank deficient");
    }
    const CMatrix pinv =
        svd.matrixV() * sv.cwiseInverse().asDiagonal() * svd.matrixU().adjoint();
    return Rotation{pinv * u1, sv(0) / sv(s - 1)};
}

std::vector<Complex> eigenvalues_of(const CMatrix& psi) {
    Eigen::ComplexEigenSolver<CMatrix> ces(psi, false);
    if (ces.info() != Eigen::Success) {
        throw EstimationError(FailureStage::rotation, "eigenvalues of Psi did not converge");
    }
    std::vector<Complex> out(static_cast<std::size_t>(psi.rows()));
    for (Eigen::Index i = 0; i < psi.rows(); ++i) out[static_cast<std::size_t>(i)] = ces.eigenvalues()(i);
    return out;
}

double phase_to_omega(Complex lambda) {
    double w = std::arg(lambda) / kTwoPi;  // (-1/2, 1/2]
    if (w < 0) w += 1.0;
    return w >= 1.0 ? 0.0 : w;
}

DoaEstimate estimate_from_rotation(const Rotation& rot) {
    const auto lambdas = eigenvalues_of(rot.psi);
    std::vector<std::size_t> order(lambdas.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> omegas(lambdas.size());
    for (std::size_t i = 0; i < lambdas.size(); ++i) omegas[i] = phase_to_omega(lambdas[i]);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return omegas[a] < omegas[b]; });
    DoaEstimate est;
    for (auto i : order) {
        est.omegas_hat.push_back(omegas[i]);
        est.psi_eigenvalues.push_back(lambdas[i]);
    }
    est.diagnostics.u0_condition = rot.condition;
    return est;
}

}  // namespace

std::vector<Complex> rotation_eigenvalues(const CMatrix& basis) {
    return eigenvalues_of(rotation_matrix(basis).psi);
}

DoaEstimate esprit_rotation(const CMatrix& basis) {
    return estimate_from_rotation(rotation_matrix(basis));
}

DoaEstimate esprit_rotation(const SignalSubspace& u) {
    DoaEstimate est = esprit_rotation(u.basis);
    est.diagnostics.subspace_eigenvalues = u.eigenvalues;
    est.diagnostics.next_eigenvalue = u.next_eigenvalue;
    est.diagnostics.degenerate_gap = u.degenerate_gap;
    return est;
}

DoaEstimate esprit_on_covariance(const CMatrix& hermitian, int s) {
    return esprit_rotation(signal_subspace(hermitian, s));
}

DoaEstimate coarray_esprit_from_covariance(const CMatrix& r_hat, const SensorArray& array,
                                           const CoarrayStructure& c, int s) {
    if (!c.hole_free) {
        throw EstimationError(FailureStage::input, "coarray ESPRIT needs a hole-free array");
    }
    if (s < 1 || s > c.m_ca) {
        throw EstimationError(FailureStage::input, "need 1 <= S <= M_ca");
    }
    CoarrayCovariance t_hat;
    try {
        t_hat = redundancy_average(r_hat, c, array);
    } catch (const std::invalid_argument& e) {
        throw EstimationError(FailureStage::averaging, e.what());
    }
    return esprit_on_covariance(t_hat.matrix, s);
}

DoaEstimate coarray_esprit(const SnapshotMatrix& y, const SensorArray& array,
                           const CoarrayStructure& c, int s) {
    if (y.num_sensors() != static_cast<Eigen::Index>(array.size())) {
        throw EstimationError(FailureStage::input, "snapshot rows do not match array size");
    }
    return coarray_esprit_from_covariance(sample_covariance(y), array, c, s);
}

DoaEstimate direct_esprit_from_covariance(const CMatrix& r_hat, const SensorArray& array,
                                          int s) {
    if (!array.is_ula()) {
        throw EstimationError(FailureStage::input, "direct ESPRIT needs a ULA");
    }
    const auto p = static_cast<int>(array.size());
    if (s < 1 || s >= p) throw EstimationError(FailureStage::input, "need 1 <= S < P");
    if (r_hat.rows() != p || r_hat.cols() != p) {
        throw EstimationError(FailureStage::input, "covariance size does not match array");
    }
    return esprit_on_covariance(r_hat, s);
}

DoaEstimate direct_esprit(const SnapshotMatrix& y, const SensorArray& array, int s) {
    if (y.num_sensors() != static_cast<Eigen::Index>(array.size())) {
        throw EstimationError(FailureStage::input, "snapshot rows do not match array size");
    }
    return direct_esprit_from_covariance(sample_covariance(y), array, s);
}

}  // namespace coarray
