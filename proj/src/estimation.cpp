#include "coarray/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace coarray {

CMatrix toeplitz_from_lags(const CVector& t) {
    if (t.size() % 2 == 0) throw std::invalid_argument("lag vector must have odd length");
    const Eigen::Index m = (t.size() - 1) / 2;
    CMatrix out(m + 1, m + 1);
    for (Eigen::Index col = 0; col <= m; ++col) {
        for (Eigen::Index row = 0; row <= m; ++row) out(row, col) = t(row - col + m);
    }
    return out;
}

CoarrayCovariance make_coarray_covariance(CVector t, Provenance provenance) {
    CoarrayCovariance cov;
    cov.m_ca = static_cast<int>((t.size() - 1) / 2);
    cov.matrix = toeplitz_from_lags(t);
    cov.t = std::move(t);
    cov.provenance = provenance;
    return cov;
}

CoarrayCovariance exact_coarray_covariance(const CoarrayStructure& c, const SourceScene& scene) {
    if (!c.hole_free) throw NotHoleFree("exact_coarray_covariance");
    return make_coarray_covariance(true_lag_vector(c.m_ca, scene));
}

CMatrix sample_covariance(const SnapshotMatrix& y) { return sample_covariance(y.data); }

CMatrix sample_covariance(const CMatrix& y) {
    const Eigen::Index p = y.rows();
    const Eigen::Index l = y.cols();
    if (l < 1) throw std::invalid_argument("sample covariance needs at least one snapshot");
    CMatrix r(p, p);
    const double inv_l = 1.0 / static_cast<double>(l);
    const Complex* data = y.data();

#pragma omp parallel for schedule(static)
    for (Eigen::Index n = 0; n < p; ++n) {
        for (Eigen::Index m = 0; m <= n; ++m) {
            Complex acc = 0;
            for (Eigen::Index t = 0; t < l; ++t) {
                acc += data[m + t * p] * std::conj(data[n + t * p]);
            }
            acc *= inv_l;
            if (m == n) {
                r(m, m) = Complex(acc.real(), 0.0);
            } else {
                r(m, n) = acc;
                r(n, m) = std::conj(acc);
            }
        }
    }
    return r;
}

CMatrix sample_covariance_serial(const CMatrix& y) {
    if (y.cols() < 1) throw std::invalid_argument("sample covariance needs at least one snapshot");
    CMatrix r = CMatrix::Zero(y.rows(), y.rows());
    for (Eigen::Index t = 0; t < y.cols(); ++t) {
        const CVector col = y.col(t);
        r.noalias() += col * col.adjoint();
    }
    return r / static_cast<double>(y.cols());
}

namespace {

void require_hole_free(const CoarrayStructure& c, const SensorArray& array, const char* what) {
    if (!c.hole_free) throw NotHoleFree(what);
    if (c.num_sensors != array.size()) {
        throw std::invalid_argument(std::string(what) + ": coarray structure does not match array");
    }
}

}  // namespace

CoarrayCovariance redundancy_average(const CMatrix& r_hat, const CoarrayStructure& c,
                                     const SensorArray& array, Provenance provenance) {
    require_hole_free(c, array, "redundancy_average");
    const auto p = static_cast<Eigen::Index>(array.size());
    if (r_hat.rows() != p || r_hat.cols() != p) {
        throw std::invalid_argument("redundancy_average: covariance size does not match array");
    }
    CVector t(2 * c.m_ca + 1);
    for (int i = 0; i <= c.m_ca; ++i) {
        const auto& pairs = c.pairs_by_lag[static_cast<std::size_t>(i)];
        const double w = 1.0 / static_cast<double>(pairs.size());
        Complex acc = 0;
        for (const auto& pr : pairs) acc += w * r_hat(pr.m, pr.n);
        if (i == 0) acc = Complex(acc.real(), 0.0);
        t(c.m_ca + i) = acc;
        t(c.m_ca - i) = std::conj(acc);
    }
    return make_coarray_covariance(std::move(t), provenance);
}

CVector redundancy_average_dense(const CMatrix& r_hat, const CoarrayStructure& c,
                                 const SensorArray& array) {
    require_hole_free(c, array, "redundancy_average_dense");
    const RMatrix f = averaging_matrix(c, array);
    const CVector vec = r_hat.reshaped();
    return f.cast<Complex>() * vec;
}

double hermitian_spectral_norm(const CMatrix& h) {
    if (h.size() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

double covariance_error(const CoarrayCovariance& exact, const CoarrayCovariance& est) {
    if (exact.m_ca != est.m_ca) {
        throw std::invalid_argument("covariance_error: dimension mismatch");
    }
    return hermitian_spectral_norm(exact.matrix - est.matrix);
}

CMatrix lambda_matrix(double theta, const CoarrayStructure& c, const SensorArray& array) {
    require_hole_free(c, array, "lambda_matrix");
    const auto pos = array.positions();
    const auto p = static_cast<Eigen::Index>(pos.size());
    CMatrix out(p, p);
    for (Eigen::Index n = 0; n < p; ++n) {
        for (Eigen::Index m = 0; m < p; ++m) {
            const int lag = pos[m] - pos[n];
            out(m, n) = std::polar(1.0 / c.weight(lag), lag * theta);
        }
    }
    return out;
}

namespace {

void require_same_size(const CoarrayCovariance& a, const CoarrayCovariance& b) {
    if (a.m_ca != b.m_ca) throw std::invalid_argument("coarray covariances differ in size");
}

Complex spectral_value(const CVector& e, int m_ca, double theta) {
    Complex acc = 0;
    for (int k = -m_ca; k <= m_ca; ++k) acc += e(k + m_ca) * std::polar(1.0, -theta * k);
    return acc;
}

}  // namespace

Complex spectral_function_error(const CoarrayCovariance& exact, const CoarrayCovariance& est,
                                double theta) {
    require_same_size(exact, est);
    return spectral_value(exact.t - est.t, exact.m_ca, theta);
}

Complex spectral_function_trace(const CoarrayCovariance& exact, const CoarrayCovariance& est,
                                const CoarrayStructure& c, const SensorArray& array,
                                double theta) {
    require_same_size(exact, est);
    if (exact.m_ca != c.m_ca) throw std::invalid_argument("covariance does not match coarray");
    const auto pos = array.positions();
    const auto p = static_cast<Eigen::Index>(pos.size());
    CMatrix e_y(p, p);
    for (Eigen::Index n = 0; n < p; ++n) {
        for (Eigen::Index m = 0; m < p; ++m) {
            const int lag = pos[m] - pos[n];
            e_y(m, n) = exact.lag(lag) - est.lag(lag);
        }
    }
    return (e_y * lambda_matrix(theta, c, array)).trace();
}

std::vector<double> sup_grid(int m_ca, int grid_mult) {
    if (m_ca < 1) throw std::invalid_argument("sup_grid needs M_ca >= 1");
    if (grid_mult < 1) throw std::invalid_argument("grid multiplier must be >= 1");
    const int n = m_ca * grid_mult;
    std::vector<double> grid(static_cast<std::size_t>(4 * n));
    for (int k = 1; k <= 4 * n; ++k) {
        grid[static_cast<std::size_t>(k - 1)] = static_cast<double>(k - 2 * n) * kPi / (2.0 * n);
    }
    return grid;
}

RVector spectral_magnitudes(const CoarrayCovariance& exact, const CoarrayCovariance& est,
                            std::span<const double> thetas) {
    require_same_size(exact, est);
    const CVector e = exact.t - est.t;
    const auto n = static_cast<Eigen::Index>(thetas.size());
    RVector out(n);
#pragma omp parallel for schedule(static)
    for (Eigen::Index k = 0; k < n; ++k) {
        out(k) = std::abs(spectral_value(e, exact.m_ca, thetas[static_cast<std::size_t>(k)]));
    }
    return out;
}

RVector spectral_magnitudes_serial(const CoarrayCovariance& exact,
                                   const CoarrayCovariance& est,
                                   std::span<const double> thetas) {
    require_same_size(exact, est);
    RVector out(static_cast<Eigen::Index>(thetas.size()));
    for (std::size_t k = 0; k < thetas.size(); ++k) {
        out(static_cast<Eigen::Index>(k)) = std::abs(spectral_function_error(exact, est, thetas[k]));
    }
    return out;
}

double grid_sup_bound(const CoarrayCovariance& exact, const CoarrayCovariance& est,
                      int grid_mult) {
    const auto grid = sup_grid(exact.m_ca, grid_mult);
    return 2.0 * spectral_magnitudes(exact, est, grid).maxCoeff();
}

}  // namespace coarray
