#include "coarray/signal_model.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace coarray {

double wrap_unit(double x) {
    double w = x - std::floor(x);
    return w >= 1.0 ? 0.0 : w;
}

namespace {

double torus_gap(double a, double b) {
    double d = std::fabs(a - b);
    d -= std::floor(d);
    return std::min(d, 1.0 - d);
}

}  // namespace

SourceScene::SourceScene(std::vector<double> omegas, std::vector<double> powers,
                         double noise_power)
    : omegas_(std::move(omegas)), powers_(std::move(powers)), noise_power_(noise_power) {
    if (omegas_.empty()) throw std::invalid_argument("scene needs at least one source");
    if (omegas_.size() != powers_.size()) {
        throw std::invalid_argument("scene omegas and powers differ in length");
    }
    if (!(noise_power_ >= 0) || !std::isfinite(noise_power_)) {
        throw std::invalid_argument("noise power must be finite and non-negative");
    }
    for (double p : powers_) {
        if (!(p > 0) || !std::isfinite(p)) {
            throw std::invalid_argument("source powers must be finite and positive");
        }
    }
    for (auto& w : omegas_) {
        if (!std::isfinite(w)) throw std::invalid_argument("source frequency is not finite");
        w = wrap_unit(w);
    }
    for (std::size_t i = 0; i < omegas_.size(); ++i) {
        for (std::size_t j = i + 1; j < omegas_.size(); ++j) {
            // closer than this the steering columns are numerically equal
            if (torus_gap(omegas_[i], omegas_[j]) < 1e-12) {
                throw std::invalid_argument("source frequencies must be distinct modulo 1");
            }
        }
    }
}

SourceScene SourceScene::from_degrees(std::span<const double> theta_deg,
                                      std::vector<double> powers, double noise_power) {
    std::vector<double> omegas;
    omegas.reserve(theta_deg.size());
    for (double th : theta_deg) omegas.push_back(std::sin(th * kPi / 180.0) / 2.0);
    return SourceScene(std::move(omegas), std::move(powers), noise_power);
}

SourceScene SourceScene::with_snr_db(std::vector<double> omegas, std::vector<double> powers,
                                     double snr_db) {
    if (powers.empty()) throw std::invalid_argument("scene needs at least one source");
    const double p_min = *std::min_element(powers.begin(), powers.end());
    return SourceScene(std::move(omegas), std::move(powers),
                       p_min * std::pow(10.0, -snr_db / 10.0));
}

double SourceScene::p_min() const { return *std::min_element(powers_.begin(), powers_.end()); }
double SourceScene::p_max() const { return *std::max_element(powers_.begin(), powers_.end()); }

namespace {

// exp(j 2 pi d w) with the phase reduced mod 1 before scaling.
Complex unit_phasor(double d, double w) {
    const double turns = wrap_unit(d * w);
    return std::polar(1.0, kTwoPi * turns);
}

}  // namespace

CMatrix steering_matrix(std::span<const int> positions, std::span<const double> omegas) {
    CMatrix a(static_cast<Eigen::Index>(positions.size()),
              static_cast<Eigen::Index>(omegas.size()));
    for (Eigen::Index i = 0; i < a.cols(); ++i) {
        for (Eigen::Index p = 0; p < a.rows(); ++p) {
            a(p, i) = unit_phasor(positions[static_cast<std::size_t>(p)],
                                  omegas[static_cast<std::size_t>(i)]);
        }
    }
    return a;
}

CMatrix true_covariance(const SensorArray& array, const SourceScene& scene) {
    const CMatrix a = steering_matrix(array.positions(), scene.omegas());
    RVector p(static_cast<Eigen::Index>(scene.num_sources()));
    for (Eigen::Index i = 0; i < p.size(); ++i) p(i) = scene.powers()[static_cast<std::size_t>(i)];
    CMatrix r = a * p.asDiagonal() * a.adjoint();
    r.diagonal().array() += scene.noise_power();
    // exact Hermitian symmetry
    r = (0.5 * (r + r.adjoint())).eval();
    return r;
}

CVector true_lag_vector(int m_ca, const SourceScene& scene) {
    CVector t = CVector::Zero(2 * m_ca + 1);
    for (int i = 0; i <= m_ca; ++i) {
        Complex acc = 0;
        for (std::size_t s = 0; s < scene.num_sources(); ++s) {
            acc += scene.powers()[s] * unit_phasor(i, scene.omegas()[s]);
        }
        if (i == 0) acc = Complex(acc.real() + scene.noise_power(), 0.0);
        t(m_ca + i) = acc;
        t(m_ca - i) = std::conj(acc);
    }
    return t;
}

CMatrix true_coarray_covariance(const CoarrayStructure& c, const SourceScene& scene) {
    if (!c.hole_free) throw NotHoleFree("true_coarray_covariance");
    const CVector t = true_lag_vector(c.m_ca, scene);
    const Eigen::Index n = c.m_ca + 1;
    CMatrix out(n, n);
    for (Eigen::Index col = 0; col < n; ++col) {
        for (Eigen::Index row = 0; row < n; ++row) out(row, col) = t(row - col + c.m_ca);
    }
    return out;
}

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> indices) {
    // splitmix64 finalizer applied after folding in each index
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    std::uint64_t h = mix(base);
    for (auto idx : indices) h = mix(h ^ mix(idx + 0x632be59bd9b4e019ULL));
    return h;
}

CMatrix covariance_factor(const CMatrix& r) {
    Eigen::LLT<CMatrix> llt(r);
    if (llt.info() == Eigen::Success) {
        CMatrix l = llt.matrixL();
        if (l.allFinite()) return l;
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(r);
    RVector lam = es.eigenvalues();
    const double cut = 1e-12 * std::max(lam.cwiseAbs().maxCoeff(), 1e-300);
    for (Eigen::Index i = 0; i < lam.size(); ++i) lam(i) = lam(i) > cut ? std::sqrt(lam(i)) : 0.0;
    return es.eigenvectors() * lam.asDiagonal();
}

SnapshotMatrix sample_snapshots(const SensorArray& array, const SourceScene& scene,
                                int num_snapshots, std::uint64_t seed) {
    if (num_snapshots < 1) throw std::invalid_argument("need at least one snapshot");
    const CMatrix factor = covariance_factor(true_covariance(array, scene));
    const Eigen::Index p = factor.rows();

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    CMatrix z(p, num_snapshots);
    for (Eigen::Index t = 0; t < num_snapshots; ++t) {
        for (Eigen::Index i = 0; i < p; ++i) {
            const double re = normal(rng);
            const double im = normal(rng);
            z(i, t) = Complex(re, im);
        }
    }
    return SnapshotMatrix{factor * z, seed};
}

}  // namespace coarray
