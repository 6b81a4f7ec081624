#include <doctest.h>

#include <omp.h>

#include <random>

#include "coarray/estimation.hpp"
#include "oracles.hpp"

using namespace coarray;

namespace {

CMatrix random_snapshots(std::mt19937_64& rng, int p, int l) {
    std::normal_distribution<double> n(0.0, 1.0);
    CMatrix y(p, l);
    for (Eigen::Index i = 0; i < y.size(); ++i) y.data()[i] = Complex(n(rng), n(rng));
    return y;
}

// Random Hermitian Toeplitz perturbation around `base`.
CoarrayCovariance perturbed(const CoarrayCovariance& base, std::mt19937_64& rng, double scale) {
    std::normal_distribution<double> n(0.0, scale);
    CVector t = base.t;
    const int m = base.m_ca;
    t(m) += n(rng);
    for (int i = 1; i <= m; ++i) {
        const Complex e(n(rng), n(rng));
        t(m + i) += e;
        t(m - i) += std::conj(e);
    }
    return make_coarray_covariance(t);
}

}  // namespace

TEST_CASE("sample covariance basics") {
    std::mt19937_64 rng(1);
    const CMatrix y1 = random_snapshots(rng, 5, 1);
    CHECK((sample_covariance(y1) - y1 * y1.adjoint()).norm() < 1e-13);

    const CMatrix y = random_snapshots(rng, 6, 40);
    const CMatrix r = sample_covariance(y);
    CHECK(r.trace().real() == doctest::Approx(y.squaredNorm() / 40.0));
    CHECK(std::abs(r.trace().imag()) < 1e-15);
    CHECK((r - r.adjoint()).norm() == 0.0);
    CHECK((r - sample_covariance_serial(y)).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("sample covariance is thread-count invariant") {
    std::mt19937_64 rng(2);
    const CMatrix y = random_snapshots(rng, 20, 300);
    omp_set_num_threads(1);
    const CMatrix r1 = sample_covariance(y);
    omp_set_num_threads(4);
    const CMatrix r4 = sample_covariance(y);
    omp_set_num_threads(omp_get_num_procs());
    CHECK(r1 == r4);
}

TEST_CASE("concentration of the sample covariance") {
    const auto a = nested(3, 3);
    const SourceScene scene({0.1, 0.35}, {1.0, 1.0}, 1.0);
    const CMatrix r = true_covariance(a, scene);
    std::vector<double> med;
    for (int l : {100, 400, 1600}) {
        std::vector<double> errs;
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            errs.push_back(oracle::spectral_norm_hermitian(sample_covariance(sample_snapshots(a, scene, l, seed)) - r));
        }
        std::nth_element(errs.begin(), errs.begin() + 25, errs.end());
        med.push_back(errs[25]);
    }
    for (int i = 0; i < 2; ++i) {
        const double ratio = med[static_cast<std::size_t>(i)] / med[static_cast<std::size_t>(i) + 1];
        CHECK(ratio >= 1.4);
        CHECK(ratio <= 2.6);
    }
}

TEST_CASE("redundancy averaging by hand on ULA(3)") {
    const auto a = ula(3);
    const auto c = coarray_structure(a);
    CMatrix r = CMatrix::Zero(3, 3);
    const Complex x(1.0, 2.0);
    const Complex y(-0.5, 0.25);
    r(1, 0) = x;
    r(2, 1) = y;
    r(0, 1) = std::conj(x);
    r(1, 2) = std::conj(y);
    r(0, 0) = 3;
    r(1, 1) = 6;
    r(2, 2) = 9;
    r(2, 0) = Complex(0.0, 1.0);
    r(0, 2) = Complex(0.0, -1.0);
    const auto t = redundancy_average(r, c, a);
    CHECK(std::abs(t.lag(1) - (x + y) / 2.0) < 1e-15);
    CHECK(std::abs(t.lag(-1) - std::conj((x + y) / 2.0)) < 1e-15);
    CHECK(std::abs(t.lag(0) - 6.0) < 1e-15);
    CHECK(std::abs(t.lag(2) - Complex(0.0, 1.0)) < 1e-15);
    CHECK(t.matrix(1, 0) == t.lag(1));
    CHECK(t.matrix(0, 1) == t.lag(-1));
}

TEST_CASE("averaging matches brute-force lag means and the dense path") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const auto d = oracle::random_hole_free(rng, 14);
        const SensorArray a(d);
        const auto c = coarray_structure(a);
        const CMatrix y = random_snapshots(rng, static_cast<int>(d.size()), 7);
        const CMatrix r = sample_covariance(y);
        const auto t = redundancy_average(r, c, a, EstimatedProvenance{7, 0});
        const auto expect = oracle::lag_means(r, d, c.m_ca);
        for (int i = -c.m_ca; i <= c.m_ca; ++i) {
            CHECK(std::abs(t.lag(i) - expect[static_cast<std::size_t>(i + c.m_ca)]) < 1e-13);
        }
        const CVector dense = redundancy_average_dense(r, c, a);
        CHECK((dense - t.t).cwiseAbs().maxCoeff() <= 1e-14);
        CHECK(std::holds_alternative<EstimatedProvenance>(t.provenance));
    }
}

TEST_CASE("averaging rejects bad input") {
    const auto a = SensorArray({0, 2});
    CHECK_THROWS_AS(redundancy_average(CMatrix::Identity(2, 2), coarray_structure(a), a), NotHoleFree);
    const auto u = ula(3);
    CHECK_THROWS_AS(redundancy_average(CMatrix::Identity(4, 4), coarray_structure(u), u),
                    std::invalid_argument);
}

TEST_CASE("covariance error") {
    const auto a = nested(3, 2);
    const auto c = coarray_structure(a);
    const SourceScene scene({0.2, 0.7}, {1, 2}, 0.3);
    const auto exact = exact_coarray_covariance(c, scene);
    CHECK(covariance_error(exact, exact) == 0.0);
    CVector shifted = exact.t;
    shifted(c.m_ca) += 0.3;
    CHECK(covariance_error(exact, make_coarray_covariance(shifted)) == doctest::Approx(0.3));

    std::mt19937_64 rng(9);
    const auto small = exact_coarray_covariance(coarray_structure(ula(6)), scene);
    for (int i = 0; i < 30; ++i) {
        const auto est = perturbed(small, rng, 0.5);
        const auto sv = oracle::singular_values(small.matrix - est.matrix);
        CHECK(covariance_error(small, est) == doctest::Approx(sv.front()).epsilon(1e-10));
    }
    CHECK_THROWS_AS(covariance_error(exact, small), std::invalid_argument);
}

TEST_CASE("lambda matrix") {
    const auto a = ula(3);
    const auto c = coarray_structure(a);
    const CMatrix l0 = lambda_matrix(0.0, c, a);
    CHECK(l0.imag().norm() == 0.0);
    CHECK(l0(0, 0).real() == doctest::Approx(1.0 / 3));
    CHECK(l0(1, 0).real() == doctest::Approx(0.5));
    CHECK(l0(2, 0).real() == doctest::Approx(1.0));

    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> th(-kPi, kPi);
    for (int trial = 0; trial < 20; ++trial) {
        const SensorArray arr(oracle::random_hole_free(rng, 20));
        const auto cs = coarray_structure(arr);
        const CMatrix l = lambda_matrix(th(rng), cs, arr);
        const double p = static_cast<double>(arr.size());
        for (Eigen::Index i = 0; i < l.rows(); ++i) CHECK(std::abs(l(i, i) - 1.0 / p) < 1e-15);
        CHECK(l.norm() <= 2 * redundancy_coefficient(cs) + 1e-12);
    }
}

TEST_CASE("spectral function identity and grid bound") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> th(-kPi, kPi);
    const auto a = nested(3, 3);
    const auto c = coarray_structure(a);
    const auto exact = exact_coarray_covariance(c, SourceScene({0.1, 0.4}, {1, 1}, 0.5));
    for (int i = 0; i < 3; ++i) CHECK(spectral_function_error(exact, exact, th(rng)) == Complex(0, 0));
    CHECK(grid_sup_bound(exact, exact) == 0.0);

    for (int trial = 0; trial < 50; ++trial) {
        const auto est = perturbed(exact, rng, 0.3);
        for (int k = 0; k < 20; ++k) {
            const double t = th(rng);
            CHECK(std::abs(spectral_function_error(exact, est, t) -
                           spectral_function_trace(exact, est, c, a, t)) < 1e-10);
        }
        const double bound = grid_sup_bound(exact, est);
        CHECK(covariance_error(exact, est) <= bound * (1 + 1e-12));
        const auto fine = sup_grid(c.m_ca, 100);
        CHECK(bound <= 2 * spectral_magnitudes(exact, est, fine).maxCoeff() * (1 + 1e-12));
        // sup over a fine grid never exceeds twice the coarse-grid max
        CHECK(spectral_magnitudes_serial(exact, est, fine).maxCoeff() <= bound * (1 + 1e-12));
    }
}

TEST_CASE("half-period grid misses a peak at pi") {
    // e_k = (-1)^k, a Fejer-like polynomial peaked at theta = pi. The coarse
    // grid restricted to [-pi/2, pi/2] does not bound it; the full-period one does.
    const int m = 6;
    CVector zero = CVector::Zero(2 * m + 1);
    CVector e(2 * m + 1);
    for (int k = -m; k <= m; ++k) e(k + m) = (k % 2 == 0) ? 1.0 : -1.0;
    const auto exact = make_coarray_covariance(zero);
    const auto est = make_coarray_covariance(-e);
    std::vector<double> half;
    for (int k = 1; k <= 4 * m; ++k) half.push_back((k - 2 * m) * kPi / (4 * m));
    const double peak = std::abs(spectral_function_error(exact, est, kPi));
    CHECK(peak == doctest::Approx(2 * m + 1));
    CHECK(2 * spectral_magnitudes(exact, est, half).maxCoeff() < peak);
    CHECK(grid_sup_bound(exact, est) >= peak);
}

TEST_CASE("spectral magnitudes parallel equals serial") {
    std::mt19937_64 rng(21);
    const auto exact = exact_coarray_covariance(coarray_structure(nested(5, 5)), SourceScene({0.3}, {1}, 1));
    const auto est = perturbed(exact, rng, 0.1);
    const auto grid = sup_grid(exact.m_ca, 4);
    CHECK(spectral_magnitudes(exact, est, grid) == spectral_magnitudes_serial(exact, est, grid));
}
