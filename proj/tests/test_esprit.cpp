#include <doctest.h>

#include <random>

#include "coarray/esprit.hpp"
#include "coarray/estimation.hpp"
#include "coarray/metrics.hpp"
#include "oracles.hpp"

using namespace coarray;

TEST_CASE("signal subspace of a rank-one coarray covariance") {
    const auto c = coarray_structure(nested(2, 2));
    const CMatrix t = true_coarray_covariance(c, SourceScene({0.0}, {1.0}, 0.0));
    const auto u = signal_subspace(t, 1);
    CHECK((u.basis - CVector::Constant(6, 1.0 / std::sqrt(6.0))).norm() < 1e-12);
    CHECK(u.eigenvalues(0) == doctest::Approx(6.0));
    CHECK(std::abs(u.next_eigenvalue) < 1e-12);
}

TEST_CASE("eigen gap on exact coarray covariance") {
    const auto a = nested(3, 3);
    const auto c = coarray_structure(a);
    const SourceScene scene({0.1, 0.3, 0.8}, {1.0, 0.5, 2.0}, 0.2);
    const auto u = signal_subspace(true_coarray_covariance(c, scene), 3);
    std::vector<int> pos(static_cast<std::size_t>(c.m_ca + 1));
    for (int i = 0; i <= c.m_ca; ++i) pos[static_cast<std::size_t>(i)] = i;
    const auto sv = oracle::singular_values(steering_matrix(pos, scene.omegas()));
    CHECK(u.eigenvalues(2) >= 0.5 * sv.back() * sv.back() + 0.2 - 1e-10);
    CHECK(u.next_eigenvalue == doctest::Approx(0.2).epsilon(1e-10));
    CHECK_FALSE(u.degenerate_gap);
}

TEST_CASE("signal subspace agrees with zheev") {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> n;
    for (int trial = 0; trial < 30; ++trial) {
        CMatrix g(12, 12);
        for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = Complex(n(rng), n(rng));
        const CMatrix h = g + g.adjoint();
        const int s = 1 + trial % 5;
        const auto u = signal_subspace(h, s);
        const CMatrix v = oracle::top_eigenvectors(h, s);
        // principal angles through the singular values of U^H V
        const auto cosines = oracle::singular_values(u.basis.adjoint() * v);
        for (double cs : cosines) CHECK(cs == doctest::Approx(1.0).epsilon(1e-9));
        CHECK((u.basis.adjoint() * u.basis - CMatrix::Identity(s, s)).norm() < 1e-12);
    }
    CHECK_THROWS_AS(signal_subspace(CMatrix::Identity(3, 3), 4), EstimationError);
    CHECK_THROWS_AS(signal_subspace(CMatrix::Identity(3, 3), 0), EstimationError);
}

TEST_CASE("degenerate gap is flagged") {
    const auto u = signal_subspace(CMatrix::Identity(4, 4), 2);
    CHECK(u.degenerate_gap);
}

TEST_CASE("exact covariance recovery") {
    const auto a = nested(3, 3);
    const auto c = coarray_structure(a);
    const SourceScene scene({0.1, 0.3}, {1, 1}, 0.1);
    const auto est = coarray_esprit_from_covariance(true_covariance(a, scene), a, c, 2);
    REQUIRE(est.omegas_hat.size() == 2);
    CHECK(est.omegas_hat[0] == doctest::Approx(0.1).epsilon(1e-8));
    CHECK(est.omegas_hat[1] == doctest::Approx(0.3).epsilon(1e-8));

    const auto q = esprit_on_covariance(true_coarray_covariance(c, SourceScene({0.25}, {1}, 0)), 1);
    CHECK(std::abs(q.psi_eigenvalues[0] - Complex(0, 1)) < 1e-12);
    CHECK(q.omegas_hat[0] == doctest::Approx(0.25));
}

TEST_CASE("Psi eigenvalues match a normal-equation oracle") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        const auto a = trial % 2 ? ula(12) : nested(6, 6);
        const auto c = coarray_structure(a);
        const int s = 1 + trial % 4;
        const SourceScene scene(oracle::separated_frequencies(rng, s, 0.05), std::vector<double>(static_cast<std::size_t>(s), 1.0), 0.5);
        const auto r = sample_covariance(sample_snapshots(a, scene, 200, static_cast<std::uint64_t>(trial)));
        const auto t = redundancy_average(r, c, a);
        const auto est = esprit_on_covariance(t.matrix, s);
        const auto ref = oracle::esprit_frequencies(oracle::top_eigenvectors(t.matrix, s));
        CHECK(oracle::matching(ref, est.omegas_hat) < 1e-9);
    }
}

TEST_CASE("basis change leaves rotation eigenvalues unchanged") {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> n;
    const auto c = coarray_structure(nested(4, 4));
    const SourceScene scene({0.05, 0.33, 0.6}, {1, 2, 1}, 0.3);
    const auto u = signal_subspace(true_coarray_covariance(c, scene), 3);
    auto base = rotation_eigenvalues(u.basis);
    for (int trial = 0; trial < 20; ++trial) {
        CMatrix w(3, 3);
        for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = Complex(n(rng), n(rng));
        auto ev = rotation_eigenvalues(u.basis * w);
        for (const auto& z : base) {
            double best = 1e9;
            for (const auto& e : ev) best = std::min(best, std::abs(e - z));
            CHECK(best < 1e-9);
        }
    }
}

TEST_CASE("rank-deficient U0 fails at the rotation stage") {
    CMatrix basis = CMatrix::Zero(4, 2);
    basis(0, 0) = 1;
    basis(3, 1) = 1;  // U0 has a zero column
    try {
        esprit_rotation(basis);
        FAIL("expected rotation failure");
    } catch (const EstimationError& e) {
        CHECK(e.stage() == FailureStage::rotation);
    }
}

TEST_CASE("input checks") {
    const auto holey = SensorArray({0, 3, 4});
    const auto hc = coarray_structure(holey);
    CHECK_FALSE(hc.hole_free);
    try {
        coarray_esprit_from_covariance(CMatrix::Identity(3, 3), holey, hc, 1);
        FAIL("expected input failure");
    } catch (const EstimationError& e) {
        CHECK(e.stage() == FailureStage::input);
    }
    const auto a = nested(2, 2);
    CHECK_THROWS_AS(coarray_esprit_from_covariance(CMatrix::Identity(4, 4), a, coarray_structure(a), 6), EstimationError);
    CHECK_THROWS_AS(direct_esprit_from_covariance(CMatrix::Identity(4, 4), a, 1), EstimationError);
    CHECK_THROWS_AS(direct_esprit_from_covariance(CMatrix::Identity(4, 4), ula(4), 4), EstimationError);
}

TEST_CASE("sampled coarray ESPRIT at high SNR") {
    const auto a = nested(10, 10);
    const auto c = coarray_structure(a);
    const SourceScene scene = SourceScene::with_snr_db({0.1, 0.4}, {1, 1}, 10.0);
    int good = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto est = coarray_esprit(sample_snapshots(a, scene, 10000, seed), a, c, 2);
        if (matching_distance(scene.omegas(), est.omegas_hat) < 0.005) ++good;
    }
    CHECK(good >= 95);
}

TEST_CASE("noiseless single source from few snapshots") {
    const auto a = nested(3, 3);
    const auto c = coarray_structure(a);
    const SourceScene scene({0.37}, {1}, 0.0);
    const auto y = sample_snapshots(a, scene, 3, 4);
    const auto est = coarray_esprit(y, a, c, 1);
    CHECK(torus_distance(est.omegas_hat[0], 0.37) < 1e-6);
    const auto again = coarray_esprit(sample_snapshots(a, scene, 3, 4), a, c, 1);
    CHECK(est.omegas_hat == again.omegas_hat);
}

TEST_CASE("direct ESPRIT on exact covariance") {
    const auto a = ula(20);
    const SourceScene scene({0.2, 0.3}, {1, 1}, 0.1);
    const auto est = direct_esprit_from_covariance(true_covariance(a, scene), a, 2);
    CHECK(matching_distance(scene.omegas(), est.omegas_hat) < 1e-8);
}
