#include <doctest.h>

#include <cmath>
#include <random>

#include "coarray/geometry.hpp"
#include "oracles.hpp"

using namespace coarray;

namespace {

std::vector<int> positions_of(const SensorArray& a) {
    return {a.positions().begin(), a.positions().end()};
}

}  // namespace

TEST_CASE("nested array positions") {
    CHECK(positions_of(nested(2, 2)) == std::vector<int>{1, 2, 3, 6});
    CHECK(positions_of(nested(1, 1)) == std::vector<int>{1, 2});
    for (int p = 2; p <= 12; ++p) {
        CHECK(nested(p - 1, 1) == ula(p));
        CHECK(ula(p).is_ula());
    }
    CHECK(positions_of(balanced_nested(5)) == positions_of(nested(3, 2)));
    CHECK(positions_of(nested(3, 3)) == std::vector<int>{1, 2, 3, 4, 8, 12});
    CHECK_FALSE(nested(2, 2).is_ula());
    CHECK_THROWS_AS(nested(1, 2), std::invalid_argument);
    CHECK_THROWS_AS(nested(0, 0), std::invalid_argument);
}

TEST_CASE("array validation") {
    CHECK_THROWS_AS(SensorArray({1}), std::invalid_argument);
    CHECK_THROWS_AS(SensorArray({2, 1}), std::invalid_argument);
    CHECK_THROWS_AS(SensorArray({-1, 0}), std::invalid_argument);
    CHECK_THROWS_AS(custom_array({3, 1, 3}), std::invalid_argument);
    CHECK(positions_of(custom_array({5, 0, 2})) == std::vector<int>{0, 2, 5});
}

TEST_CASE("array spec parsing") {
    CHECK(parse_array_spec("nested:2,2") == nested(2, 2));
    CHECK(parse_array_spec("ula:7") == ula(7));
    CHECK(parse_array_spec("custom:[0, 1, 4,6]") == custom_array({0, 1, 4, 6}));
    CHECK_THROWS_AS(parse_array_spec("nested:2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_array_spec("ula:x"), std::invalid_argument);
    CHECK_THROWS_AS(parse_array_spec("coprime:3,4"), std::invalid_argument);
}

TEST_CASE("coarray of nested(2,2)") {
    const auto c = coarray_structure(nested(2, 2));
    CHECK(c.difference_set == std::vector<int>{-5, -4, -3, -2, -1, 0, 1, 2, 3, 4, 5});
    CHECK(c.m_ca == 5);
    CHECK(c.hole_free);
    CHECK(c.weight(0) == 4);
    CHECK(c.weight(1) == 2);
    CHECK(c.weight(-1) == 2);
    for (int k = 2; k <= 5; ++k) CHECK(c.weight(k) == 1);
    CHECK(redundancy_coefficient(c) == doctest::Approx(4.75).epsilon(1e-15));
}

TEST_CASE("coarray of small ULA and holey array") {
    const auto c = coarray_structure(ula(3));
    CHECK(c.weight(0) == 3);
    CHECK(c.weight(1) == 2);
    CHECK(c.weight(2) == 1);
    CHECK(c.m_ca == 2);
    const double red = redundancy_coefficient(c);
    CHECK(red == doctest::Approx(11.0 / 6.0).epsilon(1e-15));
    CHECK(std::log(3.0) <= red);
    CHECK(red <= 2 * std::log(3.0));

    const auto h = coarray_structure(SensorArray({0, 2}));
    CHECK(h.difference_set == std::vector<int>{-2, 0, 2});
    CHECK(h.m_ca == 0);
    CHECK_FALSE(h.hole_free);
    CHECK_THROWS_AS(redundancy_coefficient(h), NotHoleFree);
    CHECK_THROWS_AS(averaging_matrix(h, SensorArray({0, 2})), NotHoleFree);
}

TEST_CASE("coarray matches brute force on random arrays") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> pos(0, 30);
    for (int trial = 0; trial < 200; ++trial) {
        std::set<int> s;
        const int n = std::uniform_int_distribution<int>(2, 8)(rng);
        while (static_cast<int>(s.size()) < n) s.insert(pos(rng));
        const std::vector<int> d(s.begin(), s.end());
        const auto c = coarray_structure(SensorArray(d));
        CHECK(c.difference_set == oracle::difference_set(d));
        const auto w = oracle::weights(d);
        for (const auto& [lag, count] : w) CHECK(c.weight(lag) == count);
        CHECK(c.m_ca == oracle::contiguous_extent(d));
        CHECK(c.hole_free == (c.m_ca == c.max_lag));
        // weights sum to P^2
        int total = 0;
        for (int v : c.weights_by_lag) total += v;
        CHECK(total == n * n);
        for (int i = 0; i <= c.m_ca; ++i) {
            const auto& pairs = c.pairs_by_lag[static_cast<std::size_t>(i)];
            CHECK(static_cast<int>(pairs.size()) == c.weight(i));
            for (const auto& pr : pairs) CHECK(d[static_cast<std::size_t>(pr.m)] - d[static_cast<std::size_t>(pr.n)] == i);
        }
    }
}

TEST_CASE("redundancy bounds on ULA and nested arrays") {
    // the ULA upper bound needs P >= 3: P = 2 gives 1.5 > 2 ln 2
    CHECK(redundancy_coefficient(coarray_structure(ula(2))) > 2 * std::log(2.0));
    for (int p = 3; p <= 40; ++p) {
        const double u = redundancy_coefficient(coarray_structure(ula(p)));
        CHECK(std::log(static_cast<double>(p)) <= u);
        CHECK(u <= 2 * std::log(static_cast<double>(p)));
        const double n = redundancy_coefficient(coarray_structure(balanced_nested(p)));
        CHECK(p * p / 16.0 <= n);
        CHECK(n <= p * p);
    }
}

TEST_CASE("averaging matrix rows") {
    const auto a = ula(3);
    const auto c = coarray_structure(a);
    const RMatrix f = averaging_matrix(c, a);
    CHECK(f.rows() == 5);
    CHECK(f.cols() == 9);
    // lag 1 comes from (m,n) = (1,0) and (2,1), columns m + 3n
    CHECK(f(3, 1) == 0.5);
    CHECK(f(3, 5) == 0.5);
    CHECK((f.row(3).array() != 0).count() == 2);
    CHECK((f.row(2).array() != 0).count() == 3);
    CHECK(f(2, 0) == doctest::Approx(1.0 / 3));
    for (Eigen::Index r = 0; r < f.rows(); ++r) CHECK(f.row(r).sum() == doctest::Approx(1.0));
}
