#include "orbergman/riemannroch.hpp"

#include "support.hpp"

#include <doctest.h>

using namespace orbergman;

namespace {

// h^0 by listing the admissible exponents b in [0, k].
long enumerate_h0(long m, long t, long k) {
  long count = 0;
  for (long b = 0; b <= k; ++b)
    if ((t * k + b) % m == 0) ++count;
  return count;
}

}  // namespace

TEST_CASE("weighted Hilbert function examples") {
  const Model fb3 = FootballModel::make(3, 1);
  const auto c = CoefficientSequence::from_dense({1, 2, 3, 2, 1});
  const long expected_h0[] = {3, 2, 3, 4, 3, 4};
  for (long k = 6; k <= 11; ++k) CHECK(h0(fb3, k) == expected_h0[k - 6]);
  CHECK(weighted_hilbert(fb3, c, 6) == 27);
  CHECK(weighted_hilbert(fb3, c, 7) == 30);
  const Model fb1 = FootballModel::make(1, 0);
  for (long k = 0; k <= 30; ++k) CHECK(weighted_hilbert(fb1, CoefficientSequence::from_integers({{0, 1}}), k) == k + 1);
  CHECK_THROWS_AS(weighted_hilbert(FlatCyclicModel::make(1, 3, {1}), c, 4), std::domain_error);
}

TEST_CASE("h0 agrees with enumeration") {
  for (auto [m, t] : {std::pair{3L, 1L}, {5L, 1L}, {5L, 2L}, {7L, 3L}, {9L, 4L}})
    for (long k = 0; k <= 200; ++k) CHECK(h0(FootballModel::make(m, t), k) == enumerate_h0(m, t, k));
}

TEST_CASE("predicted a0 a1") {
  auto a = predicted_a0_a1(FootballModel::make(3, 1), CoefficientSequence::from_dense({1, 2, 3, 2, 1}));
  CHECK(a.a0 == 3);
  CHECK(a.a1 == 9);
  a = predicted_a0_a1(FootballModel::make(1, 0), CoefficientSequence::from_integers({{0, 1}}));
  CHECK(a.a0 == 1);
  CHECK(a.a1 == 1);
  a = predicted_a0_a1(FootballModel::make(5, 1), canonical_sequence(5, 2));
  CHECK(a.a0 == 5);
  CHECK(a.a1 == 25);
  CHECK_THROWS_AS(predicted_a0_a1(FlatCyclicModel::make(1, 2, {1}), canonical_sequence(2, 1)), std::domain_error);
}

TEST_CASE("conforming weights give exact equality") {
  for (long m : {1L, 3L, 5L, 7L}) {
    const auto report = rr_check(FootballModel::make(m, FootballModel::default_twist(m)), canonical_sequence(m, 2), 1, 100);
    CHECK(report.conforming);
    CHECK(report.all_zero_from(m));
    REQUIRE(report.k0.has_value());
    CHECK(*report.k0 <= m);
  }
}

TEST_CASE("a0 a1 match the linear part of the exact Hilbert function") {
  std::mt19937_64 rng(13);
  for (auto [m, t] : {std::pair{3L, 1L}, {5L, 1L}, {5L, 3L}, {7L, 2L}}) {
    const Model model = FootballModel::make(m, t);
    for (int trial = 0; trial < 10; ++trial) {
      const auto c = testsupport::random_multiple(rng, m, 2);
      REQUIRE(satisfies_condition(c, m, 1).satisfied);
      // slope and intercept from two large k
      const long k1 = 500, k2 = 777;
      const Rational w1 = weighted_hilbert(model, c, k1), w2 = weighted_hilbert(model, c, k2);
      const Rational slope = (w2 - w1) / (k2 - k1);
      const Rational intercept = w1 - slope * k1;
      const auto a = predicted_a0_a1(model, c);
      CHECK(slope == a.a0);
      CHECK(intercept == a.a1);
      CHECK(rr_check(model, c, m, 100).all_zero_from(m));
    }
  }
}

TEST_CASE("violating weights leave periodic differences") {
  const Model fb3 = FootballModel::make(3, 1);
  const auto report = rr_check(fb3, CoefficientSequence::from_integers({{0, 1}}), 1, 60);
  CHECK_FALSE(report.conforming);
  bool nonzero = false;
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    if (report.rows[i].difference != 0) nonzero = true;
    if (i + 3 < report.rows.size()) CHECK(report.rows[i].difference == report.rows[i + 3].difference);
  }
  CHECK(nonzero);

  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 30; ++trial) {
    const auto c = testsupport::random_sequence(rng, 5);
    if (satisfies_condition(c, 5, 1).satisfied) continue;
    const auto r = rr_check(FootballModel::make(5, 1), c, 5, 60);
    // the first failing moment is p = 0 or p = 1; either way the differences
    // are 5-periodic and not identically zero
    bool any = false;
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
      any = any || r.rows[i].difference != 0;
      if (i + 5 < r.rows.size() && satisfies_condition(c, 5, 0).satisfied)
        CHECK(r.rows[i].difference == r.rows[i + 5].difference);
    }
    CHECK(any);
  }
}
