#include "orbergman/localkernel.hpp"

#include "orbergman/bergman.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace orbergman;

namespace {

using cd = std::complex<double>;

cd unit_root(long j, long m) { return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(m)); }

ComplexVector random_point(std::mt19937_64& rng, long n, double radius) {
  std::uniform_real_distribution<double> u(-radius, radius);
  ComplexVector out;
  for (long j = 0; j < n; ++j) out.emplace_back(u(rng), u(rng));
  return out;
}

// For u = y^alpha of weight k only the alpha-th Taylor term of the kernel
// survives the angular integral, so
//   u(x) - (chi u, K_x) = x^alpha 2 k^{alpha+1} / alpha! int (1 - chi) r^{2 alpha + 1} e^{-k r^2} dr.
double cutoff_residual(long k, long alpha, double x, double R) {
  auto f = [&](double r) { return (1.0 - cutoff(r, R)) * std::pow(r, 2.0 * alpha + 1.0) * std::exp(-k * r * r); };
  const double inner = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, R / 2, R, 15, 1e-14);
  // int_R^inf r^{2a+1} e^{-k r^2} dr = Gamma(a + 1, k R^2) / (2 k^{a+1})
  const double outer = boost::math::tgamma(static_cast<double>(alpha + 1), k * R * R) / (2.0 * std::pow(k, alpha + 1.0));
  return std::pow(x, alpha) * 2.0 * std::pow(k, alpha + 1.0) / std::tgamma(alpha + 1.0) * (inner + outer);
}

double rel(cd a, cd b) { return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b))); }

}  // namespace

TEST_CASE("phase is sesquilinear") {
  const ComplexVector x{{1.0, 2.0}, {0.5, -1.0}};
  const ComplexVector y{{-0.3, 0.1}, {2.0, 0.7}};
  CHECK(flat_phase(x, x).real() == doctest::Approx(std::norm(x[0]) + std::norm(x[1])));
  CHECK(flat_phase(x, x).imag() == doctest::Approx(0.0));
  CHECK(std::abs(flat_phase(x, y) - std::conj(flat_phase(y, x))) < 1e-15);
}

TEST_CASE("averaged kernel at the origin") {
  for (long m = 1; m <= 6; ++m) {
    const auto model = FlatCyclicModel::make(2, m, {1, 1});
    const ComplexVector zero{0.0, 0.0};
    for (long k = 1; k <= 12; ++k) {
      const double expected = k % m == 0 ? static_cast<double>(m * k * k) : 0.0;
      CHECK(std::abs(averaged_kernel(model, k, zero, zero) - expected) < 1e-9);
      CHECK(std::abs(averaged_kernel_collapsed(model, k, zero, zero) - expected) < 1e-9);
    }
  }
}

TEST_CASE("trivial group gives the Fock kernel") {
  const auto model = FlatCyclicModel::make(1, 1, {0});
  const ComplexVector y{{0.4, -0.2}}, x{{0.1, 0.6}};
  for (long k : {1L, 5L, 20L}) {
    const cd expected = static_cast<double>(k) * std::exp(static_cast<double>(k) * y[0] * std::conj(x[0]));
    CHECK(rel(averaged_kernel(model, k, y, x), expected) < 1e-13);
  }
}

TEST_CASE("double and single sums agree") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const long m = std::uniform_int_distribution<long>(1, 6)(rng);
    const long n = std::uniform_int_distribution<long>(1, 2)(rng);
    std::vector<long> w{1};
    if (n == 2) w.push_back(std::uniform_int_distribution<long>(0, m - 1)(rng));
    const auto model = FlatCyclicModel::make(n, m, w);
    const long k = std::uniform_int_distribution<long>(1, 30)(rng);
    const auto x = random_point(rng, n, 0.8), y = random_point(rng, n, 0.8);
    const cd a = averaged_kernel(model, k, y, x), b = averaged_kernel_collapsed(model, k, y, x);
    // scale of the individual terms k^n e^{k Re psi}
    double norm_x = 0, norm_y = 0;
    for (long j = 0; j < n; ++j) {
      norm_x += std::norm(x[static_cast<std::size_t>(j)]);
      norm_y += std::norm(y[static_cast<std::size_t>(j)]);
    }
    const double scale = std::pow(k, n) * static_cast<double>(m) * std::exp(k * std::sqrt(norm_x * norm_y));
    CHECK(std::abs(a - b) <= 1e-12 * scale);
  }
}

TEST_CASE("weight equivariance and hermitian symmetry") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const long m = std::uniform_int_distribution<long>(2, 6)(rng);
    const auto model = FlatCyclicModel::make(2, m, {1, std::uniform_int_distribution<long>(0, m - 1)(rng)});
    const long k = std::uniform_int_distribution<long>(1, 20)(rng);
    const auto x = random_point(rng, 2, 0.4), y = random_point(rng, 2, 0.4);
    const cd base = averaged_kernel_collapsed(model, k, y, x);
    const cd lam_k = unit_root(k, m);
    CHECK(rel(averaged_kernel_collapsed(model, k, act(model, 1, y), x), lam_k * base) < 1e-12);
    CHECK(rel(averaged_kernel_collapsed(model, k, y, act(model, 1, x)), std::conj(lam_k) * base) < 1e-12);
    CHECK(rel(averaged_kernel(model, k, x, y), std::conj(averaged_kernel(model, k, y, x))) < 1e-12);
  }
}

TEST_CASE("averaged kernel on the diagonal is the global kernel") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 80; ++trial) {
    const long m = std::uniform_int_distribution<long>(1, 6)(rng);
    const auto model = FlatCyclicModel::make(1, m, {1});
    const long k = std::uniform_int_distribution<long>(1, 40)(rng);
    const double r = std::uniform_real_distribution<double>(0.05, 1.5)(rng);
    const ComplexVector x{std::polar(r, 0.7)};
    const double local = (averaged_kernel(model, k, x, x) * std::exp(-k * r * r)).real();
    const auto global = bergman_value_series(model, k, FlatPoint{{r}});
    CHECK(local == doctest::Approx(global.value).epsilon(1e-10).scale(1e-300));
  }
}

TEST_CASE("cutoff profile") {
  const double R = 3.0;
  CHECK(cutoff(0.0, R) == 1.0);
  CHECK(cutoff(1.5, R) == 1.0);
  CHECK(cutoff(3.0, R) == 0.0);
  CHECK(cutoff(2.25, R) == doctest::Approx(0.5));
  // C^1 and C^2 across both joins: one-sided difference quotients agree
  const double h = 1e-4;
  for (double a : {1.5, 3.0}) {
    const double left1 = (cutoff(a, R) - cutoff(a - h, R)) / h, right1 = (cutoff(a + h, R) - cutoff(a, R)) / h;
    CHECK(left1 == doctest::Approx(right1).epsilon(1e-3).scale(1e-2));
    const double left2 = (cutoff(a, R) - 2 * cutoff(a - h, R) + cutoff(a - 2 * h, R)) / (h * h);
    const double right2 = (cutoff(a + 2 * h, R) - 2 * cutoff(a + h, R) + cutoff(a, R)) / (h * h);
    CHECK(std::abs(left2 - right2) < 1e-2);
  }
}

TEST_CASE("reproducing pairing") {
  const auto model = FlatCyclicModel::make(1, 2, {1});
  // both sides vanish at the origin
  const auto at_origin = verify_reproducing(model, 5, 1, 0.0, 3.0);
  CHECK(at_origin.residual < 1e-30);
  // weight mismatch: y^2 has weight 0, K has weight 1 = 5 mod 2
  const auto mismatch = reproducing_pairing(model, 5, 2, {0.4, 0.2}, 3.0);
  CHECK(std::abs(mismatch.pairing) < 1e-30);
  // a weight-k monomial is reproduced up to the cutoff's share of the pairing
  const auto r5 = verify_reproducing(model, 5, 1, {0.3, 0.0}, 3.0);
  const auto r9 = verify_reproducing(model, 9, 3, {0.3, 0.0}, 3.0);
  CHECK(std::abs(r5.pairing - cd(0.3, 0.0)) < 1e-3);
  CHECK(r5.residual == doctest::Approx(cutoff_residual(5, 1, 0.3, 3.0)).epsilon(1e-6));
  CHECK(r9.residual == doctest::Approx(cutoff_residual(9, 3, 0.3, 3.0)).epsilon(1e-6));
  CHECK(r9.residual < r5.residual);
  CHECK_THROWS_AS(verify_reproducing(model, 4, 1, 0.3, 3.0), std::invalid_argument);
  CHECK_THROWS_AS(verify_reproducing(FlatCyclicModel::make(2, 2, {1, 1}), 5, 1, 0.3, 3.0), std::invalid_argument);
  CHECK_THROWS_AS(verify_reproducing(model, 5, 1, 0.3, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(verify_reproducing(model, 5, 1, 1.5, 3.0), std::invalid_argument);
}

TEST_CASE("decay quantity") {
  const auto m2 = FlatCyclicModel::make(1, 2, {1});
  const std::vector<FlatPoint> origin{FlatPoint{{0.0}}};
  const auto zero = decay_check(m2, 1, 0, 1, origin, 10, 50);
  CHECK(zero.sup == 0.0);

  const std::vector<FlatPoint> unit{FlatPoint{{1.0}}};
  const auto report = decay_check(m2, 1, 0, 1, unit, 10, 60);
  CHECK(std::abs(decay_eta(m2, 0, 1, unit[0]) - std::exp(-2.0)) < 1e-15);
  for (const auto& row : report.rows) {
    const double expected = row.k * (1 - std::exp(-2.0)) * std::exp(-2.0 * row.k);
    CHECK(row.sup_value == doctest::Approx(expected).epsilon(1e-12).scale(1e-300));
  }
  CHECK(report.rows.back().sup_value < 1e-40);
  CHECK_THROWS_AS(decay_check(m2, 1, 1, 3, unit, 10, 20), std::invalid_argument);
  CHECK_THROWS_AS(decay_check(m2, 0, 0, 1, unit, 10, 20), std::invalid_argument);
}

TEST_CASE("decay quantity stays under the uniform bound") {
  std::vector<FlatPoint> grid;
  for (int g = 0; g <= 400; ++g) grid.push_back({{2.0 * g / 400.0}});
  for (long m = 2; m <= 6; ++m) {
    const auto model = FlatCyclicModel::make(1, m, {1});
    for (unsigned s = 1; s <= 3; ++s) {
      for (long v = 1; v < m; ++v) {
        const auto report = decay_check(model, s, 0, v, grid, 10, 200);
        CHECK(report.sup <= decay_uniform_bound(model, s, 0, v));
        CHECK(report.sup > 0.0);
      }
    }
  }
}
