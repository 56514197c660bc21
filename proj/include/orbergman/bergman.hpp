#pragma once

// Diagonal Bergman kernels B_k, weighted sums B_k^orb = sum_i c_i B_{k+i}, and
// gamma-weighted variants on the model geometries.

#include "orbergman/coeffs.hpp"
#include "orbergman/models.hpp"

#include <complex>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace orbergman {

/// A kernel value. `exact` is set when the value is an exact rational; then
/// err_bound is 0 and `value` is its double rounding.
struct KernelValue {
  long k = 0;
  PointSpec point;
  std::optional<Rational> exact;
  double value = 0.0;
  double err_bound = 0.0;

  bool is_exact() const { return exact.has_value(); }
};

/// Raised when the truncated flat series cannot reach the requested tolerance
/// within the permitted degree cap.
class ToleranceError : public std::runtime_error {
 public:
  ToleranceError(const std::string& what, double achieved_bound)
      : std::runtime_error(what), achieved_bound_(achieved_bound) {}
  double achieved_bound() const { return achieved_bound_; }

 private:
  double achieved_bound_;
};

struct SeriesOptions {
  /// Target: certified tail + rounding <= rel_tolerance * value.
  double rel_tolerance = 1e-12;
  /// Largest |alpha| the series may use; unbounded when empty.
  std::optional<long> max_cap;
};

/// Certified upper bound on sum_{|alpha| > cap} of the (unrestricted) flat
/// series m k^n e^{-k|x|^2} (k|x|^2)^d / d!, valid once cap + 2 > k|x|^2.
/// Returns +inf when the bound does not apply.
double flat_series_tail_bound(long m, long n, long k, double modulus_sq, long cap);

/// The flat series truncated at |alpha| <= cap (no tail). Partial sums are
/// nondecreasing in cap and converge to B_k.
double flat_series_partial_sum(const FlatCyclicModel& model, long k, const FlatPoint& point, long cap);

/// B_k at a point. Football values at rational rho (and rho = inf) are exact;
/// flat values use the closed averaged form, falling back to the series when
/// cancellation would spoil the 1e-10 relative error budget. The flat origin
/// is exact.
KernelValue bergman_value(const Model& model, long k, const PointSpec& point);

/// Flat B_k from the monomial series sum_alpha |x^alpha|^2 e^{-k|x|^2} / norm^2
/// with the degree cap chosen from the certified tail bound.
KernelValue bergman_value_series(const FlatCyclicModel& model, long k, const FlatPoint& point,
                                 const SeriesOptions& options = {});

/// k^n sum_s lambda^{-ks} exp(k(<zeta^s x, x> - |x|^2)), the diagonal of the
/// averaged flat kernel times e^{-k|x|^2}. Throws std::invalid_argument for
/// the football model.
KernelValue bergman_value_closed_flat(const Model& model, long k, std::span<const std::complex<double>> x);

/// sum_i c_i B_{k+i}(point); exact when every summand is.
KernelValue weighted_bergman(const Model& model, const CoefficientSequence& c, long k, const PointSpec& point);

struct GammaTerm {
  unsigned k_power = 0;
  unsigned i_power = 0;
  Rational coeff;
};

/// Homogeneous polynomial gamma(k, i) of fixed degree d.
class HomogeneousGamma {
 public:
  /// Throws std::invalid_argument unless every term has k_power + i_power == degree.
  static HomogeneousGamma make(unsigned degree, std::vector<GammaTerm> terms);
  /// coeffs[a] multiplies k^{d-a} i^a, with d = coeffs.size() - 1.
  static HomogeneousGamma from_dense(const std::vector<Rational>& coeffs);
  static HomogeneousGamma one() { return from_dense({Rational(1)}); }

  unsigned degree() const { return degree_; }
  const std::vector<GammaTerm>& terms() const { return terms_; }
  Rational operator()(long k, long i) const;
  /// Coefficient of k^d.
  Rational leading_A() const;
  /// Coefficient of k^{d-1} i (0 when d = 0).
  Rational leading_B() const;

 private:
  HomogeneousGamma(unsigned degree, std::vector<GammaTerm> terms) : degree_(degree), terms_(std::move(terms)) {}
  Rational coefficient(unsigned k_power, unsigned i_power) const;
  unsigned degree_;
  std::vector<GammaTerm> terms_;
};

/// sum_i c_i gamma(k, i) B_{k+i}(point).
KernelValue weighted_bergman_gamma(const Model& model, const CoefficientSequence& c, const HomogeneousGamma& gamma,
                                   long k, const PointSpec& point);

}  // namespace orbergman
