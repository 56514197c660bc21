#pragma once

// Exactly solvable model geometries with cyclic stabilisers.
//
// Flat model: C^n with the generator of Z/m acting by z_j -> lambda^{a_j} z_j,
// lambda = exp(2 pi i / m), potential |z|^2 and omega = (i/2pi) ddbar |z|^2.
// Sections of L^k downstairs are functions of weight k mod m.
//
// Football: P^1 / (Z/m) for [z0:z1] -> [z0 : lambda z1], Fubini-Study metric
// (potential log(1+|u|^2) in the chart u = z1/z0). O(1) is linearised by
// letting the generator act on H^0(O(1)) as z0 -> lambda^t z0,
// z1 -> lambda^{t+1} z1. The fibre weights at the fixed points [1:0] and [0:1]
// are then t and t+1, and both must be units mod m for local ampleness, which
// forces m odd. The monomial z0^{k-b} z1^b has weight t k + b, so it descends
// to a section of L^k iff b = -t k (mod m); r(k) := (-t k) mod m.

#include "orbergman/rational.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace orbergman {

class FlatCyclicModel {
 public:
  /// Requires n >= 1, m >= 1, weights.size() == n and gcd(a_1..a_n, m) = 1.
  static FlatCyclicModel make(long n, long m, std::vector<long> weights);

  long n() const { return n_; }
  long m() const { return m_; }
  const std::vector<long>& weights() const { return weights_; }

  /// sum_j a_j alpha_j mod m.
  long weight_of(const std::vector<long>& exponent) const;

  friend bool operator==(const FlatCyclicModel&, const FlatCyclicModel&) = default;

 private:
  FlatCyclicModel(long n, long m, std::vector<long> weights) : n_(n), m_(m), weights_(std::move(weights)) {}
  long n_;
  long m_;
  std::vector<long> weights_;
};

class FootballModel {
 public:
  /// Requires m >= 1 odd and gcd(t, m) = gcd(t + 1, m) = 1.
  static FootballModel make(long m, long t);
  /// Smallest admissible twist for odd m (t = 1, or 0 when m = 1).
  static long default_twist(long m);

  long m() const { return m_; }
  long t() const { return t_; }
  /// r(k) = (-t k) mod m: admissible exponents are b = r(k) (mod m).
  long residue(long k) const;

  friend bool operator==(const FootballModel&, const FootballModel&) = default;

 private:
  FootballModel(long m, long t) : m_(m), t_(t) {}
  long m_;
  long t_;
};

using Model = std::variant<FlatCyclicModel, FootballModel>;

long dimension(const Model& model);
long group_order(const Model& model);
bool is_compact(const Model& model);

/// Flat evaluation point, given by the moduli |z_1|, ..., |z_n|.
struct FlatPoint {
  std::vector<double> moduli;
  bool is_origin() const;
};

/// Football evaluation point rho = |u|^2 in [0, inf]. Rational rho is kept
/// exactly; rho = inf is the second fixed point.
class FootballPoint {
 public:
  static FootballPoint exact(Rational rho);
  static FootballPoint approx(double rho);
  static FootballPoint infinity();

  bool is_infinity() const { return infinite_; }
  const std::optional<Rational>& exact_rho() const { return exact_; }
  double rho() const { return value_; }

 private:
  FootballPoint() = default;
  bool infinite_ = false;
  std::optional<Rational> exact_;
  double value_ = 0.0;
};

using PointSpec = std::variant<FlatPoint, FootballPoint>;

std::string describe(const PointSpec& point);

struct SectionEntry {
  std::vector<long> exponent;  // football: {b}; flat: alpha
  Rational norm_sq;
};

struct SectionBasis {
  long k = 0;
  std::vector<SectionEntry> entries;
};

/// Monomial basis of H^0(L^k) with exact L^2 norms^2 (1/m volume factor
/// included). Flat bases are infinite, so `cap` bounds |alpha| and is required.
SectionBasis section_basis(const Model& model, long k, std::optional<long> cap = std::nullopt);

/// Exact L^2 norm^2 of one monomial section of L^k.
Rational monomial_norm_sq(const Model& model, long k, const std::vector<long>& exponent);

/// floor((k - r(k))/m) + 1 on the football; throws std::domain_error on the
/// flat model.
long h0(const Model& model, long k);

/// Scalar curvature in the convention where B_k = k^n + (Scal/2) k^{n-1} + ...
/// (0 flat, 2 on the round football at every point).
Rational scalar_curvature(const Model& model, const PointSpec& point);

struct GeometricDegrees {
  Rational deg_L;  // int_X c1(L)^n
  Rational deg_K;  // int_X c1(K_orb) c1(L)^{n-1}
};

GeometricDegrees geometric_degrees(const Model& model);

nlohmann::json to_json(const Model& model);
Model model_from_json(const nlohmann::json& doc);

/// "football:m=3,t=1" or "flat:n=2,m=3,weights=1;2" (weights default to 1).
Model parse_model_descriptor(std::string_view text);

}  // namespace orbergman
