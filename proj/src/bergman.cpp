#include "orbergman/bergman.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace orbergman {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kFlatRelativeBudget = 1e-10;

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

Integer pow_int(const Integer& base, long e) {
  Integer out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(e));
  return out;
}

Integer pow_long(long base, long e) {
  Integer out;
  mpz_ui_pow_ui(out.get_mpz_t(), static_cast<unsigned long>(base), static_cast<unsigned long>(e));
  return out;
}

KernelValue exact_value(long k, const PointSpec& point, Rational v) {
  v.canonicalize();
  KernelValue out;
  out.k = k;
  out.point = point;
  out.value = to_double(v);
  out.exact = std::move(v);
  return out;
}

bool fixed_point_admissible(const FootballModel& model, long k) {
  // b = k is admissible iff k = r(k) mod m, i.e. (t+1)k = 0, i.e. m | k.
  return mod_floor(k - model.residue(k), model.m()) == 0;
}

KernelValue football_value(const FootballModel& model, long k, const FootballPoint& point) {
  const long m = model.m();
  const long r = model.residue(k);
  if (point.is_infinity())
    return exact_value(k, point, fixed_point_admissible(model, k) ? Rational(m * (k + 1)) : Rational(0));

  if (point.exact_rho()) {
    // m (k+1) / (p+q)^k * sum_{b = r (m)} C(k,b) p^b q^{k-b}, rho = p/q
    const Integer& p = point.exact_rho()->get_num();
    const Integer& q = point.exact_rho()->get_den();
    Integer sum = 0;
    for (long b = r; b <= k; b += m) sum += binomial(k, b) * pow_int(p, b) * pow_int(q, k - b);
    Integer den = pow_int(Integer(p + q), k);
    return exact_value(k, point, Rational(sum * m * (k + 1), den));
  }

  const double rho = point.rho();
  if (rho == 0.0) return exact_value(k, point, r == 0 ? Rational(m * (k + 1)) : Rational(0));

  // Log-space accumulation; rho > 1 is mirrored through b <-> k - b.
  const bool mirror = rho > 1.0;
  const double s = mirror ? 1.0 / rho : rho;
  const double log_s = std::log(s);
  const double log_scale = std::log(static_cast<double>(m)) + std::lgamma(static_cast<double>(k) + 2.0) -
                           static_cast<double>(k) * std::log1p(s);
  CompensatedSum sum;
  double rounding = 0.0;
  for (long b = r; b <= k; b += m) {
    const long e = mirror ? k - b : b;
    const double lg_b = std::lgamma(static_cast<double>(b) + 1.0);
    const double lg_kb = std::lgamma(static_cast<double>(k - b) + 1.0);
    const double power = static_cast<double>(e) * log_s;
    const double arg = log_scale - lg_b - lg_kb + power;
    const double term = std::exp(arg);
    sum.add(term);
    // the exponent is a difference of large logs, each good to a few ulps
    rounding += term * (4.0 * (std::abs(log_scale) + lg_b + lg_kb + std::abs(power)) + 8.0);
  }
  KernelValue out;
  out.k = k;
  out.point = point;
  out.value = sum.value();
  out.err_bound = kEps * (rounding + 2.0 * out.value);
  return out;
}

struct FlatClosed {
  double value;
  double err_bound;
};

FlatClosed flat_closed_form(const FlatCyclicModel& model, long k, const std::vector<double>& moduli_sq) {
  const long m = model.m();
  const double two_pi = 2.0 * std::numbers::pi;
  const double scale = std::pow(static_cast<double>(k), static_cast<double>(model.n()));
  CompensatedSum sum;
  double rounding = 0.0;
  for (long s = 0; s < m; ++s) {
    double re_arg = 0.0, im_arg = 0.0;
    for (std::size_t j = 0; j < moduli_sq.size(); ++j) {
      const double angle = two_pi * static_cast<double>(mod_floor(s * model.weights()[j], m)) / static_cast<double>(m);
      re_arg += (std::cos(angle) - 1.0) * moduli_sq[j];
      im_arg += std::sin(angle) * moduli_sq[j];
    }
    re_arg *= static_cast<double>(k);
    im_arg *= static_cast<double>(k);
    const double phase = im_arg - two_pi * static_cast<double>(mod_floor(k * s, m)) / static_cast<double>(m);
    const double magnitude = std::exp(re_arg);
    sum.add(magnitude * std::cos(phase));
    rounding += magnitude * (std::abs(re_arg) + std::abs(phase) + 8.0);
  }
  return {scale * sum.value(), scale * kEps * (rounding + 2.0 * static_cast<double>(m))};
}

// Same sum in 50 digits, for points where the m terms cancel down to a value
// far below their size (small k|x|^2 with large m).
FlatClosed flat_closed_form_wide(const FlatCyclicModel& model, long k, const std::vector<double>& moduli_sq) {
  using Wide = boost::multiprecision::cpp_bin_float_50;
  const long m = model.m();
  const Wide two_pi = 2 * boost::math::constants::pi<Wide>();
  Wide sum = 0, rounding = 0;
  for (long s = 0; s < m; ++s) {
    Wide re_arg = 0, im_arg = 0;
    for (std::size_t j = 0; j < moduli_sq.size(); ++j) {
      const Wide angle = two_pi * mod_floor(s * model.weights()[j], m) / m;
      re_arg += (cos(angle) - 1) * Wide(moduli_sq[j]);
      im_arg += sin(angle) * Wide(moduli_sq[j]);
    }
    re_arg *= k;
    im_arg *= k;
    const Wide phase = im_arg - two_pi * mod_floor(k * s, m) / m;
    const Wide magnitude = exp(re_arg);
    sum += magnitude * cos(phase);
    rounding += magnitude * (abs(re_arg) + abs(phase) + 8);
  }
  const double scale = std::pow(static_cast<double>(k), static_cast<double>(model.n()));
  const double eps = static_cast<double>(std::numeric_limits<Wide>::epsilon());
  return {scale * static_cast<double>(sum), scale * (eps * static_cast<double>(rounding + 2 * m) + kEps * static_cast<double>(abs(sum)))};
}

// Smallest subgroup of Z/m containing the weights of the nonzero coordinates:
// only monomials in those coordinates survive at the point.
long effective_gcd(const FlatCyclicModel& model, const std::vector<double>& moduli) {
  long g = model.m();
  for (std::size_t j = 0; j < moduli.size(); ++j)
    if (moduli[j] != 0.0) g = std::gcd(g, model.weights()[j]);
  return g;
}

void check_flat_point(const FlatCyclicModel& model, const FlatPoint& point) {
  if (static_cast<long>(point.moduli.size()) != model.n())
    throw std::invalid_argument("flat point must have n moduli");
  for (double x : point.moduli)
    if (!(x >= 0.0) || !std::isfinite(x)) throw std::invalid_argument("flat moduli must be finite and >= 0");
}

struct SeriesSum {
  double value;
  double rounding;
};

// Sum over admissible alpha with |alpha| <= cap of m k^{n+|alpha|} |x^alpha|^2 / alpha! e^{-k|x|^2}.
SeriesSum flat_series_sum(const FlatCyclicModel& model, long k, const FlatPoint& point, long cap) {
  const long n = model.n();
  const long m = model.m();
  const long target = mod_floor(k, m);
  double norm_sq = 0.0;
  std::vector<double> log_x2(static_cast<std::size_t>(n));
  for (long j = 0; j < n; ++j) {
    const double x = point.moduli[static_cast<std::size_t>(j)];
    norm_sq += x * x;
    log_x2[static_cast<std::size_t>(j)] = x > 0.0 ? 2.0 * std::log(x) : -HUGE_VAL;
  }
  const double log_k = std::log(static_cast<double>(k));
  const double base = std::log(static_cast<double>(m)) + static_cast<double>(n) * log_k - static_cast<double>(k) * norm_sq;

  CompensatedSum sum;
  double rounding = 0.0;
  std::vector<long> alpha(static_cast<std::size_t>(n), 0);
  auto visit = [&](auto&& self, long j, long used, long weight, double log_term) -> void {
    if (j == n) {
      if (weight != target) return;
      const double arg = base + log_term;
      const double term = std::exp(arg);
      sum.add(term);
      rounding += term * (std::abs(arg) + 8.0);
      return;
    }
    const auto ju = static_cast<std::size_t>(j);
    const long limit = point.moduli[ju] > 0.0 ? cap - used : 0;
    for (long a = 0; a <= limit; ++a) {
      const double contribution = a == 0 ? 0.0
                                         : static_cast<double>(a) * (log_k + log_x2[ju]) -
                                               std::lgamma(static_cast<double>(a) + 1.0);
      self(self, j + 1, used + a, mod_floor(weight + a * model.weights()[ju], m), log_term + contribution);
    }
  };
  visit(visit, 0, 0, 0, 0.0);
  return {sum.value(), kEps * (rounding + 2.0 * sum.value())};
}

}  // namespace

double flat_series_tail_bound(long m, long n, long k, double modulus_sq, long cap) {
  const double lambda = static_cast<double>(k) * modulus_sq;
  if (lambda == 0.0) return 0.0;
  const double next = static_cast<double>(cap) + 2.0;
  if (next <= lambda) return HUGE_VAL;
  // e^{-l} sum_{d > D} l^d/d! <= e^{-l} l^{D+1}/(D+1)! * 1/(1 - l/(D+2))
  const double log_bound = std::log(static_cast<double>(m)) + static_cast<double>(n) * std::log(static_cast<double>(k)) -
                           lambda + (static_cast<double>(cap) + 1.0) * std::log(lambda) - std::lgamma(next) -
                           std::log1p(-lambda / next);
  return std::exp(log_bound);
}

double flat_series_partial_sum(const FlatCyclicModel& model, long k, const FlatPoint& point, long cap) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (cap < 0) throw std::invalid_argument("cap must be >= 0");
  check_flat_point(model, point);
  return flat_series_sum(model, k, point, cap).value;
}

KernelValue bergman_value_series(const FlatCyclicModel& model, long k, const FlatPoint& point,
                                 const SeriesOptions& options) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  check_flat_point(model, point);
  const long g = effective_gcd(model, point.moduli);
  if (mod_floor(k, g) != 0) return exact_value(k, point, Rational(0));
  if (point.is_origin()) return exact_value(k, point, Rational(pow_long(k, model.n()) * model.m()));

  double norm_sq = 0.0;
  for (double x : point.moduli) norm_sq += x * x;
  const double lambda = static_cast<double>(k) * norm_sq;
  const long hard_cap = options.max_cap.value_or(std::numeric_limits<long>::max() / 4);
  long cap = std::min(hard_cap, static_cast<long>(std::ceil(lambda + 6.0 * std::sqrt(lambda) + 10.0)));
  while (true) {
    SeriesSum s = flat_series_sum(model, k, point, cap);
    const double tail = flat_series_tail_bound(model.m(), model.n(), k, norm_sq, cap);
    const double bound = tail + s.rounding;
    if (s.value > 0.0 && bound <= options.rel_tolerance * s.value) {
      KernelValue out;
      out.k = k;
      out.point = point;
      out.value = s.value;
      out.err_bound = bound;
      return out;
    }
    if (cap >= hard_cap) {
      const double achieved = s.value > 0.0 ? bound / s.value : HUGE_VAL;
      throw ToleranceError("flat series tolerance unachievable at cap " + std::to_string(cap) +
                               " (achieved relative bound " + format_decimal(achieved, 6) + ")",
                           achieved);
    }
    cap = std::min(hard_cap, cap + std::max(8L, cap / 4));
  }
}

KernelValue bergman_value_closed_flat(const Model& model, long k, std::span<const std::complex<double>> x) {
  const auto* flat = std::get_if<FlatCyclicModel>(&model);
  if (!flat) throw std::invalid_argument("closed flat form requires the flat model");
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (static_cast<long>(x.size()) != flat->n()) throw std::invalid_argument("flat point must have n coordinates");
  FlatPoint point;
  std::vector<double> moduli_sq;
  for (const auto& z : x) {
    point.moduli.push_back(std::abs(z));
    moduli_sq.push_back(std::norm(z));
  }
  if (point.is_origin())
    return exact_value(k, point, mod_floor(k, flat->m()) == 0 ? Rational(pow_long(k, flat->n()) * flat->m()) : Rational(0));
  FlatClosed closed = flat_closed_form(*flat, k, moduli_sq);
  if (!(closed.err_bound <= kFlatRelativeBudget * std::abs(closed.value))) closed = flat_closed_form_wide(*flat, k, moduli_sq);
  KernelValue out;
  out.k = k;
  out.point = point;
  out.value = closed.value;
  out.err_bound = closed.err_bound;
  return out;
}

KernelValue bergman_value(const Model& model, long k, const PointSpec& point) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (const auto* fb = std::get_if<FootballModel>(&model)) {
    const auto* p = std::get_if<FootballPoint>(&point);
    if (!p) throw std::invalid_argument("football model needs a rho point");
    return football_value(*fb, k, *p);
  }
  const auto& flat = std::get<FlatCyclicModel>(model);
  const auto* p = std::get_if<FlatPoint>(&point);
  if (!p) throw std::invalid_argument("flat model needs a modulus-vector point");
  check_flat_point(flat, *p);
  if (mod_floor(k, effective_gcd(flat, p->moduli)) != 0) return exact_value(k, point, Rational(0));
  if (p->is_origin()) return exact_value(k, point, Rational(pow_long(k, flat.n()) * flat.m()));

  std::vector<std::complex<double>> x(p->moduli.begin(), p->moduli.end());
  KernelValue closed = bergman_value_closed_flat(model, k, x);
  if (closed.value > 0.0 && closed.err_bound <= kFlatRelativeBudget * closed.value) return closed;
  return bergman_value_series(flat, k, *p);
}

namespace {

KernelValue combine(long k, const PointSpec& point, const std::vector<std::pair<Rational, KernelValue>>& parts) {
  bool all_exact = true;
  for (const auto& [w, v] : parts) all_exact = all_exact && v.is_exact();
  if (all_exact) {
    Rational total = 0;
    for (const auto& [w, v] : parts) total += w * *v.exact;
    return exact_value(k, point, total);
  }
  CompensatedSum sum;
  double err = 0.0;
  double magnitude = 0.0;
  for (const auto& [w, v] : parts) {
    const double wd = to_double(w);
    sum.add(wd * v.value);
    err += std::abs(wd) * v.err_bound;
    magnitude += std::abs(wd * v.value);
  }
  KernelValue out;
  out.k = k;
  out.point = point;
  out.value = sum.value();
  out.err_bound = err + 4.0 * kEps * magnitude;
  return out;
}

}  // namespace

KernelValue weighted_bergman(const Model& model, const CoefficientSequence& c, long k, const PointSpec& point) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  std::vector<std::pair<Rational, KernelValue>> parts;
  for (const auto& [i, ci] : c.entries()) parts.emplace_back(ci, bergman_value(model, k + i, point));
  return combine(k, point, parts);
}

HomogeneousGamma HomogeneousGamma::make(unsigned degree, std::vector<GammaTerm> terms) {
  for (const auto& t : terms)
    if (t.k_power + t.i_power != degree)
      throw std::invalid_argument("gamma term k^" + std::to_string(t.k_power) + " i^" + std::to_string(t.i_power) +
                                  " is not homogeneous of degree " + std::to_string(degree));
  return HomogeneousGamma(degree, std::move(terms));
}

HomogeneousGamma HomogeneousGamma::from_dense(const std::vector<Rational>& coeffs) {
  if (coeffs.empty()) throw std::invalid_argument("gamma needs at least one coefficient");
  const auto degree = static_cast<unsigned>(coeffs.size() - 1);
  std::vector<GammaTerm> terms;
  for (unsigned a = 0; a <= degree; ++a)
    if (coeffs[a] != 0) terms.push_back({degree - a, a, coeffs[a]});
  return make(degree, std::move(terms));
}

Rational HomogeneousGamma::operator()(long k, long i) const {
  Rational out = 0;
  for (const auto& t : terms_) {
    Integer kp, ip;
    mpz_pow_ui(kp.get_mpz_t(), Integer(k).get_mpz_t(), t.k_power);
    mpz_pow_ui(ip.get_mpz_t(), Integer(i).get_mpz_t(), t.i_power);
    out += t.coeff * Rational(kp * ip);
  }
  return out;
}

Rational HomogeneousGamma::coefficient(unsigned k_power, unsigned i_power) const {
  Rational out = 0;
  for (const auto& t : terms_)
    if (t.k_power == k_power && t.i_power == i_power) out += t.coeff;
  return out;
}

Rational HomogeneousGamma::leading_A() const { return coefficient(degree_, 0); }

Rational HomogeneousGamma::leading_B() const { return degree_ == 0 ? Rational(0) : coefficient(degree_ - 1, 1); }

KernelValue weighted_bergman_gamma(const Model& model, const CoefficientSequence& c, const HomogeneousGamma& gamma,
                                   long k, const PointSpec& point) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  std::vector<std::pair<Rational, KernelValue>> parts;
  for (const auto& [i, ci] : c.entries()) parts.emplace_back(ci * gamma(k, i), bergman_value(model, k + i, point));
  return combine(k, point, parts);
}

}  // namespace orbergman
