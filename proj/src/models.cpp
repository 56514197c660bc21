#include "orbergman/models.hpp"

#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace orbergman {

namespace {

long parse_long(std::string_view text, std::string_view what) {
  try {
    std::size_t used = 0;
    long v = std::stol(std::string(text), &used);
    if (used != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("invalid integer for " + std::string(what) + ": '" + std::string(text) + "'");
  }
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

void enumerate_exponents(long n, long cap, std::vector<long>& current, long used,
                         const std::function<void(const std::vector<long>&)>& visit) {
  if (static_cast<long>(current.size()) == n) {
    visit(current);
    return;
  }
  for (long a = 0; a + used <= cap; ++a) {
    current.push_back(a);
    enumerate_exponents(n, cap, current, used + a, visit);
    current.pop_back();
  }
}

}  // namespace

FlatCyclicModel FlatCyclicModel::make(long n, long m, std::vector<long> weights) {
  if (n < 1) throw std::invalid_argument("flat model requires n >= 1");
  if (m < 1) throw std::invalid_argument("flat model requires m >= 1");
  if (static_cast<long>(weights.size()) != n)
    throw std::invalid_argument("flat model needs exactly n action weights");
  long g = m;
  for (long& a : weights) {
    a = mod_floor(a, m);
    g = std::gcd(g, a);
  }
  if (g != 1) throw std::invalid_argument("flat action not effective: gcd(weights, m) != 1");
  return FlatCyclicModel(n, m, std::move(weights));
}

long FlatCyclicModel::weight_of(const std::vector<long>& exponent) const {
  long w = 0;
  for (std::size_t j = 0; j < weights_.size(); ++j) w = mod_floor(w + weights_[j] * exponent.at(j), m_);
  return w;
}

FootballModel FootballModel::make(long m, long t) {
  if (m < 1) throw std::invalid_argument("football requires m >= 1");
  if (m % 2 == 0) throw std::invalid_argument("football requires m odd");
  long tm = mod_floor(t, m);
  if (std::gcd(tm, m) != 1 || std::gcd(mod_floor(t + 1, m), m) != 1)
    throw std::invalid_argument("football twist t must make both fixed-fibre weights t, t+1 units mod m");
  return FootballModel(m, tm);
}

long FootballModel::default_twist(long m) {
  if (m < 1 || m % 2 == 0) throw std::invalid_argument("football requires m odd");
  return m == 1 ? 0 : 1;
}

long FootballModel::residue(long k) const { return mod_floor(-t_ * k, m_); }

long dimension(const Model& model) {
  return std::visit([](const auto& m) -> long {
    if constexpr (std::is_same_v<std::decay_t<decltype(m)>, FlatCyclicModel>)
      return m.n();
    else
      return 1;
  }, model);
}

long group_order(const Model& model) {
  return std::visit([](const auto& m) { return m.m(); }, model);
}

bool is_compact(const Model& model) { return std::holds_alternative<FootballModel>(model); }

bool FlatPoint::is_origin() const {
  for (double x : moduli)
    if (x != 0.0) return false;
  return true;
}

FootballPoint FootballPoint::exact(Rational rho) {
  if (rho < 0) throw std::invalid_argument("rho must be >= 0");
  FootballPoint p;
  rho.canonicalize();
  p.value_ = to_double(rho);
  p.exact_ = std::move(rho);
  return p;
}

FootballPoint FootballPoint::approx(double rho) {
  if (!(rho >= 0.0)) throw std::invalid_argument("rho must be >= 0");
  FootballPoint p;
  if (std::isinf(rho)) return infinity();
  p.value_ = rho;
  return p;
}

FootballPoint FootballPoint::infinity() {
  FootballPoint p;
  p.infinite_ = true;
  p.value_ = HUGE_VAL;
  return p;
}

std::string describe(const PointSpec& point) {
  if (const auto* f = std::get_if<FootballPoint>(&point)) {
    if (f->is_infinity()) return "rho=inf";
    if (f->exact_rho()) return "rho=" + to_string(*f->exact_rho());
    return "rho=" + format_decimal(f->rho(), 17);
  }
  const auto& flat = std::get<FlatPoint>(point);
  std::string out = "x=(";
  for (std::size_t j = 0; j < flat.moduli.size(); ++j) {
    if (j) out += ";";
    out += format_decimal(flat.moduli[j], 17);
  }
  return out + ")";
}

Rational monomial_norm_sq(const Model& model, long k, const std::vector<long>& exponent) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (const auto* fb = std::get_if<FootballModel>(&model)) {
    long b = exponent.at(0);
    if (b < 0 || b > k) throw std::invalid_argument("football exponent must lie in [0, k]");
    // (1/m) * int |u|^{2b} (1+|u|^2)^{-k-2} dA/pi = (1/m) b!(k-b)!/(k+1)!
    Rational out(factorial(b) * factorial(k - b), factorial(k + 1) * fb->m());
    out.canonicalize();
    return out;
  }
  const auto& flat = std::get<FlatCyclicModel>(model);
  if (static_cast<long>(exponent.size()) != flat.n()) throw std::invalid_argument("exponent length must equal n");
  // (1/m) prod_j int |z|^{2 a_j} e^{-k|z|^2} dA/pi = alpha! / (m k^{|alpha|+n})
  Integer num = 1;
  long degree = 0;
  for (long a : exponent) {
    if (a < 0) throw std::invalid_argument("exponents must be >= 0");
    num *= factorial(a);
    degree += a;
  }
  Integer den;
  mpz_ui_pow_ui(den.get_mpz_t(), static_cast<unsigned long>(k), static_cast<unsigned long>(degree + flat.n()));
  Rational out(num, den * flat.m());
  out.canonicalize();
  return out;
}

SectionBasis section_basis(const Model& model, long k, std::optional<long> cap) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  SectionBasis basis;
  basis.k = k;
  if (const auto* fb = std::get_if<FootballModel>(&model)) {
    for (long b = fb->residue(k); b <= k; b += fb->m()) basis.entries.push_back({{b}, monomial_norm_sq(model, k, {b})});
    return basis;
  }
  if (!cap) throw std::invalid_argument("infinite basis requires cap");
  if (*cap < 0) throw std::invalid_argument("cap must be >= 0");
  const auto& flat = std::get<FlatCyclicModel>(model);
  const long target = mod_floor(k, flat.m());
  std::vector<long> current;
  enumerate_exponents(flat.n(), *cap, current, 0, [&](const std::vector<long>& alpha) {
    if (flat.weight_of(alpha) == target) basis.entries.push_back({alpha, monomial_norm_sq(model, k, alpha)});
  });
  return basis;
}

long h0(const Model& model, long k) {
  const auto* fb = std::get_if<FootballModel>(&model);
  if (!fb) throw std::domain_error("noncompact model has no h0");
  if (k < 0) throw std::invalid_argument("k must be >= 0");
  return floor_div(k - fb->residue(k), fb->m()) + 1;
}

Rational scalar_curvature(const Model& model, const PointSpec&) {
  return is_compact(model) ? Rational(2) : Rational(0);
}

GeometricDegrees geometric_degrees(const Model& model) {
  const auto* fb = std::get_if<FootballModel>(&model);
  if (!fb) throw std::domain_error("noncompact model has no degrees");
  // Global quotient: orbifold integrals are 1/m times deg O(1) = 1, deg K = -2.
  return {Rational(1, fb->m()), Rational(-2, fb->m())};
}

nlohmann::json to_json(const Model& model) {
  if (const auto* fb = std::get_if<FootballModel>(&model)) return {{"kind", "football"}, {"m", fb->m()}, {"t", fb->t()}};
  const auto& flat = std::get<FlatCyclicModel>(model);
  return {{"kind", "flat"}, {"n", flat.n()}, {"m", flat.m()}, {"weights", flat.weights()}};
}

Model model_from_json(const nlohmann::json& doc) {
  try {
    const std::string kind = doc.at("kind").get<std::string>();
    if (kind == "football") return FootballModel::make(doc.at("m").get<long>(), doc.at("t").get<long>());
    if (kind == "flat")
      return FlatCyclicModel::make(doc.at("n").get<long>(), doc.at("m").get<long>(),
                                   doc.at("weights").get<std::vector<long>>());
    throw std::invalid_argument("unknown model kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed model descriptor: ") + e.what());
  }
}

Model parse_model_descriptor(std::string_view text) {
  auto colon = text.find(':');
  std::string_view kind = text.substr(0, colon);
  std::string_view rest = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  std::optional<long> n, m, t;
  std::optional<std::vector<long>> weights;
  if (!rest.empty()) {
    for (auto kv : split(rest, ',')) {
      auto eq = kv.find('=');
      if (eq == std::string_view::npos) throw std::invalid_argument("model option must be key=value: '" + std::string(kv) + "'");
      auto key = kv.substr(0, eq);
      auto value = kv.substr(eq + 1);
      if (key == "n") n = parse_long(value, "n");
      else if (key == "m") m = parse_long(value, "m");
      else if (key == "t") t = parse_long(value, "t");
      else if (key == "weights") {
        weights.emplace();
        for (auto w : split(value, ';')) weights->push_back(parse_long(w, "weights"));
      } else
        throw std::invalid_argument("unknown model option '" + std::string(key) + "'");
    }
  }
  if (kind == "football") {
    if (!m) throw std::invalid_argument("football model needs m");
    if (n && *n != 1) throw std::invalid_argument("football model is one-dimensional");
    return FootballModel::make(*m, t ? *t : FootballModel::default_twist(*m));
  }
  if (kind == "flat") {
    if (!m) throw std::invalid_argument("flat model needs m");
    long dim = n ? *n : (weights ? static_cast<long>(weights->size()) : 1);
    return FlatCyclicModel::make(dim, *m, weights ? *weights : std::vector<long>(static_cast<std::size_t>(dim), 1));
  }
  throw std::invalid_argument("unknown model kind '" + std::string(kind) + "'");
}

}  // namespace orbergman
