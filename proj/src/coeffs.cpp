#include "orbergman/coeffs.hpp"

#include <stdexcept>
#include <string>

namespace orbergman {

namespace {

// i^p with 0^0 = 1.
Integer index_power(long i, unsigned p) {
  Integer out;
  mpz_ui_pow_ui(out.get_mpz_t(), static_cast<unsigned long>(i), p);
  return out;
}

// Divides `poly` by the monic 1 + z + ... + z^{m-1}; returns the quotient when
// the remainder vanishes.
std::optional<std::vector<Rational>> divide_by_cyclotomic_sum(const std::vector<Rational>& poly, long m) {
  const std::size_t d = static_cast<std::size_t>(m - 1);
  if (poly.size() <= d) return std::nullopt;
  std::vector<Rational> rem = poly;
  std::vector<Rational> quotient(poly.size() - d);
  for (std::size_t top = rem.size(); top-- > d;) {
    const Rational lead = rem[top];
    if (lead == 0) continue;
    quotient[top - d] = lead;
    for (std::size_t j = 0; j <= d; ++j) rem[top - d + j] -= lead;
  }
  for (std::size_t j = 0; j < d; ++j)
    if (rem[j] != 0) return std::nullopt;
  while (!quotient.empty() && quotient.back() == 0) quotient.pop_back();
  return quotient;
}

}  // namespace

CoefficientSequence CoefficientSequence::from_entries(const std::vector<std::pair<long, Rational>>& entries) {
  if (entries.empty()) throw std::invalid_argument("coefficient sequence must be nonempty");
  std::map<long, Rational> out;
  for (const auto& [i, value] : entries) {
    if (i < 0) throw std::invalid_argument("coefficient index must be >= 0, got " + std::to_string(i));
    if (value <= 0) throw std::invalid_argument("coefficient c_" + std::to_string(i) + " must be positive");
    Rational v = value;
    v.canonicalize();
    if (!out.emplace(i, v).second)
      throw std::invalid_argument("duplicate coefficient index " + std::to_string(i));
  }
  return CoefficientSequence(std::move(out));
}

CoefficientSequence CoefficientSequence::from_integers(const std::vector<std::pair<long, long>>& entries) {
  std::vector<std::pair<long, Rational>> converted;
  converted.reserve(entries.size());
  for (const auto& [i, v] : entries) converted.emplace_back(i, Rational(v));
  return from_entries(converted);
}

CoefficientSequence CoefficientSequence::from_dense(const std::vector<long>& weights) {
  std::vector<std::pair<long, Rational>> converted;
  for (std::size_t i = 0; i < weights.size(); ++i)
    if (weights[i] != 0) converted.emplace_back(static_cast<long>(i), Rational(weights[i]));
  return from_entries(converted);
}

Rational CoefficientSequence::moment(unsigned p) const {
  Rational sum = 0;
  for (const auto& [i, c] : entries_) sum += Rational(index_power(i, p)) * c;
  return sum;
}

std::vector<Rational> CoefficientSequence::polynomial() const {
  std::vector<Rational> poly(static_cast<std::size_t>(max_index()) + 1);
  for (const auto& [i, c] : entries_) poly[static_cast<std::size_t>(i)] = c;
  return poly;
}

CoefficientSequence index_weighted(const CoefficientSequence& c, unsigned a) {
  std::vector<std::pair<long, Rational>> out;
  for (const auto& [i, value] : c.entries()) {
    Integer w = index_power(i, a);
    if (w != 0) out.emplace_back(i, Rational(w) * value);
  }
  if (out.empty()) throw std::invalid_argument("index weighting leaves an empty sequence");
  return CoefficientSequence::from_entries(out);
}

SmoothnessSpec SmoothnessSpec::make(long m, long N, long r) {
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  if (N < 0 || r < 0) throw std::invalid_argument("N and r must be >= 0");
  return SmoothnessSpec{m, static_cast<unsigned>(N), static_cast<unsigned>(r)};
}

CoefficientSequence canonical_sequence(long m, unsigned q) {
  if (m < 1) throw std::invalid_argument("canonical_sequence requires m >= 1");
  if (q < 1) throw std::invalid_argument("canonical_sequence requires q >= 1");
  std::vector<Integer> poly{1};
  for (unsigned step = 0; step < q; ++step) {
    std::vector<Integer> next(poly.size() + static_cast<std::size_t>(m) - 1);
    for (std::size_t i = 0; i < poly.size(); ++i)
      for (long j = 0; j < m; ++j) next[i + static_cast<std::size_t>(j)] += poly[i];
    poly = std::move(next);
  }
  std::vector<std::pair<long, Rational>> entries;
  for (std::size_t i = 0; i < poly.size(); ++i) entries.emplace_back(static_cast<long>(i), Rational(poly[i]));
  return CoefficientSequence::from_entries(entries);
}

ConditionReport satisfies_condition(const CoefficientSequence& c, long m, unsigned P) {
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  ConditionReport report;
  report.m = m;
  report.P = P;
  report.satisfied = true;
  report.residue_sums.assign(P + 1, std::vector<Rational>(static_cast<std::size_t>(m), Rational(0)));
  report.targets.resize(P + 1);
  for (unsigned p = 0; p <= P; ++p) {
    auto& row = report.residue_sums[p];
    for (const auto& [i, value] : c.entries()) row[static_cast<std::size_t>(i % m)] += Rational(index_power(i, p)) * value;
    report.targets[p] = c.moment(p) / m;
    for (const Rational& sum : row)
      if (sum != report.targets[p]) report.satisfied = false;
  }
  return report;
}

std::optional<unsigned> root_order_at_unity(const CoefficientSequence& c, long m) {
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  if (m == 1) return std::nullopt;
  std::vector<Rational> poly = c.polynomial();
  unsigned order = 0;
  // Positive coefficients mean poly(1) > 0, so poly never becomes zero and the
  // degree strictly drops with every successful division.
  while (auto quotient = divide_by_cyclotomic_sum(poly, m)) {
    poly = std::move(*quotient);
    ++order;
  }
  return order;
}

nlohmann::json to_json(const CoefficientSequence& c) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& [i, value] : c.entries()) entries.push_back({i, to_string(value)});
  return {{"entries", entries}};
}

CoefficientSequence coefficients_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("entries") || !doc.at("entries").is_array())
    throw std::invalid_argument("coefficient JSON must be {\"entries\": [[i, \"p/q\"], ...]}");
  std::vector<std::pair<long, Rational>> entries;
  for (const auto& item : doc.at("entries")) {
    if (!item.is_array() || item.size() != 2 || !item[0].is_number_integer())
      throw std::invalid_argument("coefficient entry must be [index, \"p/q\"]");
    const auto& raw = item[1];
    Rational value;
    if (raw.is_string())
      value = parse_rational(raw.get<std::string>());
    else if (raw.is_number_integer())
      value = Rational(raw.get<long>());
    else
      throw std::invalid_argument("coefficient value must be a rational string");
    entries.emplace_back(item[0].get<long>(), value);
  }
  return CoefficientSequence::from_entries(entries);
}

}  // namespace orbergman
