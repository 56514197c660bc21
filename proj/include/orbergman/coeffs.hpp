#pragma once

// Coefficient sequences c_i for weighted Bergman kernels and the residue-class
// moment conditions that make the weighted sum smooth across orbifold points.

#include "orbergman/rational.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace orbergman {

/// Finitely supported, strictly positive weights indexed by i >= 0.
class CoefficientSequence {
 public:
  /// Validates: nonempty, indices >= 0 and distinct, values > 0.
  /// Throws std::invalid_argument otherwise.
  static CoefficientSequence from_entries(const std::vector<std::pair<long, Rational>>& entries);

  /// Convenience for integer literals, e.g. {{0,1},{1,2},{2,1}}.
  static CoefficientSequence from_integers(const std::vector<std::pair<long, long>>& entries);

  /// Dense form: weights[i] is c_i; zero entries are skipped.
  static CoefficientSequence from_dense(const std::vector<long>& weights);

  const std::map<long, Rational>& entries() const { return entries_; }
  long max_index() const { return entries_.rbegin()->first; }

  /// Sum_i i^p c_i, with 0^0 = 1.
  Rational moment(unsigned p) const;
  Rational total() const { return moment(0); }

  /// Coefficients of sum_i c_i z^i, lowest degree first.
  std::vector<Rational> polynomial() const;

  friend bool operator==(const CoefficientSequence&, const CoefficientSequence&) = default;

 private:
  explicit CoefficientSequence(std::map<long, Rational> entries) : entries_(std::move(entries)) {}
  std::map<long, Rational> entries_;
};

/// The sequence c'_i = i^a c_i, dropping the i = 0 entry when a > 0.
/// Throws std::invalid_argument if nothing survives.
CoefficientSequence index_weighted(const CoefficientSequence& c, unsigned a);

/// Expansion order N and derivative order r; the moment conditions are
/// required for p = 0, ..., N + r.
struct SmoothnessSpec {
  long m = 1;
  unsigned N = 0;
  unsigned r = 0;

  static SmoothnessSpec make(long m, long N, long r);
  unsigned P() const { return N + r; }
};

/// Residue-class moment sums for p = 0..P, u = 0..m-1.
struct ConditionReport {
  bool satisfied = false;
  long m = 1;
  unsigned P = 0;
  /// residue_sums[p][u] = sum_{i = u mod m} i^p c_i
  std::vector<std::vector<Rational>> residue_sums;
  /// targets[p] = (1/m) sum_i i^p c_i
  std::vector<Rational> targets;
};

/// Integer coefficients of (1 + z + ... + z^{m-1})^q.
CoefficientSequence canonical_sequence(long m, unsigned q);

/// True iff sum_{i = u (m)} i^p c_i = (1/m) sum_i i^p c_i for all u and all
/// p <= P, evaluated exactly.
ConditionReport satisfies_condition(const CoefficientSequence& c, long m, unsigned P);

inline ConditionReport satisfies_condition(const CoefficientSequence& c, const SmoothnessSpec& spec) {
  return satisfies_condition(c, spec.m, spec.P());
}

/// Largest q such that ((z^m - 1)/(z - 1))^q divides sum_i c_i z^i, found by
/// repeated exact division. std::nullopt means "unconstrained" (m = 1).
std::optional<unsigned> root_order_at_unity(const CoefficientSequence& c, long m);

/// {"entries": [[i, "p/q"], ...]}
nlohmann::json to_json(const CoefficientSequence& c);
CoefficientSequence coefficients_from_json(const nlohmann::json& doc);

}  // namespace orbergman
