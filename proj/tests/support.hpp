#pragma once

// Seeded generators shared by the property tests.

#include "orbergman/coeffs.hpp"

#include <algorithm>
#include <random>
#include <vector>

namespace testsupport {

using orbergman::CoefficientSequence;

/// Support drawn from [0, 4m), values from 1..9; at least one entry.
inline CoefficientSequence random_sequence(std::mt19937_64& rng, long m) {
  std::uniform_int_distribution<long> value(1, 9);
  std::bernoulli_distribution keep(0.5);
  std::vector<long> dense(static_cast<std::size_t>(4 * m), 0);
  for (auto& d : dense)
    if (keep(rng)) d = value(rng);
  if (std::all_of(dense.begin(), dense.end(), [](long d) { return d == 0; }))
    dense[std::uniform_int_distribution<std::size_t>(0, dense.size() - 1)(rng)] = value(rng);
  return CoefficientSequence::from_dense(dense);
}

inline std::vector<long> to_dense(const CoefficientSequence& c) {
  std::vector<long> out(static_cast<std::size_t>(c.max_index() + 1), 0);
  for (const auto& [i, v] : c.entries()) out[static_cast<std::size_t>(i)] = v.get_num().get_si();
  return out;
}

inline CoefficientSequence multiply(const CoefficientSequence& a, const CoefficientSequence& b) {
  const auto da = to_dense(a), db = to_dense(b);
  std::vector<long> out(da.size() + db.size() - 1, 0);
  for (std::size_t i = 0; i < da.size(); ++i)
    for (std::size_t j = 0; j < db.size(); ++j) out[i + j] += da[i] * db[j];
  return CoefficientSequence::from_dense(out);
}

/// canonical(m, q) times a random positive polynomial: divisible by the
/// cyclotomic factor to order at least q.
inline CoefficientSequence random_multiple(std::mt19937_64& rng, long m, unsigned q) {
  std::uniform_int_distribution<long> len(1, 4), value(1, 9);
  std::vector<long> dense(static_cast<std::size_t>(len(rng)));
  for (auto& d : dense) d = value(rng);
  return multiply(orbergman::canonical_sequence(m, q), CoefficientSequence::from_dense(dense));
}

}  // namespace testsupport
