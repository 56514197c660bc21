#pragma once

// Weighted Hilbert functions sum_i c_i h^0(L^{k+i}) on the football and their
// comparison with a_0 k + a_1 built from the orbifold degrees of L and K.

#include "orbergman/coeffs.hpp"
#include "orbergman/models.hpp"

#include <optional>
#include <vector>

namespace orbergman {

/// sum_i c_i h0(k + i). Throws std::domain_error ("noncompact") for the flat model.
Rational weighted_hilbert(const Model& model, const CoefficientSequence& c, long k);

struct RRCoefficients {
  Rational a0;
  Rational a1;
};

/// n = 1: a0 = sum c_i deg L, a1 = sum i c_i deg L - sum c_i deg K / 2.
RRCoefficients predicted_a0_a1(const Model& model, const CoefficientSequence& c);

struct RRRow {
  long k = 0;
  Rational weighted_h0;
  Rational predicted;
  Rational difference;
};

struct RRReport {
  Rational a0;
  Rational a1;
  bool conforming = false;      // moment conditions hold for p in {0, 1}
  std::optional<long> k0;       // smallest k after which every difference in range vanishes
  std::vector<RRRow> rows;

  bool all_zero_from(long k_start) const;
};

RRReport rr_check(const Model& model, const CoefficientSequence& c, long k_min, long k_max);

}  // namespace orbergman
