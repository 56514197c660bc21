#include "orbergman/riemannroch.hpp"

#include <stdexcept>

namespace orbergman {

Rational weighted_hilbert(const Model& model, const CoefficientSequence& c, long k) {
  if (!is_compact(model)) throw std::domain_error("noncompact model has no h0");
  Rational out = 0;
  for (const auto& [i, ci] : c.entries()) out += ci * h0(model, k + i);
  out.canonicalize();
  return out;
}

RRCoefficients predicted_a0_a1(const Model& model, const CoefficientSequence& c) {
  const GeometricDegrees deg = geometric_degrees(model);
  RRCoefficients out{c.total() * deg.deg_L, c.moment(1) * deg.deg_L - c.total() * deg.deg_K / 2};
  out.a0.canonicalize();
  out.a1.canonicalize();
  return out;
}

bool RRReport::all_zero_from(long k_start) const {
  for (const auto& row : rows)
    if (row.k >= k_start && row.difference != 0) return false;
  return true;
}

RRReport rr_check(const Model& model, const CoefficientSequence& c, long k_min, long k_max) {
  if (k_min < 0 || k_max < k_min) throw std::invalid_argument("invalid k range");
  RRReport report;
  const RRCoefficients a = predicted_a0_a1(model, c);
  report.a0 = a.a0;
  report.a1 = a.a1;
  report.conforming = satisfies_condition(c, group_order(model), 1).satisfied;
  for (long k = k_min; k <= k_max; ++k) {
    RRRow row;
    row.k = k;
    row.weighted_h0 = weighted_hilbert(model, c, k);
    row.predicted = a.a0 * k + a.a1;
    row.predicted.canonicalize();
    row.difference = row.weighted_h0 - row.predicted;
    row.difference.canonicalize();
    report.rows.push_back(std::move(row));
  }
  for (auto it = report.rows.rbegin(); it != report.rows.rend() && it->difference == 0; ++it) report.k0 = it->k;
  return report;
}

}  // namespace orbergman
