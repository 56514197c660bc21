#pragma once

// Fitting sampled weighted kernels to b_0 k^n + b_1 k^{n-1} + ... and
// comparing against the predicted leading coefficients.

#include "orbergman/bergman.hpp"
#include "orbergman/coeffs.hpp"
#include "orbergman/models.hpp"

#include <optional>
#include <span>
#include <vector>

namespace orbergman {

struct Sample {
  long k = 0;
  double value = 0.0;
  std::optional<Rational> exact;
};

/// Least-squares fit of value ~ sum_{j=0}^{N} b_j k^{n-j}. One extra term
/// b_{N+1} k^{n-N-1} is fitted alongside and kept out of `fitted`, so the
/// residuals measure exactly the remainder the expansion is allowed to leave.
struct ExpansionFit {
  long n = 0;
  unsigned N = 0;
  std::vector<double> b_hat;                 // b_0 .. b_N
  double remainder_coeff = 0.0;              // b_{N+1}
  bool exact = false;                        // all samples exact: rational solve
  std::vector<Rational> b_exact;             // b_0 .. b_{N+1} when exact
  std::vector<long> ks;
  std::vector<double> values;
  std::vector<double> fitted;                // truncated order-N expansion
  std::vector<double> residuals;             // values - fitted
  std::vector<Rational> exact_residuals;     // when exact
};

/// Order-N expansion at k from b_hat (double path).
double expansion_value(const ExpansionFit& fit, long k);
/// Order-N expansion at k from b_exact; requires fit.exact.
Rational expansion_value_exact(const ExpansionFit& fit, long k);

/// Requires >= N + 2 distinct k and k >= 1. Throws std::invalid_argument on
/// duplicate/insufficient k and std::runtime_error on a rank-deficient design.
ExpansionFit fit_expansion(std::span<const Sample> samples, long n, unsigned N);

struct SlopeResult {
  bool exact = false;      // every residual below 1e-12 max(1, |value|)
  double slope = 0.0;      // d log|residual| / d log k over nonzero residuals
  std::size_t used = 0;
};

/// Throws std::invalid_argument when fewer than 5 residuals are nonzero and
/// the fit is not exact.
SlopeResult remainder_slope(const ExpansionFit& fit);

struct GammaLeading {
  Rational A = 1;   // coefficient of k^d
  Rational B = 0;   // coefficient of k^{d-1} i
  unsigned d = 0;

  static GammaLeading of(const HomogeneousGamma& gamma) {
    return {gamma.leading_A(), gamma.leading_B(), gamma.degree()};
  }
};

struct PredictedCoefficients {
  Rational b0;
  Rational b1;
};

/// b0 = A sum c_i, b1 = sum c_i (A (n i + Scal/2) + i B); A = 1, B = 0 without gamma.
PredictedCoefficients predicted_coefficients(const CoefficientSequence& c, long n, const Rational& scal,
                                             const std::optional<GammaLeading>& gamma = std::nullopt);

/// sum_i c_i gamma(k, i) B_{k+i}(point) for k in [k_min, k_max], evaluated in
/// parallel; gamma = 1 when empty.
std::vector<Sample> weighted_samples(const Model& model, const CoefficientSequence& c, const PointSpec& point,
                                     long k_min, long k_max,
                                     const std::optional<HomogeneousGamma>& gamma = std::nullopt);

struct PeriodicityRow {
  long k = 0;
  double value = 0.0;
  double trend = 0.0;
  double detrended = 0.0;
};

struct PeriodicityReport {
  std::optional<long> period;           // empty: no periodic component found
  double amplitude = 0.0;               // peak-to-peak of the detrended samples
  std::optional<double> growth;         // log-log slope of windowed amplitudes (upper half of range)
  std::vector<double> lag_correlation;  // index p: correlation at lag p (p >= 1)
  std::vector<PeriodicityRow> rows;
};

/// Removes the best trend a_n k^n + ... + a_0 + a_{-1}/k + a_{-2}/k^2
/// (exactly, when samples are exact) and looks for a repeating pattern: the
/// period is the smallest lag p >= 2 whose autocorrelation reaches 0.9 while
/// lag 1 stays below it. `growth` is left empty when fewer than three windows
/// carry a non-negligible oscillation. Requires at least max(3m, n + 4) values.
PeriodicityReport periodicity_probe(const Model& model, const CoefficientSequence& c, const PointSpec& point,
                                    long k_min, long k_max);

/// The same analysis on precomputed samples (consecutive k).
PeriodicityReport periodicity_from_samples(std::span<const Sample> samples, long n, long max_period);

}  // namespace orbergman
