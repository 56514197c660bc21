#include "orbergman/expansion.hpp"

#include "orbergman/parallel.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace orbergman {

namespace {

// Solves the normal equations exactly; throws on a singular system.
std::vector<Rational> exact_least_squares(const std::vector<std::vector<Rational>>& design,
                                          const std::vector<Rational>& y) {
  const std::size_t cols = design.front().size();
  std::vector<std::vector<Rational>> a(cols, std::vector<Rational>(cols + 1, Rational(0)));
  for (std::size_t r = 0; r < design.size(); ++r) {
    for (std::size_t i = 0; i < cols; ++i) {
      for (std::size_t j = 0; j < cols; ++j) a[i][j] += design[r][i] * design[r][j];
      a[i][cols] += design[r][i] * y[r];
    }
  }
  for (std::size_t col = 0; col < cols; ++col) {
    std::size_t pivot = col;
    while (pivot < cols && a[pivot][col] == 0) ++pivot;
    if (pivot == cols) throw std::runtime_error("rank-deficient design");
    std::swap(a[col], a[pivot]);
    for (std::size_t row = 0; row < cols; ++row) {
      if (row == col || a[row][col] == 0) continue;
      const Rational factor = a[row][col] / a[col][col];
      for (std::size_t j = col; j <= cols; ++j) a[row][j] -= factor * a[col][j];
    }
  }
  std::vector<Rational> x(cols);
  for (std::size_t i = 0; i < cols; ++i) {
    x[i] = a[i][cols] / a[i][i];
    x[i].canonicalize();
  }
  return x;
}

Eigen::VectorXd double_least_squares(const Eigen::MatrixXd& design, const Eigen::VectorXd& y) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  qr.setThreshold(1e-13);
  if (qr.rank() < design.cols()) throw std::runtime_error("rank-deficient design");
  return qr.solve(y);
}

Rational int_power(long k, long e) {
  if (e >= 0) return power(Rational(k), static_cast<unsigned long>(e));
  return Rational(1) / power(Rational(k), static_cast<unsigned long>(-e));
}

double slope_of(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxy / sxx;
}

double pearson(std::span<const double> a, std::span<const double> b) {
  const double n = static_cast<double>(a.size());
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

}  // namespace

double expansion_value(const ExpansionFit& fit, long k) {
  const double kd = static_cast<double>(k);
  double inner = 0.0;
  for (std::size_t j = fit.b_hat.size(); j-- > 0;) inner = inner / kd + fit.b_hat[j];
  // inner = sum_j b_j k^{-j}
  return inner * std::pow(kd, static_cast<double>(fit.n));
}

Rational expansion_value_exact(const ExpansionFit& fit, long k) {
  if (!fit.exact) throw std::logic_error("fit has no exact coefficients");
  Rational out = 0;
  for (unsigned j = 0; j <= fit.N; ++j) out += fit.b_exact[j] * int_power(k, fit.n - static_cast<long>(j));
  out.canonicalize();
  return out;
}

ExpansionFit fit_expansion(std::span<const Sample> samples, long n, unsigned N) {
  if (n < 0) throw std::invalid_argument("n must be >= 0");
  std::set<long> distinct;
  for (const auto& s : samples) {
    if (s.k < 1) throw std::invalid_argument("sample k must be >= 1");
    if (!distinct.insert(s.k).second) throw std::invalid_argument("duplicate sample k");
  }
  const std::size_t cols = N + 2;
  if (distinct.size() < cols) throw std::invalid_argument("fit needs at least N + 2 distinct k values");

  ExpansionFit fit;
  fit.n = n;
  fit.N = N;
  fit.exact = std::all_of(samples.begin(), samples.end(), [](const Sample& s) { return s.exact.has_value(); });
  for (const auto& s : samples) {
    fit.ks.push_back(s.k);
    fit.values.push_back(s.exact ? to_double(*s.exact) : s.value);
  }

  if (fit.exact) {
    std::vector<std::vector<Rational>> design;
    std::vector<Rational> y;
    for (const auto& s : samples) {
      std::vector<Rational> row;
      for (std::size_t j = 0; j < cols; ++j) row.push_back(int_power(s.k, -static_cast<long>(j)));
      design.push_back(std::move(row));
      y.push_back(*s.exact / int_power(s.k, n));
    }
    fit.b_exact = exact_least_squares(design, y);
    for (unsigned j = 0; j <= N; ++j) fit.b_hat.push_back(to_double(fit.b_exact[j]));
    fit.remainder_coeff = to_double(fit.b_exact[N + 1]);
    for (const auto& s : samples) {
      Rational res = *s.exact - expansion_value_exact(fit, s.k);
      res.canonicalize();
      fit.fitted.push_back(to_double(expansion_value_exact(fit, s.k)));
      fit.residuals.push_back(to_double(res));
      fit.exact_residuals.push_back(std::move(res));
    }
    return fit;
  }

  Eigen::MatrixXd design(static_cast<Eigen::Index>(samples.size()), static_cast<Eigen::Index>(cols));
  Eigen::VectorXd y(static_cast<Eigen::Index>(samples.size()));
  for (std::size_t r = 0; r < samples.size(); ++r) {
    const double kd = static_cast<double>(samples[r].k);
    double p = 1.0;
    for (std::size_t j = 0; j < cols; ++j) {
      design(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = p;
      p /= kd;
    }
    y(static_cast<Eigen::Index>(r)) = fit.values[r] / std::pow(kd, static_cast<double>(n));
  }
  const Eigen::VectorXd b = double_least_squares(design, y);
  for (unsigned j = 0; j <= N; ++j) fit.b_hat.push_back(b(j));
  fit.remainder_coeff = b(static_cast<Eigen::Index>(N + 1));
  for (std::size_t r = 0; r < samples.size(); ++r) {
    fit.fitted.push_back(expansion_value(fit, fit.ks[r]));
    fit.residuals.push_back(fit.values[r] - fit.fitted.back());
  }
  return fit;
}

SlopeResult remainder_slope(const ExpansionFit& fit) {
  SlopeResult out;
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < fit.residuals.size(); ++i) {
    const double res = std::abs(fit.residuals[i]);
    if (res <= 1e-12 * std::max(1.0, std::abs(fit.values[i]))) continue;
    xs.push_back(std::log(static_cast<double>(fit.ks[i])));
    ys.push_back(std::log(res));
  }
  out.used = xs.size();
  if (xs.empty()) {
    out.exact = true;
    return out;
  }
  if (xs.size() < 5) throw std::invalid_argument("remainder slope needs at least 5 nonzero residuals");
  out.slope = slope_of(xs, ys);
  return out;
}

PredictedCoefficients predicted_coefficients(const CoefficientSequence& c, long n, const Rational& scal,
                                             const std::optional<GammaLeading>& gamma) {
  const Rational A = gamma ? gamma->A : Rational(1);
  const Rational B = gamma ? gamma->B : Rational(0);
  PredictedCoefficients out;
  out.b0 = A * c.total();
  out.b1 = A * (Rational(n) * c.moment(1) + scal / 2 * c.total()) + B * c.moment(1);
  out.b0.canonicalize();
  out.b1.canonicalize();
  return out;
}

std::vector<Sample> weighted_samples(const Model& model, const CoefficientSequence& c, const PointSpec& point,
                                     long k_min, long k_max, const std::optional<HomogeneousGamma>& gamma) {
  if (k_min < 1 || k_max < k_min) throw std::invalid_argument("invalid k range");
  std::vector<Sample> out(static_cast<std::size_t>(k_max - k_min + 1));
  parallel_for(out.size(), [&](std::size_t idx) {
    const long k = k_min + static_cast<long>(idx);
    const KernelValue v = gamma ? weighted_bergman_gamma(model, c, *gamma, k, point) : weighted_bergman(model, c, k, point);
    out[idx] = {k, v.value, v.exact};
  });
  return out;
}

// Trend basis k^j for j = kTrendLow..n: the polynomial part plus two inverse
// powers, so a smooth 1/k tail is not mistaken for oscillation.
constexpr long kTrendLow = -2;

PeriodicityReport periodicity_from_samples(std::span<const Sample> samples, long n, long max_period) {
  PeriodicityReport report;
  if (samples.empty()) return report;
  const std::size_t count = samples.size();
  const bool exact = std::all_of(samples.begin(), samples.end(), [](const Sample& s) { return s.exact.has_value(); });

  std::vector<double> trend(count);
  if (exact) {
    std::vector<std::vector<Rational>> design;
    std::vector<Rational> y;
    for (const auto& s : samples) {
      std::vector<Rational> row;
      for (long j = kTrendLow; j <= n; ++j) row.push_back(int_power(s.k, j));
      design.push_back(std::move(row));
      y.push_back(*s.exact);
    }
    const auto coef = exact_least_squares(design, y);
    for (std::size_t i = 0; i < count; ++i) {
      Rational t = 0;
      for (long j = kTrendLow; j <= n; ++j) t += coef[static_cast<std::size_t>(j - kTrendLow)] * int_power(samples[i].k, j);
      trend[i] = to_double(t);
      Rational d = *samples[i].exact - t;
      report.rows.push_back({samples[i].k, to_double(*samples[i].exact), trend[i], to_double(d)});
    }
  } else {
    const double scale = static_cast<double>(samples.back().k);
    Eigen::MatrixXd design(static_cast<Eigen::Index>(count), n + 1 - kTrendLow);
    Eigen::VectorXd y(static_cast<Eigen::Index>(count));
    for (std::size_t i = 0; i < count; ++i) {
      const double t = static_cast<double>(samples[i].k) / scale;
      for (long j = kTrendLow; j <= n; ++j)
        design(static_cast<Eigen::Index>(i), j - kTrendLow) = std::pow(t, static_cast<double>(j));
      y(static_cast<Eigen::Index>(i)) = samples[i].value;
    }
    const Eigen::VectorXd coef = double_least_squares(design, y);
    const Eigen::VectorXd fitted = design * coef;
    for (std::size_t i = 0; i < count; ++i) {
      trend[i] = fitted(static_cast<Eigen::Index>(i));
      report.rows.push_back({samples[i].k, samples[i].value, trend[i], samples[i].value - trend[i]});
    }
  }

  std::vector<double> d(count);
  for (std::size_t i = 0; i < count; ++i) d[i] = report.rows[i].detrended;
  const auto [lo, hi] = std::minmax_element(d.begin(), d.end());
  report.amplitude = *hi - *lo;
  if (report.amplitude == 0.0) return report;

  report.lag_correlation.push_back(1.0);
  for (long p = 1; p <= max_period && static_cast<std::size_t>(p) + 2 < count; ++p) {
    const std::size_t len = count - static_cast<std::size_t>(p);
    report.lag_correlation.push_back(pearson(std::span(d).first(len), std::span(d).subspan(static_cast<std::size_t>(p))));
  }
  if (report.lag_correlation.size() < 3 || report.lag_correlation[1] >= 0.9) return report;
  for (std::size_t p = 2; p < report.lag_correlation.size(); ++p) {
    if (report.lag_correlation[p] >= 0.9) {
      report.period = static_cast<long>(p);
      break;
    }
  }
  if (!report.period) return report;

  // Amplitude growth: peak-to-peak over consecutive windows of three periods,
  // taken over the upper half of the k range where lower-order terms in the
  // envelope matter least (the whole range if that leaves too few windows).
  const std::size_t window = static_cast<std::size_t>(3 * *report.period);
  std::size_t first = count / 2;
  if ((count - first) / window < 3) first = 0;
  double scale = 1.0;
  for (const auto& row : report.rows) scale = std::max(scale, std::abs(row.value));
  std::vector<double> xs, ys;
  for (std::size_t start = first; start + window <= count; start += window) {
    const auto [wlo, whi] = std::minmax_element(d.begin() + static_cast<long>(start),
                                                d.begin() + static_cast<long>(start + window));
    const double amp = *whi - *wlo;
    if (amp <= 1e-12 * scale) continue;
    const double centre = 0.5 * static_cast<double>(samples[start].k + samples[start + window - 1].k);
    xs.push_back(std::log(centre));
    ys.push_back(std::log(amp));
  }
  if (xs.size() >= 3) report.growth = slope_of(xs, ys);
  return report;
}

PeriodicityReport periodicity_probe(const Model& model, const CoefficientSequence& c, const PointSpec& point,
                                    long k_min, long k_max) {
  const long m = group_order(model);
  if (k_max - k_min + 1 < std::max(3 * m, dimension(model) + 4))
    throw std::invalid_argument("k range must cover at least max(3m, n + 4) values");
  const auto samples = weighted_samples(model, c, point, k_min, k_max);
  return periodicity_from_samples(samples, dimension(model), std::max<long>(2 * m, 4));
}

}  // namespace orbergman
