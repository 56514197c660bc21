#include "orbergman/localkernel.hpp"

#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <numbers>

namespace orbergman {

namespace {

namespace mp = boost::multiprecision;
using Real = mp::number<mp::mpfr_float_backend<64>, mp::et_off>;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::complex<double> root_of_unity(long j, long m) {
  const double angle = kTwoPi * static_cast<double>(mod_floor(j, m)) / static_cast<double>(m);
  return {std::cos(angle), std::sin(angle)};
}

struct Nodes {
  std::vector<Real> x;
  std::vector<Real> w;
};

// Gauss-Legendre nodes on [-1, 1] by Newton iteration on P_n.
Nodes gauss_legendre(int n) {
  Nodes out;
  out.x.resize(static_cast<std::size_t>(n));
  out.w.resize(static_cast<std::size_t>(n));
  const Real pi = boost::math::constants::pi<Real>();
  const Real tol = Real(std::numeric_limits<Real>::epsilon()) * 16;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    Real x = cos(pi * (Real(i) + Real(0.75)) / (Real(n) + Real(0.5)));
    Real dp;
    for (int iter = 0; iter < 100; ++iter) {
      Real p0 = 1, p1 = x;
      for (int j = 2; j <= n; ++j) {
        Real p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1);
      Real dx = p1 / dp;
      x -= dx;
      if (abs(dx) < tol) break;
    }
    // recompute derivative at the converged node
    Real p0 = 1, p1 = x;
    for (int j = 2; j <= n; ++j) {
      Real p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1);
    const Real w = 2 / ((1 - x * x) * dp * dp);
    out.x[static_cast<std::size_t>(i)] = x;
    out.w[static_cast<std::size_t>(i)] = w;
    out.x[static_cast<std::size_t>(n - 1 - i)] = -x;
    out.w[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  return out;
}

Real cutoff_hp(const Real& r, const Real& R) {
  const Real half = R / 2;
  if (r <= half) return Real(1);
  if (r >= R) return Real(0);
  const Real t = (r - half) / half;
  return 1 - t * t * t * (10 - 15 * t + 6 * t * t);
}

struct HpComplex {
  Real re, im;
};

// (1/(m pi)) int chi(r) r^alpha e^{i alpha theta} conj(K^av(y, x)) e^{-k r^2} r dr dtheta
HpComplex pairing_estimate(const FlatCyclicModel& model, long k, long alpha, std::complex<double> x, const Real& R,
                           const Nodes& radial, int angular) {
  const long m = model.m();
  const long a = model.weights()[0];
  const Real pi = boost::math::constants::pi<Real>();
  const Real two_pi = 2 * pi;
  const Real x_abs = Real(std::abs(x));
  const Real x_arg = Real(std::arg(x));
  const Real kk = Real(k);

  // conj(K^av(y,x)) = k sum_s lambda^{ks} exp(k lambda^{-sa} conj(y) x)
  //   with conj(y) x = r |x| e^{i(arg x - theta)}.
  std::vector<Real> phase_s(static_cast<std::size_t>(m));   // 2 pi k s / m
  std::vector<Real> rotate_s(static_cast<std::size_t>(m));  // -2 pi s a / m
  for (long s = 0; s < m; ++s) {
    phase_s[static_cast<std::size_t>(s)] = two_pi * Real(mod_floor(k * s, m)) / m;
    rotate_s[static_cast<std::size_t>(s)] = -two_pi * Real(mod_floor(s * a, m)) / m;
  }

  HpComplex total{0, 0};
  const Real panels[2][2] = {{Real(0), R / 2}, {R / 2, R}};
  for (const auto& panel : panels) {
    const Real half_width = (panel[1] - panel[0]) / 2;
    const Real mid = (panel[1] + panel[0]) / 2;
    for (std::size_t i = 0; i < radial.x.size(); ++i) {
      const Real r = mid + half_width * radial.x[i];
      const Real radial_weight = radial.w[i] * half_width * r * cutoff_hp(r, R) * exp(-kk * r * r) * pow(r, alpha);
      if (radial_weight == 0) continue;
      HpComplex ring{0, 0};
      for (int j = 0; j < angular; ++j) {
        const Real theta = two_pi * j / angular;
        HpComplex kernel{0, 0};
        for (long s = 0; s < m; ++s) {
          const Real ang = x_arg - theta + rotate_s[static_cast<std::size_t>(s)];
          const Real mag = kk * r * x_abs;
          const Real e = exp(mag * cos(ang));
          const Real ph = mag * sin(ang) + phase_s[static_cast<std::size_t>(s)];
          kernel.re += e * cos(ph);
          kernel.im += e * sin(ph);
        }
        // multiply by e^{i alpha theta}
        const Real c = cos(alpha * theta), sn = sin(alpha * theta);
        ring.re += c * kernel.re - sn * kernel.im;
        ring.im += c * kernel.im + sn * kernel.re;
      }
      const Real scale = radial_weight * two_pi / angular;
      total.re += scale * ring.re;
      total.im += scale * ring.im;
    }
  }
  const Real norm = kk / (m * pi);
  return {total.re * norm, total.im * norm};
}

}  // namespace

std::complex<double> flat_phase(std::span<const std::complex<double>> y, std::span<const std::complex<double>> x) {
  if (y.size() != x.size()) throw std::invalid_argument("points must have equal dimension");
  std::complex<double> out = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) out += y[j] * std::conj(x[j]);
  return out;
}

ComplexVector act(const FlatCyclicModel& model, long s, std::span<const std::complex<double>> x) {
  if (static_cast<long>(x.size()) != model.n()) throw std::invalid_argument("point must have n coordinates");
  ComplexVector out(x.begin(), x.end());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] *= root_of_unity(s * model.weights()[j], model.m());
  return out;
}

std::complex<double> averaged_kernel(const FlatCyclicModel& model, long k, std::span<const std::complex<double>> y,
                                     std::span<const std::complex<double>> x) {
  const long m = model.m();
  const double scale = std::pow(static_cast<double>(k), static_cast<double>(model.n()));
  std::complex<double> sum = 0.0;
  for (long u = 0; u < m; ++u) {
    const ComplexVector yu = act(model, u, y);
    for (long v = 0; v < m; ++v) {
      const ComplexVector xv = act(model, v, x);
      sum += root_of_unity(k * (v - u), m) * std::exp(static_cast<double>(k) * flat_phase(yu, xv));
    }
  }
  return scale * sum / static_cast<double>(m);
}

std::complex<double> averaged_kernel_collapsed(const FlatCyclicModel& model, long k,
                                               std::span<const std::complex<double>> y,
                                               std::span<const std::complex<double>> x) {
  const long m = model.m();
  const double scale = std::pow(static_cast<double>(k), static_cast<double>(model.n()));
  std::complex<double> sum = 0.0;
  for (long s = 0; s < m; ++s)
    sum += root_of_unity(-k * s, m) * std::exp(static_cast<double>(k) * flat_phase(act(model, s, y), x));
  return scale * sum;
}

double cutoff(double r, double R) {
  if (r <= R / 2) return 1.0;
  if (r >= R) return 0.0;
  const double t = (r - R / 2) / (R / 2);
  return 1.0 - t * t * t * (10.0 - 15.0 * t + 6.0 * t * t);
}

ReproducingCheck reproducing_pairing(const FlatCyclicModel& model, long k, long alpha, std::complex<double> x,
                                     double R) {
  if (model.n() != 1) throw std::invalid_argument("reproducing check is implemented for n = 1");
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (alpha < 0) throw std::invalid_argument("alpha must be >= 0");
  if (!(R >= 3.0)) throw std::invalid_argument("quadrature radius must be >= 3");
  if (std::abs(x) > 1.0) throw std::invalid_argument("evaluation point must satisfy |x| <= 1");

  const Real R_hp = Real(R);
  const Real x_abs = Real(std::abs(x));
  const Real x_arg = Real(std::arg(x));
  // u(x) = x^alpha
  const Real ux_abs = alpha == 0 ? Real(1) : Real(pow(x_abs, alpha));
  const Real ux_re = ux_abs * cos(alpha * x_arg);
  const Real ux_im = ux_abs * sin(alpha * x_arg);

  // Rounding floor: the integrand peaks near k^n e^{k|x|^2}.
  const Real floor = Real(1e-52) * Real(k) * exp(Real(k) * x_abs * x_abs) * (1 + ux_abs);

  int radial_nodes = 16;
  int angular_nodes = 32;
  while (angular_nodes <= 2 * alpha + 8) angular_nodes *= 2;
  Real previous = -1;
  ReproducingCheck check;
  for (int attempt = 0; attempt < 6; ++attempt) {
    const HpComplex pair = pairing_estimate(model, k, alpha, x, R_hp, gauss_legendre(radial_nodes), angular_nodes);
    const Real dre = ux_re - pair.re, dim = ux_im - pair.im;
    const Real residual = sqrt(dre * dre + dim * dim);
    check.residual = residual.convert_to<double>();
    check.pairing = {pair.re.convert_to<double>(), pair.im.convert_to<double>()};
    check.radial_nodes = radial_nodes;
    check.angular_nodes = angular_nodes;
    if (previous >= 0) {
      const bool stable = abs(residual - previous) <= Real(1e-3) * residual;
      const bool at_floor = residual <= floor && previous <= floor;
      if (stable || at_floor) return check;
    }
    previous = residual;
    radial_nodes *= 2;
    angular_nodes *= 2;
  }
  throw QuadratureError("reproducing quadrature did not stabilise (last residual " +
                            format_decimal(check.residual, 6) + ")",
                        check.residual);
}

ReproducingCheck verify_reproducing(const FlatCyclicModel& model, long k, long alpha, std::complex<double> x,
                                    double R) {
  if (model.n() != 1) throw std::invalid_argument("reproducing check is implemented for n = 1");
  if (mod_floor(model.weights()[0] * alpha - k, model.m()) != 0)
    throw std::invalid_argument("monomial weight must be congruent to k mod m");
  return reproducing_pairing(model, k, alpha, x, R);
}

std::complex<double> decay_eta(const FlatCyclicModel& model, long u, long v, const FlatPoint& x) {
  if (static_cast<long>(x.moduli.size()) != model.n()) throw std::invalid_argument("point must have n moduli");
  std::complex<double> z = 0.0;
  for (std::size_t j = 0; j < x.moduli.size(); ++j)
    z += (root_of_unity((u - v) * model.weights()[j], model.m()) - 1.0) * x.moduli[j] * x.moduli[j];
  return std::exp(z);
}

DecayReport decay_check(const FlatCyclicModel& model, unsigned s, long u, long v, std::span<const FlatPoint> grid,
                        long k_min, long k_max) {
  if (s < 1) throw std::invalid_argument("s must be >= 1");
  if (mod_floor(u - v, model.m()) == 0) throw std::invalid_argument("decay check requires u != v mod m");
  if (k_min < 1 || k_max < k_min) throw std::invalid_argument("invalid k range");

  // Precompute log|eta| and |eta - 1| per grid point; eta - 1 via expm1 to
  // keep small |x| accurate.
  struct Entry {
    double log_abs_eta;
    double abs_eta_minus_one;
  };
  std::vector<Entry> entries;
  for (const auto& x : grid) {
    if (static_cast<long>(x.moduli.size()) != model.n()) throw std::invalid_argument("point must have n moduli");
    double re = 0.0, im = 0.0;
    for (std::size_t j = 0; j < x.moduli.size(); ++j) {
      const std::complex<double> w = root_of_unity((u - v) * model.weights()[j], model.m());
      const double r2 = x.moduli[j] * x.moduli[j];
      re += (w.real() - 1.0) * r2;
      im += w.imag() * r2;
    }
    const double half_sin = std::sin(im / 2.0);
    const std::complex<double> eta_minus_one(std::expm1(re) * std::cos(im) - 2.0 * half_sin * half_sin,
                                             std::exp(re) * std::sin(im));
    entries.push_back({re, std::abs(eta_minus_one)});
  }

  DecayReport report;
  for (long k = k_min; k <= k_max; ++k) {
    double best = 0.0;
    for (const auto& e : entries) {
      if (e.abs_eta_minus_one == 0.0) continue;
      const double log_q = static_cast<double>(s) * std::log(static_cast<double>(k) * e.abs_eta_minus_one) +
                           static_cast<double>(k) * e.log_abs_eta;
      best = std::max(best, std::exp(log_q));
    }
    report.rows.push_back({k, best});
    report.sup = std::max(report.sup, best);
  }
  return report;
}

double decay_uniform_bound(const FlatCyclicModel& model, unsigned s, long u, long v) {
  double kappa = 0.0;
  for (long a : model.weights()) {
    const long j = mod_floor((u - v) * a, model.m());
    if (j == 0) continue;
    const double half_angle = std::numbers::pi * static_cast<double>(j) / static_cast<double>(model.m());
    kappa = std::max(kappa, 1.0 / std::sin(half_angle));
  }
  return std::pow(kappa * static_cast<double>(s) / std::numbers::e, static_cast<double>(s));
}

}  // namespace orbergman
