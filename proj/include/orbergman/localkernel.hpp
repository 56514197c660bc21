#pragma once

// Group-averaged local reproducing kernel on the flat model C^n / (Z/m), where
// the local Bergman kernel is exactly the Fock kernel k^n e^{k psi(y, x)} with
// psi(y, x) = sum_j y_j conj(x_j).

#include "orbergman/models.hpp"

#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

namespace orbergman {

using ComplexVector = std::vector<std::complex<double>>;

/// psi(y, x) = sum_j y_j conj(x_j).
std::complex<double> flat_phase(std::span<const std::complex<double>> y, std::span<const std::complex<double>> x);

/// zeta^s acting on a point: z_j -> lambda^{s a_j} z_j.
ComplexVector act(const FlatCyclicModel& model, long s, std::span<const std::complex<double>> x);

/// (1/m) sum_{u,v} lambda^{k(v-u)} k^n exp(k psi(zeta^u y, zeta^v x)).
std::complex<double> averaged_kernel(const FlatCyclicModel& model, long k, std::span<const std::complex<double>> y,
                                     std::span<const std::complex<double>> x);

/// The same kernel after summing out the diagonal orbit:
/// k^n sum_s lambda^{-ks} exp(k psi(zeta^s y, x)).
std::complex<double> averaged_kernel_collapsed(const FlatCyclicModel& model, long k,
                                               std::span<const std::complex<double>> y,
                                               std::span<const std::complex<double>> x);

class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double estimate) : std::runtime_error(what), estimate_(estimate) {}
  double estimate() const { return estimate_; }

 private:
  double estimate_;
};

struct ReproducingCheck {
  double residual = 0.0;               // |u(x) - (chi u, K^av_{k,x})_{k phi, m}|
  std::complex<double> pairing;        // (chi u, K^av_{k,x})_{k phi, m}
  int radial_nodes = 0;                // Gauss-Legendre nodes per radial panel
  int angular_nodes = 0;
};

/// Pairs u(y) = y^alpha against the averaged kernel on the disc of radius R
/// (n = 1 models), with cutoff chi = 1 on [0, R/2] and a C^2 quintic
/// smoothstep down to 0 at R. Tensor Gauss-Legendre (two radial panels) times
/// angular trapezoid, in 64-digit arithmetic; node counts double until two
/// successive residuals agree to 3 digits. Throws QuadratureError otherwise.
ReproducingCheck reproducing_pairing(const FlatCyclicModel& model, long k, long alpha, std::complex<double> x, double R);

/// As above, but requires the monomial to have weight k (a alpha = k mod m).
ReproducingCheck verify_reproducing(const FlatCyclicModel& model, long k, long alpha, std::complex<double> x, double R);

/// The cutoff profile chi(r).
double cutoff(double r, double R);

struct DecaySample {
  long k = 0;
  double sup_value = 0.0;  // max over the grid of k^s |eta - 1|^s |eta|^k
};

struct DecayReport {
  double sup = 0.0;
  std::vector<DecaySample> rows;
};

/// eta(x) = exp(psi(zeta^u x, zeta^v x) - phi(x)).
std::complex<double> decay_eta(const FlatCyclicModel& model, long u, long v, const FlatPoint& x);

/// Sweeps k in [k_min, k_max] and the grid, recording the per-k supremum of
/// k^s |(eta - 1)^s eta^k|. Requires u != v mod m and s >= 1.
DecayReport decay_check(const FlatCyclicModel& model, unsigned s, long u, long v, std::span<const FlatPoint> grid,
                        long k_min, long k_max);

/// A bound on k^s |eta - 1|^s |eta|^k valid for all k and x: with kappa the
/// largest 1/sin(theta_j/2) over the rotation angles theta_j of zeta^{u-v},
/// the quantity is at most (kappa s / e)^s.
double decay_uniform_bound(const FlatCyclicModel& model, unsigned s, long u, long v);

}  // namespace orbergman
