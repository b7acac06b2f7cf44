#include "flexjoint/hysteresis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace flexjoint {

void HysteresisParams::validate() const {
  require(k1 > 0.0, "HysteresisParams: k1 must be > 0");
  require(k3 >= 0.0, "HysteresisParams: k3 must be >= 0");
  // weight == 1 is the purely elastic limit used by linear cross-checks.
  require(weight > 0.0 && weight <= 1.0,
          "HysteresisParams: weight must be in (0, 1]");
  require(psi >= 0.0, "HysteresisParams: psi must be >= 0");
  require(psi + xi > 0.0 || (psi == 0.0 && xi == 0.0),
          "HysteresisParams: psi + xi must be >= 0");
  require(eta >= 1.0, "HysteresisParams: eta must be >= 1");
}

double elastic_torque(double delta_deg, const HysteresisParams& p) {
  return p.k1 * delta_deg + p.k3 * delta_deg * delta_deg * delta_deg;
}

double elastic_torsion(double tau, const HysteresisParams& p) {
  if (!std::isfinite(tau)) {
    throw std::invalid_argument("elastic_torsion: tau must be finite");
  }
  if (p.k3 == 0.0) return tau / p.k1;
  if (tau == 0.0) return 0.0;

  const double tol = 1e-12 * std::max(1.0, std::abs(tau));
  // k3 >= 0 makes the cubic monotone, so the root lies between 0 and
  // tau/k1 (the spring is at least as stiff as its linear part).
  double lo = std::min(0.0, tau / p.k1);
  double hi = std::max(0.0, tau / p.k1);
  double d = tau / p.k1;
  for (int it = 0; it < 100; ++it) {
    const double f = elastic_torque(d, p) - tau;
    if (std::abs(f) <= tol) return d;
    if (f > 0.0) hi = d; else lo = d;
    const double fp = p.k1 + 3.0 * p.k3 * d * d;
    double next = d - f / fp;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == d) return d;
    d = next;
  }
  return d;
}

double plastic_torque(const HysteresisState& s, const HysteresisParams& p) {
  return p.k1 * s.x_int + p.k3 * s.x_int * s.x_int * s.x_int;
}

double state_rate(double x, double delta_rate, const HysteresisParams& p) {
  const double ax = std::abs(x);
  const double ax_eta1 = std::pow(ax, p.eta - 1.0);
  return delta_rate - p.psi * std::abs(delta_rate) * ax_eta1 * x -
         p.xi * delta_rate * ax_eta1 * ax;
}

double torque(double delta_deg, const HysteresisState& s,
              const HysteresisParams& p) {
  return p.weight * elastic_torque(delta_deg, p) +
         (1.0 - p.weight) * plastic_torque(s, p);
}

double torque_slope(double delta_deg, const HysteresisState& s,
                    double direction, const HysteresisParams& p) {
  const double ax = std::abs(s.x);
  const double ax_eta1 = std::pow(ax, p.eta - 1.0);
  const double sgn = (direction > 0.0) ? 1.0 : (direction < 0.0 ? -1.0 : 0.0);
  const double branch = 1.0 - p.psi * sgn * ax_eta1 * s.x - p.xi * ax_eta1 * ax;
  const double slope =
      p.weight * (p.k1 + 3.0 * p.k3 * delta_deg * delta_deg) +
      (1.0 - p.weight) * (p.k1 + 3.0 * p.k3 * s.x_int * s.x_int) * branch;
  if (!(slope > 0.0)) {
    throw std::domain_error("torque_slope: map not invertible here");
  }
  return slope;
}

namespace {

// dx/ddelta along a branch of fixed loading direction.
inline double slope_in_delta(double x, double direction,
                             const HysteresisParams& p) {
  const double ax = std::abs(x);
  const double ax_eta1 = std::pow(ax, p.eta - 1.0);
  return 1.0 - p.psi * direction * ax_eta1 * x - p.xi * ax_eta1 * ax;
}

}  // namespace

void advance_state(HysteresisState& s, double from_deg, double to_deg,
                   const HysteresisParams& p, double max_step_deg) {
  const double span = to_deg - from_deg;
  if (span == 0.0) return;
  const double dir = span > 0.0 ? 1.0 : -1.0;
  const int n = std::max(1, static_cast<int>(
                                std::ceil(std::abs(span) / max_step_deg)));
  const double h = span / n;
  double x = s.x;
  for (int i = 0; i < n; ++i) {
    const double k1 = slope_in_delta(x, dir, p);
    const double k2 = slope_in_delta(x + 0.5 * h * k1, dir, p);
    const double k3 = slope_in_delta(x + 0.5 * h * k2, dir, p);
    const double k4 = slope_in_delta(x + h * k3, dir, p);
    x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  s.x_int += x - s.x;
  s.x = x;
}

HysteresisInverse::HysteresisInverse(HysteresisParams p) : params_(p) {
  params_.validate();
}

double HysteresisInverse::step(double tau, double dt) {
  require(dt > 0.0, "HysteresisInverse::step: dt must be > 0");
  if (!std::isfinite(tau)) {
    throw std::invalid_argument("HysteresisInverse::step: tau must be finite");
  }
  const double w = params_.weight;
  const double tol = 1e-10 * std::max(1.0, std::abs(tau));

  // g(delta) = torque at delta with the memory advanced from the current
  // torsion, minus tau; strictly increasing with slope >= w * k1.
  HysteresisState probe = state_;
  auto g = [&](double delta) {
    probe = state_;
    advance_state(probe, delta_deg_, delta, params_);
    return torque(delta, probe, params_) - tau;
  };
  auto commit = [&](double delta) {
    state_ = probe;
    delta_deg_ = delta;
    return delta;
  };

  const double g0 = g(delta_deg_);
  if (std::abs(g0) <= tol) return commit(delta_deg_);

  // The minimum slope bounds the distance to the root, which makes the
  // first expansion step already large enough in the purely elastic case.
  double span = std::abs(g0) / (w * params_.k1);
  double lo, hi, glo, ghi;
  if (g0 < 0.0) {
    lo = delta_deg_;
    glo = g0;
    hi = delta_deg_ + span;
    ghi = g(hi);
    while (ghi < 0.0) {
      lo = hi;
      glo = ghi;
      span *= 2.0;
      hi += span;
      ghi = g(hi);
    }
  } else {
    hi = delta_deg_;
    ghi = g0;
    lo = delta_deg_ - span;
    glo = g(lo);
    while (glo > 0.0) {
      hi = lo;
      ghi = glo;
      span *= 2.0;
      lo -= span;
      glo = g(lo);
    }
  }
  // probe tracks the most recent g() argument; re-evaluate before any
  // commit so the stored memory matches the returned torsion.
  if (std::abs(ghi) <= tol) {
    g(hi);
    return commit(hi);
  }
  if (std::abs(glo) <= tol) {
    g(lo);
    return commit(lo);
  }

  // Newton on the bracketed, monotone residual with bisection safeguard.
  double d = 0.5 * (lo + hi);
  for (int it = 0; it < 100; ++it) {
    if (!(d > lo && d < hi)) d = 0.5 * (lo + hi);
    const double gd = g(d);
    if (std::abs(gd) <= tol ||
        hi - lo <= 1e-14 * std::max(1.0, std::abs(d))) {
      return commit(d);
    }
    if (gd > 0.0) {
      hi = d;
      ghi = gd;
    } else {
      lo = d;
      glo = gd;
    }
    d = d - gd / torque_slope(d, probe, g0 < 0.0 ? 1.0 : -1.0, params_);
  }
  const double mid = 0.5 * (lo + hi);
  g(mid);
  return commit(mid);
}

}  // namespace flexjoint
