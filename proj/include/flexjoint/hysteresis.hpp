#pragma once

#include "flexjoint/types.hpp"

namespace flexjoint {

/// Torsion-torque hysteresis of one flexible joint.
///
/// The map blends a memory-free stiffening spring with a hysteretic branch
/// driven by an internal state:
///
///   tau(delta) = w * (k1 delta + k3 delta^3)
///              + (1 - w) * (k1 x_int + k3 x_int^3)
///
/// where x evolves with the torsion rate,
///
///   x' = delta' - psi |delta'| |x|^(eta-1) x - xi delta' |x|^eta,
///
/// and x_int accumulates the same rate. Every term of x' carries delta' or
/// |delta'|, so the delta-tau curve is invariant under time
/// reparameterization of the input (rate independence), and |x| is bounded
/// by (1/(psi+xi))^(1/eta) under monotone loading.
///
/// Torsion is in degrees and torque in N m throughout this module; callers
/// convert at the boundary.
struct HysteresisParams {
  double k1 = 300.0;     ///< linear stiffness (N m/deg)
  double k3 = 50000.0;   ///< cubic stiffness (N m/deg^3)
  double weight = 0.4;   ///< w, elastic share in (0, 1]
  double psi = 300.0;    ///< loading shape factor
  double xi = 500.0;     ///< unloading shape factor
  double eta = 1.5;      ///< state exponent, >= 1

  void validate() const;
};

/// Internal hysteresis memory. x_int integrates the same rate as x and both
/// start at zero in the virgin (memory-free) state; it is carried
/// separately so the hysteretic branch is evaluated on the accumulated
/// integral exactly as defined.
struct HysteresisState {
  double x = 0.0;
  double x_int = 0.0;
};

/// Memory-free spring branch k1*delta + k3*delta^3.
double elastic_torque(double delta_deg, const HysteresisParams& p);

/// Unique real solution of elastic_torque(delta) = tau. Safeguarded Newton
/// with a bisection fallback on the monotone cubic; residual below
/// 1e-12 * max(1, |tau|).
double elastic_torsion(double tau, const HysteresisParams& p);

/// Hysteretic branch k1*x_int + k3*x_int^3.
double plastic_torque(const HysteresisState& s, const HysteresisParams& p);

/// Rate x' of the internal state for torsion rate delta_rate (deg/s). The
/// accumulated integral x_int advances with the same rate.
double state_rate(double x, double delta_rate, const HysteresisParams& p);

/// Combined joint torque at torsion delta_deg with memory s.
double torque(double delta_deg, const HysteresisState& s,
              const HysteresisParams& p);

/// Slope d tau / d delta along the branch currently being traversed;
/// direction is the sign of delta'. Throws std::domain_error when the slope
/// is not positive (the map is no longer invertible there).
double torque_slope(double delta_deg, const HysteresisState& s,
                    double direction, const HysteresisParams& p);

/// Advances the memory along a monotone torsion increment from_deg ->
/// to_deg, integrating dx/ddelta in torsion space (exactly
/// rate-independent). max_step_deg bounds the internal substep.
void advance_state(HysteresisState& s, double from_deg, double to_deg,
                   const HysteresisParams& p, double max_step_deg = 2e-4);

/// Inverse hysteresis map with its own memory, marched one torque sample at
/// a time. Each step resolves the implicit equation
///
///   w * elastic(delta) + (1-w) * plastic(mem advanced to delta) = tau
///
/// exactly: the left side is strictly increasing in delta (its slope is at
/// least w * k1), so a bracketed Newton iteration on the torsion increment
/// always converges. Cutting the loop with a one-step delay on the
/// hysteretic branch instead is unstable for w < 1/2 (the substitution
/// iteration has gain (1-w)/w in the linear regime), which rules it out for
/// the working parameter set.
class HysteresisInverse {
 public:
  explicit HysteresisInverse(HysteresisParams p);

  /// Consumes one torque sample taken dt seconds after the previous one and
  /// returns the estimated torsion (deg). dt must be > 0; the map itself is
  /// rate independent.
  double step(double tau, double dt);

  double delta_deg() const { return delta_deg_; }
  const HysteresisState& state() const { return state_; }
  const HysteresisParams& params() const { return params_; }

 private:
  HysteresisParams params_;
  HysteresisState state_;
  double delta_deg_ = 0.0;
};

}  // namespace flexjoint
