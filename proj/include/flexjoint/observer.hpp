#pragma once

#include <vector>

#include "flexjoint/friction.hpp"
#include "flexjoint/hysteresis.hpp"
#include "flexjoint/types.hpp"

namespace flexjoint {

/// Residual gains of the momentum observer; the residual tracks the joint
/// torque through a first-order lag with time constant 1/gain.
struct ObserverGains {
  JointVector gain;  ///< L diagonal (1/s)
  void validate() const;
};

/// Joint-torque observer built on the motor generalized momenta p = J
/// thetad. It integrates
///
///   p_hat' = u - f(thetad) - r,    r = L (p_hat - p),
///
/// so the residual obeys r' + L r = L tau against the true joint torque.
/// The update runs at the controller rate on sampled measurements: the
/// sampled inputs are reconstructed linearly over the interval and the
/// stable linear part is integrated exactly (exponential-integrator
/// discretization), which keeps the realized lag within rounding of the
/// ideal first-order law even at moderate L * dt.
class MomentumObserver {
 public:
  MomentumObserver(JointVector motor_inertia,
                   std::vector<FrictionParams> friction, ObserverGains gains);

  /// Initializes the momentum estimate from a velocity measurement so the
  /// initial residual is zero.
  void reset(const JointVector& thetad);

  /// Advances the estimate across one sample interval of length dt using
  /// the velocity at both interval ends and the torque command held during
  /// the interval. Returns the residual r at the end of the interval.
  JointVector update(const JointVector& u_held, const JointVector& thetad_prev,
                     const JointVector& thetad_now, double dt);

  const JointVector& residual() const { return residual_; }
  const JointVector& momentum_estimate() const { return p_hat_; }

 private:
  JointVector motor_inertia_;
  std::vector<FrictionParams> friction_;
  ObserverGains gains_;
  JointVector p_hat_;
  JointVector residual_;
};

/// Torsion predictor: feeds the observed joint torque through the inverse
/// hysteresis map, joint by joint, and reports the estimate in radians.
class VirtualSensor {
 public:
  explicit VirtualSensor(const std::vector<HysteresisParams>& params);

  /// One sample step with the residual torque (N m); returns torsion (rad).
  JointVector update(const JointVector& residual, double dt);

  JointVector torsion_estimate() const;

  const HysteresisInverse& inverse(int joint) const {
    return inverse_.at(static_cast<std::size_t>(joint));
  }

 private:
  std::vector<HysteresisInverse> inverse_;
};

}  // namespace flexjoint
