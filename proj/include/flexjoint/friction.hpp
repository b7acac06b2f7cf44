#pragma once

#include <vector>

#include "flexjoint/types.hpp"

namespace flexjoint {

/// Steady-state friction curve of one motor drive: smoothed Coulomb level,
/// an exponential velocity-shaping term, and a linear viscous term.
struct FrictionParams {
  double coulomb = 10.0;           ///< Fc (N m)
  double stribeck = 5.0;           ///< Fs (N m)
  double viscous = 1.0;            ///< B (N m s/rad)
  double stribeck_velocity = 2.0;  ///< V (s/rad)
  double shape = -2.0;             ///< mu, exponent of the velocity term
  double sigmoid_scale = 500.0;    ///< gamma, zero-crossing smoothing

  void validate() const;

  /// All torque contributions zero; used by frictionless test configurations.
  static FrictionParams disabled();
};

/// Smooth odd saturation 2/(1+exp(-scale*v)) - 1, in (-1, 1).
double sigmoid(double v, double scale);

/// Friction torque at motor velocity v (rad/s).
double friction_torque(double v, const FrictionParams& p);

JointVector friction_torque(const JointVector& v,
                            const std::vector<FrictionParams>& p);

}  // namespace flexjoint
