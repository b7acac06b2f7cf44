#include "flexjoint/friction.hpp"

#include <cmath>

namespace flexjoint {

void FrictionParams::validate() const {
  require(coulomb >= 0.0, "FrictionParams: coulomb must be >= 0");
  require(stribeck >= 0.0, "FrictionParams: stribeck must be >= 0");
  require(viscous >= 0.0, "FrictionParams: viscous must be >= 0");
  require(stribeck_velocity > 0.0,
          "FrictionParams: stribeck_velocity must be > 0");
  require(shape != 0.0, "FrictionParams: shape must be nonzero");
  require(sigmoid_scale > 0.0, "FrictionParams: sigmoid_scale must be > 0");
}

FrictionParams FrictionParams::disabled() {
  FrictionParams p;
  p.coulomb = 0.0;
  p.stribeck = 0.0;
  p.viscous = 0.0;
  return p;
}

double sigmoid(double v, double scale) {
  return 2.0 / (1.0 + std::exp(-scale * v)) - 1.0;
}

double friction_torque(double v, const FrictionParams& p) {
  const double av = std::abs(v);
  // For negative exponents the shaping term vanishes at v = 0.
  double shaped = 0.0;
  if (av > 0.0) {
    shaped = std::exp(-std::pow(p.stribeck_velocity, -p.shape) *
                      std::pow(av, p.shape));
  } else if (p.shape > 0.0) {
    shaped = 1.0;
  }
  return sigmoid(v, p.sigmoid_scale) * (p.coulomb + p.stribeck * shaped) +
         p.viscous * v;
}

JointVector friction_torque(const JointVector& v,
                            const std::vector<FrictionParams>& p) {
  check_dim(v, static_cast<Eigen::Index>(p.size()), "friction_torque v");
  JointVector f(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    f[i] = friction_torque(v[i], p[static_cast<std::size_t>(i)]);
  }
  return f;
}

}  // namespace flexjoint
