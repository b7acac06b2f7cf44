#include "flexjoint/manipulator.hpp"

#include <cmath>

namespace flexjoint {

void ArmGeometry::validate() const {
  require(m > 0.0, "ArmGeometry: link mass must be > 0");
  require(l > 0.0, "ArmGeometry: link length must be > 0");
  require(link_inertia > 0.0, "ArmGeometry: link inertia must be > 0");
  require(gravity >= 0.0, "ArmGeometry: gravity must be >= 0");
}

JointVector ManipulatorModel::inverse_dynamics(const JointVector& q,
                                               const JointVector& qd,
                                               const JointVector& qdd) const {
  check_dim(qdd, dof(), "inverse_dynamics qdd");
  return inertia(q) * qdd + coriolis(q, qd) + gravity(q);
}

TwoLinkArm::TwoLinkArm(ArmGeometry geometry) : geometry_(geometry) {
  geometry_.validate();
}

JointMatrix TwoLinkArm::inertia(const JointVector& q) const {
  check_dim(q, 2, "inertia q");
  require(all_finite(q), "inertia: q must be finite");
  const double ml2 = geometry_.m * geometry_.l * geometry_.l;
  const double I = geometry_.link_inertia;
  const double c2 = std::cos(q[1]);
  JointMatrix h(2, 2);
  h(0, 0) = ml2 * (1.5 + c2) + 2.0 * I;
  h(0, 1) = ml2 * (0.25 + 0.5 * c2) + I;
  h(1, 0) = h(0, 1);
  h(1, 1) = 0.25 * ml2 + I;
  return h;
}

JointVector TwoLinkArm::coriolis(const JointVector& q,
                                 const JointVector& qd) const {
  check_dim(q, 2, "coriolis q");
  check_dim(qd, 2, "coriolis qd");
  require(all_finite(q) && all_finite(qd), "coriolis: inputs must be finite");
  const double ml2 = geometry_.m * geometry_.l * geometry_.l;
  const double s2 = std::sin(q[1]);
  JointVector c(2);
  c[0] = -0.5 * ml2 * s2 * (2.0 * qd[1] * qd[0] + qd[1] * qd[1]);
  c[1] = 0.5 * ml2 * s2 * qd[0] * qd[0];
  return c;
}

JointVector TwoLinkArm::gravity(const JointVector& q) const {
  check_dim(q, 2, "gravity q");
  require(all_finite(q), "gravity: q must be finite");
  const double mlg = geometry_.m * geometry_.l * geometry_.gravity;
  JointVector g(2);
  g[0] = mlg * (1.5 * std::cos(q[0]) + 0.5 * std::cos(q[0] + q[1]));
  g[1] = 0.5 * mlg * std::cos(q[0] + q[1]);
  return g;
}

double TwoLinkArm::potential(const JointVector& q) const {
  check_dim(q, 2, "potential q");
  const double mlg = geometry_.m * geometry_.l * geometry_.gravity;
  return mlg * (1.5 * std::sin(q[0]) + 0.5 * std::sin(q[0] + q[1]));
}

CartesianPoint TwoLinkArm::forward_kinematics(const JointVector& q) const {
  check_dim(q, 2, "forward_kinematics q");
  const double l = geometry_.l;
  CartesianPoint p;
  p.x = l * std::cos(q[0]) + l * std::cos(q[0] + q[1]);
  p.z = l * std::sin(q[0]) + l * std::sin(q[0] + q[1]);
  return p;
}

}  // namespace flexjoint
