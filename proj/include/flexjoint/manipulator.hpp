#pragma once

#include "flexjoint/types.hpp"

namespace flexjoint {

/// Geometry and mass data of the planar two-link arm: equal link lengths,
/// equal link masses, centers of mass at mid-link.
struct ArmGeometry {
  double m = 10.0;            ///< link mass (kg)
  double l = 0.5;             ///< link length (m)
  double link_inertia = 0.5;  ///< link inertia about its COM (kg m^2)
  double gravity = 9.8;       ///< gravitational acceleration (m/s^2)

  void validate() const;
};

/// Rigid-body terms of an n-joint manipulator. Implementations are pure
/// functions of their value arguments and safe to call concurrently.
class ManipulatorModel {
 public:
  virtual ~ManipulatorModel() = default;

  virtual int dof() const = 0;
  /// Joint-space inertia matrix H(q); symmetric positive definite.
  virtual JointMatrix inertia(const JointVector& q) const = 0;
  /// Coriolis/centrifugal torque vector C(q, qd).
  virtual JointVector coriolis(const JointVector& q,
                               const JointVector& qd) const = 0;
  /// Gravity torque vector G(q).
  virtual JointVector gravity(const JointVector& q) const = 0;
  /// Gravitational potential energy with G(q) as its gradient.
  virtual double potential(const JointVector& q) const = 0;
  /// Planar end-effector position.
  virtual CartesianPoint forward_kinematics(const JointVector& q) const = 0;

  /// tau = H(q) qdd + C(q, qd) + G(q)
  JointVector inverse_dynamics(const JointVector& q, const JointVector& qd,
                               const JointVector& qdd) const;
};

/// Closed-form dynamics of the planar two-link arm under gravity.
///
/// All angles are radians. The inertia matrix is the exact mass matrix of
/// the equal-mass arm, positive definite for every configuration, and the
/// Coriolis vector is consistent with it (d/dt of the kinetic energy along
/// any trajectory balances the applied power).
class TwoLinkArm final : public ManipulatorModel {
 public:
  explicit TwoLinkArm(ArmGeometry geometry);

  int dof() const override { return 2; }
  JointMatrix inertia(const JointVector& q) const override;
  JointVector coriolis(const JointVector& q,
                       const JointVector& qd) const override;
  JointVector gravity(const JointVector& q) const override;
  double potential(const JointVector& q) const override;
  CartesianPoint forward_kinematics(const JointVector& q) const override;

  const ArmGeometry& geometry() const { return geometry_; }

 private:
  ArmGeometry geometry_;
};

}  // namespace flexjoint
