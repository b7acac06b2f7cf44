#pragma once

#include <memory>
#include <vector>

#include "flexjoint/friction.hpp"
#include "flexjoint/hysteresis.hpp"
#include "flexjoint/manipulator.hpp"
#include "flexjoint/types.hpp"

namespace flexjoint {

/// Full parameter set of the flexible-joint plant.
struct PlantParams {
  std::shared_ptr<const ManipulatorModel> model;
  JointVector motor_inertia;               ///< J diagonal (kg m^2)
  std::vector<FrictionParams> friction;    ///< per joint
  std::vector<HysteresisParams> hysteresis;///< per joint
  JointVector joint_damping;               ///< D diagonal (N m s/deg)
  int encoder_bits = 14;                   ///< 0 disables quantization

  int dof() const { return model ? model->dof() : 0; }
  void validate() const;
};

/// Simulation state: link and motor coordinates plus the per-joint
/// hysteresis memory. The joint torsion is theta - q, derived on demand.
struct PlantState {
  JointVector q, qd, theta, thetad;  ///< rad, rad/s
  std::vector<HysteresisState> hyst;

  static PlantState at_rest(const JointVector& pose_rad);
  bool finite() const;
};

/// Ideal incremental encoder: floor quantization to 2^bits counts per
/// revolution. bits = 0 returns theta unchanged.
double quantize_encoder(double theta, int bits);

/// Coupled link/motor dynamics with hysteretic joint torque and motor
/// friction, integrated by fixed-step classical Runge-Kutta. The hysteresis
/// states are part of the integrated state vector, so no splitting error is
/// introduced.
class Plant {
 public:
  static constexpr int kStatesPerJoint = 6;  // q, qd, theta, thetad, x, x_int
  using StateVec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor,
                                 kStatesPerJoint * kMaxDof, 1>;

  explicit Plant(PlantParams params);

  /// Joint torque tau = hysteresis(delta) + D * delta_rate per joint.
  JointVector joint_torque(const PlantState& s) const;

  /// Time derivative of every state under motor torque u.
  PlantState derivatives(const PlantState& s, const JointVector& u) const;

  /// One RK4 step of size dt; throws NonFiniteStateError if the result is
  /// not finite (reduce dt).
  void step(PlantState& s, const JointVector& u, double dt) const;

  StateVec pack(const PlantState& s) const;
  PlantState unpack(const StateVec& v) const;

  const PlantParams& params() const { return params_; }
  int dof() const { return params_.dof(); }

 private:
  StateVec derivatives_flat(const StateVec& v, const JointVector& u) const;

  PlantParams params_;
};

}  // namespace flexjoint
