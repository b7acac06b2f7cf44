#pragma once

#include <memory>

#include "flexjoint/observer.hpp"
#include "flexjoint/reference.hpp"
#include "flexjoint/types.hpp"

namespace flexjoint {

struct GainSet {
  JointVector kp;  ///< N m/rad
  JointVector kd;  ///< N m s/rad
  void validate() const;
};

/// Discrete controller sampled at the loop rate. Measurements are the
/// quantized motor position and the raw motor velocity.
class Controller {
 public:
  virtual ~Controller() = default;

  /// Control torque for sample k at time t.
  virtual JointVector compute(std::size_t k, double t,
                              const JointVector& theta_meas,
                              const JointVector& thetad_meas) = 0;

  virtual int dof() const = 0;

  /// Observer residual and torsion estimate of the last sample, zero for
  /// controllers without an observer; recorded in the trace.
  virtual JointVector residual() const { return JointVector::Zero(dof()); }
  virtual JointVector torsion_estimate() const {
    return JointVector::Zero(dof());
  }
};

class ZeroController final : public Controller {
 public:
  explicit ZeroController(int dof) : dof_(dof) {}
  JointVector compute(std::size_t, double, const JointVector&,
                      const JointVector&) override {
    return JointVector::Zero(dof_);
  }
  int dof() const override { return dof_; }

 private:
  int dof_;
};

/// Feed-forward on the transformed motor reference plus PD on motor
/// coordinates:
///
///   u = Kp (theta_r - theta) + Kd (theta_r' - theta') + u_r
///
/// kFeedforward applies u_r alone; kFeedforwardPd closes the PD around the
/// untransformed link reference (theta_r := q_r); kFull uses the
/// transformed reference in the PD as written above.
class ControlOne final : public Controller {
 public:
  enum class Variant { kFeedforward, kFeedforwardPd, kFull };

  ControlOne(std::shared_ptr<const ReferenceTable> table, GainSet gains,
             Variant variant);

  JointVector compute(std::size_t k, double t, const JointVector& theta_meas,
                      const JointVector& thetad_meas) override;
  int dof() const override { return static_cast<int>(gains_.kp.size()); }

 private:
  std::shared_ptr<const ReferenceTable> table_;
  GainSet gains_;
  Variant variant_;
};

/// Reduced feed-forward plus PD on the link reference, optionally augmented
/// by the predicted torsion from the virtual sensor:
///
///   u = Kp e + Kd e' + Kp delta_est + u_reduced,   e = q_r - theta
///
/// The proportional path then acts on q_r - theta + delta_est, which equals
/// q_r - q whenever the prediction matches the true torsion.
class ControlTwo final : public Controller {
 public:
  enum class Variant { kFeedforward, kFeedforwardPd, kFeedforwardPdVs };

  ControlTwo(std::shared_ptr<const ReferenceTable> table, GainSet gains,
             Variant variant, MomentumObserver observer, VirtualSensor sensor);

  JointVector compute(std::size_t k, double t, const JointVector& theta_meas,
                      const JointVector& thetad_meas) override;
  int dof() const override { return static_cast<int>(gains_.kp.size()); }

  JointVector residual() const override { return residual_; }
  JointVector torsion_estimate() const override { return torsion_; }

 private:
  std::shared_ptr<const ReferenceTable> table_;
  GainSet gains_;
  Variant variant_;
  MomentumObserver observer_;
  VirtualSensor sensor_;
  bool primed_ = false;
  JointVector last_u_, last_thetad_;
  JointVector residual_, torsion_;
};

}  // namespace flexjoint
