#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "flexjoint/friction.hpp"
#include "flexjoint/hysteresis.hpp"
#include "flexjoint/manipulator.hpp"
#include "flexjoint/types.hpp"

namespace flexjoint {

/// One rest-to-rest motion followed by an optional dwell at the target.
struct Waypoint {
  JointVector target_deg;
  double duration = 1.0;  ///< s, > 0
  double hold = 0.0;      ///< s, >= 0
};

struct TrajectoryConfig {
  JointVector start_deg;
  std::vector<Waypoint> waypoints;

  void validate() const;
};

/// Piecewise degree-9 polynomial joint trajectory. Position and the first
/// four derivatives are continuous everywhere; derivatives one through four
/// vanish at every segment boundary, so the profile is usable by pipelines
/// that differentiate the reference torque twice.
class ReferenceTrajectory {
 public:
  explicit ReferenceTrajectory(TrajectoryConfig config);

  /// Evaluates q_r and derivatives 1..4 (rad, rad/s, ...) at time t.
  /// Before t = 0 the start pose is held; after the last segment the final
  /// target is held.
  void eval(double t, std::array<JointVector, 5>& out) const;

  double motion_end() const { return motion_end_; }
  int dof() const { return dof_; }

 private:
  struct Segment {
    double t0, duration;
    JointVector from_rad, span_rad;
  };

  int dof_ = 0;
  double motion_end_ = 0.0;
  JointVector start_rad_, final_rad_;
  std::vector<Segment> segments_;
};

/// One precomputed reference instant: the link-side chain, the reference
/// torque with its time derivatives, the transformed motor-side chain, and
/// both feed-forward torques.
struct ReferenceSample {
  double t = 0.0;
  std::array<JointVector, 5> q;      ///< q_r and derivatives 1..4 (rad units)
  JointVector tau;                   ///< reference joint torque (N m)
  JointVector tau_dot, tau_ddot;     ///< stencil derivatives (N m/s, N m/s^2)
  JointVector delta_deg;             ///< reference torsion (deg)
  JointVector theta, theta_dot, theta_ddot;  ///< motor reference (rad units)
  JointVector u_full;                ///< feed-forward on the motor reference
  JointVector u_reduced;             ///< rigid-model feed-forward
};

/// u = J theta_ddot + tau + f(q_dot): feed-forward along the transformed
/// motor reference (the friction term uses the link reference velocity).
JointVector feedforward_full(const ReferenceSample& s, const JointVector& j,
                             const std::vector<FrictionParams>& friction);

/// u = (H(q) + J) q_ddot + C(q, q_dot) + G(q) + f(q_dot): feed-forward that
/// ignores the joint elasticity.
JointVector feedforward_reduced(const ReferenceSample& s,
                                const ManipulatorModel& model,
                                const JointVector& j,
                                const std::vector<FrictionParams>& friction);

/// Precomputed reference table at the controller rate.
///
/// The torque chain is evaluated on a grid dense_factor times finer than
/// the control period; tau_dot and tau_ddot come from five-point central
/// stencils on that grid. The torsion reference is marched through the
/// inverse hysteresis model (its own memory, distinct from the plant's),
/// and the motor-side derivatives use the branch slope of the hysteresis
/// map at the marched state:
///
///   theta   = q + delta(tau)
///   theta'  = q' + tau' / slope
///   theta'' = q'' + tau'' / slope
class ReferenceTable {
 public:
  ReferenceTable(const ReferenceTrajectory& trajectory,
                 const ManipulatorModel& model,
                 const std::vector<HysteresisParams>& hysteresis,
                 const JointVector& motor_inertia,
                 const std::vector<FrictionParams>& friction,
                 double control_period, double duration,
                 int dense_factor = 10);

  const ReferenceSample& at(std::size_t k) const { return samples_.at(k); }
  std::size_t size() const { return samples_.size(); }
  double control_period() const { return control_period_; }

 private:
  double control_period_;
  std::vector<ReferenceSample> samples_;
};

}  // namespace flexjoint
