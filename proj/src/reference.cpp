#include "flexjoint/reference.hpp"

#include <cmath>

namespace flexjoint {

namespace {

// Degree-9 smoothstep: s(0)=0, s(1)=1, derivatives 1..4 zero at both ends.
// Coefficients ascending; derivative tables built once.
struct SmoothStep9 {
  std::array<std::array<double, 10>, 5> c{};

  SmoothStep9() {
    c[0] = {0, 0, 0, 0, 0, 126, -420, 540, -315, 70};
    for (int k = 1; k < 5; ++k) {
      for (int i = 0; i + 1 < 10; ++i) {
        c[k][static_cast<std::size_t>(i)] =
            c[k - 1][static_cast<std::size_t>(i + 1)] * (i + 1);
      }
      c[k][9] = 0.0;
    }
  }

  double eval(int deriv, double u) const {
    const auto& a = c[static_cast<std::size_t>(deriv)];
    double v = 0.0;
    for (int i = 9; i >= 0; --i) v = v * u + a[static_cast<std::size_t>(i)];
    return v;
  }
};

const SmoothStep9& smoothstep9() {
  static const SmoothStep9 s;
  return s;
}

}  // namespace

void TrajectoryConfig::validate() const {
  require(start_deg.size() > 0, "TrajectoryConfig: start pose required");
  for (const auto& w : waypoints) {
    check_dim(w.target_deg, start_deg.size(), "Waypoint target");
    require(w.duration > 0.0, "Waypoint: duration must be > 0");
    require(w.hold >= 0.0, "Waypoint: hold must be >= 0");
  }
}

ReferenceTrajectory::ReferenceTrajectory(TrajectoryConfig config) {
  config.validate();
  dof_ = static_cast<int>(config.start_deg.size());
  start_rad_ = config.start_deg * kRadPerDeg;
  JointVector pose = start_rad_;
  double t = 0.0;
  for (const auto& w : config.waypoints) {
    Segment seg;
    seg.t0 = t;
    seg.duration = w.duration;
    seg.from_rad = pose;
    seg.span_rad = w.target_deg * kRadPerDeg - pose;
    segments_.push_back(seg);
    pose += seg.span_rad;
    t += w.duration + w.hold;
  }
  final_rad_ = pose;
  motion_end_ = t;
}

void ReferenceTrajectory::eval(double t,
                               std::array<JointVector, 5>& out) const {
  for (auto& v : out) v = JointVector::Zero(dof_);
  if (t <= 0.0 || segments_.empty()) {
    out[0] = t <= 0.0 ? start_rad_ : final_rad_;
    return;
  }
  // Holds are the gaps between a segment's end and the next segment's t0.
  const Segment* active = nullptr;
  JointVector hold_pose = final_rad_;
  for (const auto& seg : segments_) {
    if (t < seg.t0) break;
    if (t <= seg.t0 + seg.duration) {
      active = &seg;
      break;
    }
    hold_pose = seg.from_rad + seg.span_rad;
  }
  if (active == nullptr) {
    out[0] = hold_pose;
    return;
  }
  const double u = (t - active->t0) / active->duration;
  const auto& s9 = smoothstep9();
  double scale = 1.0;
  for (int k = 0; k < 5; ++k) {
    out[static_cast<std::size_t>(k)] = active->span_rad * (s9.eval(k, u) * scale);
    scale /= active->duration;
  }
  out[0] += active->from_rad;
}

JointVector feedforward_full(const ReferenceSample& s, const JointVector& j,
                             const std::vector<FrictionParams>& friction) {
  return j.cwiseProduct(s.theta_ddot) + s.tau +
         friction_torque(s.q[1], friction);
}

JointVector feedforward_reduced(const ReferenceSample& s,
                                const ManipulatorModel& model,
                                const JointVector& j,
                                const std::vector<FrictionParams>& friction) {
  const JointMatrix h = model.inertia(s.q[0]);
  JointMatrix hj = h;
  hj.diagonal() += j;
  return hj * s.q[2] + model.coriolis(s.q[0], s.q[1]) + model.gravity(s.q[0]) +
         friction_torque(s.q[1], friction);
}

ReferenceTable::ReferenceTable(const ReferenceTrajectory& trajectory,
                               const ManipulatorModel& model,
                               const std::vector<HysteresisParams>& hysteresis,
                               const JointVector& motor_inertia,
                               const std::vector<FrictionParams>& friction,
                               double control_period, double duration,
                               int dense_factor)
    : control_period_(control_period) {
  require(control_period > 0.0, "ReferenceTable: control period must be > 0");
  require(duration > 0.0, "ReferenceTable: duration must be > 0");
  require(dense_factor >= 1, "ReferenceTable: dense_factor must be >= 1");
  const int n = trajectory.dof();
  require(static_cast<int>(hysteresis.size()) == n &&
              static_cast<int>(friction.size()) == n &&
              motor_inertia.size() == n,
          "ReferenceTable: per-joint parameter counts must match");

  const double h = control_period / dense_factor;
  const std::size_t n_controls =
      static_cast<std::size_t>(std::llround(duration / control_period));
  const std::size_t n_dense = n_controls * static_cast<std::size_t>(dense_factor);

  // Link-side chain and reference torque on the dense grid.
  std::vector<std::array<JointVector, 5>> chain(n_dense + 1);
  std::vector<JointVector> tau(n_dense + 1);
  for (std::size_t i = 0; i <= n_dense; ++i) {
    trajectory.eval(static_cast<double>(i) * h, chain[i]);
    tau[i] = model.inverse_dynamics(chain[i][0], chain[i][1], chain[i][2]);
  }

  // Five-point stencils with edge replication; the trajectory is flat at
  // both ends, so the replicated values are exact there.
  auto at = [&](std::ptrdiff_t i) -> const JointVector& {
    if (i < 0) return tau.front();
    if (i > static_cast<std::ptrdiff_t>(n_dense)) return tau.back();
    return tau[static_cast<std::size_t>(i)];
  };
  std::vector<JointVector> tau_dot(n_dense + 1), tau_ddot(n_dense + 1);
  for (std::size_t i = 0; i <= n_dense; ++i) {
    const auto k = static_cast<std::ptrdiff_t>(i);
    tau_dot[i] =
        (-at(k + 2) + 8.0 * at(k + 1) - 8.0 * at(k - 1) + at(k - 2)) /
        (12.0 * h);
    tau_ddot[i] = (-at(k + 2) + 16.0 * at(k + 1) - 30.0 * at(k) +
                   16.0 * at(k - 1) - at(k - 2)) /
                  (12.0 * h * h);
  }

  // March the torsion reference through the inverse hysteresis model. The
  // reference carries its own memory, one inverse per joint.
  std::vector<HysteresisInverse> inverse;
  inverse.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    inverse.emplace_back(hysteresis[static_cast<std::size_t>(i)]);
  }

  samples_.reserve(n_controls + 1);
  JointVector prev_delta = JointVector::Zero(n);
  for (std::size_t i = 0; i <= n_dense; ++i) {
    JointVector delta_deg(n), slope(n);
    for (int j = 0; j < n; ++j) {
      auto& inv = inverse[static_cast<std::size_t>(j)];
      const double d = inv.step(tau[i][j], h);
      const double dir = d - prev_delta[j];
      delta_deg[j] = d;
      slope[j] = torque_slope(d, inv.state(), dir,
                              hysteresis[static_cast<std::size_t>(j)]);
      prev_delta[j] = d;
    }
    if (i % static_cast<std::size_t>(dense_factor) != 0) continue;

    ReferenceSample s;
    s.t = static_cast<double>(i) * h;
    s.q = chain[i];
    s.tau = tau[i];
    s.tau_dot = tau_dot[i];
    s.tau_ddot = tau_ddot[i];
    s.delta_deg = delta_deg;
    s.theta = s.q[0] + delta_deg * kRadPerDeg;
    s.theta_dot = s.q[1] + s.tau_dot.cwiseQuotient(slope) * kRadPerDeg;
    s.theta_ddot = s.q[2] + s.tau_ddot.cwiseQuotient(slope) * kRadPerDeg;
    s.u_full = feedforward_full(s, motor_inertia, friction);
    s.u_reduced = feedforward_reduced(s, model, motor_inertia, friction);
    samples_.push_back(std::move(s));
  }
}

}  // namespace flexjoint
