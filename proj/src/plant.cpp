#include "flexjoint/plant.hpp"

#include <cmath>

#include <Eigen/Dense>

namespace flexjoint {

void PlantParams::validate() const {
  require(model != nullptr, "PlantParams: model must be set");
  const int n = model->dof();
  check_dim(motor_inertia, n, "PlantParams motor_inertia");
  check_dim(joint_damping, n, "PlantParams joint_damping");
  require(static_cast<int>(friction.size()) == n,
          "PlantParams: one FrictionParams per joint");
  require(static_cast<int>(hysteresis.size()) == n,
          "PlantParams: one HysteresisParams per joint");
  require((motor_inertia.array() > 0.0).all(),
          "PlantParams: motor inertias must be > 0");
  require((joint_damping.array() >= 0.0).all(),
          "PlantParams: joint damping must be >= 0");
  require(encoder_bits >= 0, "PlantParams: encoder_bits must be >= 0");
  for (const auto& f : friction) f.validate();
  for (const auto& h : hysteresis) h.validate();
}

PlantState PlantState::at_rest(const JointVector& pose_rad) {
  PlantState s;
  s.q = pose_rad;
  s.theta = pose_rad;
  s.qd = JointVector::Zero(pose_rad.size());
  s.thetad = JointVector::Zero(pose_rad.size());
  s.hyst.assign(static_cast<std::size_t>(pose_rad.size()), HysteresisState{});
  return s;
}

bool PlantState::finite() const {
  if (!(all_finite(q) && all_finite(qd) && all_finite(theta) &&
        all_finite(thetad))) {
    return false;
  }
  for (const auto& h : hyst) {
    if (!std::isfinite(h.x) || !std::isfinite(h.x_int)) return false;
  }
  return true;
}

double quantize_encoder(double theta, int bits) {
  if (bits <= 0) return theta;
  const double dq = 2.0 * kPi / std::pow(2.0, bits);
  return std::floor(theta / dq) * dq;
}

Plant::Plant(PlantParams params) : params_(std::move(params)) {
  params_.validate();
}

JointVector Plant::joint_torque(const PlantState& s) const {
  const int n = dof();
  JointVector tau(n);
  for (int i = 0; i < n; ++i) {
    const double delta_deg = (s.theta[i] - s.q[i]) * kDegPerRad;
    const double delta_rate_deg = (s.thetad[i] - s.qd[i]) * kDegPerRad;
    tau[i] = torque(delta_deg, s.hyst[static_cast<std::size_t>(i)],
                    params_.hysteresis[static_cast<std::size_t>(i)]) +
             params_.joint_damping[i] * delta_rate_deg;
  }
  return tau;
}

PlantState Plant::derivatives(const PlantState& s, const JointVector& u) const {
  const int n = dof();
  check_dim(u, n, "Plant::derivatives u");

  const JointVector tau = joint_torque(s);
  const JointMatrix h = params_.model->inertia(s.q);
  const JointVector rhs =
      tau - params_.model->coriolis(s.q, s.qd) - params_.model->gravity(s.q);
  const JointVector qdd = h.ldlt().solve(rhs);
  if (!all_finite(qdd)) {
    throw NonFiniteStateError("Plant::derivatives: link solve failed");
  }

  PlantState d;
  d.q = s.qd;
  d.qd = qdd;
  d.theta = s.thetad;
  d.thetad = (u - friction_torque(s.thetad, params_.friction) - tau)
                 .cwiseQuotient(params_.motor_inertia);
  d.hyst.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double delta_rate_deg = (s.thetad[i] - s.qd[i]) * kDegPerRad;
    const double rate =
        state_rate(s.hyst[static_cast<std::size_t>(i)].x, delta_rate_deg,
                   params_.hysteresis[static_cast<std::size_t>(i)]);
    d.hyst[static_cast<std::size_t>(i)].x = rate;
    d.hyst[static_cast<std::size_t>(i)].x_int = rate;
  }
  return d;
}

Plant::StateVec Plant::pack(const PlantState& s) const {
  const int n = dof();
  StateVec v(kStatesPerJoint * n);
  v.segment(0, n) = s.q;
  v.segment(n, n) = s.qd;
  v.segment(2 * n, n) = s.theta;
  v.segment(3 * n, n) = s.thetad;
  for (int i = 0; i < n; ++i) {
    v[4 * n + i] = s.hyst[static_cast<std::size_t>(i)].x;
    v[5 * n + i] = s.hyst[static_cast<std::size_t>(i)].x_int;
  }
  return v;
}

PlantState Plant::unpack(const StateVec& v) const {
  const int n = dof();
  PlantState s;
  s.q = v.segment(0, n);
  s.qd = v.segment(n, n);
  s.theta = v.segment(2 * n, n);
  s.thetad = v.segment(3 * n, n);
  s.hyst.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    s.hyst[static_cast<std::size_t>(i)].x = v[4 * n + i];
    s.hyst[static_cast<std::size_t>(i)].x_int = v[5 * n + i];
  }
  return s;
}

Plant::StateVec Plant::derivatives_flat(const StateVec& v,
                                        const JointVector& u) const {
  return pack(derivatives(unpack(v), u));
}

void Plant::step(PlantState& s, const JointVector& u, double dt) const {
  require(dt > 0.0, "Plant::step: dt must be > 0");
  const StateVec y = pack(s);
  const StateVec k1 = derivatives_flat(y, u);
  const StateVec k2 = derivatives_flat(y + 0.5 * dt * k1, u);
  const StateVec k3 = derivatives_flat(y + 0.5 * dt * k2, u);
  const StateVec k4 = derivatives_flat(y + dt * k3, u);
  const StateVec next =
      y + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  if (!next.allFinite()) {
    throw NonFiniteStateError("Plant::step: state became non-finite");
  }
  s = unpack(next);
}

}  // namespace flexjoint
