#include "flexjoint/observer.hpp"

#include <cmath>

namespace flexjoint {

void ObserverGains::validate() const {
  require(gain.size() > 0, "ObserverGains: gain must be non-empty");
  require((gain.array() > 0.0).all(), "ObserverGains: gains must be > 0");
}

MomentumObserver::MomentumObserver(JointVector motor_inertia,
                                   std::vector<FrictionParams> friction,
                                   ObserverGains gains)
    : motor_inertia_(std::move(motor_inertia)),
      friction_(std::move(friction)),
      gains_(std::move(gains)) {
  gains_.validate();
  check_dim(motor_inertia_, gains_.gain.size(), "MomentumObserver inertia");
  require(friction_.size() == static_cast<std::size_t>(gains_.gain.size()),
          "MomentumObserver: one FrictionParams per joint");
  require((motor_inertia_.array() > 0.0).all(),
          "MomentumObserver: inertias must be > 0");
  p_hat_ = JointVector::Zero(gains_.gain.size());
  residual_ = JointVector::Zero(gains_.gain.size());
}

void MomentumObserver::reset(const JointVector& thetad) {
  check_dim(thetad, gains_.gain.size(), "MomentumObserver::reset thetad");
  p_hat_ = motor_inertia_.cwiseProduct(thetad);
  residual_.setZero();
}

JointVector MomentumObserver::update(const JointVector& u_held,
                                     const JointVector& thetad_prev,
                                     const JointVector& thetad_now,
                                     double dt) {
  require(dt > 0.0, "MomentumObserver::update: dt must be > 0");
  const Eigen::Index n = gains_.gain.size();
  check_dim(u_held, n, "MomentumObserver::update u");
  check_dim(thetad_prev, n, "MomentumObserver::update thetad_prev");
  check_dim(thetad_now, n, "MomentumObserver::update thetad_now");

  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& fr = friction_[static_cast<std::size_t>(i)];
    const double L = gains_.gain[i];
    // Forcing of p_hat' + L p_hat = phi(t), reconstructed linearly between
    // the interval endpoints; u is constant over the interval.
    const double phi0 = u_held[i] - friction_torque(thetad_prev[i], fr) +
                        L * motor_inertia_[i] * thetad_prev[i];
    const double phi1 = u_held[i] - friction_torque(thetad_now[i], fr) +
                        L * motor_inertia_[i] * thetad_now[i];
    const double z = L * dt;
    const double em = -std::expm1(-z);  // 1 - exp(-z), accurate for small z
    // w0, w1: exact convolution weights of the hat functions.
    const double w1 = (z + std::expm1(-z)) / (L * z);
    const double w0 = em / L - w1;
    p_hat_[i] = (1.0 - em) * p_hat_[i] + w0 * phi0 + w1 * phi1;
    residual_[i] = L * (p_hat_[i] - motor_inertia_[i] * thetad_now[i]);
  }
  return residual_;
}

VirtualSensor::VirtualSensor(const std::vector<HysteresisParams>& params) {
  require(!params.empty(), "VirtualSensor: need at least one joint");
  inverse_.reserve(params.size());
  for (const auto& p : params) inverse_.emplace_back(p);
}

JointVector VirtualSensor::update(const JointVector& residual, double dt) {
  check_dim(residual, static_cast<Eigen::Index>(inverse_.size()),
            "VirtualSensor::update residual");
  JointVector delta(residual.size());
  for (Eigen::Index i = 0; i < residual.size(); ++i) {
    delta[i] =
        inverse_[static_cast<std::size_t>(i)].step(residual[i], dt) *
        kRadPerDeg;
  }
  return delta;
}

JointVector VirtualSensor::torsion_estimate() const {
  JointVector delta(static_cast<Eigen::Index>(inverse_.size()));
  for (Eigen::Index i = 0; i < delta.size(); ++i) {
    delta[i] = inverse_[static_cast<std::size_t>(i)].delta_deg() * kRadPerDeg;
  }
  return delta;
}

}  // namespace flexjoint
