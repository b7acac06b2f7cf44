#include "flexjoint/control.hpp"

#include <algorithm>

namespace flexjoint {

void GainSet::validate() const {
  require(kp.size() > 0 && kp.size() == kd.size(),
          "GainSet: kp and kd must have matching sizes");
  require((kp.array() > 0.0).all() && (kd.array() > 0.0).all(),
          "GainSet: gains must be > 0");
}

namespace {

const ReferenceSample& sample_at(const ReferenceTable& table, std::size_t k) {
  return table.at(std::min(k, table.size() - 1));
}

}  // namespace

ControlOne::ControlOne(std::shared_ptr<const ReferenceTable> table,
                       GainSet gains, Variant variant)
    : table_(std::move(table)), gains_(std::move(gains)), variant_(variant) {
  require(table_ != nullptr, "ControlOne: reference table required");
  gains_.validate();
}

JointVector ControlOne::compute(std::size_t k, double /*t*/,
                                const JointVector& theta_meas,
                                const JointVector& thetad_meas) {
  const ReferenceSample& s = sample_at(*table_, k);
  if (variant_ == Variant::kFeedforward) return s.u_full;
  const bool transformed = variant_ == Variant::kFull;
  const JointVector& ref = transformed ? s.theta : s.q[0];
  const JointVector& ref_dot = transformed ? s.theta_dot : s.q[1];
  return gains_.kp.cwiseProduct(ref - theta_meas) +
         gains_.kd.cwiseProduct(ref_dot - thetad_meas) + s.u_full;
}

ControlTwo::ControlTwo(std::shared_ptr<const ReferenceTable> table,
                       GainSet gains, Variant variant,
                       MomentumObserver observer, VirtualSensor sensor)
    : table_(std::move(table)),
      gains_(std::move(gains)),
      variant_(variant),
      observer_(std::move(observer)),
      sensor_(std::move(sensor)) {
  require(table_ != nullptr, "ControlTwo: reference table required");
  gains_.validate();
  residual_ = JointVector::Zero(gains_.kp.size());
  torsion_ = JointVector::Zero(gains_.kp.size());
}

JointVector ControlTwo::compute(std::size_t k, double /*t*/,
                                const JointVector& theta_meas,
                                const JointVector& thetad_meas) {
  const ReferenceSample& s = sample_at(*table_, k);

  if (variant_ == Variant::kFeedforwardPdVs) {
    if (!primed_) {
      observer_.reset(thetad_meas);
      primed_ = true;
    } else {
      residual_ = observer_.update(last_u_, last_thetad_, thetad_meas,
                                   table_->control_period());
      torsion_ = sensor_.update(residual_, table_->control_period());
    }
  }

  JointVector u;
  if (variant_ == Variant::kFeedforward) {
    u = s.u_reduced;
  } else {
    u = gains_.kp.cwiseProduct(s.q[0] - theta_meas) +
        gains_.kd.cwiseProduct(s.q[1] - thetad_meas) + s.u_reduced;
    if (variant_ == Variant::kFeedforwardPdVs) {
      u += gains_.kp.cwiseProduct(torsion_);
    }
  }
  last_u_ = u;
  last_thetad_ = thetad_meas;
  return u;
}

}  // namespace flexjoint
