#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>

namespace flexjoint {

/// Upper bound on the number of joints; keeps joint-sized vectors on the stack.
inline constexpr int kMaxDof = 8;

using JointVector =
    Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDof, 1>;
using JointMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                  Eigen::ColMajor, kMaxDof, kMaxDof>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kDegPerRad = 180.0 / kPi;
inline constexpr double kRadPerDeg = kPi / 180.0;

/// Planar end-effector position (horizontal X, vertical Z).
struct CartesianPoint {
  double x = 0.0;
  double z = 0.0;
};

/// Thrown when an integration step produces NaN or Inf; the caller should
/// reduce the step size or fix the configuration.
class NonFiniteStateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void check_dim(const JointVector& v, Eigen::Index dof,
                      const char* what) {
  if (v.size() != dof) {
    throw std::invalid_argument(std::string(what) + ": expected " +
                                std::to_string(dof) + " entries, got " +
                                std::to_string(v.size()));
  }
}

inline bool all_finite(const JointVector& v) { return v.allFinite(); }

inline void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace flexjoint
