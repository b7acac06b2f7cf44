#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "flexjoint/types.hpp"

namespace flexjoint {

/// Uniformly sampled record of every loop signal. Row layout:
/// t, q, qd, theta, thetad, delta, tau, u, r, delta_est (joint-major blocks,
/// angles in radians, torques in N m).
class SimTrace {
 public:
  SimTrace(int dof, double period);

  void append(double t, const JointVector& q, const JointVector& qd,
              const JointVector& theta, const JointVector& thetad,
              const JointVector& delta, const JointVector& tau,
              const JointVector& u, const JointVector& r,
              const JointVector& delta_est);

  std::size_t rows() const { return rows_; }
  int dof() const { return dof_; }
  double period() const { return period_; }
  int width() const { return 1 + 9 * dof_; }

  double t(std::size_t row) const { return value(row, 0); }
  double q(std::size_t row, int joint) const { return field(row, 0, joint); }
  double qd(std::size_t row, int joint) const { return field(row, 1, joint); }
  double theta(std::size_t row, int joint) const { return field(row, 2, joint); }
  double thetad(std::size_t row, int joint) const { return field(row, 3, joint); }
  double delta(std::size_t row, int joint) const { return field(row, 4, joint); }
  double tau(std::size_t row, int joint) const { return field(row, 5, joint); }
  double u(std::size_t row, int joint) const { return field(row, 6, joint); }
  double residual(std::size_t row, int joint) const { return field(row, 7, joint); }
  double delta_est(std::size_t row, int joint) const { return field(row, 8, joint); }

  /// Column header, e.g. "t,q1,q2,...,dest1,dest2" for two joints.
  std::string header() const;

  /// Writes the full trace as UTF-8 CSV with >= 12 significant digits.
  void write_csv(const std::filesystem::path& path) const;

  const std::vector<double>& data() const { return data_; }

 private:
  double value(std::size_t row, int col) const {
    return data_[row * static_cast<std::size_t>(width()) +
                 static_cast<std::size_t>(col)];
  }
  double field(std::size_t row, int block, int joint) const {
    return value(row, 1 + block * dof_ + joint);
  }

  int dof_;
  double period_;
  std::size_t rows_ = 0;
  std::vector<double> data_;
};

}  // namespace flexjoint
