#include "flexjoint/trace.hpp"

#include <cstdio>
#include <stdexcept>

namespace flexjoint {

SimTrace::SimTrace(int dof, double period) : dof_(dof), period_(period) {
  require(dof >= 1, "SimTrace: dof must be >= 1");
  require(period > 0.0, "SimTrace: period must be > 0");
}

void SimTrace::append(double t, const JointVector& q, const JointVector& qd,
                      const JointVector& theta, const JointVector& thetad,
                      const JointVector& delta, const JointVector& tau,
                      const JointVector& u, const JointVector& r,
                      const JointVector& delta_est) {
  data_.push_back(t);
  for (const JointVector* v : {&q, &qd, &theta, &thetad, &delta, &tau, &u, &r,
                               &delta_est}) {
    check_dim(*v, dof_, "SimTrace::append");
    for (Eigen::Index i = 0; i < dof_; ++i) data_.push_back((*v)[i]);
  }
  ++rows_;
}

std::string SimTrace::header() const {
  static const char* kBlocks[] = {"q",   "qd", "th", "thd", "d",
                                  "tau", "u",  "r",  "dest"};
  std::string h = "t";
  for (const char* b : kBlocks) {
    for (int i = 1; i <= dof_; ++i) {
      h += ",";
      h += b;
      h += std::to_string(i);
    }
  }
  return h;
}

void SimTrace::write_csv(const std::filesystem::path& path) const {
  std::FILE* f = std::fopen(path.string().c_str(), "w");
  if (f == nullptr) {
    throw std::runtime_error("SimTrace::write_csv: cannot open " +
                             path.string());
  }
  std::fprintf(f, "%s\n", header().c_str());
  const int w = width();
  for (std::size_t row = 0; row < rows_; ++row) {
    const double* p = data_.data() + row * static_cast<std::size_t>(w);
    for (int c = 0; c < w; ++c) {
      std::fprintf(f, c == 0 ? "%.15g" : ",%.15g", p[c]);
    }
    std::fputc('\n', f);
  }
  std::fclose(f);
}

}  // namespace flexjoint
