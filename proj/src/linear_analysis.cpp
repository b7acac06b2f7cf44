#include "flexjoint/linear_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Eigenvalues>

namespace flexjoint {

void LinearJointModel::validate() const {
  require(link_inertia > 0.0, "LinearJointModel: link inertia must be > 0");
  require(motor_inertia > 0.0, "LinearJointModel: motor inertia must be > 0");
  require(viscous > 0.0, "LinearJointModel: viscous must be > 0");
  require(stiffness > 0.0, "LinearJointModel: stiffness must be > 0");
  require(observer_gain > 0.0, "LinearJointModel: observer gain must be > 0");
}

PolynomialR poly_add(const PolynomialR& a, const PolynomialR& b) {
  PolynomialR r(std::max(a.size(), b.size()), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  return r;
}

PolynomialR poly_mul(const PolynomialR& a, const PolynomialR& b) {
  if (a.empty() || b.empty()) return {};
  PolynomialR r(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  return r;
}

PolynomialR poly_scale(const PolynomialR& a, double s) {
  PolynomialR r = a;
  for (double& c : r) c *= s;
  return r;
}

PolynomialR poly_trim(PolynomialR a, double rel_tol) {
  double scale = 0.0;
  for (double c : a) scale = std::max(scale, std::abs(c));
  const double tol = rel_tol * scale;
  while (!a.empty() && std::abs(a.back()) <= tol) a.pop_back();
  return a;
}

double poly_eval(const PolynomialR& a, std::complex<double> s) {
  std::complex<double> v = 0.0;
  for (auto it = a.rbegin(); it != a.rend(); ++it) v = v * s + *it;
  return std::abs(v);
}

std::vector<std::complex<double>> polynomial_roots(const PolynomialR& p) {
  PolynomialR a = poly_trim(p);
  if (a.size() < 2) {
    throw std::invalid_argument("polynomial_roots: degree must be >= 1");
  }
  const std::size_t n = a.size() - 1;
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(
      static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i + 1 < n; ++i) {
    companion(static_cast<Eigen::Index>(i + 1), static_cast<Eigen::Index>(i)) =
        1.0;
  }
  for (std::size_t i = 0; i < n; ++i) {
    companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(n - 1)) =
        -a[i] / a[n];
  }
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("polynomial_roots: eigensolver failed");
  }
  std::vector<std::complex<double>> roots(n);
  for (std::size_t i = 0; i < n; ++i) {
    roots[i] = solver.eigenvalues()[static_cast<Eigen::Index>(i)];
  }
  std::sort(roots.begin(), roots.end(), [](const auto& x, const auto& y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });
  return roots;
}

namespace {

PolynomialR link_poly(const LinearJointModel& m) {
  return {m.stiffness, 0.0, m.link_inertia};
}

PolynomialR motor_poly(const LinearJointModel& m) {
  return {m.stiffness, m.viscous, m.motor_inertia};
}

PolynomialR observer_poly(const LinearJointModel& m) {
  return {1.0, 1.0 / m.observer_gain};
}

PolynomialR coupled_poly(const LinearJointModel& m) {
  PolynomialR plpm = poly_mul(link_poly(m), motor_poly(m));
  plpm[0] -= m.stiffness * m.stiffness;
  return plpm;  // Pl Pm - K^2
}

}  // namespace

PoleZero nominal_poles_zeros(const LinearJointModel& m) {
  m.validate();
  PoleZero pz;
  pz.zeros = polynomial_roots(link_poly(m));
  pz.poles = polynomial_roots(coupled_poly(m));
  return pz;
}

PolynomialR characteristic_polynomial_reported(const LinearJointModel& m,
                                            double kp) {
  m.validate();
  require(kp >= 0.0, "characteristic_polynomial_reported: kp must be >= 0");
  const PolynomialR denom =
      poly_scale(observer_poly(m), m.stiffness * m.stiffness);
  PolynomialR inner = poly_mul(observer_poly(m), motor_poly(m));
  inner[0] -= 1.0;  // (s/L + 1) Pm - 1
  PolynomialR numer = poly_scale(poly_mul(link_poly(m), inner), -1.0);
  numer[0] += m.stiffness;  // K - Pl ((s/L + 1) Pm - 1)
  return poly_add(denom, poly_scale(numer, kp));
}

PolynomialR characteristic_polynomial_derived(const LinearJointModel& m,
                                              double kp) {
  m.validate();
  require(kp >= 0.0, "characteristic_polynomial_derived: kp must be >= 0");
  PolynomialR p = poly_mul(observer_poly(m), coupled_poly(m));
  p[2] -= kp * m.link_inertia;  // - Kp H_hat s^2
  return p;
}

std::vector<LocusPoint> root_locus(const LinearJointModel& m,
                                   const std::vector<double>& kp_grid,
                                   CharacteristicForm form) {
  require(!kp_grid.empty(), "root_locus: grid must be non-empty");
  require(std::is_sorted(kp_grid.begin(), kp_grid.end()),
          "root_locus: grid must be sorted ascending");
  require(kp_grid.front() > 0.0, "root_locus: gains must be positive");

  std::vector<LocusPoint> locus;
  locus.reserve(kp_grid.size());
  for (double kp : kp_grid) {
    const PolynomialR poly = form == CharacteristicForm::kDerived
                                 ? characteristic_polynomial_derived(m, kp)
                                 : characteristic_polynomial_reported(m, kp);
    LocusPoint point;
    point.kp = kp;
    point.roots = polynomial_roots(poly);
    if (!locus.empty() && locus.back().roots.size() == point.roots.size()) {
      // Greedy minimum-total-distance matching against the previous point
      // keeps each branch in a fixed slot.
      const auto& prev = locus.back().roots;
      const std::size_t n = prev.size();
      std::vector<std::size_t> order(n);
      std::iota(order.begin(), order.end(), 0);
      std::vector<std::size_t> best = order;
      double best_cost = std::numeric_limits<double>::infinity();
      do {
        double cost = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          cost += std::abs(point.roots[order[i]] - prev[i]);
        }
        if (cost < best_cost) {
          best_cost = cost;
          best = order;
        }
      } while (std::next_permutation(order.begin(), order.end()));
      std::vector<std::complex<double>> matched(n);
      for (std::size_t i = 0; i < n; ++i) matched[i] = point.roots[best[i]];
      point.roots = std::move(matched);
    }
    locus.push_back(std::move(point));
  }
  return locus;
}

}  // namespace flexjoint
