#pragma once

#include <complex>
#include <vector>

#include "flexjoint/types.hpp"

namespace flexjoint {

/// Linearized single elastic joint in the Laplace domain:
///
///   link:  (H_hat s^2 + K) q = K theta
///   motor: (J s^2 + B s + K) theta = u + K q
///
/// plus the torsion-observer lag 1/(s/L + 1) when the predicted torsion is
/// fed back through a proportional gain.
struct LinearJointModel {
  double link_inertia = 7.25;      ///< H_hat (kg m^2)
  double motor_inertia = 1.0;      ///< J (kg m^2)
  double viscous = 1.0;            ///< B (N m s/rad)
  double stiffness = 300.0 * kDegPerRad;  ///< K (N m/rad)
  double observer_gain = 100.0;    ///< L (1/s)

  void validate() const;
};

/// Real polynomial, coefficients ascending in degree.
using PolynomialR = std::vector<double>;

PolynomialR poly_add(const PolynomialR& a, const PolynomialR& b);
PolynomialR poly_mul(const PolynomialR& a, const PolynomialR& b);
PolynomialR poly_scale(const PolynomialR& a, double s);
/// Drops trailing near-zero leading coefficients.
PolynomialR poly_trim(PolynomialR a, double rel_tol = 0.0);
double poly_eval(const PolynomialR& a, std::complex<double> s_real_imag);

/// All complex roots via companion-matrix eigenvalues. Throws
/// std::invalid_argument for degree < 1 after trimming.
std::vector<std::complex<double>> polynomial_roots(const PolynomialR& p);

struct PoleZero {
  std::vector<std::complex<double>> poles;
  std::vector<std::complex<double>> zeros;
};

/// Poles and zeros of theta(s)/u(s) = Pl / (Pl Pm - K^2) for the nominal
/// (observer-free) plant.
PoleZero nominal_poles_zeros(const LinearJointModel& m);

/// Closed-loop characteristic polynomial of the torsion feedback in the
/// loop-gain form 1 + Kp G(s) = 0 with the commonly reported
/// G = (K - Pl ((s/L + 1) Pm - 1)) / (K^2 (s/L + 1)); returned expanded as
/// denominator + Kp * numerator.
PolynomialR characteristic_polynomial_reported(const LinearJointModel& m,
                                            double kp);

/// Independent closed-loop elimination of the same feedback:
/// (s/L + 1)(Pl Pm - K^2) - Kp H_hat s^2 = 0. The two forms do not agree
/// term by term; both are exposed so the discrepancy stays visible.
PolynomialR characteristic_polynomial_derived(const LinearJointModel& m,
                                              double kp);

enum class CharacteristicForm { kDerived, kReported };

struct LocusPoint {
  double kp = 0.0;
  std::vector<std::complex<double>> roots;
};

/// Roots of the characteristic polynomial over a positive gain grid, with
/// consecutive points matched by minimum-total-distance pairing so branches
/// stay continuous.
std::vector<LocusPoint> root_locus(const LinearJointModel& m,
                                   const std::vector<double>& kp_grid,
                                   CharacteristicForm form =
                                       CharacteristicForm::kDerived);

}  // namespace flexjoint
