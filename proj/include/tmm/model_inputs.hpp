#pragma once

#include <optional>
#include <vector>

namespace tmm {

// Model inputs: an even polynomial V with positive leading coefficient,
// the quartic W(y) = y^4/4 + alpha*y^2/2, and a coupling tau > 0.
struct PotentialSpec {
  // v_coeffs[d] multiplies x^d; odd-degree entries must be zero.
  std::vector<double> v_coeffs;
  double alpha = 0.0;
  double tau = 1.0;

  void validate() const;  // throws std::invalid_argument on violation

  static PotentialSpec quadratic(double alpha, double tau) {
    return PotentialSpec{{0.0, 0.0, 0.5}, alpha, tau};
  }
};

// Critical points of s -> W(s) - tau*x*s.  s1 is the global minimum; when
// the cubic s^3 + alpha*s = tau*x has three real roots there is a second
// local minimum s2 and a local maximum s3 between them in objective value.
// At the merge locus |x| = x_star the double root is reported as s2 == s3.
struct CubicCriticalPoints {
  double s1 = 0.0;
  std::optional<double> s2;
  std::optional<double> s3;
};

double eval_potential(const PotentialSpec& spec, char which, double x);
double eval_potential_derivative(const PotentialSpec& spec, char which, double x);

CubicCriticalPoints cubic_critical_points(const PotentialSpec& spec, double x);

// Half-width of the three-critical-point window on the real axis (alpha < 0),
// and of the gap in the support of the constraint on the imaginary axis
// (alpha > 0).  Zero outside the respective parameter ranges.
double x_star(const PotentialSpec& spec);
double y_star(const PotentialSpec& spec);

// V1(x) = V(x) + min_s (W(s) - tau*x*s)
double effective_field_v1(const PotentialSpec& spec, double x);

// V3(x) = objective gap between the local maximum and the second local
// minimum for |x| < x_star, zero otherwise.  Nonnegative, even, continuous.
double effective_field_v3(const PotentialSpec& spec, double x);

// Density of the constraint measure at z = i*t with respect to |dz|:
// (tau/pi) * max Re s over solutions of s^3 + alpha*s = i*tau*t.
// Exactly zero on the gap (-y_star, y_star) when alpha > 0.
double sigma2_density(const PotentialSpec& spec, double t);

}  // namespace tmm
