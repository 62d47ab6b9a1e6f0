#include "tmm/model_inputs.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tmm {

void PotentialSpec::validate() const {
  if (v_coeffs.empty())
    throw std::invalid_argument("potential: V has no coefficients");
  if (v_coeffs.back() == 0.0 && v_coeffs.size() > 1)
    throw std::invalid_argument("potential: trailing zero coefficient");
  std::size_t deg = v_coeffs.size() - 1;
  if (deg % 2 != 0 || v_coeffs[deg] <= 0.0)
    throw std::invalid_argument("potential: V must be even with positive leading coefficient");
  for (std::size_t d = 1; d < v_coeffs.size(); d += 2)
    if (v_coeffs[d] != 0.0)
      throw std::invalid_argument("potential: V has an odd-degree term");
  if (!(tau > 0.0))
    throw std::invalid_argument("potential: tau must be positive");
}

double eval_potential(const PotentialSpec& spec, char which, double x) {
  if (which == 'W' || which == 'w') {
    double x2 = x * x;
    return 0.25 * x2 * x2 + 0.5 * spec.alpha * x2;
  }
  double acc = 0.0;  // Horner
  for (std::size_t i = spec.v_coeffs.size(); i-- > 0;) acc = acc * x + spec.v_coeffs[i];
  return acc;
}

double eval_potential_derivative(const PotentialSpec& spec, char which, double x) {
  if (which == 'W' || which == 'w') return x * x * x + spec.alpha * x;
  double acc = 0.0;
  for (std::size_t i = spec.v_coeffs.size(); i-- > 1;)
    acc = acc * x + static_cast<double>(i) * spec.v_coeffs[i];
  return acc;
}

namespace {

// Real roots of t^3 + p*t + q = 0, ascending.  Trigonometric branch for
// three real roots, Cardano otherwise; both are branch-stable near the
// discriminant-zero locus.
int depressed_cubic_roots(double p, double q, double roots[3]) {
  if (p == 0.0 && q == 0.0) {
    roots[0] = 0.0;
    return 1;
  }
  double disc = -4.0 * p * p * p - 27.0 * q * q;
  double scale = std::max(std::abs(p) * std::abs(p) * std::abs(p), q * q);
  if (disc > 1e-14 * scale) {
    // three distinct real roots; requires p < 0
    double m = 2.0 * std::sqrt(-p / 3.0);
    double arg = 3.0 * q / (p * m);
    arg = std::clamp(arg, -1.0, 1.0);
    double theta = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k)
      roots[k] = m * std::cos(theta - 2.0 * M_PI * k / 3.0);
    std::sort(roots, roots + 3);
    return 3;
  }
  if (disc >= -1e-14 * scale && p < 0.0) {
    // double root at the merge locus
    double u = (q >= 0.0 ? 1.0 : -1.0) * std::sqrt(-p / 3.0);
    roots[0] = u;           // double root (local extrema merged)
    roots[1] = -2.0 * u;    // simple root
    std::sort(roots, roots + 2);
    return 2;
  }
  // one real root (Cardano)
  double half_q = 0.5 * q;
  double r = std::sqrt(half_q * half_q + p * p * p / 27.0);
  double u = std::cbrt(-half_q + r);
  double v = std::cbrt(-half_q - r);
  if (std::abs(u) < std::abs(v)) std::swap(u, v);
  if (u != 0.0) v = -p / (3.0 * u);  // avoid cancellation in u + v
  roots[0] = u + v;
  return 1;
}

double newton_refine(double s, double p, double q) {
  auto residual = [&](double t) { return (t * t + p) * t + q; };
  for (int it = 0; it < 2; ++it) {
    double f = residual(s);
    double fp = 3.0 * s * s + p;
    if (fp == 0.0) break;
    double trial = s - f / fp;
    if (std::abs(residual(trial)) <= std::abs(f)) s = trial;  // safeguard near double roots
  }
  return s;
}

}  // namespace

CubicCriticalPoints cubic_critical_points(const PotentialSpec& spec, double x) {
  const double p = spec.alpha;
  const double q = -spec.tau * x;  // stationarity: s^3 + alpha*s - tau*x = 0
  double roots[3];
  int n = depressed_cubic_roots(p, q, roots);
  for (int k = 0; k < n; ++k) roots[k] = newton_refine(roots[k], p, q);

  CubicCriticalPoints out;
  if (n == 1) {
    out.s1 = roots[0];
    return out;
  }
  auto objective = [&](double s) {
    return eval_potential(spec, 'W', s) - spec.tau * x * s;
  };
  if (n == 2) {
    // merged pair: the double root is simultaneously s2 and s3
    double simple, dbl;
    double f0 = 3.0 * roots[0] * roots[0] + p;
    if (std::abs(f0) > std::abs(3.0 * roots[1] * roots[1] + p)) {
      simple = roots[0];
      dbl = roots[1];
    } else {
      simple = roots[1];
      dbl = roots[0];
    }
    out.s1 = simple;
    out.s2 = dbl;
    out.s3 = dbl;
    return out;
  }
  // three distinct roots: outer two are local minima, middle is the maximum
  double lo = roots[0], mid = roots[1], hi = roots[2];
  double flo = objective(lo), fhi = objective(hi);
  double tie = 1e-14 * (1.0 + std::abs(flo) + std::abs(fhi));
  if (std::abs(flo - fhi) <= tie) {
    out.s1 = std::max(lo, hi);  // deterministic pick at the symmetric tie
    out.s2 = std::min(lo, hi);
  } else if (flo < fhi) {
    out.s1 = lo;
    out.s2 = hi;
  } else {
    out.s1 = hi;
    out.s2 = lo;
  }
  out.s3 = mid;
  return out;
}

double x_star(const PotentialSpec& spec) {
  if (spec.alpha >= 0.0) return 0.0;
  return 2.0 / spec.tau * std::pow(-spec.alpha / 3.0, 1.5);
}

double y_star(const PotentialSpec& spec) {
  if (spec.alpha <= 0.0) return 0.0;
  return 2.0 / spec.tau * std::pow(spec.alpha / 3.0, 1.5);
}

double effective_field_v1(const PotentialSpec& spec, double x) {
  CubicCriticalPoints cp = cubic_critical_points(spec, x);
  double min_val = eval_potential(spec, 'W', cp.s1) - spec.tau * x * cp.s1;
  return eval_potential(spec, 'V', x) + min_val;
}

double effective_field_v3(const PotentialSpec& spec, double x) {
  if (spec.alpha >= 0.0) return 0.0;
  if (std::abs(x) >= x_star(spec)) return 0.0;
  CubicCriticalPoints cp = cubic_critical_points(spec, x);
  if (!cp.s2 || !cp.s3) return 0.0;
  auto objective = [&](double s) {
    return eval_potential(spec, 'W', s) - spec.tau * x * s;
  };
  double v = objective(*cp.s3) - objective(*cp.s2);
  return std::max(v, 0.0);
}

double sigma2_density(const PotentialSpec& spec, double t) {
  // Substituting s = i*u turns s^3 + alpha*s = i*tau*t into the real cubic
  // u^3 - alpha*u + tau*t = 0.  Three real u-roots means all s-roots are
  // purely imaginary (density zero); otherwise the conjugate pair
  // u = -u0/2 +- i*b gives max Re s = b with b = sqrt(3*u0^2 - 4*alpha)/2.
  const double p = -spec.alpha;
  const double q = spec.tau * t;
  double roots[3];
  int n = depressed_cubic_roots(p, q, roots);
  if (n >= 2) return 0.0;
  double u0 = newton_refine(roots[0], p, q);
  double disc = 3.0 * u0 * u0 + 4.0 * p;  // = 3u0^2 - 4*alpha
  if (disc <= 0.0) return 0.0;
  return spec.tau / (2.0 * M_PI) * std::sqrt(disc);
}

}  // namespace tmm
