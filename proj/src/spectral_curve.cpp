#include "tmm/spectral_curve.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace tmm {

namespace {

using cplx = std::complex<double>;

// integral over one real-axis cell [a, b] of density/(z - s)
cplx cell_transform_real(double a, double b, double density, cplx z) {
  return density * (std::log(z - a) - std::log(z - b));
}

// integral over one imaginary-axis cell, s = i t, t in [a, b].  The vertical
// segment z - it can cross the principal branch cut when Re z < 0; the
// crossing contributes a fixed -2*pi*density.
cplx cell_transform_imag(double a, double b, double density, cplx z) {
  cplx val = cplx(0.0, 1.0) * (std::log(z - cplx(0.0, b)) - std::log(z - cplx(0.0, a)));
  if (z.real() < 0.0 && z.imag() > a && z.imag() < b) val -= cplx(2.0 * M_PI, 0.0);
  return density * val;
}

}  // namespace

std::complex<double> cauchy_transform(const DiscreteMeasure& measure, std::complex<double> z) {
  const Grid& g = measure.grid;
  if (g.axis == Axis::real_line) {
    if (z.imag() == 0.0 && z.real() >= g.edges.front() && z.real() <= g.edges.back())
      throw std::invalid_argument(
          "cauchy_transform: boundary value on the support requires a side flag");
    cplx acc = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
      acc += cell_transform_real(g.edges[i], g.edges[i + 1], measure.density(i), z);
    return acc;
  }
  if (z.real() == 0.0 && z.imag() >= g.edges.front() && z.imag() <= g.edges.back())
    throw std::invalid_argument(
        "cauchy_transform: boundary value on the support requires a side flag");
  cplx acc = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    acc += cell_transform_imag(g.edges[i], g.edges[i + 1], measure.density(i), z);
  return acc;
}

double cauchy_transform_pv(const DiscreteMeasure& measure, double x) {
  const Grid& g = measure.grid;
  if (g.axis != Axis::real_line)
    throw std::invalid_argument("cauchy_transform_pv: real-axis measures only");
  for (double e : g.edges)
    if (x == e)
      throw std::invalid_argument("cauchy_transform_pv: evaluation point is a cell edge");
  double acc = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    // the containing cell's principal value uses the same antiderivative:
    // the two log singularities cancel symmetrically
    acc += measure.density(i) *
           (std::log(std::abs(x - g.edges[i])) - std::log(std::abs(x - g.edges[i + 1])));
  }
  return acc;
}

std::complex<double> cauchy_transform_boundary(const DiscreteMeasure& measure, double x,
                                               Side side) {
  const Grid& g = measure.grid;
  double pv = cauchy_transform_pv(measure, x);
  double rho = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (x >= g.edges[i] && x < g.edges[i + 1]) {
      rho = measure.density(i);
      break;
    }
  double jump = M_PI * rho;
  return side == Side::above ? cplx(pv, -jump) : cplx(pv, jump);
}

std::complex<double> xi1(const PotentialSpec& spec, const DiscreteMeasure& mu1,
                         std::complex<double> z) {
  // V' extended to complex arguments via its coefficients
  cplx acc = 0.0;
  for (std::size_t i = spec.v_coeffs.size(); i-- > 1;)
    acc = acc * z + static_cast<double>(i) * spec.v_coeffs[i];
  return acc - cauchy_transform(mu1, z);
}

std::complex<double> xi1_boundary(const PotentialSpec& spec, const DiscreteMeasure& mu1,
                                  double x, Side side) {
  return eval_potential_derivative(spec, 'V', x) - cauchy_transform_boundary(mu1, x, side);
}

QuarticProbeReport quartic_residual_probe(const PotentialSpec& spec, const DiscreteMeasure& mu1,
                                          double sample_radius, int nsamples) {
  QuarticProbeReport report;
  report.sample_radius = sample_radius;
  if (spec.v_coeffs.size() != 3) {
    report.note = "probe implemented for quadratic V only";
    return report;
  }
  if (nsamples < 24) nsamples = 24;

  // xi^4 = e1(z) xi^3 - e2(z) xi^2 + e3(z) xi - e4(z); pole counting bounds
  // deg(e1, e2, e3) <= 1 and deg(e4) <= 2: nine unknowns.
  constexpr int unknowns = 9;
  std::vector<cplx> zs(nsamples), xis(nsamples);
  for (int k = 0; k < nsamples; ++k) {
    double theta = 2.0 * M_PI * (k + 0.5) / nsamples;
    zs[k] = sample_radius * cplx(std::cos(theta), std::sin(theta));
    xis[k] = xi1(spec, mu1, zs[k]);
  }

  // fit on even samples, validate on odd; rows weighted by 1/|xi|^4 so the
  // residual is relative
  int nfit = nsamples / 2;
  Eigen::MatrixXd a(2 * nfit, unknowns);
  Eigen::VectorXd rhs(2 * nfit);
  for (int r = 0; r < nfit; ++r) {
    int k = 2 * r;
    cplx z = zs[k], xi = xis[k];
    double wgt = 1.0 / std::pow(std::abs(xi), 4);
    cplx cols[unknowns] = {xi * xi * xi, z * xi * xi * xi, -xi * xi, -z * xi * xi,
                           xi,           z * xi,           -1.0,     -z,
                           -z * z};
    for (int c = 0; c < unknowns; ++c) {
      a(2 * r, c) = wgt * cols[c].real();
      a(2 * r + 1, c) = wgt * cols[c].imag();
    }
    cplx target = xi * xi * xi * xi;
    rhs(2 * r) = wgt * target.real();
    rhs(2 * r + 1) = wgt * target.imag();
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  double cond = svd.singularValues()(0) / svd.singularValues()(unknowns - 1);
  if (!std::isfinite(cond) || cond > 1e12) {
    report.note = "ill-conditioned fit, no claim made";
    return report;
  }
  Eigen::VectorXd coef = svd.solve(rhs);

  double worst = 0.0;
  for (int k = 1; k < nsamples; k += 2) {
    cplx z = zs[k], xi = xis[k];
    cplx e1 = coef(0) + coef(1) * z;
    cplx e2 = coef(2) + coef(3) * z;
    cplx e3 = coef(4) + coef(5) * z;
    cplx e4 = coef(6) + coef(7) * z + coef(8) * z * z;
    cplx res = xi * xi * xi * xi - e1 * xi * xi * xi + e2 * xi * xi - e3 * xi + e4;
    worst = std::max(worst, std::abs(res) / std::pow(std::abs(xi), 4));
  }
  report.ok = true;
  report.max_held_out_residual = worst;
  report.coefficients = {{coef(0), coef(1)},
                         {coef(2), coef(3)},
                         {coef(4), coef(5)},
                         {coef(6), coef(7), coef(8)}};
  return report;
}

}  // namespace tmm
