#include "tmm/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tmm {

namespace {

// normalized trapezoid CDF on the reference grid
struct ReferenceCdf {
  std::vector<double> x, cdf;

  ReferenceCdf(const std::vector<double>& rx, const std::vector<double>& rd) {
    if (rx.size() != rd.size() || rx.size() < 3)
      throw std::invalid_argument("reference density: bad sampling");
    x = rx;
    cdf.assign(rx.size(), 0.0);
    for (std::size_t i = 1; i < rx.size(); ++i)
      cdf[i] = cdf[i - 1] + 0.5 * (rx[i] - rx[i - 1]) * (std::max(rd[i], 0.0) + std::max(rd[i - 1], 0.0));
    double total = cdf.back();
    if (!(total > 0.0)) throw std::invalid_argument("reference density: zero mass");
    for (double& c : cdf) c /= total;
  }

  double operator()(double t) const {
    if (t <= x.front()) return 0.0;
    if (t >= x.back()) return 1.0;
    std::size_t hi = std::upper_bound(x.begin(), x.end(), t) - x.begin();
    double f = (t - x[hi - 1]) / (x[hi] - x[hi - 1]);
    return cdf[hi - 1] + f * (cdf[hi] - cdf[hi - 1]);
  }

  // inverse by bisection on the grid
  double quantile(double p) const {
    std::size_t hi = std::lower_bound(cdf.begin(), cdf.end(), p) - cdf.begin();
    if (hi == 0) return x.front();
    if (hi >= cdf.size()) return x.back();
    double span = cdf[hi] - cdf[hi - 1];
    double f = span > 0.0 ? (p - cdf[hi - 1]) / span : 0.0;
    return x[hi - 1] + f * (x[hi] - x[hi - 1]);
  }
};

}  // namespace

double ks_distance_to_density(std::vector<double> samples, const std::vector<double>& ref_x,
                              const std::vector<double>& ref_density) {
  if (samples.empty()) throw std::invalid_argument("ks: no samples");
  ReferenceCdf ref(ref_x, ref_density);
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    double f = ref(samples[i]);
    worst = std::max(worst, std::abs(f - static_cast<double>(i) / n));
    worst = std::max(worst, std::abs(static_cast<double>(i + 1) / n - f));
  }
  return worst;
}

Chi2Report chi2_against_density(const std::vector<double>& samples,
                                const std::vector<double>& ref_x,
                                const std::vector<double>& ref_density, int bins) {
  if (bins < 3) throw std::invalid_argument("chi2: need at least 3 bins");
  if (samples.empty()) throw std::invalid_argument("chi2: no samples");
  ReferenceCdf ref(ref_x, ref_density);

  // equal-probability interior bins; outermost edges open
  std::vector<double> edges(bins - 1);
  for (int b = 1; b < bins; ++b) edges[b - 1] = ref.quantile(static_cast<double>(b) / bins);

  std::vector<double> counts(bins, 0.0);
  for (double s : samples) {
    int b = static_cast<int>(std::lower_bound(edges.begin(), edges.end(), s) - edges.begin());
    counts[b] += 1.0;
  }
  const double expected = static_cast<double>(samples.size()) / bins;
  Chi2Report rep;
  rep.bins = bins;
  rep.dof = bins - 1;
  for (int b = 0; b < bins; ++b) {
    double d = counts[b] - expected;
    rep.statistic += d * d / expected;
  }
  rep.critical_1pct = chi2_quantile(0.99, rep.dof);
  rep.pass = rep.statistic <= rep.critical_1pct;
  return rep;
}

double chi2_quantile(double p, int dof) {
  if (dof < 1) throw std::invalid_argument("chi2_quantile: dof must be >= 1");
  // Wilson-Hilferty; z from Acklam-style rational approximation of the
  // normal quantile
  auto normal_quantile = [](double q) {
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425, phigh = 1.0 - plow;
    if (q < plow) {
      double u = std::sqrt(-2.0 * std::log(q));
      return (((((c[0] * u + c[1]) * u + c[2]) * u + c[3]) * u + c[4]) * u + c[5]) /
             ((((d[0] * u + d[1]) * u + d[2]) * u + d[3]) * u + 1.0);
    }
    if (q > phigh) {
      double u = std::sqrt(-2.0 * std::log(1.0 - q));
      return -(((((c[0] * u + c[1]) * u + c[2]) * u + c[3]) * u + c[4]) * u + c[5]) /
             ((((d[0] * u + d[1]) * u + d[2]) * u + d[3]) * u + 1.0);
    }
    double u = q - 0.5, r = u * u;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * u /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  };
  double z = normal_quantile(p);
  double k = static_cast<double>(dof);
  double t = 1.0 - 2.0 / (9.0 * k) + z * std::sqrt(2.0 / (9.0 * k));
  return k * t * t * t;
}

}  // namespace tmm
