#include "tmm/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace tmm {

namespace {

// Newton on the Legendre recurrence; nodes symmetric about 0.
GaussRule build_rule(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  int m = (n + 1) / 2;
  for (int i = 1; i <= m; ++i) {
    double z = std::cos(M_PI * (i - 0.25) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    rule.nodes[i - 1] = -z;
    rule.nodes[n - i] = z;
    rule.weights[i - 1] = 2.0 / ((1.0 - z * z) * pp * pp);
    rule.weights[n - i] = rule.weights[i - 1];
  }
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int npoints) {
  if (npoints < 1) throw std::invalid_argument("gauss_legendre: npoints < 1");
  static std::map<int, GaussRule> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(npoints);
  if (it == cache.end()) it = cache.emplace(npoints, build_rule(npoints)).first;
  return it->second;
}

PanelRule composite_rule(double a, double b, int npanels, int npoints) {
  const GaussRule& g = gauss_legendre(npoints);
  PanelRule rule;
  rule.x.reserve(static_cast<std::size_t>(npanels) * npoints);
  rule.w.reserve(static_cast<std::size_t>(npanels) * npoints);
  double h = (b - a) / npanels;
  for (int p = 0; p < npanels; ++p) {
    double lo = a + p * h;
    double mid = lo + 0.5 * h;
    for (int q = 0; q < npoints; ++q) {
      rule.x.push_back(mid + 0.5 * h * g.nodes[q]);
      rule.w.push_back(0.5 * h * g.weights[q]);
    }
  }
  return rule;
}

double integrate_panels(const std::function<double(double)>& f, double a, double b,
                        int npanels, int npoints) {
  const GaussRule& g = gauss_legendre(npoints);
  double h = (b - a) / npanels;
  double total = 0.0;
  for (int p = 0; p < npanels; ++p) {
    double mid = a + (p + 0.5) * h;
    double acc = 0.0;
    for (int q = 0; q < npoints; ++q) acc += g.weights[q] * f(mid + 0.5 * h * g.nodes[q]);
    total += 0.5 * h * acc;
  }
  return total;
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol, double abs_tol, int npoints, int max_panels) {
  double prev = integrate_panels(f, a, b, 1, npoints);
  for (int n = 2; n <= max_panels; n *= 2) {
    double cur = integrate_panels(f, a, b, n, npoints);
    if (std::abs(cur - prev) <= rel_tol * std::abs(cur) + abs_tol) return cur;
    prev = cur;
  }
  return prev;
}

}  // namespace tmm
