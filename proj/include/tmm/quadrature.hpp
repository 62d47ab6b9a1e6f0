#pragma once

#include <functional>
#include <vector>

namespace tmm {

// Gauss-Legendre nodes/weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

const GaussRule& gauss_legendre(int npoints);

// Fixed composite rule: npanels equal panels over [a, b], npoints each.
struct PanelRule {
  std::vector<double> x;
  std::vector<double> w;
};

PanelRule composite_rule(double a, double b, int npanels, int npoints);

double integrate_panels(const std::function<double(double)>& f, double a, double b,
                        int npanels, int npoints = 40);

// Panel subdivision until two successive refinements agree to rel_tol
// (absolute floor abs_tol for integrals near zero).
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol = 1e-12, double abs_tol = 1e-300,
                          int npoints = 40, int max_panels = 4096);

}  // namespace tmm
