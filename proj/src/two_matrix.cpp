#include "tmm/two_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

namespace tmm {

RowMatrix two_matrix_interaction() {
  RowMatrix c(3, 3);
  c(0, 0) = c(1, 1) = c(2, 2) = 1.0;
  c(0, 1) = c(1, 0) = -0.5;
  c(1, 2) = c(2, 1) = -0.5;
  c(0, 2) = c(2, 0) = 0.0;
  return c;
}

namespace {

// Large-|x| proxy for the effective potential of mu1; the log coefficient
// 2*(c11*m1 + c12*m2) = 4/3 for the Nikishin weights.
double mu1_tail_proxy(const PotentialSpec& spec, double x) {
  return effective_field_v1(spec, x) - (4.0 / 3.0) * std::log(std::max(std::abs(x), 1.0));
}

double auto_real_radius(const PotentialSpec& spec) {
  for (double r = 2.0; r <= 1024.0; r *= 1.5) {
    double min_val = mu1_tail_proxy(spec, 0.0);
    for (int k = 1; k <= 200; ++k)
      min_val = std::min(min_val, mu1_tail_proxy(spec, r * k / 200.0));
    if (mu1_tail_proxy(spec, r) < min_val + 5.0) continue;
    // the repulsive window of V3 must fit well inside the grid, with room
    // for the support of mu3 beyond it
    return std::max(r, 1.5 * x_star(spec) + 2.0);
  }
  throw std::runtime_error("two_matrix: field does not confine mu1 within radius 1024");
}

double sigma2_mass_within(const PotentialSpec& spec, double t_max) {
  // midpoint sum is plenty here; only used to pick a truncation radius
  const int n = 4000;
  double h = t_max / n;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) acc += sigma2_density(spec, (i + 0.5) * h);
  return 2.0 * acc * h;
}

double auto_imag_radius(const PotentialSpec& spec, double needed_mass) {
  double r = 1.0;
  while (sigma2_mass_within(spec, r) < needed_mass) {
    r *= 1.5;
    if (r > 1e6) throw std::runtime_error("two_matrix: constraint mass does not reach 2/3");
  }
  return std::max(2.0 * r, 4.0);
}

std::vector<char> smoothed_support_mask(const DiscreteMeasure& m, double threshold_fraction) {
  const std::size_t n = m.masses.size();
  double floor = threshold_fraction * m.max_density();
  std::vector<char> mask(n);
  for (std::size_t i = 0; i < n; ++i) mask[i] = m.density(i) > floor ? 1 : 0;
  // closing: fill interior gaps shorter than 3 cells
  std::size_t i = 0;
  while (i < n) {
    if (!mask[i]) {
      std::size_t j = i;
      while (j < n && !mask[j]) ++j;
      if (i > 0 && j < n && j - i < 3) std::fill(mask.begin() + i, mask.begin() + j, 1);
      i = j;
    } else {
      ++i;
    }
  }
  // opening: drop isolated runs shorter than 3 cells
  i = 0;
  while (i < n) {
    if (mask[i]) {
      std::size_t j = i;
      while (j < n && mask[j]) ++j;
      if (j - i < 3) std::fill(mask.begin() + i, mask.begin() + j, 0);
      i = j;
    } else {
      ++i;
    }
  }
  return mask;
}

bool support_touches_boundary(const DiscreteMeasure& m, double threshold_fraction) {
  std::vector<char> mask = smoothed_support_mask(m, threshold_fraction);
  std::size_t n = mask.size();
  return n >= 2 && (mask[0] || mask[1] || mask[n - 1] || mask[n - 2]);
}

DiscreteMeasure constraint_slack(const DiscreteMeasure& mu2) {
  DiscreteMeasure slack;
  slack.grid = mu2.grid;
  slack.masses.resize(mu2.masses.size());
  for (std::size_t i = 0; i < mu2.masses.size(); ++i)
    slack.masses[i] = std::max(0.0, mu2.caps[i] - mu2.masses[i]);
  return slack;
}

}  // namespace

std::vector<std::pair<double, double>> support_intervals(const DiscreteMeasure& measure,
                                                         double threshold_fraction) {
  std::vector<char> mask = smoothed_support_mask(measure, threshold_fraction);
  std::vector<std::pair<double, double>> intervals;
  const std::size_t n = mask.size();
  std::size_t i = 0;
  while (i < n) {
    if (mask[i]) {
      std::size_t j = i;
      while (j < n && mask[j]) ++j;
      intervals.emplace_back(measure.grid.edges[i], measure.grid.edges[j]);
      i = j;
    } else {
      ++i;
    }
  }
  return intervals;
}

double origin_gap_halfwidth(const DiscreteMeasure& measure, double threshold_fraction) {
  std::vector<char> mask = smoothed_support_mask(measure, threshold_fraction);
  double gap = std::numeric_limits<double>::max();
  bool any = false;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (!mask[i]) continue;
    any = true;
    double lo = measure.grid.edges[i], hi = measure.grid.edges[i + 1];
    if (lo <= 0.0 && hi >= 0.0) return 0.0;
    gap = std::min(gap, std::min(std::abs(lo), std::abs(hi)));
  }
  return any ? gap : 0.0;
}

EdgeFit edge_exponent_check(const DiscreteMeasure& measure, double edge_coordinate,
                            int direction) {
  EdgeFit fit;
  fit.edge_coordinate = edge_coordinate;
  const Grid& grid = measure.grid;
  const std::size_t n = grid.size();

  if (std::abs(edge_coordinate) >= grid.truncation_radius - 3.0 * grid.width(n / 2)) {
    fit.note = "edge at the truncation boundary";
    return fit;
  }

  // cells strictly on the support side, ordered by distance from the edge
  std::vector<std::pair<double, double>> pts;  // (distance, density)
  for (std::size_t i = 0; i < n; ++i) {
    double d = direction > 0 ? grid.nodes[i] - edge_coordinate : edge_coordinate - grid.nodes[i];
    if (d <= 0.0) continue;
    pts.emplace_back(d, measure.density(i));
  }
  std::sort(pts.begin(), pts.end());

  // skip the 2 cells nearest the edge (the estimated edge sits within them),
  // fit over the next 16 at most, stopping where the profile turns over
  // (narrow vanishing layers sit under a decaying envelope)
  const std::size_t skip = 2, max_window = 16, min_window = 5;
  std::vector<double> lx, ly;
  double running_max = 0.0;
  for (std::size_t k = skip; k < pts.size() && lx.size() < max_window; ++k) {
    if (pts[k].second <= 0.0) break;
    if (pts[k].second < 0.8 * running_max) break;
    running_max = std::max(running_max, pts[k].second);
    lx.push_back(std::log(pts[k].first));
    ly.push_back(std::log(pts[k].second));
  }
  if (lx.size() < min_window) {
    fit.note = "too few support cells in the fit window";
    return fit;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(lx.size());
  for (std::size_t k = 0; k < lx.size(); ++k) {
    sx += lx[k];
    sy += ly[k];
    sxx += lx[k] * lx[k];
    sxy += lx[k] * ly[k];
  }
  double denom = m * sxx - sx * sx;
  if (std::abs(denom) < 1e-14) {
    fit.note = "degenerate abscissas";
    return fit;
  }
  double slope = (m * sxy - sx * sy) / denom;
  double intercept = (sy - slope * sx) / m;
  double rss = 0.0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    double r = ly[k] - (intercept + slope * lx[k]);
    rss += r * r;
  }
  fit.exponent = slope;
  fit.fit_residual = std::sqrt(rss / m);
  fit.indeterminate = false;
  return fit;
}

EquilibriumProblem assemble_problem(const PotentialSpec& spec, const TwoMatrixOptions& options) {
  spec.validate();
  double r1 = options.real_radius > 0.0 ? options.real_radius : auto_real_radius(spec);
  double r2 =
      options.imag_radius > 0.0 ? options.imag_radius : auto_imag_radius(spec, 2.0 / 3.0 + 0.2);

  auto real_grid =
      std::make_shared<Grid>(Grid::uniform_symmetric(Axis::real_line, r1, options.real_cells));
  std::shared_ptr<Grid> imag_grid;
  std::vector<double> caps;
  for (int attempt = 0;; ++attempt) {
    imag_grid = std::make_shared<Grid>(
        Grid::uniform_symmetric(Axis::imaginary_line, r2, options.imag_cells));
    caps.assign(imag_grid->size(), 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < imag_grid->size(); ++i) {
      caps[i] = sigma2_density(spec, imag_grid->nodes[i]) * imag_grid->width(i);
      total += caps[i];
    }
    if (total >= 2.0 / 3.0 + 0.2) break;
    if (attempt >= 40) throw std::runtime_error("two_matrix: cannot reach feasible cap mass");
    r2 *= 1.5;
  }

  EquilibriumProblem problem;
  problem.interaction = two_matrix_interaction();

  MeasureSpec mu1;
  mu1.grid = real_grid;
  mu1.target_mass = 1.0;
  mu1.field.resize(real_grid->size());
  for (std::size_t i = 0; i < real_grid->size(); ++i)
    mu1.field[i] = effective_field_v1(spec, real_grid->nodes[i]);
  mu1.field_fn = [spec](double x) { return effective_field_v1(spec, x); };

  MeasureSpec mu2;
  mu2.grid = imag_grid;
  mu2.target_mass = 2.0 / 3.0;
  mu2.field.assign(imag_grid->size(), 0.0);
  mu2.field_fn = [](double) { return 0.0; };
  mu2.caps = caps;

  MeasureSpec mu3;
  mu3.grid = real_grid;
  mu3.target_mass = 1.0 / 3.0;
  mu3.field.resize(real_grid->size());
  for (std::size_t i = 0; i < real_grid->size(); ++i)
    mu3.field[i] = effective_field_v3(spec, real_grid->nodes[i]);
  mu3.field_fn = [spec](double x) { return effective_field_v3(spec, x); };

  problem.measures = {std::move(mu1), std::move(mu2), std::move(mu3)};
  return problem;
}

TwoMatrixSolution solve(const PotentialSpec& spec, const TwoMatrixOptions& options) {
  TwoMatrixOptions opts = options;
  TwoMatrixSolution out;
  out.spec = spec;

  SolveOptions solver;
  solver.tol = opts.tol;
  solver.max_iter = opts.max_iter;
  solver.exec = opts.exec;

  EquilibriumProblem problem;
  for (int expansion = 0;; ++expansion) {
    problem = assemble_problem(spec, opts);
    out.base = minimize(problem, solver);
    out.expansions = expansion;
    if (!support_touches_boundary(out.base.measures[0], 1e-8) ||
        expansion >= opts.max_expansions)
      break;
    opts.real_radius =
        (opts.real_radius > 0.0 ? opts.real_radius
                                : problem.measures[0].grid->truncation_radius) *
        1.5;
  }

  out.real_radius = problem.measures[0].grid->truncation_radius;
  out.imag_radius = problem.measures[1].grid->truncation_radius;

  const DiscreteMeasure& mu1 = out.base.measures[0];
  const DiscreteMeasure& mu2 = out.base.measures[1];
  const DiscreteMeasure& mu3 = out.base.measures[2];

  out.support_mu1 = support_intervals(mu1);

  DiscreteMeasure slack = constraint_slack(mu2);
  out.c2 = origin_gap_halfwidth(slack);
  out.c3 = origin_gap_halfwidth(mu3);

  out.mu2_boundary_density = std::max(mu2.density(0), mu2.density(mu2.masses.size() - 1));
  out.mu3_boundary_density = std::max(mu3.density(0), mu3.density(mu3.masses.size() - 1));

  for (const auto& [lo, hi] : out.support_mu1) {
    out.edge_exponents.push_back(edge_exponent_check(mu1, lo, +1));
    out.edge_exponents.push_back(edge_exponent_check(mu1, hi, -1));
  }
  if (out.c2 > 0.0) {
    out.edge_exponents.push_back(edge_exponent_check(slack, out.c2, +1));
    out.edge_exponents.push_back(edge_exponent_check(slack, -out.c2, -1));
  }
  if (out.c3 > 0.0) {
    out.edge_exponents.push_back(edge_exponent_check(mu3, out.c3, +1));
    out.edge_exponents.push_back(edge_exponent_check(mu3, -out.c3, -1));
  }

  out.regularity = regularity_report(out);
  return out;
}

RegularityReport regularity_report(const TwoMatrixSolution& solution) {
  RegularityReport rep;
  rep.regular = true;
  auto fail = [&](const std::string& note) {
    rep.regular = false;
    rep.notes.push_back(note);
  };

  const DiscreteMeasure& mu1 = solution.base.measures[0];
  const DiscreteMeasure& mu2 = solution.base.measures[1];
  const DiscreteMeasure& mu3 = solution.base.measures[2];

  // density positive in the interior of each support interval of mu1
  double mu1_max = mu1.max_density();
  for (const auto& [lo, hi] : solution.support_mu1) {
    double len = hi - lo;
    double min_interior = std::numeric_limits<double>::max();
    for (std::size_t i = 0; i < mu1.grid.size(); ++i) {
      double x = mu1.grid.nodes[i];
      if (x < lo + 0.1 * len || x > hi - 0.1 * len) continue;
      min_interior = std::min(min_interior, mu1.density(i));
    }
    if (min_interior < 0.02 * mu1_max) fail("mu1 density vanishes in a support interior");
  }

  for (const EdgeFit& fit : solution.edge_exponents) {
    if (fit.indeterminate) continue;
    if (fit.exponent < 0.35 || fit.exponent > 0.65)
      fail("edge exponent outside the square-root band");
  }

  if (solution.c2 == 0.0) {
    DiscreteMeasure slack = constraint_slack(mu2);
    std::size_t mid = slack.grid.size() / 2;
    if (slack.density(mid) < 0.02 * slack.max_density())
      fail("constraint slack density vanishes at the origin with c2 = 0");
  }
  if (solution.c3 == 0.0) {
    std::size_t mid = mu3.grid.size() / 2;
    if (mu3.density(mid) < 0.02 * mu3.max_density())
      fail("mu3 density vanishes at the origin with c3 = 0");
  }

  // strict variational inequality away from the supports of mu1 and mu3
  for (std::size_t mj : {std::size_t{0}, std::size_t{2}}) {
    const DiscreteMeasure& m = solution.base.measures[mj];
    const std::vector<double>& u = solution.base.effective_potentials[mj];
    std::vector<char> mask = smoothed_support_mask(m, 1e-8);
    double level = solution.base.el[mj].level;
    const int buffer = 4;
    double min_margin = std::numeric_limits<double>::max();
    bool any = false;
    for (std::size_t i = 0; i < mask.size(); ++i) {
      if (mask[i]) continue;
      bool near_support = false;
      for (int d = -buffer; d <= buffer; ++d) {
        long long k = static_cast<long long>(i) + d;
        if (k >= 0 && k < static_cast<long long>(mask.size()) && mask[k]) near_support = true;
      }
      if (near_support) continue;
      any = true;
      min_margin = std::min(min_margin, u[i] - level);
    }
    if (any && min_margin < 1e-3)
      fail(mj == 0 ? "variational inequality margin collapses off S(mu1)"
                   : "variational inequality margin collapses off S(mu3)");
  }

  if (rep.regular) rep.notes.push_back("all regularity checks passed");
  return rep;
}

}  // namespace tmm
