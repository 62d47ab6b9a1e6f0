#include "tmm/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

namespace tmm {

namespace {

constexpr double kSupportDensityFraction = 1e-9;  // support = density above this x max
constexpr double kCapSlackFraction = 1e-9;

bool vector_even(const std::vector<double>& v, double tol) {
  std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i)
    if (std::abs(v[i] - v[n - 1 - i]) > tol * (1.0 + std::abs(v[i]))) return false;
  return true;
}

}  // namespace

void EquilibriumProblem::validate() const {
  if (measures.empty()) throw std::invalid_argument("equilibrium: no measures");
  std::size_t n = measures.size();
  if (interaction.rows != n || interaction.cols != n)
    throw std::invalid_argument("equilibrium: interaction matrix size mismatch");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (std::abs(interaction(i, j) - interaction(j, i)) > 1e-14)
        throw std::invalid_argument("equilibrium: interaction matrix not symmetric");
  if (!check_positive_definite(interaction).positive_definite)
    throw std::invalid_argument("equilibrium: interaction matrix not positive definite");
  for (const MeasureSpec& m : measures) {
    if (!m.grid) throw std::invalid_argument("equilibrium: missing grid");
    if (!(m.target_mass > 0.0)) throw std::invalid_argument("equilibrium: mass must be > 0");
    if (m.field.size() != m.grid->size())
      throw std::invalid_argument("equilibrium: field sample size mismatch");
    if (!m.caps.empty()) {
      if (m.caps.size() != m.grid->size())
        throw std::invalid_argument("equilibrium: caps size mismatch");
      double total = 0.0;
      for (double c : m.caps) {
        if (!(c >= 0.0)) throw std::invalid_argument("equilibrium: negative cap");
        total += c;
      }
      if (total < m.target_mass - 1e-12)
        throw std::invalid_argument("equilibrium: caps infeasible for target mass");
    }
  }
}

bool EquilibriumProblem::has_even_symmetry() const {
  for (const MeasureSpec& m : measures) {
    if (!vector_even(m.field, 1e-10)) return false;
    if (!m.caps.empty() && !vector_even(m.caps, 1e-10)) return false;
  }
  return true;
}

AssembledProblem::AssembledProblem(const EquilibriumProblem& problem, Exec exec)
    : problem_(std::make_shared<EquilibriumProblem>(problem)), exec_(exec) {
  problem_->validate();
  const auto& measures = problem_->measures;
  std::vector<std::shared_ptr<const Grid>> unique;
  grid_id_.resize(measures.size());
  for (std::size_t j = 0; j < measures.size(); ++j) {
    std::size_t id = unique.size();
    for (std::size_t k = 0; k < unique.size(); ++k) {
      if (unique[k] == measures[j].grid || unique[k]->same_nodes(*measures[j].grid)) {
        id = k;
        break;
      }
    }
    if (id == unique.size()) unique.push_back(measures[j].grid);
    grid_id_[j] = id;
  }
  block_.assign(unique.size(), std::vector<RowMatrix>(unique.size()));
  const RowMatrix& c = problem_->interaction;
  for (std::size_t j = 0; j < measures.size(); ++j) {
    for (std::size_t i = 0; i < measures.size(); ++i) {
      if (c(j, i) == 0.0) continue;
      RowMatrix& blk = block_[grid_id_[j]][grid_id_[i]];
      if (blk.rows == 0)
        blk = log_kernel_matrix(*unique[grid_id_[j]], *unique[grid_id_[i]], exec_);
    }
  }
}

void AssembledProblem::gradient(const std::vector<std::vector<double>>& w,
                                std::vector<std::vector<double>>& g) const {
  const auto& measures = problem_->measures;
  const RowMatrix& c = problem_->interaction;
  g.resize(measures.size());
  for (std::size_t j = 0; j < measures.size(); ++j) {
    g[j] = measures[j].field;
    for (std::size_t i = 0; i < measures.size(); ++i) {
      double cji = c(j, i);
      if (cji == 0.0) continue;
      matvec_add(block_[grid_id_[j]][grid_id_[i]], w[i], 2.0 * cji, g[j], exec_);
    }
  }
}

double AssembledProblem::energy(const std::vector<std::vector<double>>& w) const {
  std::vector<std::vector<double>> g;
  gradient(w, g);
  // E = 1/2 sum_j w_j . (U_j + V_j)
  double acc = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j)
    acc += 0.5 * (dot(w[j], g[j]) + dot(w[j], problem_->measures[j].field));
  return acc;
}

double AssembledProblem::hessian_quadratic_form(const std::vector<std::vector<double>>& d) const {
  const RowMatrix& c = problem_->interaction;
  double acc = 0.0;
  std::vector<double> tmp;
  for (std::size_t j = 0; j < d.size(); ++j) {
    for (std::size_t i = 0; i < d.size(); ++i) {
      double cji = c(j, i);
      if (cji == 0.0) continue;
      matvec(block_[grid_id_[j]][grid_id_[i]], d[i], tmp, exec_);
      acc += 2.0 * cji * dot(d[j], tmp);
    }
  }
  return acc;
}

std::vector<double> project_capped_simplex(const std::vector<double>& weights,
                                           const std::vector<double>& caps,
                                           double target_mass) {
  const std::size_t n = weights.size();
  const bool capped = !caps.empty();
  if (capped && caps.size() != n)
    throw std::invalid_argument("project_capped_simplex: caps size mismatch");
  if (capped) {
    double total = 0.0;
    for (double c : caps) total += c;
    if (total < target_mass - 1e-12)
      throw std::invalid_argument("project_capped_simplex: infeasible caps");
  }
  auto mass_at = [&](double shift) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double v = weights[i] - shift;
      if (v < 0.0) v = 0.0;
      if (capped && v > caps[i]) v = caps[i];
      s += v;
    }
    return s;
  };
  double lo = std::numeric_limits<double>::max();
  double hi = -std::numeric_limits<double>::max();
  for (double w : weights) {
    lo = std::min(lo, w);
    hi = std::max(hi, w);
  }
  lo -= target_mass + 1.0;  // mass(lo) >= target as long as caps are feasible
  hi += 1.0;                // mass(hi) = 0 <= target
  while (mass_at(lo) < target_mass) {
    double span = hi - lo;
    lo -= span;
    if (!std::isfinite(lo)) throw std::runtime_error("project_capped_simplex: bracket failed");
  }
  const double tol = 1e-12 * std::max(1.0, target_mass);
  double mid = lo;
  for (int it = 0; it < 200; ++it) {
    mid = 0.5 * (lo + hi);
    double m = mass_at(mid);
    if (std::abs(m - target_mass) <= tol) break;
    if (m > target_mass)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= std::numeric_limits<double>::epsilon() * (std::abs(lo) + std::abs(hi)))
      break;
  }
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    double v = weights[i] - mid;
    if (v < 0.0) v = 0.0;
    if (capped && v > caps[i]) v = caps[i];
    out[i] = v;
  }
  return out;
}

namespace {

void symmetrize(std::vector<double>& w) {
  std::size_t n = w.size();
  for (std::size_t i = 0; i < n / 2; ++i) {
    double avg = 0.5 * (w[i] + w[n - 1 - i]);
    w[i] = avg;
    w[n - 1 - i] = avg;
  }
}

struct ElState {
  ElMeasureReport report;
};

// Three-way complementarity: |U - level| on free support cells,
// level - U on empty cells, U - level on cap-saturated cells.
ElMeasureReport el_report_for(const MeasureSpec& spec, const std::vector<double>& w,
                              const std::vector<double>& u) {
  const Grid& grid = *spec.grid;
  const std::size_t n = w.size();
  const bool capped = !spec.caps.empty();
  double max_density = 0.0;
  for (std::size_t i = 0; i < n; ++i) max_density = std::max(max_density, w[i] / grid.width(i));
  const double density_floor = kSupportDensityFraction * max_density;

  double level_num = 0.0, level_den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double density = w[i] / grid.width(i);
    if (density <= density_floor) continue;
    if (capped && spec.caps[i] - w[i] <= std::max(1e-14, kCapSlackFraction * spec.caps[i]))
      continue;  // saturated cells legitimately sit below the level
    level_num += w[i] * u[i];
    level_den += w[i];
  }
  if (level_den == 0.0) {
    for (std::size_t i = 0; i < n; ++i) {
      double density = w[i] / grid.width(i);
      if (density <= density_floor) continue;
      level_num += w[i] * u[i];
      level_den += w[i];
    }
  }
  ElMeasureReport rep;
  rep.level = level_den > 0.0 ? level_num / level_den : 0.0;
  rep.off_support_margin = std::numeric_limits<double>::max();
  bool any_off = false;
  for (std::size_t i = 0; i < n; ++i) {
    double density = w[i] / grid.width(i);
    double gap = u[i] - rep.level;
    if (capped && spec.caps[i] - w[i] <= std::max(1e-14, kCapSlackFraction * spec.caps[i])) {
      // saturated (including zero-cap cells, which have no free direction)
      rep.residual = std::max(rep.residual, std::max(0.0, gap));
    } else if (density <= density_floor) {
      rep.residual = std::max(rep.residual, std::max(0.0, -gap));
      rep.off_support_margin = std::min(rep.off_support_margin, gap);
      any_off = true;
    } else {
      rep.residual = std::max(rep.residual, std::abs(gap));
    }
  }
  if (!any_off) rep.off_support_margin = 0.0;
  return rep;
}

}  // namespace

EquilibriumSolution minimize(const EquilibriumProblem& problem, const SolveOptions& options) {
  AssembledProblem assembled(problem, options.exec);
  const auto& measures = problem.measures;
  const std::size_t nm = measures.size();
  const bool sym = options.symmetrize && problem.has_even_symmetry();

  std::vector<std::vector<double>> w(nm), g, w_prev, g_prev, trial, g_trial;
  for (std::size_t j = 0; j < nm; ++j) {
    const Grid& grid = *measures[j].grid;
    std::vector<double> init(grid.size(), measures[j].target_mass / grid.size());
    w[j] = project_capped_simplex(init, measures[j].caps, measures[j].target_mass);
    if (sym) symmetrize(w[j]);
  }

  auto energy_from = [&](const std::vector<std::vector<double>>& wv,
                         const std::vector<std::vector<double>>& gv) {
    double acc = 0.0;
    for (std::size_t j = 0; j < nm; ++j)
      acc += 0.5 * (dot(wv[j], gv[j]) + dot(wv[j], measures[j].field));
    return acc;
  };

  assembled.gradient(w, g);
  double e = energy_from(w, g);

  double step = 1.0;
  {
    double gnorm2 = 0.0;
    for (const auto& gj : g) gnorm2 += dot(gj, gj);
    if (gnorm2 > 0.0) step = std::clamp(1.0 / std::sqrt(gnorm2), 1e-6, 1e6);
  }

  std::vector<ElMeasureReport> el(nm);
  double residual = std::numeric_limits<double>::max();
  std::size_t it = 0;
  bool converged = false;

  for (; it < options.max_iter; ++it) {
    residual = 0.0;
    for (std::size_t j = 0; j < nm; ++j) {
      el[j] = el_report_for(measures[j], w[j], g[j]);
      residual = std::max(residual, el[j].residual);
    }
    if (residual < options.tol) {
      converged = true;
      break;
    }

    // projected BB step with monotone backtracking
    double beta = step;
    double e_new = e;
    bool moved = false;
    for (int half = 0; half < 60; ++half) {
      trial.resize(nm);
      for (std::size_t j = 0; j < nm; ++j) {
        std::vector<double> shifted(w[j].size());
        for (std::size_t i = 0; i < shifted.size(); ++i) shifted[i] = w[j][i] - beta * g[j][i];
        trial[j] =
            project_capped_simplex(shifted, measures[j].caps, measures[j].target_mass);
        if (sym) symmetrize(trial[j]);
      }
      assembled.gradient(trial, g_trial);
      e_new = energy_from(trial, g_trial);
      if (e_new <= e + 1e-12 * (1.0 + std::abs(e))) {
        moved = true;
        break;
      }
      beta *= 0.5;
    }
    if (!moved) break;  // numerically stationary

    w_prev = std::move(w);
    g_prev = std::move(g);
    w = std::move(trial);
    g = std::move(g_trial);
    e = e_new;

    // Barzilai-Borwein step from the accepted move
    double sty = 0.0, sts = 0.0;
    for (std::size_t j = 0; j < nm; ++j)
      for (std::size_t i = 0; i < w[j].size(); ++i) {
        double s = w[j][i] - w_prev[j][i];
        double y = g[j][i] - g_prev[j][i];
        sts += s * s;
        sty += s * y;
      }
    if (sty > 1e-300)
      step = std::clamp(sts / sty, 1e-6, 1e6);
    else
      step = std::clamp(step * 2.0, 1e-6, 1e6);
  }

  residual = 0.0;
  for (std::size_t j = 0; j < nm; ++j) {
    el[j] = el_report_for(measures[j], w[j], g[j]);
    residual = std::max(residual, el[j].residual);
  }
  converged = converged || residual < options.tol;

  EquilibriumSolution sol;
  sol.measures.resize(nm);
  for (std::size_t j = 0; j < nm; ++j) {
    sol.measures[j].grid = *measures[j].grid;
    sol.measures[j].masses = w[j];
    sol.measures[j].caps = measures[j].caps;
  }
  sol.effective_potentials = g;
  sol.el = el;
  sol.energy_value = e;
  sol.el_residual = residual;
  sol.iterations = it;
  sol.converged = converged;
  return sol;
}

double energy(const EquilibriumProblem& problem, const std::vector<std::vector<double>>& masses) {
  return AssembledProblem(problem).energy(masses);
}

std::vector<double> effective_potential(const EquilibriumProblem& problem,
                                        const EquilibriumSolution& solution, std::size_t j) {
  std::vector<std::vector<double>> w;
  w.reserve(solution.measures.size());
  for (const auto& m : solution.measures) w.push_back(m.masses);
  std::vector<std::vector<double>> g;
  AssembledProblem(problem).gradient(w, g);
  return g.at(j);
}

GrowthReport check_growth_condition(const EquilibriumProblem& problem) {
  GrowthReport report;
  report.pass = true;
  const RowMatrix& c = problem.interaction;
  for (std::size_t j = 0; j < problem.measures.size(); ++j) {
    const MeasureSpec& m = problem.measures[j];
    double coef = 0.0;
    for (std::size_t i = 0; i < problem.measures.size(); ++i)
      coef += c(j, i) * problem.measures[i].target_mass;
    double r = m.grid->truncation_radius;
    auto field = [&](double x) {
      return m.field_fn ? m.field_fn(x) : m.field.empty() ? 0.0 : m.field.back();
    };
    auto phi = [&](double x) { return field(x) - coef * std::log(1.0 + x * x); };
    GrowthReport::PerMeasure pm;
    pm.at_r = phi(r);
    pm.at_2r = phi(2.0 * r);
    pm.at_4r = phi(4.0 * r);
    double slack = 1e-9 * (1.0 + std::abs(pm.at_r));
    pm.pass = pm.at_2r >= pm.at_r - slack && pm.at_4r >= pm.at_2r - slack;
    report.pass = report.pass && pm.pass;
    report.measures.push_back(pm);
  }
  return report;
}

PositiveDefiniteReport check_positive_definite(const RowMatrix& c) {
  PositiveDefiniteReport rep;
  const std::size_t n = c.rows;
  Eigen::MatrixXd m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = c(i, j);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  rep.smallest_eigenvalue = es.eigenvalues().minCoeff();
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  rep.positive_definite = llt.info() == Eigen::Success && rep.smallest_eigenvalue > 0.0;
  return rep;
}

}  // namespace tmm
