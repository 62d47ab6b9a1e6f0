#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "tmm/grid.hpp"
#include "tmm/kernels.hpp"

namespace tmm {

struct MeasureSpec {
  std::shared_ptr<const Grid> grid;
  double target_mass = 1.0;
  std::vector<double> field;             // sampled at grid nodes
  std::vector<double> caps;              // per-cell mass bounds; empty = none
  std::function<double(double)> field_fn;  // off-grid evaluation (growth checks)
};

struct EquilibriumProblem {
  std::vector<MeasureSpec> measures;
  RowMatrix interaction;  // symmetric positive definite

  void validate() const;
  bool has_even_symmetry() const;  // all fields/caps even on symmetric grids
};

struct ElMeasureReport {
  double level = 0.0;           // support-averaged effective potential
  double residual = 0.0;        // complementary residual, sup over cells
  double off_support_margin = 0.0;  // min of U - level over zero-mass cells
};

struct EquilibriumSolution {
  std::vector<DiscreteMeasure> measures;
  std::vector<std::vector<double>> effective_potentials;
  std::vector<ElMeasureReport> el;
  double energy_value = 0.0;
  double el_residual = 0.0;  // max over measures
  std::size_t iterations = 0;
  bool converged = false;
};

struct SolveOptions {
  double tol = 1e-6;
  std::size_t max_iter = 50000;
  bool symmetrize = true;  // only applied when the data has even symmetry
  Exec exec = Exec::parallel;
};

// Kernel blocks assembled once per grid pair and shared across measures.
class AssembledProblem {
 public:
  AssembledProblem(const EquilibriumProblem& problem, Exec exec = Exec::parallel);

  const EquilibriumProblem& problem() const { return *problem_; }

  double energy(const std::vector<std::vector<double>>& w) const;
  // g_j = 2 sum_i c_ji K_ji w_i + V_j  (equals the effective potential U_j)
  void gradient(const std::vector<std::vector<double>>& w,
                std::vector<std::vector<double>>& g) const;
  // quadratic form of the energy Hessian along a direction
  double hessian_quadratic_form(const std::vector<std::vector<double>>& d) const;

 private:
  std::shared_ptr<const EquilibriumProblem> problem_;
  std::vector<std::size_t> grid_id_;           // measure -> unique grid index
  std::vector<std::vector<RowMatrix>> block_;  // [gid_a][gid_b], empty if unused
  Exec exec_;
};

// Euclidean projection onto {0 <= w <= caps, sum w = target_mass} by
// bisection on the dual shift.  caps may be empty (unbounded).
std::vector<double> project_capped_simplex(const std::vector<double>& weights,
                                           const std::vector<double>& caps,
                                           double target_mass);

double energy(const EquilibriumProblem& problem,
              const std::vector<std::vector<double>>& masses);

std::vector<double> effective_potential(const EquilibriumProblem& problem,
                                        const EquilibriumSolution& solution, std::size_t j);

EquilibriumSolution minimize(const EquilibriumProblem& problem, const SolveOptions& options = {});

struct GrowthReport {
  struct PerMeasure {
    double at_r = 0.0, at_2r = 0.0, at_4r = 0.0;
    bool pass = false;
  };
  std::vector<PerMeasure> measures;
  bool pass = false;
};

// Tail trend of V_j(x) - (sum_i c_ji m_i) log(1 + x^2) at R, 2R, 4R.
GrowthReport check_growth_condition(const EquilibriumProblem& problem);

struct PositiveDefiniteReport {
  bool positive_definite = false;
  double smallest_eigenvalue = 0.0;
};

PositiveDefiniteReport check_positive_definite(const RowMatrix& c);

}  // namespace tmm
