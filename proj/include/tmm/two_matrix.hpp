#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tmm/equilibrium.hpp"
#include "tmm/model_inputs.hpp"

namespace tmm {

struct TwoMatrixOptions {
  std::size_t real_cells = 801;       // nodes on the shared real grid
  std::size_t imag_cells = 801;       // nodes on the imaginary grid
  double real_radius = 0.0;           // 0 = automatic from field growth
  double imag_radius = 0.0;           // 0 = automatic from cap feasibility margin
  double tol = 1e-6;
  std::size_t max_iter = 50000;
  int max_expansions = 3;             // x1.5 re-solves when S(mu1) hits the boundary
  Exec exec = Exec::parallel;
};

struct EdgeFit {
  double exponent = 0.0;
  double fit_residual = 0.0;  // rms residual of the log-log fit
  double edge_coordinate = 0.0;
  bool indeterminate = true;
  std::string note;
};

struct RegularityReport {
  bool regular = false;
  std::vector<std::string> notes;
};

struct TwoMatrixSolution {
  EquilibriumSolution base;
  PotentialSpec spec;
  std::vector<std::pair<double, double>> support_mu1;  // closed intervals
  double c2 = 0.0;  // half-width of the gap of S(sigma2 - mu2*) around 0
  double c3 = 0.0;  // half-width of the gap of S(mu3*) around 0
  std::vector<EdgeFit> edge_exponents;
  RegularityReport regularity;
  double real_radius = 0.0;
  double imag_radius = 0.0;
  int expansions = 0;
  // densities at the truncation boundary (tail truncation diagnostics)
  double mu2_boundary_density = 0.0;
  double mu3_boundary_density = 0.0;
};

// Nikishin-chain interaction for three measures: consecutive pairs attract
// with weight -1/2, no direct (1,3) interaction.
RowMatrix two_matrix_interaction();

// mu1 on R (mass 1, field V1), mu2 on iR (mass 2/3, zero field, caps from
// the constraint density), mu3 on R (mass 1/3, field V3).
EquilibriumProblem assemble_problem(const PotentialSpec& spec, const TwoMatrixOptions& options);

TwoMatrixSolution solve(const PotentialSpec& spec, const TwoMatrixOptions& options = {});

// Support of a measure as maximal intervals of cells with density above
// threshold_fraction * max density, after 3-cell morphological smoothing.
std::vector<std::pair<double, double>> support_intervals(const DiscreteMeasure& measure,
                                                         double threshold_fraction = 1e-8);

// Half-width of the symmetric gap around the origin in the support; 0 when
// the origin cell is in the support.
double origin_gap_halfwidth(const DiscreteMeasure& measure, double threshold_fraction = 1e-8);

// Least-squares exponent of log density vs log distance over the cells just
// inside an edge.  direction = +1 when the support lies to the right.
EdgeFit edge_exponent_check(const DiscreteMeasure& measure, double edge_coordinate,
                            int direction);

RegularityReport regularity_report(const TwoMatrixSolution& solution);

}  // namespace tmm
