#pragma once

#include <string>
#include <vector>

#include "tmm/two_matrix.hpp"

namespace tmm {

// Classification of (alpha, tau) for V(x) = x^2/2 by which of the three
// supports contain the origin.  Boundary curves: tau^2 = alpha + 2 and
// alpha tau^2 = -1; both pass through (-1, 1).
enum class PhaseLabel {
  case_i,
  case_ii,
  case_iii,
  case_iv,
  painleve_ii_boundary,
  pearcey_boundary,
  multicritical,
  indeterminate,
};

const char* to_string(PhaseLabel label);

struct PhasePoint {
  double alpha = 0.0;
  double tau = 0.0;
  PhaseLabel label = PhaseLabel::indeterminate;
  enum class Source { closed_form, numeric } source = Source::closed_form;
  double residual_painleve = 0.0;  // |tau^2 - alpha - 2|
  double residual_pearcey = 0.0;   // |alpha tau^2 + 1|
  double distance_painleve = 0.0;  // residual / gradient norm (point distance estimate)
  double distance_pearcey = 0.0;
  // origin membership triple from the numeric solve (1 = origin inside)
  bool origin_in_mu1 = false, origin_in_mu3 = false, origin_in_slack = false;
  double c2 = 0.0, c3 = 0.0;
};

PhasePoint classify_closed_form(double alpha, double tau, double tol = 1e-3);

struct NumericClassifyOptions {
  TwoMatrixOptions solve;
  double boundary_distance_tol = 1e-3;  // below this distance to a curve: no case is forced
};

PhasePoint classify_numeric(const PotentialSpec& spec, const NumericClassifyOptions& options = {});

struct SweepCell {
  PhasePoint closed_form;
  PhasePoint numeric;
  bool numeric_run = false;
  bool disagree = false;
};

struct SweepOptions {
  std::size_t alpha_cells = 40;
  std::size_t tau_cells = 40;
  double alpha_lo = -4.0, alpha_hi = 4.0;
  double tau_lo = 0.0, tau_hi = 4.0;  // tau sampled on (tau_lo, tau_hi]
  bool run_numeric = true;
  NumericClassifyOptions numeric;
};

struct SweepResult {
  SweepOptions options;
  std::vector<SweepCell> cells;  // row-major over (alpha index, tau index)
  double cell_diagonal = 0.0;
  std::size_t disagreements = 0;
};

SweepResult sweep(const SweepOptions& options);

}  // namespace tmm
