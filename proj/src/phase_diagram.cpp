#include "tmm/phase_diagram.hpp"

#include <cmath>
#include <stdexcept>

namespace tmm {

const char* to_string(PhaseLabel label) {
  switch (label) {
    case PhaseLabel::case_i: return "I";
    case PhaseLabel::case_ii: return "II";
    case PhaseLabel::case_iii: return "III";
    case PhaseLabel::case_iv: return "IV";
    case PhaseLabel::painleve_ii_boundary: return "PainleveII-boundary";
    case PhaseLabel::pearcey_boundary: return "Pearcey-boundary";
    case PhaseLabel::multicritical: return "Multicritical";
    case PhaseLabel::indeterminate: return "boundary-indeterminate";
  }
  return "?";
}

namespace {

void fill_margins(PhasePoint& p) {
  double r1 = p.tau * p.tau - p.alpha - 2.0;
  double r2 = p.alpha * p.tau * p.tau + 1.0;
  p.residual_painleve = std::abs(r1);
  p.residual_pearcey = std::abs(r2);
  p.distance_painleve = p.residual_painleve / std::hypot(1.0, 2.0 * p.tau);
  p.distance_pearcey =
      p.residual_pearcey / std::max(1e-12, std::hypot(p.tau * p.tau, 2.0 * p.alpha * p.tau));
}

}  // namespace

PhasePoint classify_closed_form(double alpha, double tau, double tol) {
  if (!(tau > 0.0)) throw std::invalid_argument("classify_closed_form: tau must be positive");
  PhasePoint p;
  p.alpha = alpha;
  p.tau = tau;
  p.source = PhasePoint::Source::closed_form;
  fill_margins(p);
  double r1 = tau * tau - alpha - 2.0;
  double r2 = alpha * tau * tau + 1.0;
  bool on1 = p.residual_painleve <= tol;
  bool on2 = p.residual_pearcey <= tol;
  if (on1 && on2)
    p.label = PhaseLabel::multicritical;
  else if (on1)
    p.label = PhaseLabel::painleve_ii_boundary;
  else if (on2)
    p.label = PhaseLabel::pearcey_boundary;
  else if (r2 < 0.0)
    p.label = PhaseLabel::case_iii;
  else if (r1 < 0.0)
    p.label = PhaseLabel::case_i;
  else
    p.label = alpha > -1.0 ? PhaseLabel::case_ii : PhaseLabel::case_iv;
  return p;
}

PhasePoint classify_numeric(const PotentialSpec& spec, const NumericClassifyOptions& options) {
  if (spec.v_coeffs != std::vector<double>{0.0, 0.0, 0.5})
    throw std::invalid_argument("classify_numeric: the case taxonomy requires V(x) = x^2/2");
  PhasePoint p;
  p.alpha = spec.alpha;
  p.tau = spec.tau;
  p.source = PhasePoint::Source::numeric;
  fill_margins(p);

  TwoMatrixSolution sol = solve(spec, options.solve);
  p.c2 = sol.c2;
  p.c3 = sol.c3;
  p.origin_in_mu1 = origin_gap_halfwidth(sol.base.measures[0]) == 0.0;
  p.origin_in_mu3 = sol.c3 == 0.0;
  p.origin_in_slack = sol.c2 == 0.0;

  double near = std::min(p.distance_painleve, p.distance_pearcey);
  if (p.distance_painleve <= options.boundary_distance_tol &&
      p.distance_pearcey <= options.boundary_distance_tol) {
    p.label = PhaseLabel::multicritical;
    return p;
  }
  if (near <= options.boundary_distance_tol) {
    p.label = PhaseLabel::indeterminate;  // too close to a curve to force a case
    return p;
  }
  const bool m1 = p.origin_in_mu1, m3 = p.origin_in_mu3, sl = p.origin_in_slack;
  if (m1 && m3 && !sl)
    p.label = PhaseLabel::case_i;
  else if (!m1 && m3 && !sl)
    p.label = PhaseLabel::case_ii;
  else if (!m1 && !m3 && sl)
    p.label = PhaseLabel::case_iii;
  else if (m1 && !m3 && !sl)
    p.label = PhaseLabel::case_iv;
  else
    p.label = PhaseLabel::indeterminate;  // membership triple fits no case
  return p;
}

namespace {

bool is_case(PhaseLabel l) {
  return l == PhaseLabel::case_i || l == PhaseLabel::case_ii || l == PhaseLabel::case_iii ||
         l == PhaseLabel::case_iv;
}

}  // namespace

SweepResult sweep(const SweepOptions& options) {
  SweepResult result;
  result.options = options;
  const std::size_t na = options.alpha_cells, nt = options.tau_cells;
  double da = (options.alpha_hi - options.alpha_lo) / static_cast<double>(na - 1);
  double dt = (options.tau_hi - options.tau_lo) / static_cast<double>(nt);
  result.cell_diagonal = std::hypot(da, dt);
  result.cells.resize(na * nt);

#pragma omp parallel for collapse(2) schedule(dynamic)
  for (long long ia = 0; ia < static_cast<long long>(na); ++ia) {
    for (long long it = 0; it < static_cast<long long>(nt); ++it) {
      double alpha = options.alpha_lo + da * static_cast<double>(ia);
      double tau = options.tau_lo + dt * static_cast<double>(it + 1);  // tau > tau_lo
      SweepCell cell;
      cell.closed_form = classify_closed_form(alpha, tau);
      if (options.run_numeric) {
        NumericClassifyOptions numeric = options.numeric;
        numeric.boundary_distance_tol =
            std::max(numeric.boundary_distance_tol, 0.5 * result.cell_diagonal);
        cell.numeric = classify_numeric(PotentialSpec::quadratic(alpha, tau), numeric);
        cell.numeric_run = true;
        double dist = std::min(cell.numeric.distance_painleve, cell.numeric.distance_pearcey);
        bool both_cases = is_case(cell.closed_form.label) && is_case(cell.numeric.label);
        if (both_cases && cell.closed_form.label != cell.numeric.label)
          cell.disagree = true;
        // an indeterminate numeric label far from both curves is also a conflict
        if (cell.numeric.label == PhaseLabel::indeterminate && dist > result.cell_diagonal)
          cell.disagree = true;
      }
      result.cells[static_cast<std::size_t>(ia * nt + it)] = cell;
    }
  }
  for (const SweepCell& c : result.cells)
    if (c.disagree) ++result.disagreements;
  return result;
}

}  // namespace tmm
