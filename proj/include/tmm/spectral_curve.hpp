#pragma once

#include <complex>
#include <string>
#include <vector>

#include "tmm/grid.hpp"
#include "tmm/model_inputs.hpp"

namespace tmm {

enum class Side { above, below };

// Cell-exact Cauchy transform of a piecewise-constant measure,
// C(z) = integral of d mu(s) / (z - s).
std::complex<double> cauchy_transform(const DiscreteMeasure& measure, std::complex<double> z);

// Principal value on the measure's own axis.
double cauchy_transform_pv(const DiscreteMeasure& measure, double x);

// Boundary value approached from the given side of the axis.
std::complex<double> cauchy_transform_boundary(const DiscreteMeasure& measure, double x,
                                               Side side);

// xi1(z) = V'(z) - C_{mu1}(z), finite off the support of mu1.
std::complex<double> xi1(const PotentialSpec& spec, const DiscreteMeasure& mu1,
                         std::complex<double> z);
std::complex<double> xi1_boundary(const PotentialSpec& spec, const DiscreteMeasure& mu1,
                                  double x, Side side);

struct QuarticProbeReport {
  bool ok = false;
  double max_held_out_residual = 0.0;  // relative to |xi1|^4 at the held-out points
  double sample_radius = 0.0;
  // e_k(z) polynomial coefficients, ascending powers: e1 (deg 1), e2 (deg 1),
  // e3 (deg 1), e4 (deg 2)
  std::vector<std::vector<double>> coefficients;
  std::string note;
};

// Fits a monic quartic in xi with polynomial-in-z coefficients to samples of
// xi1 on a circle; degree bounds follow from the pole orders at infinity.
// Quadratic V only.  The quartic structure is probed, never asserted.
QuarticProbeReport quartic_residual_probe(const PotentialSpec& spec, const DiscreteMeasure& mu1,
                                          double sample_radius, int nsamples = 96);

}  // namespace tmm
