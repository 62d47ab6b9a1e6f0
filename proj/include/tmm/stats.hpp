#pragma once

#include <vector>

namespace tmm {

// Kolmogorov-Smirnov distance between an empirical sample and a reference
// density sampled on a grid (normalized and integrated internally).
double ks_distance_to_density(std::vector<double> samples, const std::vector<double>& ref_x,
                              const std::vector<double>& ref_density);

struct Chi2Report {
  double statistic = 0.0;
  double critical_1pct = 0.0;
  int bins = 0;
  int dof = 0;
  bool pass = false;
};

// Pearson chi-square of binned samples against expected probabilities from
// the reference density; equal-probability bins across the reference span.
Chi2Report chi2_against_density(const std::vector<double>& samples,
                                const std::vector<double>& ref_x,
                                const std::vector<double>& ref_density, int bins);

// Upper quantile of the chi-square distribution (Wilson-Hilferty).
double chi2_quantile(double p, int dof);

}  // namespace tmm
