#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "tmm/model_inputs.hpp"

namespace tmm {

// Hermitian pair with a cached action n * Tr(V(M1) + W(M2) - tau M1 M2).
class MatrixPairState {
 public:
  MatrixPairState(const PotentialSpec& spec, int n);

  int size() const { return n_; }
  double action() const { return action_; }
  double action_recompute() const;

  // exact change of the action under m(i,j) += delta, m(j,i) += conj(delta)
  // (diagonal updates take a real delta); which: 1 or 2
  double action_delta(int which, int i, int j, std::complex<double> delta) const;
  void apply(int which, int i, int j, std::complex<double> delta);

  const Eigen::MatrixXcd& m1() const { return m1_; }
  const Eigen::MatrixXcd& m2() const { return m2_; }

 private:
  double trace_v(const Eigen::MatrixXcd& m) const;
  double trace_w(const Eigen::MatrixXcd& m) const;

  PotentialSpec spec_;
  int n_ = 0;
  Eigen::MatrixXcd m1_, m2_;
  double action_ = 0.0;
};

struct ChainConfig {
  int n = 9;  // multiples of 3 by default; others run with a warning flag
  int chains = 2;
  int burn_in_sweeps = 400;
  int thinning_sweeps = 2;   // sweeps between retained eigenvalue batches
  int sample_count = 500;    // retained batches per chain
  double initial_step = 0.4;
  std::uint64_t seed = 1;

  void validate() const;
};

struct ChainDiagnostics {
  double acceptance_m1 = 0.0, acceptance_m2 = 0.0;
  double step_m1 = 0.0, step_m2 = 0.0;
  double max_action_drift = 0.0;  // vs full recomputation, relative
  std::uint64_t proposals = 0;
};

struct SampleSet {
  ChainConfig config;
  bool n_multiple_of_three = true;
  std::vector<double> eigenvalues;  // all chains, chain-major order
  std::vector<ChainDiagnostics> diagnostics;
};

// Entry-wise Metropolis with Gaussian proposals; step scales tuned during
// burn-in to an acceptance rate in [0.25, 0.5], frozen afterwards.
// Reproducible: identical config (including chain count) gives identical
// eigenvalue streams.
SampleSet run_chain(const PotentialSpec& spec, const ChainConfig& config);

struct ComparisonReport {
  double ks_distance = 0.0;
  double chi2_statistic = 0.0;
  double chi2_critical_1pct = 0.0;
  int chi2_bins = 0;
  bool chi2_pass = false;
  // sample moments with standard errors, orders 1..6
  std::vector<double> moments, moment_stderr, reference_moments;
};

// reference density sampled on a grid (node, density), normalized internally
ComparisonReport compare_to_reference(const std::vector<double>& samples,
                                      const std::vector<double>& ref_x,
                                      const std::vector<double>& ref_density);

}  // namespace tmm
