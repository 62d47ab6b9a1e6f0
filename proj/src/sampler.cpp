#include "tmm/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "tmm/stats.hpp"

namespace tmm {

MatrixPairState::MatrixPairState(const PotentialSpec& spec, int n) : spec_(spec), n_(n) {
  if (n < 2) throw std::invalid_argument("matrix pair: n must be >= 2");
  spec_.validate();
  m1_ = Eigen::MatrixXcd::Zero(n, n);
  m2_ = Eigen::MatrixXcd::Zero(n, n);
  action_ = action_recompute();
}

double MatrixPairState::trace_v(const Eigen::MatrixXcd& m) const {
  // even polynomial: accumulate traces of powers via repeated products
  double acc = spec_.v_coeffs[0] * n_;
  Eigen::MatrixXcd power = Eigen::MatrixXcd::Identity(n_, n_);
  for (std::size_t d = 1; d < spec_.v_coeffs.size(); ++d) {
    power = power * m;
    if (spec_.v_coeffs[d] != 0.0) acc += spec_.v_coeffs[d] * power.trace().real();
  }
  return acc;
}

double MatrixPairState::trace_w(const Eigen::MatrixXcd& m) const {
  double tr2 = m.squaredNorm();  // Tr M^2 for Hermitian M
  double tr4 = (m * m).squaredNorm();
  return 0.25 * tr4 + 0.5 * spec_.alpha * tr2;
}

double MatrixPairState::action_recompute() const {
  double coupling = (m1_ * m2_).trace().real();
  return n_ * (trace_v(m1_) + trace_w(m2_) - spec_.tau * coupling);
}

double MatrixPairState::action_delta(int which, int i, int j,
                                     std::complex<double> delta) const {
  const bool diag = i == j;
  if (diag && delta.imag() != 0.0)
    throw std::invalid_argument("action_delta: diagonal updates must be real");
  const Eigen::MatrixXcd& self = which == 1 ? m1_ : m2_;
  const Eigen::MatrixXcd& other = which == 1 ? m2_ : m1_;

  // coupling is linear: delta Tr(M1 M2) = 2 Re(delta * other(j,i)) off the
  // diagonal, delta * other(i,i) on it
  double dcoupling = diag ? delta.real() * other(i, i).real()
                          : 2.0 * (delta * other(j, i)).real();

  double dpotential;
  bool quadratic = which == 1 ? spec_.v_coeffs.size() <= 3 : false;
  if (quadratic) {
    double a2 = spec_.v_coeffs.size() > 2 ? spec_.v_coeffs[2] : 0.0;
    double dtr2 = diag ? 2.0 * delta.real() * self(i, i).real() + delta.real() * delta.real()
                       : 4.0 * (delta * self(j, i)).real() + 2.0 * std::norm(delta);
    dpotential = a2 * dtr2;
  } else {
    // scratch update and recompute the affected trace term; exact and cheap
    // at sampler sizes
    Eigen::MatrixXcd scratch = self;
    scratch(i, j) += delta;
    if (!diag) scratch(j, i) += std::conj(delta);
    dpotential = which == 1 ? trace_v(scratch) - trace_v(self)
                            : trace_w(scratch) - trace_w(self);
  }
  return n_ * (dpotential - spec_.tau * dcoupling);
}

void MatrixPairState::apply(int which, int i, int j, std::complex<double> delta) {
  action_ += action_delta(which, i, j, delta);
  Eigen::MatrixXcd& m = which == 1 ? m1_ : m2_;
  m(i, j) += delta;
  if (i != j) m(j, i) += std::conj(delta);
}

void ChainConfig::validate() const {
  if (n < 2) throw std::invalid_argument("chain: n must be >= 2");
  if (chains < 1 || burn_in_sweeps < 1 || thinning_sweeps < 1 || sample_count < 1)
    throw std::invalid_argument("chain: counts must be positive");
  if (!(initial_step > 0.0)) throw std::invalid_argument("chain: step must be positive");
}

namespace {

struct ChainResult {
  std::vector<double> eigenvalues;
  ChainDiagnostics diag;
};

ChainResult run_single_chain(const PotentialSpec& spec, const ChainConfig& cfg,
                             std::uint64_t chain_seed) {
  std::mt19937_64 rng(chain_seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  MatrixPairState state(spec, cfg.n);
  double step[2] = {cfg.initial_step, cfg.initial_step};
  std::uint64_t accepted[2] = {0, 0}, proposed[2] = {0, 0};
  std::uint64_t proposals_since_check = 0;
  ChainResult out;
  out.diag.max_action_drift = 0.0;

  auto propose_entry = [&](int which, int i, int j) {
    std::complex<double> delta;
    if (i == j)
      delta = std::complex<double>(step[which - 1] * normal(rng), 0.0);
    else
      delta = step[which - 1] * M_SQRT1_2 *
              std::complex<double>(normal(rng), normal(rng));
    double d = state.action_delta(which, i, j, delta);
    ++proposed[which - 1];
    if (d <= 0.0 || unif(rng) < std::exp(-d)) {
      state.apply(which, i, j, delta);
      ++accepted[which - 1];
    }
    if (++proposals_since_check >= 10000) {
      proposals_since_check = 0;
      double fresh = state.action_recompute();
      double drift = std::abs(fresh - state.action()) / (1.0 + std::abs(fresh));
      out.diag.max_action_drift = std::max(out.diag.max_action_drift, drift);
      if (!std::isfinite(fresh)) throw std::runtime_error("chain: action diverged");
    }
  };

  auto sweep = [&] {
    for (int which = 1; which <= 2; ++which)
      for (int i = 0; i < cfg.n; ++i)
        for (int j = i; j < cfg.n; ++j) propose_entry(which, i, j);
  };

  // burn-in with step tuning every 10 sweeps
  for (int s = 1; s <= cfg.burn_in_sweeps; ++s) {
    sweep();
    if (s % 10 == 0) {
      for (int w = 0; w < 2; ++w) {
        double rate = proposed[w] ? static_cast<double>(accepted[w]) / proposed[w] : 0.0;
        if (rate > 0.5) step[w] *= 1.25;
        if (rate < 0.25) step[w] /= 1.25;
        accepted[w] = proposed[w] = 0;
      }
    }
  }
  accepted[0] = accepted[1] = proposed[0] = proposed[1] = 0;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es;
  out.eigenvalues.reserve(static_cast<std::size_t>(cfg.sample_count) * cfg.n);
  for (int s = 0; s < cfg.sample_count; ++s) {
    for (int t = 0; t < cfg.thinning_sweeps; ++t) sweep();
    es.compute(state.m1(), Eigen::EigenvaluesOnly);
    for (int i = 0; i < cfg.n; ++i) out.eigenvalues.push_back(es.eigenvalues()(i));
  }
  out.diag.acceptance_m1 = proposed[0] ? static_cast<double>(accepted[0]) / proposed[0] : 0.0;
  out.diag.acceptance_m2 = proposed[1] ? static_cast<double>(accepted[1]) / proposed[1] : 0.0;
  out.diag.step_m1 = step[0];
  out.diag.step_m2 = step[1];
  out.diag.proposals = proposed[0] + proposed[1];
  return out;
}

}  // namespace

SampleSet run_chain(const PotentialSpec& spec, const ChainConfig& config) {
  config.validate();
  spec.validate();
  SampleSet set;
  set.config = config;
  set.n_multiple_of_three = config.n % 3 == 0;
  std::vector<ChainResult> results(config.chains);

#pragma omp parallel for schedule(dynamic)
  for (long long c = 0; c < static_cast<long long>(config.chains); ++c) {
    // distinct, well-separated streams per chain
    std::uint64_t chain_seed = config.seed + 0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(c + 1);
    results[c] = run_single_chain(spec, config, chain_seed);
  }

  for (const ChainResult& r : results) {
    set.eigenvalues.insert(set.eigenvalues.end(), r.eigenvalues.begin(), r.eigenvalues.end());
    set.diagnostics.push_back(r.diag);
  }
  return set;
}

ComparisonReport compare_to_reference(const std::vector<double>& samples,
                                      const std::vector<double>& ref_x,
                                      const std::vector<double>& ref_density) {
  if (ref_x.size() != ref_density.size() || ref_x.size() < 3)
    throw std::invalid_argument("compare_to_reference: bad reference sampling");
  ComparisonReport rep;

  rep.ks_distance = ks_distance_to_density(samples, ref_x, ref_density);

  // chi-square over equal-probability bins of the reference
  Chi2Report chi = chi2_against_density(samples, ref_x, ref_density, 40);
  rep.chi2_statistic = chi.statistic;
  rep.chi2_critical_1pct = chi.critical_1pct;
  rep.chi2_bins = chi.bins;
  rep.chi2_pass = chi.pass;

  const std::size_t ns = samples.size();
  for (int order = 1; order <= 6; ++order) {
    double mean = 0.0;
    for (double s : samples) mean += std::pow(s, order);
    mean /= static_cast<double>(ns);
    double var = 0.0;
    for (double s : samples) {
      double d = std::pow(s, order) - mean;
      var += d * d;
    }
    var /= static_cast<double>(ns) * std::max<std::size_t>(ns - 1, 1);
    rep.moments.push_back(mean);
    rep.moment_stderr.push_back(std::sqrt(var));
    // reference moment by trapezoid against the normalized density
    double num = 0.0, den = 0.0;
    for (std::size_t i = 1; i < ref_x.size(); ++i) {
      double dx = ref_x[i] - ref_x[i - 1];
      num += 0.5 * dx * (std::pow(ref_x[i], order) * ref_density[i] +
                         std::pow(ref_x[i - 1], order) * ref_density[i - 1]);
      den += 0.5 * dx * (ref_density[i] + ref_density[i - 1]);
    }
    rep.reference_moments.push_back(num / den);
  }
  return rep;
}

}  // namespace tmm
