#pragma once

#include <string>
#include <vector>

#include "tmm/kernels.hpp"
#include "tmm/model_inputs.hpp"

namespace tmm {

// w_{k}(x) = integral of y^k exp(-n (V(x) + W(y) - tau x y)) dy, k = 0..2.
// Adaptive panels over the window where the integrand is above 1e-18 of its
// peak; relative target 1e-12.
double weight_w(const PotentialSpec& spec, int n, int k, double x);

struct BiorthoOptions {
  int gauss_points = 40;
  double rel_tol = 1e-12;
  double tail_cut_log = 41.4 + 9.0;  // -log of integrand cutoff, widened for high moments
  double condition_limit = 1e14;     // leading-minor monitor; truncates the degree
  Exec exec = Exec::parallel;        // table assembly is parallel over x nodes
};

// Two-variable moments of the coupled weight.  Entries with odd j + k are
// exactly zero (even potentials).
struct BimomentMatrix {
  int n = 0;
  int max_degree = 0;     // requested J
  int usable_degree = 0;  // after condition monitoring
  RowMatrix monomial;     // M[j][k] = double integral of x^j y^k weight
  RowMatrix chebyshev;    // same pairing in the scaled Chebyshev basis
  double x_scale = 0.0, y_scale = 0.0;
  double log_shift = 0.0;  // integrals carry a common factor exp(-log_shift)
};

class BiorthogonalFamily {
 public:
  static BiorthogonalFamily build(const PotentialSpec& spec, int n, int degree,
                                  BiorthoOptions options = {});

  int n() const { return n_; }
  int degree_bound() const { return usable_degree_; }
  double x_scale() const { return x_scale_; }
  double y_scale() const { return y_scale_; }
  const BimomentMatrix& bimoments() const { return bimoments_; }
  const PotentialSpec& spec() const { return spec_; }

  // normalization h_k = double integral of p_k q_k weight
  double h(int k) const;

  // monic values and coefficients (coefficients in ascending monomial order)
  double eval_p(int j, double x) const;
  double eval_q(int k, double y) const;
  std::vector<double> p_coeffs(int j) const;
  std::vector<double> q_coeffs(int k) const;
  std::vector<double> p_zeros(int j) const;
  std::vector<double> q_zeros(int k) const;

  // independent-quadrature pairing (not derived from the factorization)
  double pairing(int j, int k) const;

  double transformed_Q(int k, double x) const;  // integral of q_k(y) weight dy
  double transformed_P(int j, double y) const;  // integral of p_j(x) weight dx

  // which: 11 (x,x), 12 (x,y), 21 (y,x), 22 (y,y); sums over k < n
  double kernel(int which, double u, double v) const;
  double kernel_trace() const;  // integral of K11(x,x) dx

  struct MopReport {
    int j = 0;
    double max_scaled_residual = 0.0;  // |integral| / L1 norm of the integrand
    int conditions = 0;
  };
  MopReport verify_mop_conditions(int j) const;

 private:
  BiorthogonalFamily() = default;

  PotentialSpec spec_;
  int n_ = 0;
  int usable_degree_ = 0;
  double x_scale_ = 0.0, y_scale_ = 0.0;
  double log_shift_ = 0.0;
  BimomentMatrix bimoments_;

  // x-quadrature shared by every x-integral (nodes, weights)
  std::vector<double> xq_, xw_;
  // per x-node tables: scaled Chebyshev and monomial y-moments
  RowMatrix ycheb_;  // [node][b]
  RowMatrix ymono_;  // [node][k]
  int ypanels_ = 0;

  // scaled-Chebyshev coefficients of the monic families (row j/k)
  RowMatrix pcheb_, qcheb_;
  std::vector<double> h_;  // scaled normalizations (factor exp(-log_shift))

  std::vector<double> y_moments_at(double x, int max_b, bool chebyshev) const;
};

}  // namespace tmm
