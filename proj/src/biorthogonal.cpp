#include "tmm/biorthogonal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "tmm/quadrature.hpp"

namespace tmm {

namespace {

double clenshaw(const double* c, int m, double xi) {
  double b1 = 0.0, b2 = 0.0;
  for (int a = m; a >= 1; --a) {
    double b0 = 2.0 * xi * b1 - b2 + c[a];
    b2 = b1;
    b1 = b0;
  }
  return xi * b1 - b2 + c[0];
}

double objective_min_value(const PotentialSpec& spec, double x) {
  CubicCriticalPoints cp = cubic_critical_points(spec, x);
  return eval_potential(spec, 'W', cp.s1) - spec.tau * x * cp.s1;
}

// outermost |x| with g(x) - g_min >= threshold, by doubling + bisection
double window_radius(const std::function<double(double)>& g, double threshold) {
  double gmin = g(0.0);
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    gmin = std::min(gmin, g(hi));
    if (g(hi) - gmin >= threshold) break;
    lo = hi;
    hi *= 2.0;
    if (hi > 1e8) throw std::runtime_error("biorthogonal: weight window not found");
  }
  for (int it = 0; it < 80; ++it) {
    double mid = 0.5 * (lo + hi);
    if (g(mid) - gmin >= threshold)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

}  // namespace

double weight_w(const PotentialSpec& spec, int n, int k, double x) {
  if (k < 0 || k > 2) throw std::invalid_argument("weight_w: k must be 0..2");
  if (n < 1) throw std::invalid_argument("weight_w: n must be >= 1");
  CubicCriticalPoints cp = cubic_critical_points(spec, x);
  auto f = [&](double y) { return eval_potential(spec, 'W', y) - spec.tau * x * y; };
  double fmin = f(cp.s1);
  double cut = 41.4 / n;  // integrand below 1e-18 of its peak
  auto g = [&](double y) { return f(y) - fmin; };
  double ymax = window_radius(g, cut + 2.0 / n);
  double scale = std::exp(-static_cast<double>(n) *
                          (eval_potential(spec, 'V', x) + fmin));
  auto integrand = [&](double y) {
    return std::pow(y, k) * std::exp(-static_cast<double>(n) * g(y));
  };
  double val = integrate_adaptive(integrand, -ymax, ymax, 1e-12, 1e-280, 40);
  return scale * val;
}

std::vector<double> BiorthogonalFamily::y_moments_at(double x, int max_b, bool chebyshev) const {
  // single pass accumulating every requested y-moment of the shifted weight
  const GaussRule& rule = gauss_legendre(40);
  const int npanels = ypanels_;
  const double ry = y_scale_;
  std::vector<double> acc(max_b + 1, 0.0);
  std::vector<double> basis(max_b + 1);
  const double h = 2.0 * ry / npanels;
  const double vx = eval_potential(spec_, 'V', x);
  for (int p = 0; p < npanels; ++p) {
    double mid = -ry + (p + 0.5) * h;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      double y = mid + 0.5 * h * rule.nodes[q];
      double expo = -static_cast<double>(n_) *
                        (vx + eval_potential(spec_, 'W', y) - spec_.tau * x * y) +
                    log_shift_;
      double wt = expo < -740.0 ? 0.0 : std::exp(expo);
      if (wt == 0.0) continue;
      double wq = 0.5 * h * rule.weights[q] * wt;
      if (chebyshev) {
        double xi = y / ry;
        double t0 = 1.0, t1 = xi;
        basis[0] = t0;
        if (max_b >= 1) basis[1] = t1;
        for (int b = 2; b <= max_b; ++b) {
          double t2 = 2.0 * xi * t1 - t0;
          basis[b] = t2;
          t0 = t1;
          t1 = t2;
        }
      } else {
        double m = 1.0;
        for (int b = 0; b <= max_b; ++b) {
          basis[b] = m;
          m *= y;
        }
      }
      for (int b = 0; b <= max_b; ++b) acc[b] += wq * basis[b];
    }
  }
  return acc;
}

BiorthogonalFamily BiorthogonalFamily::build(const PotentialSpec& spec, int n, int degree,
                                             BiorthoOptions options) {
  spec.validate();
  if (n < 1 || degree < 0) throw std::invalid_argument("biorthogonal: need n >= 1, degree >= 0");
  BiorthogonalFamily fam;
  fam.spec_ = spec;
  fam.n_ = n;

  const int J = degree;
  const double cut = options.tail_cut_log / n;

  // x-window from the effective one-variable profile of the weight
  auto v1 = [&](double x) { return effective_field_v1(spec, x); };
  fam.x_scale_ = window_radius(v1, cut);

  // global minimum of V1 sets the scale shift that keeps the integrand O(1)
  double v1min = v1(0.0);
  for (int k = 1; k <= 400; ++k) v1min = std::min(v1min, v1(fam.x_scale_ * k / 400.0));
  fam.log_shift_ = static_cast<double>(n) * v1min;

  // y-window: widest well across the x-window
  double ry = 0.0;
  for (int k = 0; k <= 32; ++k) {
    double x = -fam.x_scale_ + 2.0 * fam.x_scale_ * k / 32.0;
    double fmin = objective_min_value(spec, x);
    auto g = [&](double y) {
      return (eval_potential(spec, 'W', y) - spec.tau * x * y) - fmin;
    };
    ry = std::max(ry, window_radius(g, cut));
  }
  fam.y_scale_ = ry;

  // tables: composite x-rule, one y-pass per node; panels doubled until the
  // Chebyshev bimoments stabilize
  RowMatrix prev_cheb;
  for (int npanels = 16;; npanels *= 2) {
    PanelRule xr = composite_rule(-fam.x_scale_, fam.x_scale_, npanels, options.gauss_points);
    fam.xq_ = xr.x;
    fam.xw_ = xr.w;
    fam.ypanels_ = npanels;
    const std::size_t nodes = fam.xq_.size();
    fam.ycheb_ = RowMatrix(nodes, J + 1);
    fam.ymono_ = RowMatrix(nodes, J + 1);
    if (options.exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
      for (long long q = 0; q < static_cast<long long>(nodes); ++q) {
        std::vector<double> c = fam.y_moments_at(fam.xq_[q], J, true);
        std::vector<double> m = fam.y_moments_at(fam.xq_[q], J, false);
        for (int b = 0; b <= J; ++b) {
          fam.ycheb_(q, b) = c[b];
          fam.ymono_(q, b) = m[b];
        }
      }
    } else {
      for (std::size_t q = 0; q < nodes; ++q) {
        std::vector<double> c = fam.y_moments_at(fam.xq_[q], J, true);
        std::vector<double> m = fam.y_moments_at(fam.xq_[q], J, false);
        for (int b = 0; b <= J; ++b) {
          fam.ycheb_(q, b) = c[b];
          fam.ymono_(q, b) = m[b];
        }
      }
    }

    RowMatrix cheb(J + 1, J + 1);
    for (int a = 0; a <= J; ++a) {
      for (int b = 0; b <= J; ++b) {
        if ((a + b) % 2 == 1) {
          cheb(a, b) = 0.0;  // even potentials: odd pairings vanish identically
          continue;
        }
        double acc = 0.0;
        for (std::size_t q = 0; q < nodes; ++q) {
          double xi = fam.xq_[q] / fam.x_scale_;
          // T_a(xi) by recurrence
          double t0 = 1.0, t1 = xi, ta = a == 0 ? 1.0 : xi;
          for (int r = 2; r <= a; ++r) {
            double t2 = 2.0 * xi * t1 - t0;
            t0 = t1;
            t1 = t2;
            ta = t2;
          }
          acc += fam.xw_[q] * ta * fam.ycheb_(q, b);
        }
        cheb(a, b) = acc;
      }
    }

    if (prev_cheb.rows == cheb.rows) {
      double maxabs = 0.0, diff = 0.0;
      for (std::size_t i = 0; i < cheb.a.size(); ++i) {
        maxabs = std::max(maxabs, std::abs(cheb.a[i]));
        diff = std::max(diff, std::abs(cheb.a[i] - prev_cheb.a[i]));
      }
      if (diff <= options.rel_tol * maxabs || npanels >= 256) {
        fam.bimoments_.chebyshev = cheb;
        break;
      }
    }
    prev_cheb = cheb;
  }

  // monomial bimoments (reported raw)
  if (std::abs(fam.log_shift_) > 690.0)
    throw std::runtime_error("biorthogonal: weight scale exceeds double range");
  double unshift = std::exp(-fam.log_shift_);
  fam.bimoments_.n = n;
  fam.bimoments_.max_degree = J;
  fam.bimoments_.x_scale = fam.x_scale_;
  fam.bimoments_.y_scale = fam.y_scale_;
  fam.bimoments_.log_shift = fam.log_shift_;
  fam.bimoments_.monomial = RowMatrix(J + 1, J + 1);
  for (int j = 0; j <= J; ++j)
    for (int k = 0; k <= J; ++k) {
      if ((j + k) % 2 == 1) continue;
      double acc = 0.0;
      for (std::size_t q = 0; q < fam.xq_.size(); ++q)
        acc += fam.xw_[q] * std::pow(fam.xq_[q], j) * fam.ymono_(q, k);
      fam.bimoments_.monomial(j, k) = acc * unshift;
    }

  // LDU of the Chebyshev-basis bimoments (Doolittle, no pivoting: pivoting
  // would scramble the triangular degree structure)
  const RowMatrix& mc = fam.bimoments_.chebyshev;
  int m = J + 1;
  RowMatrix lower(m, m), upper(m, m);
  std::vector<double> d(m, 0.0);
  double maxabs = 0.0;
  for (double v : mc.a) maxabs = std::max(maxabs, std::abs(v));
  int usable = -1;
  for (int k = 0; k < m; ++k) {
    double dk = mc(k, k);
    for (int r = 0; r < k; ++r) dk -= lower(k, r) * d[r] * upper(r, k);
    d[k] = dk;
    if (std::abs(dk) < maxabs / options.condition_limit) break;  // minor too small
    lower(k, k) = upper(k, k) = 1.0;
    for (int j = k + 1; j < m; ++j) {
      double u = mc(k, j);
      for (int r = 0; r < k; ++r) u -= lower(k, r) * d[r] * upper(r, j);
      upper(k, j) = u / dk;
      double l = mc(j, k);
      for (int r = 0; r < k; ++r) l -= lower(j, r) * d[r] * upper(r, k);
      lower(j, k) = l / dk;
    }
    usable = k;
  }
  if (usable < 0) throw std::runtime_error("biorthogonal: bimoment matrix numerically singular");
  fam.usable_degree_ = usable;
  fam.bimoments_.usable_degree = usable;

  // monic families: rows of L^-1 and columns of U^-1, rescaled from the
  // Chebyshev leading coefficient 2^(k-1)/R^k to monic
  int nf = usable + 1;
  RowMatrix linv(nf, nf), uinv(nf, nf);
  for (int c = 0; c < nf; ++c) {
    linv(c, c) = 1.0;
    for (int i = c + 1; i < nf; ++i) {
      double acc = 0.0;
      for (int r = c; r < i; ++r) acc -= lower(i, r) * linv(r, c);
      linv(i, c) = acc;
    }
    uinv(c, c) = 1.0;
    for (int i = c - 1; i >= 0; --i) {
      double acc = 0.0;
      for (int r = i + 1; r <= c; ++r) acc -= upper(i, r) * uinv(r, c);
      uinv(i, c) = acc;
    }
  }
  auto monic_scale = [](double radius, int k) {
    return k == 0 ? 1.0 : std::pow(radius, k) / std::pow(2.0, k - 1);
  };
  fam.pcheb_ = RowMatrix(nf, nf);
  fam.qcheb_ = RowMatrix(nf, nf);
  fam.h_.assign(nf, 0.0);
  for (int j = 0; j < nf; ++j) {
    double sj = monic_scale(fam.x_scale_, j);
    for (int a = 0; a <= j; ++a) fam.pcheb_(j, a) = sj * linv(j, a);
  }
  for (int k = 0; k < nf; ++k) {
    double tk = monic_scale(fam.y_scale_, k);
    for (int b = 0; b <= k; ++b) fam.qcheb_(k, b) = tk * uinv(b, k);
    fam.h_[k] = d[k] * monic_scale(fam.x_scale_, k) * tk;
  }

  // A single factorization pass loses too much in the scaled metric at high
  // degree.  Re-biorthogonalize in the normalized frame, where member values
  // are O(1) on the window and Clenshaw evaluation is cancellation-free;
  // rescale to monic afterwards (projections onto lower degrees never touch
  // the leading coefficient).
  const std::size_t nodes = fam.xq_.size();
  std::vector<std::vector<double>> pvals(nf), qvals(nf);  // values on the x-rule
  auto refresh_qvals = [&](int k) {
    qvals[k].assign(nodes, 0.0);
    for (std::size_t qn = 0; qn < nodes; ++qn) {
      double acc = 0.0;
      for (int b = 0; b <= k; ++b) acc += fam.qcheb_(k, b) * fam.ycheb_(qn, b);
      qvals[k][qn] = acc;
    }
  };
  auto refresh_pvals = [&](int j) {
    pvals[j].assign(nodes, 0.0);
    for (std::size_t qn = 0; qn < nodes; ++qn)
      pvals[j][qn] = clenshaw(&fam.pcheb_.a[j * fam.pcheb_.cols], j, fam.xq_[qn] / fam.x_scale_);
  };
  auto pair_values = [&](const std::vector<double>& pv, const std::vector<double>& qv) {
    double acc = 0.0;
    for (std::size_t qn = 0; qn < nodes; ++qn) acc += fam.xw_[qn] * pv[qn] * qv[qn];
    return acc;
  };

  std::vector<double> plead(nf), qlead(nf);  // leading monomial coefficient
  int refined = nf;
  for (int j = 0; j < nf; ++j) {
    plead[j] = fam.pcheb_(j, j) * (j == 0 ? 1.0 : std::pow(2.0, j - 1) / std::pow(fam.x_scale_, j));
    qlead[j] = fam.qcheb_(j, j) * (j == 0 ? 1.0 : std::pow(2.0, j - 1) / std::pow(fam.y_scale_, j));
    refresh_pvals(j);
    refresh_qvals(j);
    for (int pass = 0; pass < 2; ++pass) {
      for (int k = j - 2; k >= 0; k -= 2) {  // matching parity only
        double cp = pair_values(pvals[j], qvals[k]);
        for (int a = 0; a <= k; ++a) fam.pcheb_(j, a) -= cp * fam.pcheb_(k, a);
        double cq = pair_values(pvals[k], qvals[j]);
        for (int b = 0; b <= k; ++b) fam.qcheb_(j, b) -= cq * fam.qcheb_(k, b);
        if (cp != 0.0 || cq != 0.0) {
          refresh_pvals(j);
          refresh_qvals(j);
        }
      }
    }
    double dj = pair_values(pvals[j], qvals[j]);
    if (!(std::abs(dj) > 0.0)) {
      refined = j;  // numerically degenerate pairing; truncate here
      break;
    }
    double gp = std::sqrt(std::abs(dj));
    double gq = dj / gp;
    for (int a = 0; a <= j; ++a) {
      fam.pcheb_(j, a) /= gp;
      fam.qcheb_(j, a) /= gq;
    }
    plead[j] /= gp;
    qlead[j] /= gq;
    refresh_pvals(j);
    refresh_qvals(j);
  }
  if (refined < nf) {
    nf = refined;
    fam.usable_degree_ = nf - 1;
    fam.bimoments_.usable_degree = nf - 1;
  }

  // back to monic: divide by the (preserved) leading coefficients
  for (int j = 0; j < nf; ++j) {
    for (int a = 0; a <= j; ++a) {
      fam.pcheb_(j, a) /= plead[j];
      fam.qcheb_(j, a) /= qlead[j];
      if ((j - a) % 2 == 1) {  // opposite parity: zero up to roundoff
        fam.pcheb_(j, a) = 0.0;
        fam.qcheb_(j, a) = 0.0;
      }
    }
    fam.h_[j] = 1.0 / (plead[j] * qlead[j]);
  }
  return fam;
}

double BiorthogonalFamily::h(int k) const {
  if (k < 0 || k > usable_degree_) throw std::out_of_range("h: degree out of range");
  return h_[k] * std::exp(-log_shift_);
}

double BiorthogonalFamily::eval_p(int j, double x) const {
  if (j < 0 || j > usable_degree_) throw std::out_of_range("eval_p: degree out of range");
  return clenshaw(&pcheb_.a[j * pcheb_.cols], j, x / x_scale_);
}

double BiorthogonalFamily::eval_q(int k, double y) const {
  if (k < 0 || k > usable_degree_) throw std::out_of_range("eval_q: degree out of range");
  return clenshaw(&qcheb_.a[k * qcheb_.cols], k, y / y_scale_);
}

namespace {

// monomial coefficients (in x) of sum_a c_a T_a(x / r)
std::vector<double> chebyshev_to_monomial(const double* c, int m, double r) {
  // rows: T_a as monomials in xi
  std::vector<std::vector<double>> t(m + 1);
  t[0] = {1.0};
  if (m >= 1) t[1] = {0.0, 1.0};
  for (int a = 2; a <= m; ++a) {
    t[a].assign(a + 1, 0.0);
    for (int i = 0; i < a; ++i) t[a][i + 1] += 2.0 * t[a - 1][i];
    for (std::size_t i = 0; i < t[a - 2].size(); ++i) t[a][i] -= t[a - 2][i];
  }
  std::vector<double> out(m + 1, 0.0);
  for (int a = 0; a <= m; ++a)
    for (std::size_t i = 0; i < t[a].size(); ++i) out[i] += c[a] * t[a][i];
  for (int i = 0; i <= m; ++i) out[i] /= std::pow(r, i);
  return out;
}

std::vector<double> colleague_roots(const double* c, int m, double r) {
  if (m == 0) return {};
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, m);
  if (m == 1) {
    a(0, 0) = -c[0] / (2.0 * c[1]) * 2.0;  // single root of c0 + c1*xi
  } else {
    a(0, 1) = 1.0;
    for (int i = 1; i < m - 1; ++i) {
      a(i, i - 1) = 0.5;
      a(i, i + 1) = 0.5;
    }
    for (int j = 0; j < m; ++j) a(m - 1, j) = -c[j] / (2.0 * c[m]);
    a(m - 1, m - 2) += 0.5;
  }
  Eigen::EigenSolver<Eigen::MatrixXd> es(a);
  std::vector<double> roots;
  for (int i = 0; i < m; ++i) roots.push_back(es.eigenvalues()(i).real() * r);
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace

std::vector<double> BiorthogonalFamily::p_coeffs(int j) const {
  if (j < 0 || j > usable_degree_) throw std::out_of_range("p_coeffs: degree out of range");
  return chebyshev_to_monomial(&pcheb_.a[j * pcheb_.cols], j, x_scale_);
}

std::vector<double> BiorthogonalFamily::q_coeffs(int k) const {
  if (k < 0 || k > usable_degree_) throw std::out_of_range("q_coeffs: degree out of range");
  return chebyshev_to_monomial(&qcheb_.a[k * qcheb_.cols], k, y_scale_);
}

std::vector<double> BiorthogonalFamily::p_zeros(int j) const {
  if (j < 0 || j > usable_degree_) throw std::out_of_range("p_zeros: degree out of range");
  return colleague_roots(&pcheb_.a[j * pcheb_.cols], j, x_scale_);
}

std::vector<double> BiorthogonalFamily::q_zeros(int k) const {
  if (k < 0 || k > usable_degree_) throw std::out_of_range("q_zeros: degree out of range");
  return colleague_roots(&qcheb_.a[k * qcheb_.cols], k, y_scale_);
}

double BiorthogonalFamily::pairing(int j, int k) const {
  if (j > usable_degree_ || k > usable_degree_) throw std::out_of_range("pairing: degree");
  double acc = 0.0;
  for (std::size_t q = 0; q < xq_.size(); ++q) {
    double qk = 0.0;
    for (int b = 0; b <= k; ++b) qk += qcheb_(k, b) * ycheb_(q, b);
    acc += xw_[q] * eval_p(j, xq_[q]) * qk;
  }
  return acc * std::exp(-log_shift_);
}

double BiorthogonalFamily::transformed_Q(int k, double x) const {
  if (k < 0 || k > usable_degree_) throw std::out_of_range("transformed_Q: degree");
  std::vector<double> yc = y_moments_at(x, k, true);
  double acc = 0.0;
  for (int b = 0; b <= k; ++b) acc += qcheb_(k, b) * yc[b];
  return acc * std::exp(-log_shift_);
}

double BiorthogonalFamily::transformed_P(int j, double y) const {
  if (j < 0 || j > usable_degree_) throw std::out_of_range("transformed_P: degree");
  double acc = 0.0;
  const double vw = eval_potential(spec_, 'W', y);
  for (std::size_t q = 0; q < xq_.size(); ++q) {
    double x = xq_[q];
    double expo = -static_cast<double>(n_) *
                      (eval_potential(spec_, 'V', x) + vw - spec_.tau * x * y) +
                  log_shift_;
    double wt = expo < -740.0 ? 0.0 : std::exp(expo);
    if (wt == 0.0) continue;
    acc += xw_[q] * eval_p(j, x) * wt;
  }
  return acc * std::exp(-log_shift_);
}

double BiorthogonalFamily::kernel(int which, double u, double v) const {
  if (usable_degree_ < n_ - 1)
    throw std::runtime_error("kernel: family degree falls short of n - 1");
  double acc = 0.0;
  switch (which) {
    case 11: {
      std::vector<double> yc = y_moments_at(v, n_ - 1, true);
      for (int k = 0; k < n_; ++k) {
        double qk = 0.0;
        for (int b = 0; b <= k; ++b) qk += qcheb_(k, b) * yc[b];
        acc += eval_p(k, u) * qk / h_[k];
      }
      return acc;  // scale factors cancel between Q and h
    }
    case 12: {
      for (int k = 0; k < n_; ++k) acc += eval_p(k, u) * eval_q(k, v) / h_[k];
      return acc * std::exp(log_shift_);
    }
    case 21: {
      // first argument is the y-type point, second the x-type point
      std::vector<double> yc = y_moments_at(v, n_ - 1, true);
      for (int k = 0; k < n_; ++k) {
        double qk_scaled = 0.0;
        for (int b = 0; b <= k; ++b) qk_scaled += qcheb_(k, b) * yc[b];
        acc += transformed_P(k, u) * qk_scaled / h_[k];  // raw P, scale cancels in Q/h
      }
      double expo = -static_cast<double>(n_) * (eval_potential(spec_, 'V', v) +
                                                eval_potential(spec_, 'W', u) -
                                                spec_.tau * v * u);
      if (expo > 700.0) throw std::runtime_error("kernel: weight overflow at this point");
      double wt = expo < -740.0 ? 0.0 : std::exp(expo);
      return acc - wt;
    }
    case 22: {
      double h_unshift = std::exp(-log_shift_);
      for (int k = 0; k < n_; ++k)
        acc += transformed_P(k, u) * eval_q(k, v) / (h_[k] * h_unshift);
      return acc;
    }
    default:
      throw std::invalid_argument("kernel: which must be 11, 12, 21 or 22");
  }
}

double BiorthogonalFamily::kernel_trace() const {
  if (usable_degree_ < n_ - 1)
    throw std::runtime_error("kernel_trace: family degree falls short of n - 1");
  double acc = 0.0;
  for (std::size_t q = 0; q < xq_.size(); ++q) {
    double diag = 0.0;
    for (int k = 0; k < n_; ++k) {
      double qk = 0.0;
      for (int b = 0; b <= k; ++b) qk += qcheb_(k, b) * ycheb_(q, b);
      diag += eval_p(k, xq_[q]) * qk / h_[k];
    }
    acc += xw_[q] * diag;
  }
  return acc;
}

BiorthogonalFamily::MopReport BiorthogonalFamily::verify_mop_conditions(int j) const {
  if (j < 0 || j > usable_degree_) throw std::out_of_range("verify_mop_conditions: degree");
  MopReport report;
  report.j = j;
  const int r = 3;  // quartic W: three weight functions
  for (int k = 0; k < r; ++k) {
    int lmax = (j - k + r - 1) / r - 1;  // ceil((j-k)/r) - 1
    for (int l = 0; l <= lmax; ++l) {
      double num = 0.0, den = 0.0;
      for (std::size_t q = 0; q < xq_.size(); ++q) {
        double term = xw_[q] * eval_p(j, xq_[q]) * std::pow(xq_[q], l) * ymono_(q, k);
        num += term;
        den += std::abs(term);
      }
      if (den > 0.0)
        report.max_scaled_residual = std::max(report.max_scaled_residual, std::abs(num) / den);
      ++report.conditions;
    }
  }
  return report;
}

}  // namespace tmm
