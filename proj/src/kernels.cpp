#include "tmm/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace tmm {

namespace {

// Second antiderivative of -log|s|; F''(s) = -log|s|, F(0) = 0, C^1 at 0.
inline double log_anti2(double s) {
  if (s == 0.0) return 0.0;
  return 0.75 * s * s - 0.5 * s * s * std::log(std::abs(s));
}

// Mixed antiderivative of log(x^2 + y^2): d2P/dxdy recovers the integrand.
// Every term vanishes on the axes, which keeps P continuous there.
inline double log_dist_anti(double x, double y) {
  if (x == 0.0 || y == 0.0) return 0.0;
  return x * y * std::log(x * x + y * y) - 3.0 * x * y + x * x * std::atan(y / x) +
         y * y * std::atan(x / y);
}

inline double same_axis_entry(double a1, double a2, double b1, double b2) {
  return log_anti2(a2 - b1) + log_anti2(a1 - b2) - log_anti2(a1 - b1) - log_anti2(a2 - b2);
}

inline double cross_axis_entry(double a1, double a2, double b1, double b2) {
  return -0.5 * (log_dist_anti(a2, b2) - log_dist_anti(a1, b2) - log_dist_anti(a2, b1) +
                 log_dist_anti(a1, b1));
}

void check_overlap(const Grid& a, const Grid& b) {
  if (a.axis != b.axis || a.same_nodes(b)) return;
  double lo = std::max(a.edges.front(), b.edges.front());
  double hi = std::min(a.edges.back(), b.edges.back());
  if (lo < hi)
    throw std::invalid_argument(
        "log_kernel_matrix: distinct grids on the same axis overlap; use identical or "
        "disjoint grids");
}

inline void assemble_row(const Grid& a, const Grid& b, bool cross, std::size_t i,
                         double* row) {
  double a1 = a.edges[i], a2 = a.edges[i + 1];
  double inv_wa = 1.0 / (a2 - a1);
  const double* eb = b.edges.data();
  const std::size_t m = b.size();
  for (std::size_t j = 0; j < m; ++j) {
    double b1 = eb[j], b2 = eb[j + 1];
    double v = cross ? cross_axis_entry(a1, a2, b1, b2) : same_axis_entry(a1, a2, b1, b2);
    row[j] = v * inv_wa / (b2 - b1);
  }
}

}  // namespace

double cell_pair_log_integral(double a1, double a2, double b1, double b2, bool cross_axis) {
  return cross_axis ? cross_axis_entry(a1, a2, b1, b2) : same_axis_entry(a1, a2, b1, b2);
}

RowMatrix log_kernel_matrix_serial(const Grid& a, const Grid& b) {
  check_overlap(a, b);
  const bool cross = a.axis != b.axis;
  RowMatrix k(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) assemble_row(a, b, cross, i, &k.a[i * k.cols]);
  return k;
}

RowMatrix log_kernel_matrix(const Grid& a, const Grid& b, Exec exec) {
  if (exec == Exec::serial) return log_kernel_matrix_serial(a, b);
  check_overlap(a, b);
  const bool cross = a.axis != b.axis;
  RowMatrix k(a.size(), b.size());
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < static_cast<long long>(a.size()); ++i)
    assemble_row(a, b, cross, static_cast<std::size_t>(i), &k.a[i * k.cols]);
  return k;
}

void matvec_serial(const RowMatrix& m, const std::vector<double>& x, std::vector<double>& y) {
  y.assign(m.rows, 0.0);
  for (std::size_t i = 0; i < m.rows; ++i) {
    const double* row = &m.a[i * m.cols];
    double acc = 0.0;
    for (std::size_t j = 0; j < m.cols; ++j) acc += row[j] * x[j];
    y[i] = acc;
  }
}

void matvec(const RowMatrix& m, const std::vector<double>& x, std::vector<double>& y,
            Exec exec) {
  if (exec == Exec::serial) {
    matvec_serial(m, x, y);
    return;
  }
  y.assign(m.rows, 0.0);
#pragma omp parallel for schedule(static)
  for (long long ii = 0; ii < static_cast<long long>(m.rows); ++ii) {
    std::size_t i = static_cast<std::size_t>(ii);
    const double* row = &m.a[i * m.cols];
    double acc = 0.0;
    for (std::size_t j = 0; j < m.cols; ++j) acc += row[j] * x[j];
    y[i] = acc;
  }
}

void matvec_add(const RowMatrix& m, const std::vector<double>& x, double s,
                std::vector<double>& y, Exec exec) {
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (long long ii = 0; ii < static_cast<long long>(m.rows); ++ii) {
    std::size_t i = static_cast<std::size_t>(ii);
    const double* row = &m.a[i * m.cols];
    double acc = 0.0;
    for (std::size_t j = 0; j < m.cols; ++j) acc += row[j] * x[j];
    y[i] += s * acc;
  }
}

double dot(const std::vector<double>& x, const std::vector<double>& y) {
  double acc = 0.0;  // fixed-order accumulation keeps results thread-count independent
  for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
  return acc;
}

}  // namespace tmm
