#pragma once

#include <cstddef>
#include <vector>

#include "tmm/grid.hpp"

namespace tmm {

enum class Exec { serial, parallel };

// Dense row-major matrix; rows are the unit of parallel work.
struct RowMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<double> a;

  RowMatrix() = default;
  RowMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}
  double& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

// Cell-pair averages of -log|u - v| between two grids: entry (i,j) is the
// exact double integral over cell_i x cell_j divided by both cell widths
// (piecewise-constant densities).  Cross-axis pairs use |x - iy|.
// Distinct grids on the same axis must not partially overlap.
RowMatrix log_kernel_matrix(const Grid& a, const Grid& b, Exec exec = Exec::parallel);
RowMatrix log_kernel_matrix_serial(const Grid& a, const Grid& b);

// Exact integral of -log distance over one cell pair (unnormalized).
double cell_pair_log_integral(double a1, double a2, double b1, double b2, bool cross_axis);

// y = M x, rows computed independently (bitwise identical to serial).
void matvec(const RowMatrix& m, const std::vector<double>& x, std::vector<double>& y,
            Exec exec = Exec::parallel);
void matvec_serial(const RowMatrix& m, const std::vector<double>& x, std::vector<double>& y);

// y += s * (M x)
void matvec_add(const RowMatrix& m, const std::vector<double>& x, double s,
                std::vector<double>& y, Exec exec = Exec::parallel);

double dot(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace tmm
