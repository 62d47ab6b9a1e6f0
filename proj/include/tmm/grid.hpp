#pragma once

#include <cstddef>
#include <vector>

namespace tmm {

enum class Axis { real_line, imaginary_line };

// Cells are the intervals between midpoints of consecutive nodes, extended
// half a spacing past the end nodes.  Coordinates on the imaginary line are
// Im z.  Grids must be symmetric under coordinate negation.
struct Grid {
  Axis axis = Axis::real_line;
  std::vector<double> nodes;  // strictly increasing
  std::vector<double> edges;  // size nodes.size() + 1
  double truncation_radius = 0.0;

  std::size_t size() const { return nodes.size(); }
  double width(std::size_t i) const { return edges[i + 1] - edges[i]; }

  static Grid uniform_symmetric(Axis axis, double radius, std::size_t n);

  // from arbitrary symmetric node set
  static Grid from_nodes(Axis axis, std::vector<double> nodes);

  bool same_nodes(const Grid& other) const;
};

// Nonnegative cell masses on a grid, optionally bounded above cellwise.
struct DiscreteMeasure {
  Grid grid;
  std::vector<double> masses;
  std::vector<double> caps;  // empty = unconstrained

  double total_mass() const;
  double density(std::size_t i) const { return masses[i] / grid.width(i); }
  double max_density() const;

  void validate() const;  // mass >= 0, mass <= cap + 1e-14
};

}  // namespace tmm
