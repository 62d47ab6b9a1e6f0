#include "tmm/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tmm {

Grid Grid::uniform_symmetric(Axis axis, double radius, std::size_t n) {
  if (n < 3 || radius <= 0.0) throw std::invalid_argument("grid: need n >= 3, radius > 0");
  std::vector<double> nodes(n);
  double h = 2.0 * radius / static_cast<double>(n - 1);
  std::size_t half = n / 2;
  // build from the center out so the node set is exactly sign-symmetric
  if (n % 2 == 1) {
    nodes[half] = 0.0;
    for (std::size_t k = 1; k <= half; ++k) {
      double v = static_cast<double>(k) * h;
      nodes[half + k] = v;
      nodes[half - k] = -v;
    }
  } else {
    for (std::size_t k = 0; k < half; ++k) {
      double v = (static_cast<double>(k) + 0.5) * h;
      nodes[half + k] = v;
      nodes[half - 1 - k] = -v;
    }
  }
  return from_nodes(axis, std::move(nodes));
}

Grid Grid::from_nodes(Axis axis, std::vector<double> nodes) {
  if (nodes.size() < 2) throw std::invalid_argument("grid: need at least 2 nodes");
  for (std::size_t i = 1; i < nodes.size(); ++i)
    if (!(nodes[i] > nodes[i - 1]))
      throw std::invalid_argument("grid: nodes must be strictly increasing");
  std::size_t n = nodes.size();
  for (std::size_t i = 0; i < n; ++i)
    if (std::abs(nodes[i] + nodes[n - 1 - i]) > 1e-12 * (1.0 + std::abs(nodes[i])))
      throw std::invalid_argument("grid: nodes must be symmetric under negation");
  Grid g;
  g.axis = axis;
  g.edges.resize(n + 1);
  for (std::size_t i = 1; i < n; ++i) g.edges[i] = 0.5 * (nodes[i - 1] + nodes[i]);
  g.edges[0] = nodes[0] - (g.edges[1] - nodes[0]);
  g.edges[n] = nodes[n - 1] + (nodes[n - 1] - g.edges[n - 1]);
  g.nodes = std::move(nodes);
  g.truncation_radius = std::max(std::abs(g.edges[0]), g.edges[n]);
  return g;
}

bool Grid::same_nodes(const Grid& other) const {
  return axis == other.axis && nodes == other.nodes;
}

double DiscreteMeasure::total_mass() const {
  double acc = 0.0;
  for (double m : masses) acc += m;
  return acc;
}

double DiscreteMeasure::max_density() const {
  double best = 0.0;
  for (std::size_t i = 0; i < masses.size(); ++i) best = std::max(best, density(i));
  return best;
}

void DiscreteMeasure::validate() const {
  if (masses.size() != grid.size()) throw std::invalid_argument("measure: size mismatch");
  if (!caps.empty() && caps.size() != masses.size())
    throw std::invalid_argument("measure: caps size mismatch");
  for (std::size_t i = 0; i < masses.size(); ++i) {
    if (!(masses[i] >= 0.0)) throw std::invalid_argument("measure: negative mass");
    if (!caps.empty() && masses[i] > caps[i] + 1e-14)
      throw std::invalid_argument("measure: mass exceeds cap");
  }
}

}  // namespace tmm
