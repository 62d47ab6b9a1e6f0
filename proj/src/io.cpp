#include "tmm/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace tmm {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : columns_(header.size()) {
  f_ = std::fopen(path.string().c_str(), "wb");
  if (!f_) throw std::runtime_error("csv: cannot open " + path.string());
  for (std::size_t i = 0; i < header.size(); ++i)
    std::fprintf(f_, "%s%s", header[i].c_str(), i + 1 < header.size() ? "," : "\n");
}

CsvWriter::~CsvWriter() {
  if (f_) std::fclose(f_);
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != columns_) throw std::invalid_argument("csv: column count mismatch");
  for (std::size_t i = 0; i < values.size(); ++i)
    std::fprintf(f_, "%.17g%s", values[i], i + 1 < values.size() ? "," : "\n");
}

void CsvWriter::row(const std::vector<std::string>& values) {
  if (values.size() != columns_) throw std::invalid_argument("csv: column count mismatch");
  for (std::size_t i = 0; i < values.size(); ++i)
    std::fprintf(f_, "%s%s", values[i].c_str(), i + 1 < values.size() ? "," : "\n");
}

void write_solution_csv(const std::filesystem::path& path,
                        const EquilibriumSolution& solution) {
  CsvWriter csv(path, {"measure", "index", "coordinate", "width", "mass", "density", "cap",
                       "effective_potential"});
  for (std::size_t j = 0; j < solution.measures.size(); ++j) {
    const DiscreteMeasure& m = solution.measures[j];
    for (std::size_t i = 0; i < m.masses.size(); ++i) {
      double cap = m.caps.empty() ? std::numeric_limits<double>::infinity() : m.caps[i];
      csv.row(std::vector<double>{static_cast<double>(j + 1), static_cast<double>(i),
                                  m.grid.nodes[i], m.grid.width(i), m.masses[i], m.density(i),
                                  cap, solution.effective_potentials[j][i]});
    }
  }
}

void write_manifest(const std::filesystem::path& path, const nlohmann::json& manifest) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("manifest: cannot open " + path.string());
  out << manifest.dump(2) << "\n";
}

}  // namespace tmm
