#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "tmm/equilibrium.hpp"
#include "tmm/two_matrix.hpp"

namespace tmm {

// Fixed "%.17g" formatting: payload rows are reproducible byte for byte.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void row(const std::vector<double>& values);
  void row(const std::vector<std::string>& values);

 private:
  FILE* f_ = nullptr;
  std::size_t columns_ = 0;
};

std::string format_double(double v);

void write_solution_csv(const std::filesystem::path& path, const EquilibriumSolution& solution);

void write_manifest(const std::filesystem::path& path, const nlohmann::json& manifest);

}  // namespace tmm
