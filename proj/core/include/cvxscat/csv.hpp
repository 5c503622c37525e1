#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace cvxscat {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  /// Index of a named column; throws ContractError if absent.
  std::size_t column(const std::string& name) const;
};

/// Writes numbers with 17 significant digits so values round-trip exactly.
void write_csv(const std::filesystem::path& path, const CsvTable& table);
CsvTable read_csv(const std::filesystem::path& path);

}  // namespace cvxscat
