#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "mdlab/config.hpp"
#include "mdlab/evolution.hpp"
#include "mdlab/resonance.hpp"
#include "mdlab/scattering.hpp"
#include "mdlab/vector_fields.hpp"

namespace mdlab {

using json = nlohmann::json;

inline constexpr int report_schema_version = 1;
inline constexpr const char* mdlab_version = "1.0.0";

/// CSV file with a declared header row. Every row must match the header width.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::vector<std::string> columns);
  void row(const std::vector<std::string>& cells);
  void row(const std::vector<double>& values);
  std::size_t columns() const { return columns_.size(); }

 private:
  std::ofstream out_;
  std::filesystem::path path_;
  std::vector<std::string> columns_;
};

/// Number formatting shared by every report: shortest round-trip form.
std::string format_number(double x);

/// Common header: schema version, mode, seed, grid and the constants in use.
json report_header(const RunConfig& c);

void write_json(const std::filesystem::path& path, const json& j);

/// manifest.json: header, config echo, library versions, wall time, threads.
void write_manifest(const std::filesystem::path& dir, const RunConfig& c, double seconds, const json& extra);

json to_json(const Vec3& v);
json to_json(const DiagnosticRow& r);
json to_json(const BoundResult& b);
json to_json(const ApproximationScan& a);
json to_json(const DriftReport& d);
json to_json(const CommutatorReport& r);

std::vector<std::string> diagnostic_columns();
std::vector<std::string> diagnostic_cells(const DiagnosticRow& r);

}  // namespace mdlab
