#include "mdlab/reports.hpp"

#include <charconv>
#include <cmath>

#include <Eigen/Core>
#include <fftw3.h>

namespace mdlab {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::vector<std::string> columns)
    : path_(path), columns_(std::move(columns)) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  out_.open(path);
  if (!out_) throw IoError("cannot write " + path.string());
  row(columns_);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_.size()) {
    throw ContractError(path_.string() + ": row has " + std::to_string(cells.size()) + " cells, header has " +
                        std::to_string(columns_.size()));
  }
  for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
  out_ << '\n';
  out_.flush();
  if (!out_) throw IoError("write failed for " + path_.string());
}

void CsvWriter::row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_number(v));
  row(cells);
}

json to_json(const Vec3& v) { return json::array({v[0], v[1], v[2]}); }

namespace {

/// JSON cannot hold inf or nan; they are written as strings.
json number(double x) {
  if (std::isfinite(x)) return x;
  return format_number(x);
}

}  // namespace

json report_header(const RunConfig& c) {
  json h;
  h["schema_version"] = report_schema_version;
  h["mode"] = to_string(c.mode);
  h["seed"] = c.seed;
  h["grid"] = {{"n", c.grid.n}, {"L", c.grid.L}, {"mass", c.grid.mass}};
  h["constants"] = {{"delta", c.constants.delta},
                    {"zeta", c.constants.zeta},
                    {"delta_bar", c.constants.delta_bar},
                    {"N", c.constants.N},
                    {"H", c.constants.H},
                    {"default", c.constants.is_default()}};
  h["allow_past_horizon"] = c.allow_past_horizon;
  return h;
}

void write_json(const std::filesystem::path& path, const json& j) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed for " + path.string());
}

void write_manifest(const std::filesystem::path& dir, const RunConfig& c, double seconds, const json& extra) {
  json m = report_header(c);
  m["config"] = to_text(c);
  m["versions"] = {{"mdlab", mdlab_version},
                   {"fftw", std::string(fftw_version)},
                   {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                 std::to_string(EIGEN_MINOR_VERSION)},
                   {"compiler", std::string(__VERSION__)}};
  m["threads"] = configured_threads();
  m["wall_seconds"] = seconds;
  m["result"] = extra;
  write_json(dir / "manifest.json", m);
}

json to_json(const DiagnosticRow& r) {
  return {{"t", r.t},
          {"step", r.step},
          {"charge", r.charge},
          {"charge_drift", r.charge_drift},
          {"lorenz_residual", number(r.lorenz_residual)},
          {"psi_sup", r.psi_sup},
          {"past_horizon", r.past_horizon}};
}

json to_json(const BoundResult& b) {
  return {{"kind", to_string(b.kind)},
          {"signs", to_string(b.signs)},
          {"quantity", b.quantity},
          {"comparator", b.comparator},
          {"classified_set", to_string(b.classified)},
          {"samples", b.samples},
          {"min_ratio", number(b.min_ratio)},
          {"ratio_argmin", {{"xi", to_json(b.ratio_argmin_xi)}, {"eta", to_json(b.ratio_argmin_eta)}}},
          {"raw_min", number(b.raw_min)},
          {"raw_argmin", {{"xi", to_json(b.raw_argmin_xi)}, {"eta", to_json(b.raw_argmin_eta)}}},
          {"argmin_distance", number(b.argmin_distance)},
          {"positive", b.positive},
          {"consistent", b.consistent}};
}

json to_json(const ApproximationScan& a) {
  return {{"max_ratio", a.max_ratio},
          {"argmax", {{"xi", to_json(a.argmax_xi)}, {"eta", to_json(a.argmax_eta)}}},
          {"samples", a.samples}};
}

json to_json(const DriftReport& d) {
  json shells = json::array();
  for (const auto& s : d.shells) shells.push_back({{"k", s.k}, {"uncorrected", s.uncorrected}, {"corrected", s.corrected}});
  json modes = json::array();
  for (const auto& m : d.modes) {
    modes.push_back({{"mode", m.mode},
                     {"amplitude", m.amplitude},
                     {"modulus_drift", m.modulus_drift},
                     {"argument_drift", m.argument_drift}});
  }
  json maxwell = json::array();
  for (const auto& m : d.maxwell) {
    maxwell.push_back({{"k", m.k}, {"mu", m.mu}, {"theta_prime", m.theta_prime}, {"drift", m.drift}});
  }
  return {{"t1", d.t1},
          {"t2", d.t2},
          {"uncorrected", d.uncorrected},
          {"corrected", d.corrected},
          {"ratio", number(d.ratio)},
          {"maxwell_sup", d.maxwell_sup},
          {"excluded_modes", d.excluded_modes},
          {"shells", shells},
          {"modes", modes},
          {"maxwell", maxwell}};
}

json to_json(const CommutatorReport& r) {
  return {{"rotation", r.rotation},
          {"radial", r.radial},
          {"boost", r.boost},
          {"weight_dirac", r.weight_dirac},
          {"weight_wave", r.weight_wave},
          {"boundary_fraction", r.boundary_fraction}};
}

std::vector<std::string> diagnostic_columns() {
  return {"t", "step", "charge", "charge_drift", "lorenz_residual", "psi_sup", "past_horizon"};
}

std::vector<std::string> diagnostic_cells(const DiagnosticRow& r) {
  return {format_number(r.t),
          std::to_string(r.step),
          format_number(r.charge),
          format_number(r.charge_drift),
          format_number(r.lorenz_residual),
          format_number(r.psi_sup),
          r.past_horizon ? "1" : "0"};
}

}  // namespace mdlab
