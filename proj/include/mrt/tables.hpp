#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "mrt/bias_sweep.hpp"
#include "mrt/circuit_model.hpp"
#include "mrt/observability.hpp"
#include "mrt/wkb.hpp"

namespace mrt::io {

enum class Kind { real, integer, text, boolean };

struct Column {
  std::string name;
  Kind kind = Kind::real;
};

using Value = std::variant<double, std::int64_t, std::string, bool>;

struct Table {
  std::vector<Column> columns;
  std::vector<std::vector<Value>> rows;

  std::size_t column(const std::string& name) const;
  void add(std::vector<Value> row);
};

/// %.17g, so that reading the text back gives the same double.
std::string format_real(double x);

std::string to_csv(const Table& table);
/// Header must match the schema exactly; every cell must parse as its kind.
Table parse_csv(const std::string& text, const std::vector<Column>& schema);

nlohmann::json to_json(const Table& table);
Table from_json(const nlohmann::json& j, const std::vector<Column>& schema);

/// Throws IoError when the file cannot be written.
void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

enum class Format { csv, json, both };
Format parse_format(const std::string& name);

/// Writes <stem>.csv and/or <stem>.json under dir; returns the file names.
std::vector<std::string> write_table(const Table& table,
                                     const std::filesystem::path& dir,
                                     const std::string& stem, Format format);

// Schemas of the emitted tables.
std::vector<Column> spectrum_schema();
std::vector<Column> crossings_schema();
std::vector<Column> branch_schema();
std::vector<Column> potential_schema();
std::vector<Column> wkb_schema();
std::vector<Column> deepsweep_schema();
std::vector<Column> transitions_schema();
std::vector<Column> observability_schema();

/// Bias coordinates: J, absolute current, and nA offset from j_origin.
struct BiasAxis {
  double critical_current = 0.0;
  double j_origin = 0.0;
  double amperes(double j) const { return critical_current * j; }
  double na_offset(double j) const {
    return (j - j_origin) * critical_current * 1e9;
  }
};

Table spectrum_table(const std::vector<BiasSample>& samples,
                     const DerivedScales& scales, const BiasAxis& axis);
Table crossings_table(const SplittingCatalog& catalog, const BiasAxis& axis);
Table branch_table(const SplittingCatalog& catalog);
Table potential_table(const PotentialProfile& profile, const WellSet& wells,
                      const DerivedScales& scales, double gamma_min,
                      double gamma_max, std::size_t samples);
Table wkb_table(const std::vector<wkb::WkbEstimate>& estimates,
                const std::vector<double>& bias_j);
Table deepsweep_table(const std::vector<wkb::DeepWellSweepPoint>& points);
Table transitions_table(const std::vector<TransitionPoint>& points,
                        const BiasAxis& axis);
Table observability_table(const ObservabilityReport& report, double bias_j);

/// 64-bit FNV-1a of the bytes, as 16 lower-case hex digits.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace mrt::io
