#include "mrt/tables.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "mrt/errors.hpp"
#include "mrt/spectral_solver.hpp"

namespace mrt::io {

namespace {

bool matches(const Value& v, Kind kind) {
  switch (kind) {
    case Kind::real: return std::holds_alternative<double>(v);
    case Kind::integer: return std::holds_alternative<std::int64_t>(v);
    case Kind::text: return std::holds_alternative<std::string>(v);
    case Kind::boolean: return std::holds_alternative<bool>(v);
  }
  return false;
}

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string cell_text(const Value& v) {
  if (const auto* d = std::get_if<double>(&v)) return format_real(*d);
  if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  if (const auto* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
  return quote(std::get<std::string>(v));
}

std::vector<std::string> split_record(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw IoError("unterminated quote in CSV record");
  out.push_back(cur);
  return out;
}

Value parse_cell(const std::string& s, const Column& col, std::size_t line) {
  auto fail = [&]() -> Value {
    throw IoError("line " + std::to_string(line) + ", column " + col.name +
                  ": cannot parse '" + s + "'");
  };
  switch (col.kind) {
    case Kind::real: {
      if (s.empty()) return fail();
      char* end = nullptr;
      errno = 0;
      const double d = std::strtod(s.c_str(), &end);
      if (*end != '\0') return fail();
      return d;
    }
    case Kind::integer: {
      if (s.empty()) return fail();
      char* end = nullptr;
      errno = 0;
      const long long i = std::strtoll(s.c_str(), &end, 10);
      if (*end != '\0' || errno == ERANGE) return fail();
      return static_cast<std::int64_t>(i);
    }
    case Kind::boolean:
      if (s == "true") return true;
      if (s == "false") return false;
      return fail();
    case Kind::text: return s;
  }
  return fail();
}

nlohmann::json real_json(double d) {
  if (std::isfinite(d)) return d;
  // JSON has no infinities; keep the CSV spelling.
  return format_real(d);
}

Value json_cell(const nlohmann::json& j, const Column& col, std::size_t row) {
  auto fail = [&]() -> Value {
    throw IoError("row " + std::to_string(row) + ", column " + col.name +
                  ": wrong JSON type");
  };
  switch (col.kind) {
    case Kind::real:
      if (j.is_number()) return j.get<double>();
      if (j.is_string()) return parse_cell(j.get<std::string>(), col, row);
      return fail();
    case Kind::integer:
      if (j.is_number_integer()) return j.get<std::int64_t>();
      return fail();
    case Kind::boolean:
      if (j.is_boolean()) return j.get<bool>();
      return fail();
    case Kind::text:
      if (j.is_string()) return j.get<std::string>();
      return fail();
  }
  return fail();
}

Column real(const char* name) { return {name, Kind::real}; }
Column integer(const char* name) { return {name, Kind::integer}; }
Column text(const char* name) { return {name, Kind::text}; }
Column boolean(const char* name) { return {name, Kind::boolean}; }

std::int64_t as_int(std::size_t v) { return static_cast<std::int64_t>(v); }

}  // namespace

std::size_t Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i].name == name) return i;
  }
  throw IoError("no column named " + name);
}

void Table::add(std::vector<Value> row) {
  if (row.size() != columns.size()) {
    throw IoError("row has " + std::to_string(row.size()) + " cells, table has " +
                  std::to_string(columns.size()) + " columns");
  }
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (!matches(row[i], columns[i].kind)) {
      throw IoError("cell type mismatch in column " + columns[i].name);
    }
  }
  rows.push_back(std::move(row));
}

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ',';
    out += quote(table.columns[i].name);
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += cell_text(row[i]);
    }
    out += '\n';
  }
  return out;
}

Table parse_csv(const std::string& text, const std::vector<Column>& schema) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty CSV");
  const auto header = split_record(line);
  if (header.size() != schema.size()) {
    throw IoError("CSV header has " + std::to_string(header.size()) +
                  " columns, schema expects " + std::to_string(schema.size()));
  }
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] != schema[i].name) {
      throw IoError("CSV column " + std::to_string(i) + " is '" + header[i] +
                    "', expected '" + schema[i].name + "'");
    }
  }
  Table t{schema, {}};
  std::size_t number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    const auto cells = split_record(line);
    if (cells.size() != schema.size()) {
      throw IoError("line " + std::to_string(number) + " has " +
                    std::to_string(cells.size()) + " cells");
    }
    std::vector<Value> row;
    row.reserve(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
      row.push_back(parse_cell(cells[i], schema[i], number));
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

nlohmann::json to_json(const Table& table) {
  nlohmann::json cols = nlohmann::json::array();
  for (const auto& c : table.columns) cols.push_back(c.name);
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json r = nlohmann::json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      const auto& name = table.columns[i].name;
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
              r[name] = real_json(v);
            } else {
              r[name] = v;
            }
          },
          row[i]);
    }
    rows.push_back(std::move(r));
  }
  return {{"columns", cols}, {"rows", rows}};
}

Table from_json(const nlohmann::json& j, const std::vector<Column>& schema) {
  if (!j.is_object() || !j.contains("columns") || !j.contains("rows")) {
    throw IoError("table JSON needs 'columns' and 'rows'");
  }
  const auto& cols = j.at("columns");
  if (cols.size() != schema.size()) throw IoError("JSON column count mismatch");
  for (std::size_t i = 0; i < schema.size(); ++i) {
    if (cols[i] != schema[i].name) {
      throw IoError("JSON column " + std::to_string(i) + " is not " +
                    schema[i].name);
    }
  }
  Table t{schema, {}};
  std::size_t index = 0;
  for (const auto& r : j.at("rows")) {
    std::vector<Value> row;
    for (const auto& c : schema) {
      if (!r.contains(c.name)) {
        throw IoError("row " + std::to_string(index) + " lacks " + c.name);
      }
      row.push_back(json_cell(r.at(c.name), c, index));
    }
    t.rows.push_back(std::move(row));
    ++index;
  }
  return t;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) {
      throw IoError("cannot create " + path.parent_path().string() + ": " +
                    ec.message());
    }
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  out.close();
  if (!out) throw IoError("write to " + path.string() + " failed");
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Format parse_format(const std::string& name) {
  if (name == "csv") return Format::csv;
  if (name == "json") return Format::json;
  if (name == "both") return Format::both;
  throw ConfigError("format must be csv, json or both (got '" + name + "')");
}

std::vector<std::string> write_table(const Table& table,
                                     const std::filesystem::path& dir,
                                     const std::string& stem, Format format) {
  std::vector<std::string> files;
  if (format != Format::json) {
    write_text(dir / (stem + ".csv"), to_csv(table));
    files.push_back(stem + ".csv");
  }
  if (format != Format::csv) {
    write_text(dir / (stem + ".json"), to_json(table).dump(1) + "\n");
    files.push_back(stem + ".json");
  }
  return files;
}

std::vector<Column> spectrum_schema() {
  return {real("J"),           real("I_amperes"), integer("k"),
          real("E_GHz"),       real("p_left"),    text("branch_label"),
          real("I_nA_offset"), real("N_L")};
}

std::vector<Column> crossings_schema() {
  return {integer("n_L"),          real("J_c"),
          real("I_c_nA_offset"),   real("delta_MHz"),
          real("width_nA"),        real("slope_H"),
          real("slope_V"),         real("I_amperes"),
          real("N_L"),             integer("k_lower"),
          real("energy_GHz"),      real("p_left_lower"),
          real("p_left_upper"),    real("p_left_before"),
          real("p_left_after"),    real("p_plus"),
          real("p_minus"),         real("two_level_residual"),
          boolean("precision_limited"), boolean("observable")};
}

std::vector<Column> branch_schema() {
  return {integer("n_L"), integer("crossings"), integer("fit_count"),
          real("log_slope"), boolean("has_fit")};
}

std::vector<Column> potential_schema() {
  return {real("J"), real("gamma"), real("u_EJ"), real("u_GHz")};
}

std::vector<Column> wkb_schema() {
  return {real("J"),           real("N_L"),           integer("n_L"),
          real("m_R"),         real("energy_GHz"),    real("action_S"),
          real("delta_L_GHz"), real("delta_R_GHz"),   real("T_cl_s"),
          real("gamma_1"),     real("gamma_2"),       real("delta_overlap_MHz"),
          real("delta_cubic_MHz")};
}

std::vector<Column> deepsweep_schema() {
  return {real("ec_over_ej"),      real("J"),
          real("N_R_harmonic"),    real("delta_L_GHz"),
          real("delta_R_GHz"),     real("delta_R_over_delta_L"),
          real("delta0_MHz"),      real("delta1_MHz"),
          real("delta2_MHz"),      real("ratio0"),
          real("ratio1"),          real("ratio2"),
          boolean("valid"),        text("message")};
}

std::vector<Column> transitions_schema() {
  return {real("J"),           real("I_nA_offset"),  integer("from_n"),
          integer("to_n"),     integer("k_ref"),     integer("k"),
          real("frequency_GHz"), real("p_left_ref"), real("p_left"),
          boolean("ref_present")};
}

std::vector<Column> observability_schema() {
  return {real("J"),
          integer("N_R_exact"),
          real("N_R_harmonic"),
          real("T1_s"),
          real("omega_L"),
          real("bound"),
          real("ratio"),
          real("Gamma_R_GHz"),
          real("Gamma_R_harmonic_GHz"),
          real("delta_R_GHz"),
          real("splitting_GHz"),
          boolean("observable"),
          boolean("coherent_regime")};
}

Table spectrum_table(const std::vector<BiasSample>& samples,
                     const DerivedScales& scales, const BiasAxis& axis) {
  Table t{spectrum_schema(), {}};
  for (const auto& s : samples) {
    const double n_big_l = left_state_count(scales, s.j);
    for (std::size_t i = 0; i < s.energies.size(); ++i) {
      t.add({s.j, axis.amperes(s.j), as_int(s.first_index + i), s.energies[i],
             s.p_left[i], branch_label(s.branch[i]), axis.na_offset(s.j),
             n_big_l});
    }
  }
  return t;
}

Table crossings_table(const SplittingCatalog& catalog, const BiasAxis& axis) {
  Table t{crossings_schema(), {}};
  for (const auto& c : catalog.crossings) {
    t.add({static_cast<std::int64_t>(c.n_l), c.j_c, axis.na_offset(c.j_c),
           c.delta_mhz, c.width_i * 1e9, c.slope_h, c.slope_v,
           axis.amperes(c.j_c), c.n_big_l, as_int(c.k_lower), c.energy_ghz,
           c.p_left_lower, c.p_left_upper, c.p_left_before, c.p_left_after,
           c.p_plus, c.p_minus, c.two_level_residual, c.precision_limited,
           c.observable});
  }
  return t;
}

Table branch_table(const SplittingCatalog& catalog) {
  Table t{branch_schema(), {}};
  for (const auto& b : catalog.branches) {
    t.add({static_cast<std::int64_t>(b.n_l), as_int(b.crossings.size()),
           as_int(b.fit_count), b.log_slope.value_or(std::nan("")),
           b.log_slope.has_value()});
  }
  return t;
}

Table potential_table(const PotentialProfile& profile, const WellSet& wells,
                      const DerivedScales& scales, double gamma_min,
                      double gamma_max, std::size_t samples) {
  if (samples < 2 || !(gamma_max > gamma_min)) {
    throw ConfigError("potential table needs gamma_max > gamma_min and >= 2 samples");
  }
  Table t{potential_schema(), {}};
  const double zero = profile.value(wells.gamma_left_min);
  for (std::size_t i = 0; i < samples; ++i) {
    const double g = gamma_min + (gamma_max - gamma_min) * static_cast<double>(i) /
                                     static_cast<double>(samples - 1);
    const double u = profile.value(g);
    t.add({profile.bias(), g, u, scales.to_ghz(u - zero)});
  }
  return t;
}

Table wkb_table(const std::vector<wkb::WkbEstimate>& estimates,
                const std::vector<double>& bias_j) {
  if (estimates.size() != bias_j.size()) {
    throw IoError("wkb_table: one bias per estimate required");
  }
  Table t{wkb_schema(), {}};
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    const auto& w = estimates[i];
    t.add({bias_j[i], w.n_big_l, static_cast<std::int64_t>(w.n_l), w.m_r,
           w.energy_ghz, w.action_s, w.delta_l_ghz, w.delta_r_ghz, w.t_cl,
           w.turning.barrier_left, w.turning.barrier_right, w.delta_overlap_mhz,
           w.delta_cubic_mhz});
  }
  return t;
}

Table deepsweep_table(const std::vector<wkb::DeepWellSweepPoint>& points) {
  Table t{deepsweep_schema(), {}};
  for (const auto& p : points) {
    auto ratio = [&](int n) {
      return p.min_spacing_ghz[n] > 0.0
                 ? p.delta_mhz[n] * 1e-3 / p.min_spacing_ghz[n]
                 : std::nan("");
    };
    const double rl = p.delta_l_ghz > 0.0 ? p.delta_r_ghz / p.delta_l_ghz
                                          : std::nan("");
    t.add({p.ec_over_ej, p.bias_j, p.n_r_harmonic, p.delta_l_ghz, p.delta_r_ghz,
           rl, p.delta_mhz[0], p.delta_mhz[1], p.delta_mhz[2], ratio(0),
           ratio(1), ratio(2), p.valid, p.message});
  }
  return t;
}

Table transitions_table(const std::vector<TransitionPoint>& points,
                        const BiasAxis& axis) {
  Table t{transitions_schema(), {}};
  for (const auto& p : points) {
    t.add({p.j, axis.na_offset(p.j), static_cast<std::int64_t>(p.from_n),
           static_cast<std::int64_t>(p.to_n), as_int(p.k_ref), as_int(p.k),
           p.frequency_ghz, p.p_left_ref, p.p_left, p.ref_present});
  }
  return t;
}

Table observability_table(const ObservabilityReport& r, double bias_j) {
  Table t{observability_schema(), {}};
  t.add({bias_j, as_int(r.n_r_exact), r.n_r_harmonic, r.t1, r.omega_l, r.bound,
         r.ratio, r.gamma_r_ghz, r.gamma_r_harmonic_ghz, r.delta_r_ghz,
         r.splitting_ghz, r.observable, r.coherent_regime});
  return t;
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace mrt::io
