#include <doctest.h>

#include <bit>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "mrt/cli.hpp"
#include "mrt/config.hpp"
#include "mrt/errors.hpp"
#include "mrt/tables.hpp"

using namespace mrt;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

io::Table random_table(unsigned seed) {
  io::Table t{{{"x", io::Kind::real},
               {"n", io::Kind::integer},
               {"label", io::Kind::text},
               {"flag", io::Kind::boolean}},
              {}};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint64_t> bits;
  for (int i = 0; i < 500; ++i) {
    double x = std::bit_cast<double>(bits(rng));
    if (!std::isfinite(x)) x = i;  // NaN payloads do not round-trip as text
    t.add({x, static_cast<std::int64_t>(bits(rng)), std::string("a,\"b\" ") + std::to_string(i),
           i % 3 == 0});
  }
  t.add({std::numeric_limits<double>::infinity(), std::int64_t{-1}, std::string("V"), false});
  t.add({-0.0, std::int64_t{0}, std::string(""), true});
  return t;
}

bool same_bits(const io::Table& a, const io::Table& b) {
  if (a.rows.size() != b.rows.size()) return false;
  for (std::size_t r = 0; r < a.rows.size(); ++r) {
    for (std::size_t c = 0; c < a.rows[r].size(); ++c) {
      const auto& x = a.rows[r][c];
      const auto& y = b.rows[r][c];
      if (x.index() != y.index()) return false;
      if (const auto* d = std::get_if<double>(&x)) {
        if (std::bit_cast<std::uint64_t>(*d) != std::bit_cast<std::uint64_t>(std::get<double>(y)))
          return false;
      } else if (x != y) {
        return false;
      }
    }
  }
  return true;
}

json small_config_json(const fs::path& out) {
  return {{"circuit",
           {{"capacitance_farads", 12e-15},
            {"inductance_henries", 168e-12},
            {"critical_current_amperes", 8.531e-6},
            {"t1_seconds", 25e-9}}},
          {"bias", {{"n_l", 1.5}}},
          {"sweep", {{"n_l_max", 2.5}, {"n_l_min", 0.5}, {"n_coarse", 30}, {"max_branch", 1}}},
          {"grid", {{"n_points", 512}}},
          {"deepsweep", {{"count", 5}}},
          {"outputs", {{"directory", out.string()}, {"format", "both"}}}};
}

int run(std::vector<std::string> args) {
  args.insert(args.begin(), "mrtspec");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  argv.push_back(nullptr);
  return cli::cli_dispatch(static_cast<int>(args.size()), argv.data());
}

fs::path write_config(const std::string& name, const json& j) {
  const fs::path p = fs::current_path() / "io_test" / name;
  io::write_text(p, j.dump(1));
  return p;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("CSV and JSON round-trip at full precision") {
  const io::Table t = random_table(3);
  const io::Table csv = io::parse_csv(io::to_csv(t), t.columns);
  CHECK(same_bits(t, csv));
  const io::Table js = io::from_json(json::parse(io::to_json(t).dump()), t.columns);
  CHECK(same_bits(t, js));
  CHECK(io::format_real(0.1) == "0.10000000000000001");
}

TEST_CASE("schema mismatches are explicit") {
  const io::Table t = random_table(4);
  auto schema = t.columns;
  schema[1].name = "m";
  CHECK_THROWS_WITH_AS(io::parse_csv(io::to_csv(t), schema),
                       doctest::Contains("expected 'm'"), IoError);
  schema = t.columns;
  schema[0].kind = io::Kind::integer;
  CHECK_THROWS_AS(io::parse_csv(io::to_csv(t), schema), IoError);
  CHECK_THROWS_AS(io::parse_csv("x,n,label\n", t.columns), IoError);
  io::Table bad{t.columns, {}};
  CHECK_THROWS_AS(bad.add({1.0, 2.0, std::string("x"), true}), IoError);
}

TEST_CASE("published column orders") {
  auto names = [](const std::vector<io::Column>& cols) {
    std::vector<std::string> out;
    for (const auto& c : cols) out.push_back(c.name);
    return out;
  };
  const auto spectrum = names(io::spectrum_schema());
  const std::vector<std::string> s6 = {"J", "I_amperes", "k", "E_GHz", "p_left", "branch_label"};
  CHECK(std::vector<std::string>(spectrum.begin(), spectrum.begin() + 6) == s6);
  const auto crossings = names(io::crossings_schema());
  const std::vector<std::string> c7 = {"n_L", "J_c", "I_c_nA_offset", "delta_MHz",
                                       "width_nA", "slope_H", "slope_V"};
  CHECK(std::vector<std::string>(crossings.begin(), crossings.begin() + 7) == c7);
}

TEST_CASE("FNV-1a reference vectors") {
  CHECK(io::fnv1a_hex("") == "cbf29ce484222325");
  CHECK(io::fnv1a_hex("a") == "af63dc4c8601ec8c");
  CHECK(io::fnv1a_hex("foobar") == "85944171f73967e8");
}

TEST_CASE("config parsing is strict") {
  json j = small_config_json("out");
  const RunConfig c = parse_config(j);
  CHECK(c.require_circuit().capacitance == 12e-15);
  CHECK(c.format == io::Format::both);
  CHECK(c.n_points == 512);

  auto rejects = [](json k, const std::string& what) {
    CAPTURE(what);
    CHECK_THROWS_WITH_AS(parse_config(k), doctest::Contains(what.c_str()), ConfigError);
  };
  json k = j;
  k["circuit"]["capacitance_pf"] = 1.2;
  rejects(k, "circuit.capacitance_pf");
  k = j;
  k["colour"] = "blue";
  rejects(k, "colour");
  k = j;
  k["circuit"].erase("inductance_henries");
  rejects(k, "inductance_henries");
  k = j;
  k["bias"]["j"] = 1.2;
  rejects(k, "not both");
  k = j;
  k["grid"]["n_points"] = 513;
  rejects(k, "even");
  k = j;
  k["grid"]["n_points"] = "512";
  rejects(k, "integer");
  k = j;
  k["outputs"]["format"] = "xml";
  rejects(k, "format");
  k = j;
  k["sweep"].erase("n_l_min");
  rejects(k, "together");
}

TEST_CASE("shipped configs load") {
  std::size_t count = 0;
  for (const auto& entry : fs::directory_iterator(MRT_CONFIG_DIR)) {
    if (entry.path().extension() != ".json") continue;
    CAPTURE(entry.path().string());
    CHECK_NOTHROW(load_config(entry.path()));
    ++count;
  }
  CHECK(count == 4);
}

TEST_CASE("canonical config is order independent and hashes stably") {
  const json a = small_config_json("out");
  json b = json::parse(a.dump());
  const RunConfig ca = parse_config(a);
  const RunConfig cb = parse_config(b);
  CHECK(canonical_json(ca).dump() == canonical_json(cb).dump());
  CHECK(parse_config(canonical_json(ca)).n_points == ca.n_points);
}

TEST_CASE("sweep window from N_L targets") {
  const RunConfig c = parse_config(small_config_json("out"));
  const DerivedScales s = derive_scales(c.require_circuit());
  const SweepConfig sc = sweep_config(c, s);
  CHECK(left_state_count(s, sc.j_start) == doctest::Approx(2.5));
  CHECK(left_state_count(s, sc.j_end) == doctest::Approx(0.5));
}

TEST_CASE("CLI exit codes") {
  const fs::path out = fs::current_path() / "io_test" / "cli";
  const fs::path cfg = write_config("small.json", small_config_json(out));
  CHECK(run({"potential", "--config", cfg.string()}) == cli::kOk);
  CHECK(fs::exists(out / "potential.csv"));
  CHECK(fs::exists(out / "potential.json"));
  CHECK(fs::exists(out / "potential.manifest.json"));
  // J beyond J*.
  CHECK(run({"spectrum", "--config", cfg.string(), "--bias-j", "2.0"}) == cli::kRegime);
  json bad = small_config_json(out);
  bad["sweep"]["bogus"] = 1;
  CHECK(run({"spectrum", "--config", write_config("bad.json", bad).string()}) == cli::kConfig);
  CHECK(run({"nonsense"}) == cli::kConfig);
  CHECK(run({"spectrum", "--config", "/no/such/file.json"}) == cli::kConfig);
  CHECK(run({"potential", "--config", cfg.string(), "--out", "/proc/mrt-denied"}) == cli::kIo);
  json no_t1 = small_config_json(out);
  no_t1["circuit"].erase("t1_seconds");
  CHECK(run({"observability", "--config", write_config("no_t1.json", no_t1).string()}) ==
        cli::kConfig);
}

TEST_CASE("identical runs write identical bytes") {
  const fs::path a = fs::current_path() / "io_test" / "run_a";
  const fs::path b = fs::current_path() / "io_test" / "run_b";
  for (const auto& cmd : {"spectrum", "crossings", "deepsweep", "wkb"}) {
    CAPTURE(cmd);
    const std::string cfg_a = write_config("a.json", small_config_json(a)).string();
    REQUIRE(run({cmd, "--config", cfg_a}) == 0);
    const std::string first = io::read_text(a / (std::string(cmd) + ".csv"));
    const std::string first_manifest = io::read_text(a / (std::string(cmd) + ".manifest.json"));
    REQUIRE(run({cmd, "--config", cfg_a}) == 0);
    CHECK(first == io::read_text(a / (std::string(cmd) + ".csv")));
    CHECK(first_manifest == io::read_text(a / (std::string(cmd) + ".manifest.json")));
    // Same config, different directory: tables identical, manifest differs
    // only in the recorded directory.
    REQUIRE(run({cmd, "--config", write_config("b.json", small_config_json(b)).string()}) == 0);
    CHECK(first == io::read_text(b / (std::string(cmd) + ".csv")));
    CHECK(io::read_text(a / (std::string(cmd) + ".json")) ==
          io::read_text(b / (std::string(cmd) + ".json")));
  }
  const json m = json::parse(io::read_text(a / "crossings.manifest.json"));
  CHECK(m.at("config_hash_fnv1a64").get<std::string>().size() == 16);
  CHECK(m.at("grid").at("n_points") == 512);
  CHECK(m.at("outputs").size() == 4);
  const auto written = io::parse_csv(io::read_text(a / "crossings.csv"), io::crossings_schema());
  CHECK(written.rows.size() >= 1);
}

}  // TEST_SUITE
