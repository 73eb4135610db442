#include "mrt/config.hpp"

#include <cmath>
#include <set>

#include "mrt/errors.hpp"

namespace mrt {

namespace {

using nlohmann::json;

// Reads one JSON object, remembering which keys were consumed so that
// leftovers can be rejected.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_ + " must be an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json* get(const std::string& key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  std::string name(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  std::optional<double> number(const std::string& key) {
    const json* v = get(key);
    if (!v) return std::nullopt;
    if (!v->is_number()) throw ConfigError(name(key) + " must be a number");
    const double d = v->get<double>();
    if (!std::isfinite(d)) throw ConfigError(name(key) + " must be finite");
    return d;
  }

  std::optional<double> positive(const std::string& key) {
    auto d = number(key);
    if (d && !(*d > 0.0)) throw ConfigError(name(key) + " must be > 0");
    return d;
  }

  std::optional<long long> integer(const std::string& key) {
    const json* v = get(key);
    if (!v) return std::nullopt;
    if (!v->is_number_integer()) {
      throw ConfigError(name(key) + " must be an integer");
    }
    return v->get<long long>();
  }

  std::optional<std::size_t> count(const std::string& key, long long min) {
    auto i = integer(key);
    if (i && *i < min) {
      throw ConfigError(name(key) + " must be >= " + std::to_string(min));
    }
    if (!i) return std::nullopt;
    return static_cast<std::size_t>(*i);
  }

  std::optional<std::string> text(const std::string& key) {
    const json* v = get(key);
    if (!v) return std::nullopt;
    if (!v->is_string()) throw ConfigError(name(key) + " must be a string");
    return v->get<std::string>();
  }

  std::optional<Section> child(const std::string& key) {
    const json* v = get(key);
    if (!v) return std::nullopt;
    return Section(*v, name(key));
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) {
        throw ConfigError("unknown config key " + name(it.key()));
      }
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

template <class T>
void assign(T& dst, const std::optional<T>& src) {
  if (src) dst = *src;
}

CircuitParams parse_circuit(Section s) {
  CircuitParams p;
  auto need = [&](const char* key) {
    auto v = s.positive(key);
    if (!v) throw ConfigError("missing " + s.name(key));
    return *v;
  };
  p.capacitance = need("capacitance_farads");
  p.inductance = need("inductance_henries");
  p.critical_current = need("critical_current_amperes");
  if (const json* t1 = s.get("t1_seconds")) {
    if (t1->is_string() && t1->get<std::string>() == "inf") {
      p.t1 = INFINITY;
    } else if (t1->is_number() && t1->get<double>() > 0.0) {
      p.t1 = t1->get<double>();
    } else {
      throw ConfigError(s.name("t1_seconds") + " must be > 0 or \"inf\"");
    }
  }
  s.finish();
  validate(p);
  return p;
}

BiasSpec parse_bias(Section s) {
  BiasSpec b;
  b.j = s.positive("j");
  b.n_l = s.number("n_l");
  if (b.j && b.n_l) throw ConfigError("bias: give j or n_l, not both");
  if (b.n_l && *b.n_l < 0.0) throw ConfigError("bias.n_l must be >= 0");
  s.finish();
  return b;
}

SweepSection parse_sweep(Section s) {
  SweepSection w;
  w.j_start = s.positive("j_start");
  w.j_end = s.positive("j_end");
  w.n_l_max = s.positive("n_l_max");
  w.n_l_min = s.positive("n_l_min");
  const bool by_j = w.j_start || w.j_end;
  const bool by_n = w.n_l_max || w.n_l_min;
  if (by_j && by_n) {
    throw ConfigError("sweep: give j_start/j_end or n_l_max/n_l_min, not both");
  }
  if (by_j && !(w.j_start && w.j_end)) {
    throw ConfigError("sweep: j_start and j_end must be given together");
  }
  if (by_n && !(w.n_l_max && w.n_l_min)) {
    throw ConfigError("sweep: n_l_max and n_l_min must be given together");
  }
  assign(w.n_coarse, s.count("n_coarse", 2));
  assign(w.refine_tolerance_j, s.positive("refine_tolerance_j"));
  if (auto m = s.count("max_branch", 0)) w.max_branch = static_cast<int>(*m);
  assign(w.window_quanta, s.positive("window_quanta"));
  if (auto m = s.count("max_subdivision", 0)) {
    w.max_subdivision = static_cast<int>(*m);
  }
  s.finish();
  return w;
}

std::vector<double> number_list(Section& s, const std::string& key) {
  const json* v = s.get(key);
  std::vector<double> out;
  if (!v) return out;
  if (!v->is_array()) throw ConfigError(s.name(key) + " must be an array");
  for (const auto& x : *v) {
    if (!x.is_number()) throw ConfigError(s.name(key) + " entries must be numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

}  // namespace

double BiasSpec::resolve(const DerivedScales& scales) const {
  if (j) {
    if (*j > scales.j_star) {
      throw LeftWellAbsent("bias J = " + std::to_string(*j) +
                           " exceeds J* = " + std::to_string(scales.j_star) +
                           "; need J < J*");
    }
    return *j;
  }
  if (n_l) return bias_for_target_nl(scales, *n_l);
  throw ConfigError("config lacks a bias section (j or n_l)");
}

const CircuitParams& RunConfig::require_circuit() const {
  if (!circuit) throw ConfigError("config lacks a circuit section");
  return *circuit;
}

RunConfig parse_config(const nlohmann::json& j) {
  RunConfig c;
  Section root(j, "");
  if (auto s = root.child("circuit")) c.circuit = parse_circuit(*s);
  if (auto s = root.child("bias")) c.bias = parse_bias(*s);
  if (auto s = root.child("sweep")) c.sweep = parse_sweep(*s);
  if (auto s = root.child("grid")) {
    if (auto n = s->count("n_points", 4)) {
      if (*n % 2 != 0) throw ConfigError("grid.n_points must be even");
      c.n_points = *n;
    }
    assign(c.padding, s->positive("padding_fraction"));
    s->finish();
  }
  if (auto s = root.child("spectrum")) {
    assign(c.extra_above, s->count("extra_states_above_barrier", 0));
    s->finish();
  }
  if (auto s = root.child("potential")) {
    c.potential.gamma_min = s->number("gamma_min");
    c.potential.gamma_max = s->number("gamma_max");
    if (c.potential.gamma_min.has_value() != c.potential.gamma_max.has_value()) {
      throw ConfigError("potential: gamma_min and gamma_max go together");
    }
    if (c.potential.gamma_min && !(*c.potential.gamma_max > *c.potential.gamma_min)) {
      throw ConfigError("potential: need gamma_min < gamma_max");
    }
    assign(c.potential.samples, s->count("samples", 2));
    s->finish();
  }
  if (auto s = root.child("wkb")) {
    if (s->has("n_l_values")) {
      c.wkb.n_l_values.clear();
      for (double v : number_list(*s, "n_l_values")) {
        if (v < 0 || v != std::floor(v)) {
          throw ConfigError("wkb.n_l_values must be non-negative integers");
        }
        c.wkb.n_l_values.push_back(static_cast<int>(v));
      }
    }
    if (s->has("n_big_l_values")) {
      c.wkb.n_big_l_values = number_list(*s, "n_big_l_values");
      for (double v : c.wkb.n_big_l_values) {
        if (!(v > 0.0)) throw ConfigError("wkb.n_big_l_values must be > 0");
      }
    }
    s->finish();
  }
  if (auto s = root.child("deepsweep")) {
    auto& d = c.deepsweep;
    assign(d.critical_current, s->positive("critical_current_amperes"));
    assign(d.beta, s->positive("beta"));
    assign(d.n_big_l, s->positive("n_big_l"));
    assign(d.ec_over_ej_min, s->positive("ec_over_ej_min"));
    assign(d.ec_over_ej_max, s->positive("ec_over_ej_max"));
    assign(d.count, s->count("count", 1));
    if (!(d.beta > 1.0)) throw ConfigError("deepsweep.beta must be > 1");
    if (d.ec_over_ej_max < d.ec_over_ej_min) {
      throw ConfigError("deepsweep: need ec_over_ej_min <= ec_over_ej_max");
    }
    s->finish();
  }
  if (auto s = root.child("transitions")) {
    auto& t = c.transitions;
    if (const json* p = s->get("pairs")) {
      if (!p->is_array()) throw ConfigError("transitions.pairs must be an array");
      t.pairs.clear();
      for (const auto& e : *p) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
            !e[1].is_number_integer() || e[0].get<int>() < 0 ||
            e[1].get<int>() < 0) {
          throw ConfigError("transitions.pairs entries must be [from, to] "
                            "with non-negative integers");
        }
        t.pairs.emplace_back(e[0].get<int>(), e[1].get<int>());
      }
    }
    assign(t.options.window_ghz, s->positive("window_ghz"));
    assign(t.options.zoom_points, s->count("zoom_points", 0));
    assign(t.options.zoom_widths, s->positive("zoom_widths"));
    s->finish();
  }
  if (auto s = root.child("outputs")) {
    if (auto d = s->text("directory")) c.output_directory = *d;
    if (auto f = s->text("format")) c.format = io::parse_format(*f);
    s->finish();
  }
  if (auto t = root.count("threads", 1)) c.threads = static_cast<unsigned>(*t);
  root.finish();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = io::read_text(path);
  } catch (const IoError& e) {
    throw ConfigError(std::string("cannot read config: ") + e.what());
  }
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

nlohmann::json canonical_json(const RunConfig& c) {
  // nlohmann::json objects keep keys sorted, which fixes the byte order.
  json j;
  if (c.circuit) {
    json circuit = {{"capacitance_farads", c.circuit->capacitance},
                    {"inductance_henries", c.circuit->inductance},
                    {"critical_current_amperes", c.circuit->critical_current}};
    if (c.circuit->t1) {
      circuit["t1_seconds"] = std::isfinite(*c.circuit->t1)
                                  ? json(*c.circuit->t1)
                                  : json("inf");
    }
    j["circuit"] = circuit;
  }
  json bias = json::object();
  if (c.bias.j) bias["j"] = *c.bias.j;
  if (c.bias.n_l) bias["n_l"] = *c.bias.n_l;
  j["bias"] = bias;
  json sweep = {{"n_coarse", c.sweep.n_coarse},
                {"refine_tolerance_j", c.sweep.refine_tolerance_j},
                {"max_branch", c.sweep.max_branch},
                {"window_quanta", c.sweep.window_quanta},
                {"max_subdivision", c.sweep.max_subdivision}};
  if (c.sweep.j_start) sweep["j_start"] = *c.sweep.j_start;
  if (c.sweep.j_end) sweep["j_end"] = *c.sweep.j_end;
  if (c.sweep.n_l_max) sweep["n_l_max"] = *c.sweep.n_l_max;
  if (c.sweep.n_l_min) sweep["n_l_min"] = *c.sweep.n_l_min;
  j["sweep"] = sweep;
  j["grid"] = {{"n_points", c.n_points}, {"padding_fraction", c.padding}};
  j["spectrum"] = {{"extra_states_above_barrier", c.extra_above}};
  json potential = {{"samples", c.potential.samples}};
  if (c.potential.gamma_min) {
    potential["gamma_min"] = *c.potential.gamma_min;
    potential["gamma_max"] = *c.potential.gamma_max;
  }
  j["potential"] = potential;
  j["wkb"] = {{"n_l_values", c.wkb.n_l_values},
              {"n_big_l_values", c.wkb.n_big_l_values}};
  j["deepsweep"] = {{"critical_current_amperes", c.deepsweep.critical_current},
                    {"beta", c.deepsweep.beta},
                    {"n_big_l", c.deepsweep.n_big_l},
                    {"ec_over_ej_min", c.deepsweep.ec_over_ej_min},
                    {"ec_over_ej_max", c.deepsweep.ec_over_ej_max},
                    {"count", c.deepsweep.count}};
  json pairs = json::array();
  for (const auto& [a, b] : c.transitions.pairs) pairs.push_back({a, b});
  j["transitions"] = {{"pairs", pairs},
                      {"window_ghz", c.transitions.options.window_ghz},
                      {"zoom_points", c.transitions.options.zoom_points},
                      {"zoom_widths", c.transitions.options.zoom_widths}};
  const char* format = c.format == io::Format::csv    ? "csv"
                       : c.format == io::Format::json ? "json"
                                                      : "both";
  j["outputs"] = {{"directory", c.output_directory.string()}, {"format", format}};
  j["threads"] = c.threads;
  return j;
}

SweepConfig sweep_config(const RunConfig& c, const DerivedScales& scales) {
  SweepConfig s;
  if (c.sweep.j_start) {
    s.j_start = *c.sweep.j_start;
    s.j_end = *c.sweep.j_end;
  } else if (c.sweep.n_l_max) {
    if (!(*c.sweep.n_l_max > *c.sweep.n_l_min)) {
      throw ConfigError("sweep: need n_l_max > n_l_min");
    }
    s.j_start = bias_for_target_nl(scales, *c.sweep.n_l_max);
    s.j_end = bias_for_target_nl(scales, *c.sweep.n_l_min);
  } else {
    throw ConfigError("config lacks a sweep window");
  }
  s.n_coarse = c.sweep.n_coarse;
  s.refine_tolerance_j = c.sweep.refine_tolerance_j;
  s.max_branch = c.sweep.max_branch;
  s.window_quanta = c.sweep.window_quanta;
  s.max_subdivision = c.sweep.max_subdivision;
  s.n_points = c.n_points;
  s.padding = c.padding;
  s.threads = c.threads;
  validate(s, scales);
  return s;
}

}  // namespace mrt
