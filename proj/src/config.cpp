#include "fvetd/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "fvetd/error.hpp"

namespace fvetd {

namespace {

const std::map<std::string, std::vector<std::string>>& schema() {
  static const std::map<std::string, std::vector<std::string>> s = {
      {"mesh", {"dim", "counts", "sizes", "origin", "length_unit"}},
      {"fields",
       {"diffusion", "diffusion_value", "velocity", "permeability", "permeability_unit",
        "raster_layers_total", "porosity", "porosity_min", "viscosity", "viscosity_unit",
        "reaction", "langmuir_lambda", "langmuir_beta", "boundary", "boundary_value",
        "boundary_low", "boundary_high", "pressure_low", "pressure_high", "pressure_unit",
        "transmissibility", "c0"}},
      {"time", {"dt", "t0", "final_time", "snapshot_every", "initial"}},
      {"phi", {"method", "tol", "krylov_dim", "max_substeps", "leja_interval_safety",
               "leja_max_degree"}},
      {"output", {"directory", "formats"}},
      {"convergence", {"grids", "dts", "reference_dt"}},
  };
  return s;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_words(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  for (std::string w; is >> w;) {
    // commas are accepted as separators too
    std::string part;
    std::istringstream ws(w);
    while (std::getline(ws, part, ',')) {
      if (!part.empty()) out.push_back(part);
    }
  }
  return out;
}

struct Entry {
  std::string value;
  int line = 0;
};

class Reader {
public:
  Reader(std::map<std::string, std::map<std::string, Entry>> entries, std::vector<std::string>& errors)
      : entries_(std::move(entries)), errors_(errors) {}

  const Entry* find(const std::string& sec, const std::string& key) const {
    auto s = entries_.find(sec);
    if (s == entries_.end()) return nullptr;
    auto k = s->second.find(key);
    return k == s->second.end() ? nullptr : &k->second;
  }

  void fail(const Entry& e, const std::string& sec, const std::string& key, const std::string& what) {
    errors_.push_back("line " + std::to_string(e.line) + ": [" + sec + "] " + key + ": " + what);
  }

  bool get(const std::string& sec, const std::string& key, double& out) {
    const Entry* e = find(sec, key);
    if (!e) return false;
    if (!parse_double(e->value, out)) {
      fail(*e, sec, key, "expected a number, got '" + e->value + "'");
      return false;
    }
    return true;
  }

  bool get(const std::string& sec, const std::string& key, int& out) {
    const Entry* e = find(sec, key);
    if (!e) return false;
    long long v = 0;
    if (!parse_int(e->value, v)) {
      fail(*e, sec, key, "expected an integer, got '" + e->value + "'");
      return false;
    }
    out = static_cast<int>(v);
    return true;
  }

  bool get(const std::string& sec, const std::string& key, std::string& out) {
    const Entry* e = find(sec, key);
    if (!e) return false;
    out = e->value;
    return true;
  }

  bool get(const std::string& sec, const std::string& key, std::vector<double>& out) {
    const Entry* e = find(sec, key);
    if (!e) return false;
    std::vector<double> v;
    for (const auto& w : split_words(e->value)) {
      double d = 0.0;
      if (!parse_double(w, d)) {
        fail(*e, sec, key, "expected a list of numbers, got '" + e->value + "'");
        return false;
      }
      v.push_back(d);
    }
    out = std::move(v);
    return true;
  }

  bool get(const std::string& sec, const std::string& key, std::vector<Index>& out) {
    const Entry* e = find(sec, key);
    if (!e) return false;
    std::vector<Index> v;
    for (const auto& w : split_words(e->value)) {
      long long d = 0;
      if (!parse_int(w, d)) {
        fail(*e, sec, key, "expected a list of integers, got '" + e->value + "'");
        return false;
      }
      v.push_back(static_cast<Index>(d));
    }
    out = std::move(v);
    return true;
  }

  int line_of(const std::string& sec, const std::string& key) const {
    const Entry* e = find(sec, key);
    return e ? e->line : 0;
  }

  static bool parse_double(const std::string& s, double& out) {
    try {
      std::size_t pos = 0;
      out = std::stod(s, &pos);
      return pos == s.size() && std::isfinite(out);
    } catch (const std::exception&) {
      return false;
    }
  }
  static bool parse_int(const std::string& s, long long& out) {
    try {
      std::size_t pos = 0;
      out = std::stoll(s, &pos);
      return pos == s.size();
    } catch (const std::exception&) {
      return false;
    }
  }

private:
  std::map<std::string, std::map<std::string, Entry>> entries_;
  std::vector<std::string>& errors_;
};

std::string nearest(const std::string& key, const std::vector<std::string>& candidates) {
  std::string best;
  std::size_t best_d = std::string::npos;
  for (const auto& c : candidates) {
    const std::size_t d = edit_distance(key, c);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

} // namespace

std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  std::iota(prev.begin(), prev.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::vector<std::string> config_keys(const std::string& section) {
  auto it = schema().find(section);
  return it == schema().end() ? std::vector<std::string>{} : it->second;
}

ConfigErrors::ConfigErrors(std::vector<std::string> messages)
    : ConfigError([&] {
        std::string s = "invalid configuration (" + std::to_string(messages.size()) + " problem" +
                        (messages.size() == 1 ? "" : "s") + ")";
        for (const auto& m : messages) s += "\n  " + m;
        return s;
      }()),
      messages_(std::move(messages)) {}

bool RunConfig::has_section(const std::string& name) const {
  return std::find(sections_present.begin(), sections_present.end(), name) != sections_present.end();
}

std::filesystem::path RunConfig::resolve(const std::string& path) const {
  std::filesystem::path p(path);
  return p.is_absolute() ? p : base_dir / p;
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigErrors({"cannot open config file '" + path.string() + "'"});
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path.has_parent_path() ? path.parent_path() : std::filesystem::path("."));
}

RunConfig parse_config_text(const std::string& text, const std::filesystem::path& base_dir) {
  std::vector<std::string> errors;
  std::map<std::string, std::map<std::string, Entry>> entries;
  RunConfig cfg;
  cfg.base_dir = base_dir;

  std::istringstream in(text);
  std::string raw;
  std::string section;
  bool section_known = false;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    if (auto c = line.find_first_of("#;"); c != std::string::npos) line.erase(c);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        errors.push_back("line " + std::to_string(lineno) + ": malformed section header '" + line + "'");
        continue;
      }
      section = trim(line.substr(1, line.size() - 2));
      section_known = schema().count(section) > 0;
      if (!section_known) {
        std::vector<std::string> names;
        for (const auto& [k, v] : schema()) names.push_back(k);
        errors.push_back("line " + std::to_string(lineno) + ": unknown section [" + section +
                         "] (did you mean [" + nearest(section, names) + "]?)");
      } else if (!cfg.has_section(section)) {
        cfg.sections_present.push_back(section);
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      errors.push_back("line " + std::to_string(lineno) + ": expected 'key = value'");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty()) {
      errors.push_back("line " + std::to_string(lineno) + ": key '" + key + "' outside any section");
      continue;
    }
    if (!section_known) continue;
    const auto& keys = schema().at(section);
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      errors.push_back("line " + std::to_string(lineno) + ": unknown key '" + key + "' in [" +
                       section + "] (did you mean '" + nearest(key, keys) + "'?)");
      continue;
    }
    if (entries[section].count(key)) {
      errors.push_back("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
      continue;
    }
    entries[section][key] = {value, lineno};
  }

  if (!cfg.has_section("mesh")) errors.push_back("missing section [mesh]");

  Reader r(std::move(entries), errors);
  auto require = [&](const std::string& sec, const std::string& key, auto& out) {
    if (!r.find(sec, key)) {
      if (cfg.has_section(sec)) errors.push_back("[" + sec + "] missing required key '" + key + "'");
      return false;
    }
    return r.get(sec, key, out);
  };
  auto check = [&](bool ok, const std::string& sec, const std::string& key, const std::string& msg) {
    if (ok) return;
    const int line = r.line_of(sec, key);
    errors.push_back((line ? "line " + std::to_string(line) + ": " : std::string()) + "[" + sec + "] " +
                     key + ": " + msg);
  };

  // [mesh]
  auto& m = cfg.mesh;
  if (require("mesh", "dim", m.dim)) check(m.dim == 2 || m.dim == 3, "mesh", "dim", "must be 2 or 3");
  if (require("mesh", "counts", m.counts)) {
    check(static_cast<int>(m.counts.size()) == m.dim, "mesh", "counts", "needs one entry per axis");
    check(std::all_of(m.counts.begin(), m.counts.end(), [](Index c) { return c >= 1; }), "mesh",
          "counts", "must be >= 1");
  }
  if (require("mesh", "sizes", m.sizes)) {
    check(static_cast<int>(m.sizes.size()) == m.dim, "mesh", "sizes", "needs one entry per axis");
    check(std::all_of(m.sizes.begin(), m.sizes.end(), [](double s) { return s > 0.0; }), "mesh",
          "sizes", "must be > 0");
  }
  m.origin.assign(static_cast<std::size_t>(std::max(m.dim, 0)), 0.0);
  if (r.get("mesh", "origin", m.origin)) {
    check(static_cast<int>(m.origin.size()) == m.dim, "mesh", "origin", "needs one entry per axis");
  }
  r.get("mesh", "length_unit", m.length_unit);
  double length_scale = 1.0;
  if (m.length_unit == "ft") {
    length_scale = units::kFoot;
  } else {
    check(m.length_unit == "m", "mesh", "length_unit", "must be 'm' or 'ft'");
  }
  for (double& s : m.sizes) s *= length_scale;
  for (double& o : m.origin) o *= length_scale;

  // [fields]
  auto& f = cfg.fields;
  auto one_of = [&](const std::string& sec, const std::string& key, const std::string& v,
                    std::initializer_list<const char*> allowed) {
    bool ok = false;
    std::string list;
    for (const char* a : allowed) {
      ok = ok || v == a;
      list += std::string(list.empty() ? "" : ", ") + a;
    }
    check(ok, sec, key, "'" + v + "' is not one of: " + list);
  };
  if (r.get("fields", "diffusion", f.diffusion)) {
    one_of("fields", "diffusion", f.diffusion, {"constant", "curved-shear"});
  }
  if (r.get("fields", "diffusion_value", f.diffusion_value)) {
    check(!f.diffusion_value.empty() && (f.diffusion_value.size() == 1 ||
                                         static_cast<int>(f.diffusion_value.size()) == m.dim),
          "fields", "diffusion_value", "needs 1 or dim entries");
    check(std::all_of(f.diffusion_value.begin(), f.diffusion_value.end(), [](double d) { return d > 0.0; }),
          "fields", "diffusion_value", "must be > 0");
  }
  if (r.get("fields", "velocity", f.velocity)) {
    one_of("fields", "velocity", f.velocity, {"none", "curved-shear", "darcy"});
  }
  r.get("fields", "permeability", f.permeability);
  if (r.get("fields", "permeability_unit", f.permeability_unit)) {
    one_of("fields", "permeability_unit", f.permeability_unit, {"md", "m2"});
  }
  if (r.get("fields", "raster_layers_total", f.raster_layers_total)) {
    check(f.raster_layers_total >= 0, "fields", "raster_layers_total", "must be >= 0");
  }
  r.get("fields", "porosity", f.porosity);
  if (r.get("fields", "porosity_min", f.porosity_min)) {
    check(f.porosity_min > 0.0, "fields", "porosity_min", "must be > 0");
  }
  if (r.get("fields", "viscosity", f.viscosity)) check(f.viscosity > 0.0, "fields", "viscosity", "must be > 0");
  if (r.get("fields", "viscosity_unit", f.viscosity_unit)) {
    one_of("fields", "viscosity_unit", f.viscosity_unit, {"cp", "pa_s"});
  }
  if (f.viscosity_unit == "cp") f.viscosity *= units::kCentipoise;
  if (r.get("fields", "reaction", f.reaction)) {
    one_of("fields", "reaction", f.reaction, {"none", "langmuir", "manufactured"});
  }
  if (r.get("fields", "langmuir_lambda", f.langmuir_lambda)) {
    check(f.langmuir_lambda >= 0.0, "fields", "langmuir_lambda", "must be >= 0");
  }
  r.get("fields", "langmuir_beta", f.langmuir_beta);
  if (r.get("fields", "boundary", f.boundary)) {
    one_of("fields", "boundary", f.boundary, {"dirichlet", "neumann", "corner-columns", "manufactured"});
  }
  r.get("fields", "boundary_value", f.boundary_value);
  r.get("fields", "boundary_low", f.boundary_low);
  r.get("fields", "boundary_high", f.boundary_high);
  r.get("fields", "pressure_low", f.pressure_low);
  r.get("fields", "pressure_high", f.pressure_high);
  if (r.get("fields", "pressure_unit", f.pressure_unit)) {
    one_of("fields", "pressure_unit", f.pressure_unit, {"psi", "pa"});
  }
  if (f.pressure_unit == "psi") {
    f.pressure_low *= units::kPsi;
    f.pressure_high *= units::kPsi;
  }
  std::string tform;
  if (r.get("fields", "transmissibility", tform)) {
    one_of("fields", "transmissibility", tform, {"harmonic", "self-weighted"});
    if (tform == "self-weighted") f.transmissibility = TransmissibilityForm::SelfWeighted;
  }
  if (r.get("fields", "c0", f.c0)) check(f.c0 >= 0.0, "fields", "c0", "must be >= 0");

  auto check_path = [&](const std::string& key, const std::string& value,
                        std::initializer_list<const char*> presets) {
    for (const char* p : presets) {
      if (value == p) return;
    }
    double d = 0.0;
    if (Reader::parse_double(value, d)) return;
    check(std::filesystem::exists(cfg.resolve(value)), "fields", key,
          "file '" + cfg.resolve(value).string() + "' not found");
  };
  if (f.velocity == "darcy") check_path("permeability", f.permeability, {"spe10-layered"});
  check_path("porosity", f.porosity, {"spe10-layered"});
  {
    double d = 0.0;
    if (Reader::parse_double(f.porosity, d)) check(d > 0.0, "fields", "porosity", "must be > 0");
  }

  // [time]
  auto& t = cfg.time;
  double v = 0.0;
  if (r.get("time", "dt", v)) {
    t.dt = v;
    check(v > 0.0, "time", "dt", "must be > 0");
  }
  r.get("time", "t0", t.t0);
  if (r.get("time", "final_time", v)) {
    t.final_time = v;
    check(v > t.t0, "time", "final_time", "must be > t0");
  }
  if (r.get("time", "snapshot_every", t.snapshot_every)) {
    check(t.snapshot_every >= 0, "time", "snapshot_every", "must be >= 0");
  }
  if (r.get("time", "initial", t.initial)) {
    double d = 0.0;
    check(t.initial == "manufactured" || Reader::parse_double(t.initial, d), "time", "initial",
          "must be a number or 'manufactured'");
  }

  // [phi]
  auto& p = cfg.phi;
  std::string method;
  if (r.get("phi", "method", method)) {
    one_of("phi", "method", method, {"krylov", "leja", "dense"});
    if (method == "krylov" || method == "leja" || method == "dense") p.method = parse_phi_method(method);
  }
  if (r.get("phi", "tol", p.tol)) check(p.tol > 0.0, "phi", "tol", "must be > 0");
  if (r.get("phi", "krylov_dim", p.krylov_dim)) check(p.krylov_dim >= 1, "phi", "krylov_dim", "must be >= 1");
  if (r.get("phi", "max_substeps", p.max_substeps)) {
    check(p.max_substeps >= 0, "phi", "max_substeps", "must be >= 0");
  }
  if (r.get("phi", "leja_interval_safety", p.leja_interval_safety)) {
    check(p.leja_interval_safety >= 1.0, "phi", "leja_interval_safety", "must be >= 1");
  }
  if (r.get("phi", "leja_max_degree", p.leja_max_degree)) {
    check(p.leja_max_degree >= 3 && p.leja_max_degree <= 500, "phi", "leja_max_degree",
          "must be in [3, 500]");
  }

  // [output]
  std::string dir;
  if (r.get("output", "directory", dir)) cfg.output.directory = cfg.resolve(dir);
  else cfg.output.directory = cfg.resolve("out");
  std::string formats;
  if (r.get("output", "formats", formats)) {
    cfg.output.formats = split_words(formats);
    for (const auto& fm : cfg.output.formats) one_of("output", "formats", fm, {"csv", "vtk"});
  }

  // [convergence]
  auto& c = cfg.convergence;
  if (r.get("convergence", "grids", c.grids)) {
    check(std::all_of(c.grids.begin(), c.grids.end(), [](Index g) { return g >= 1; }), "convergence",
          "grids", "must be >= 1");
  }
  if (r.get("convergence", "dts", c.dts)) {
    check(!c.dts.empty() && std::all_of(c.dts.begin(), c.dts.end(), [](double d) { return d > 0.0; }),
          "convergence", "dts", "must be > 0");
  }
  if (r.get("convergence", "reference_dt", c.reference_dt)) {
    check(c.reference_dt > 0.0, "convergence", "reference_dt", "must be > 0");
  }

  if (!errors.empty()) throw ConfigErrors(std::move(errors));
  return cfg;
}

} // namespace fvetd
