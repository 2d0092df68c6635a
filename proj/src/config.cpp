#include "swmac/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "swmac/error.hpp"

namespace swmac {

namespace {

// ---------------------------------------------------------------- TOML subset

class LineParser {
 public:
  LineParser(const std::string& text, const std::string& source, int line)
      : s_(text), source_(source), line_(line) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError(source_ + ":" + std::to_string(line_) + ": " + what);
  }

  void skip() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }

  bool at_end() {
    skip();
    return pos_ >= s_.size() || s_[pos_] == '#';
  }

  char peek() {
    skip();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  std::string key() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' ||
                                s_[pos_] == '-' || s_[pos_] == '.'))
      ++pos_;
    if (pos_ == start) fail("expected a key");
    return s_.substr(start, pos_ - start);
  }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  TomlValue value() {
    TomlValue v;
    v.line = line_;
    const char c = peek();
    if (c == '"' || c == '\'') {
      ++pos_;
      std::string out;
      while (pos_ < s_.size() && s_[pos_] != c) {
        if (c == '"' && s_[pos_] == '\\' && pos_ + 1 < s_.size()) {
          const char e = s_[++pos_];
          switch (e) {
            case 'n': out += '\n'; break;
            case 't': out += '\t'; break;
            case '\\': out += '\\'; break;
            case '"': out += '"'; break;
            default: fail(std::string("unknown escape \\") + e);
          }
        } else {
          out += s_[pos_];
        }
        ++pos_;
      }
      if (pos_ >= s_.size()) fail("unterminated string");
      ++pos_;
      v.value = std::move(out);
    } else if (c == '[') {
      ++pos_;
      TomlValue::Array arr;
      while (peek() != ']') {
        if (pos_ >= s_.size()) fail("unterminated array");
        arr.push_back(value());
        if (peek() == ',') ++pos_;
        else if (peek() != ']') fail("expected ',' or ']' in array");
      }
      ++pos_;
      v.value = std::move(arr);
    } else if (s_.compare(pos_, 4, "true") == 0) {
      pos_ += 4;
      v.value = true;
    } else if (s_.compare(pos_, 5, "false") == 0) {
      pos_ += 5;
      v.value = false;
    } else {
      std::size_t end = pos_;
      while (end < s_.size() && std::string_view("+-.0123456789eE_").find(s_[end]) != std::string_view::npos) ++end;
      std::string tok = s_.substr(pos_, end - pos_);
      std::erase(tok, '_');
      if (tok.empty()) fail("expected a value");
      const char* b = tok.data();
      if (*b == '+') ++b;
      double d = 0;
      const auto [ptr, ec] = std::from_chars(b, tok.data() + tok.size(), d);
      if (ec != std::errc() || ptr != tok.data() + tok.size()) fail("bad number '" + tok + "'");
      v.integer = tok.find_first_of(".eE") == std::string::npos;
      v.value = d;
      pos_ = end;
    }
    return v;
  }

 private:
  const std::string& s_;
  const std::string& source_;
  int line_;
  std::size_t pos_ = 0;
};

}  // namespace

TomlTable parse_toml(std::istream& in, const std::string& source) {
  TomlTable table;
  std::string section;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    LineParser p(line, source, lineno);
    if (p.at_end()) continue;
    if (p.peek() == '[') {
      p.expect('[');
      section = p.key();
      p.expect(']');
      if (!p.at_end()) p.fail("trailing characters after section header");
      continue;
    }
    std::string key = p.key();
    p.expect('=');
    TomlValue v = p.value();
    if (!p.at_end()) p.fail("trailing characters after value of '" + key + "'");
    if (!section.empty()) key = section + "." + key;
    if (table.contains(key)) p.fail("duplicate key '" + key + "'");
    table.emplace(std::move(key), std::move(v));
  }
  return table;
}

namespace {

// ---------------------------------------------------------------- typed access

class Reader {
 public:
  Reader(TomlTable t, std::string source) : t_(std::move(t)), source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    auto it = t_.find(key);
    const std::string where = it == t_.end() ? source_ : source_ + ":" + std::to_string(it->second.line);
    throw ConfigError(where + ": key '" + key + "': " + what);
  }

  bool has(const std::string& key) const { return t_.contains(key); }

  const TomlValue* find(const std::string& key) {
    auto it = t_.find(key);
    if (it == t_.end()) return nullptr;
    used_.insert(key);
    return &it->second;
  }

  std::optional<double> number(const std::string& key) {
    const TomlValue* v = find(key);
    if (!v) return std::nullopt;
    const double* d = std::get_if<double>(&v->value);
    if (!d) fail(key, "expected a number");
    if (!std::isfinite(*d)) fail(key, "must be finite");
    return *d;
  }

  std::optional<long long> integer(const std::string& key) {
    const TomlValue* v = find(key);
    if (!v) return std::nullopt;
    return as_integer(key, *v);
  }

  long long as_integer(const std::string& key, const TomlValue& v) const {
    const double* d = std::get_if<double>(&v.value);
    if (!d || !v.integer) fail(key, "expected an integer");
    return static_cast<long long>(*d);
  }

  std::optional<std::string> string(const std::string& key) {
    const TomlValue* v = find(key);
    if (!v) return std::nullopt;
    const std::string* s = std::get_if<std::string>(&v->value);
    if (!s) fail(key, "expected a string");
    return *s;
  }

  std::optional<bool> boolean(const std::string& key) {
    const TomlValue* v = find(key);
    if (!v) return std::nullopt;
    const bool* b = std::get_if<bool>(&v->value);
    if (!b) fail(key, "expected true or false");
    return *b;
  }

  std::vector<double> numbers(const std::string& key, const TomlValue& v) const {
    const auto* arr = std::get_if<TomlValue::Array>(&v.value);
    if (!arr) fail(key, "expected an array of numbers");
    std::vector<double> out;
    for (const TomlValue& e : *arr) {
      const double* d = std::get_if<double>(&e.value);
      if (!d || !std::isfinite(*d)) fail(key, "expected an array of finite numbers");
      out.push_back(*d);
    }
    return out;
  }

  std::optional<Rect> rect(const std::string& key, const TomlValue& v) const {
    const std::vector<double> r = numbers(key, v);
    if (r.size() != 4) fail(key, "expected [x0, x1, y0, y1]");
    if (!(r[0] < r[1] && r[2] < r[3])) fail(key, "rectangle must satisfy x0 < x1 and y0 < y1");
    return Rect{r[0], r[1], r[2], r[3]};
  }

  Expression expression(const std::string& key) {
    const std::optional<std::string> s = string(key);
    if (!s) return {};
    try {
      return Expression::parse(*s);
    } catch (const ConfigError& e) {
      fail(key, e.what());
    }
  }

  void reject_unused() const {
    for (const auto& [key, v] : t_) {
      if (!used_.contains(key))
        throw ConfigError(source_ + ":" + std::to_string(v.line) + ": unknown key '" + key + "'");
    }
  }

  const std::string& source() const { return source_; }

 private:
  TomlTable t_;
  std::string source_;
  std::set<std::string> used_;
};

bool builtin(const std::string& name) {
  return name == "paraboloid" || name == "dambreak" || name == "lake_at_rest";
}

std::vector<std::vector<double>> read_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open table file '" + path.string() + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    std::vector<double> row;
    std::string tok;
    while (ls >> tok) {
      if (tok[0] == '#') break;
      double d = 0;
      const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), d);
      if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(d))
        throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": bad number '" + tok + "'");
      row.push_back(d);
    }
    if (row.empty()) continue;
    if (!rows.empty() && row.size() != rows.front().size())
      throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": ragged table row");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ConfigError("table file '" + path.string() + "' is empty");
  return rows;
}

}  // namespace

RunConfig parse_config(std::istream& in, const std::string& source, const std::filesystem::path& base_dir) {
  Reader r(parse_toml(in, source), source);
  RunConfig cfg;

  const std::optional<std::string> name = r.string("case");
  if (!name) r.fail("case", "missing required key");
  cfg.case_name = *name;

  if (const TomlValue* grid = r.find("grid")) {
    if (std::holds_alternative<double>(grid->value)) {
      cfg.nx = cfg.ny = static_cast<int>(r.as_integer("grid", *grid));
    } else if (const auto* arr = std::get_if<TomlValue::Array>(&grid->value); arr && arr->size() == 2) {
      cfg.nx = static_cast<int>(r.as_integer("grid", (*arr)[0]));
      cfg.ny = static_cast<int>(r.as_integer("grid", (*arr)[1]));
    } else {
      r.fail("grid", "expected n or [nx, ny]");
    }
  }

  if (auto v = r.number("g")) cfg.g = *v;
  cfg.eps_dry = r.number("eps_dry");

  cfg.dt = r.number("time.dt");
  cfg.dt_ratio = r.number("time.dt_ratio");
  cfg.cfl = r.number("time.cfl");
  cfg.t_end = r.number("time.t_end");
  if (auto v = r.number("time.revolutions")) cfg.revolutions = *v;

  if (auto v = r.string("output.dir")) cfg.output.dir = *v;
  if (auto v = r.integer("output.stride")) {
    if (*v < 0) r.fail("output.stride", "must be non-negative");
    cfg.output.stride = static_cast<std::size_t>(*v);
  }
  if (auto v = r.boolean("output.snapshots")) cfg.output.snapshots = *v;
  if (auto v = r.boolean("output.vtk")) cfg.output.vtk = *v;
  if (auto v = r.boolean("output.diagnostics")) cfg.output.diagnostics = *v;
  if (auto v = r.boolean("output.staggered")) cfg.output.staggered = *v;

  if (const TomlValue* v = r.find("convergence.grids")) {
    const auto* arr = std::get_if<TomlValue::Array>(&v->value);
    if (!arr || arr->empty()) r.fail("convergence.grids", "expected a non-empty array of integers");
    for (const TomlValue& e : *arr) cfg.grids.push_back(static_cast<int>(r.as_integer("convergence.grids", e)));
  }

  if (auto v = r.number("paraboloid.L")) cfg.paraboloid.L = *v;
  if (auto v = r.number("paraboloid.h0")) cfg.paraboloid.h0 = *v;
  if (auto v = r.number("paraboloid.offset")) cfg.paraboloid.offset = *v;
  if (const TomlValue* v = r.find("dambreak.breach")) {
    const std::vector<double> b = r.numbers("dambreak.breach", *v);
    if (b.size() != 2 || !(b[0] < b[1])) r.fail("dambreak.breach", "expected [y0, y1] with y0 < y1");
    cfg.breach = {b[0], b[1]};
  }
  if (auto v = r.number("lake.min_h")) cfg.lake_min_h = *v;
  if (auto v = r.integer("lake.steps")) {
    if (*v <= 0) r.fail("lake.steps", "must be positive");
    cfg.lake_steps = static_cast<std::size_t>(*v);
  }

  const bool custom = cfg.case_name == "custom";
  const bool any_domain = r.has("domain.box") || r.has("domain.h0") || r.has("domain.z");
  if (custom) {
    CustomCase& cc = cfg.custom;
    const TomlValue* box = r.find("domain.box");
    if (!box) r.fail("domain.box", "missing required key for case \"custom\"");
    cc.box = *r.rect("domain.box", *box);
    if (const TomlValue* obs = r.find("domain.obstacles")) {
      const auto* arr = std::get_if<TomlValue::Array>(&obs->value);
      if (!arr) r.fail("domain.obstacles", "expected an array of [x0, x1, y0, y1]");
      for (const TomlValue& e : *arr) cc.obstacles.push_back(*r.rect("domain.obstacles", e));
    }
    if (auto v = r.boolean("domain.snap")) cc.snap = *v;
    cc.z = r.expression("domain.z");
    if (auto f = r.string("domain.z_file")) {
      const std::filesystem::path p = std::filesystem::path(*f).is_absolute() ? std::filesystem::path(*f)
                                                                               : base_dir / *f;
      if (!std::filesystem::exists(p)) r.fail("domain.z_file", "file '" + p.string() + "' does not exist");
      cc.z_table = read_table(p);
    }
    cc.h0 = r.expression("domain.h0");
    cc.u1 = r.expression("domain.u1");
    cc.u2 = r.expression("domain.u2");
    cc.free_surface = r.number("domain.free_surface");
    cc.exact_h = r.expression("domain.exact_h");
    if (cc.h0.empty() && !cc.free_surface) r.fail("domain.h0", "missing: give domain.h0 or domain.free_surface");
    if (!cc.h0.empty() && cc.free_surface) r.fail("domain.free_surface", "conflicts with domain.h0");
  } else if (any_domain) {
    r.fail(r.has("domain.box") ? "domain.box" : r.has("domain.h0") ? "domain.h0" : "domain.z",
           "inline domain keys need case = \"custom\"");
  }

  r.reject_unused();

  if (cfg.nx == 0 && cfg.grids.empty()) r.fail("grid", "missing required key");
  if (cfg.nx == 0) cfg.nx = cfg.ny = cfg.grids.front();
  try {
    validate(cfg);
  } catch (const ConfigError& e) {
    throw ConfigError(source + ": " + e.what());
  }
  return cfg;
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  return parse_config(in, path.string(), path.parent_path());
}

RunConfig default_config(const std::string& case_name, int n) {
  RunConfig cfg;
  cfg.case_name = case_name;
  cfg.nx = cfg.ny = n;
  validate(cfg);
  return cfg;
}

void apply_overrides(RunConfig& cfg, const Overrides& o) {
  if (o.case_name) cfg.case_name = *o.case_name;
  if (o.grid) cfg.nx = cfg.ny = *o.grid;
  if (o.dt && o.cfl) throw ConfigError("time step: --dt and --cfl conflict");
  if (o.dt) {
    cfg.dt = *o.dt;
    cfg.dt_ratio.reset();
    cfg.cfl.reset();
  }
  if (o.cfl) {
    cfg.cfl = *o.cfl;
    cfg.dt.reset();
    cfg.dt_ratio.reset();
  }
  if (o.t_end) cfg.t_end = *o.t_end;
  if (o.out) cfg.output.dir = *o.out;
  if (!o.grids.empty()) cfg.grids = o.grids;
}

void validate(const RunConfig& cfg) {
  auto bad = [](const std::string& key, const std::string& what) {
    throw ConfigError("key '" + key + "': " + what);
  };
  if (!builtin(cfg.case_name) && cfg.case_name != "custom")
    bad("case", "unknown case '" + cfg.case_name +
                    "' (expected paraboloid, dambreak, lake_at_rest or custom)");
  if (cfg.nx < 1 || cfg.ny < 1) bad("grid", "must be positive");
  if (builtin(cfg.case_name)) {
    if (cfg.nx != cfg.ny) bad("grid", "built-in cases use square grids");
    if (cfg.nx < 10) bad("grid", "built-in cases need at least 10 cells per axis");
  }
  std::string modes;
  if (cfg.dt) modes += " time.dt";
  if (cfg.dt_ratio) modes += " time.dt_ratio";
  if (cfg.cfl) modes += " time.cfl";
  if (std::count(modes.begin(), modes.end(), ' ') > 1)
    bad("time.dt", "conflicting time-step modes:" + modes + " (give exactly one of fixed, ratio or cfl)");
  if (cfg.dt && !(*cfg.dt > 0)) bad("time.dt", "must be positive");
  if (cfg.dt_ratio && !(*cfg.dt_ratio > 0)) bad("time.dt_ratio", "must be positive");
  if (cfg.cfl && !(*cfg.cfl > 0 && *cfg.cfl <= 1)) bad("time.cfl", "must lie in (0, 1]");
  if (cfg.t_end && !(*cfg.t_end >= 0)) bad("time.t_end", "must be non-negative");
  if (!(cfg.revolutions > 0)) bad("time.revolutions", "must be positive");
  if (!(cfg.g > 0)) bad("g", "must be positive");
  if (cfg.eps_dry && !(*cfg.eps_dry >= 0)) bad("eps_dry", "must be non-negative");
  for (int n : cfg.grids)
    if (n < 1) bad("convergence.grids", "grid sizes must be positive");
  if (!(cfg.paraboloid.L > 0)) bad("paraboloid.L", "must be positive");
  if (!(cfg.paraboloid.h0 > 0)) bad("paraboloid.h0", "must be positive");
  if (!(cfg.lake_min_h >= 0)) bad("lake.min_h", "must be non-negative");
  if (cfg.case_name == "custom") {
    if (!cfg.dt && !cfg.dt_ratio && !cfg.cfl) bad("time.dt", "custom cases need time.dt, time.dt_ratio or time.cfl");
    if (!cfg.t_end) bad("time.t_end", "missing required key for case \"custom\"");
  }
}

namespace {

ScalarFunction table_function(const std::vector<std::vector<double>>& table, const Rect& box) {
  return [table, box](double x, double y) {
    const int ny = static_cast<int>(table.size());
    const int nx = static_cast<int>(table.front().size());
    const int i = std::clamp(static_cast<int>(std::floor((x - box.x0) / (box.x1 - box.x0) * nx)), 0, nx - 1);
    const int j = std::clamp(static_cast<int>(std::floor((y - box.y0) / (box.y1 - box.y0) * ny)), 0, ny - 1);
    return table[j][i];
  };
}

}  // namespace

CaseDefinition make_case(const RunConfig& cfg, int n) {
  const int nx = n > 0 ? n : cfg.nx;
  const int ny = n > 0 ? std::max(1, static_cast<int>(std::lround(static_cast<double>(n) * cfg.ny / cfg.nx))) : cfg.ny;
  CaseDefinition c;
  ParaboloidParams pp = cfg.paraboloid;
  pp.g = cfg.g;

  if (cfg.case_name == "paraboloid" || cfg.case_name == "lake_at_rest") {
    const double dx = pp.L / nx;
    double ratio = cfg.dt_ratio.value_or(1.0 / 8.0);
    if (cfg.dt) ratio = *cfg.dt / dx;
    c = cfg.case_name == "paraboloid" ? paraboloid_case(nx, ratio, pp, cfg.revolutions)
                                      : lake_at_rest_case(nx, cfg.lake_min_h, cfg.lake_steps, pp);
    if (cfg.case_name == "lake_at_rest" && (cfg.dt || cfg.dt_ratio)) {
      c.time_step = FixedStep{ratio * dx};
      c.t_end = static_cast<double>(cfg.lake_steps) * ratio * dx;
    }
    if (cfg.cfl) {
      c.time_step = CflStep{*cfg.cfl};
      if (cfg.case_name == "paraboloid") c.t_end = cfg.revolutions * pp.period();
    }
  } else if (cfg.case_name == "dambreak") {
    DamBreakOptions o;
    o.breach_y0 = cfg.breach[0];
    o.breach_y1 = cfg.breach[1];
    o.g = cfg.g;
    if (cfg.dt_ratio) o.dt_ratio = *cfg.dt_ratio;
    if (cfg.dt) o.dt_ratio = *cfg.dt / (200.0 / nx);
    c = dambreak_case(nx, o);
    if (cfg.cfl) c.time_step = CflStep{*cfg.cfl};
  } else {
    const CustomCase& cc = cfg.custom;
    c.name = "custom";
    c.domain.fluid = {cc.box};
    c.domain.obstacles = cc.obstacles;
    c.mesh_options.snap_to_grid = cc.snap;
    c.nx = nx;
    c.ny = ny;
    c.g = cfg.g;
    if (!cc.z_table.empty()) c.topography = table_function(cc.z_table, cc.box);
    else if (!cc.z.empty()) c.topography = [e = cc.z](double x, double y) { return e(x, y, 0); };
    if (!cc.h0.empty()) c.h0 = [e = cc.h0](double x, double y) { return e(x, y, 0); };
    c.free_surface = cc.free_surface;
    if (!cc.u1.empty() || !cc.u2.empty()) {
      c.u0 = [u1 = cc.u1, u2 = cc.u2](double x, double y) {
        return std::array<double, 2>{u1.empty() ? 0.0 : u1(x, y, 0), u2.empty() ? 0.0 : u2(x, y, 0)};
      };
    }
    if (!cc.exact_h.empty()) c.exact_h = [e = cc.exact_h](double x, double y, double t) { return e(x, y, t); };
    const double dx = std::min((cc.box.x1 - cc.box.x0) / nx, (cc.box.y1 - cc.box.y0) / ny);
    if (cfg.dt) c.time_step = FixedStep{*cfg.dt};
    else if (cfg.dt_ratio) c.time_step = FixedStep{*cfg.dt_ratio * dx};
    else c.time_step = CflStep{*cfg.cfl};
    c.t_end = *cfg.t_end;
  }
  if (cfg.t_end) c.t_end = *cfg.t_end;
  if (cfg.eps_dry) c.eps_dry = cfg.eps_dry;
  return c;
}

}  // namespace swmac
