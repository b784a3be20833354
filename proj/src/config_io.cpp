#include "gksplit/config_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <ctime>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <type_traits>

namespace gksplit {

namespace {

std::string locate(const std::string& file, std::size_t line, const std::string& key) {
  std::string out;
  if (!file.empty()) out = file + ":";
  if (line > 0) out += (file.empty() ? "line " : "") + std::to_string(line) + ":";
  if (!out.empty()) out += " ";
  if (!key.empty()) out += key + ": ";
  return out;
}

}  // namespace

ConfigError::ConfigError(std::size_t line_, std::string key_, const std::string& message,
                         std::string file_)
    : std::runtime_error(locate(file_, line_, key_) + message),
      line(line_),
      key(std::move(key_)),
      detail(message),
      file(std::move(file_)) {}

std::string to_string(Source s) {
  switch (s) {
    case Source::Default: return "default";
    case Source::File: return "file";
    case Source::Flag: return "flag";
  }
  return "default";
}

namespace {

struct BadValue {
  std::string expected;
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// value <-> text, one overload pair per field type

std::string format_value(double v) {
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}
std::string format_value(std::size_t v) { return std::to_string(v); }
std::string format_value(int v) { return std::to_string(v); }
std::string format_value(const std::string& v) { return v; }
std::string format_value(bool v) { return v ? "true" : "false"; }
std::string format_value(StencilOrder v) { return v == StencilOrder::Order2 ? "2" : "4"; }
std::string format_value(BoundaryRule::Kind v) { return to_string(v); }
std::string format_value(IntegratorKind v) { return v == IntegratorKind::RK4 ? "rk4" : "cn2"; }
std::string format_value(Preconditioner v) { return to_string(v); }
std::string format_value(Problem v) { return to_string(v); }
std::string format_value(Background v) {
  switch (v) {
    case Background::Auto: return "auto";
    case Background::On: return "on";
    case Background::Off: return "off";
  }
  return "auto";
}
std::string format_value(VparOutside v) { return v == VparOutside::Zero ? "zero" : "equilibrium"; }

template <class T>
T parse_number(const std::string& s, const char* what) {
  T v{};
  const auto* end = s.data() + s.size();
  auto res = std::from_chars(s.data(), end, v);
  if (s.empty() || res.ec != std::errc() || res.ptr != end) throw BadValue{what};
  return v;
}

template <class T>
T parse_value(const std::string& s);

template <>
double parse_value<double>(const std::string& s) {
  const double v = parse_number<double>(s, "a number");
  if (!std::isfinite(v)) throw BadValue{"a finite number"};
  return v;
}
template <>
std::size_t parse_value<std::size_t>(const std::string& s) {
  if (!s.empty() && s[0] == '-') throw BadValue{"a non-negative integer"};
  return parse_number<std::size_t>(s, "a non-negative integer");
}
template <>
int parse_value<int>(const std::string& s) {
  return parse_number<int>(s, "an integer");
}
template <>
std::string parse_value<std::string>(const std::string& s) {
  return s;
}
template <>
bool parse_value<bool>(const std::string& s) {
  if (s == "true") return true;
  if (s == "false") return false;
  throw BadValue{"true or false"};
}
template <>
StencilOrder parse_value<StencilOrder>(const std::string& s) {
  if (s == "2") return StencilOrder::Order2;
  if (s == "4") return StencilOrder::Order4;
  throw BadValue{"2 or 4"};
}
template <>
BoundaryRule::Kind parse_value<BoundaryRule::Kind>(const std::string& s) {
  try {
    return parse_boundary_kind(s);
  } catch (const std::invalid_argument&) {
    throw BadValue{"periodic, dirichlet or extrapolation"};
  }
}
template <>
IntegratorKind parse_value<IntegratorKind>(const std::string& s) {
  if (s == "rk4") return IntegratorKind::RK4;
  if (s == "cn2") return IntegratorKind::CrankNicolson;
  throw BadValue{"rk4 or cn2"};
}
template <>
Preconditioner parse_value<Preconditioner>(const std::string& s) {
  try {
    return parse_preconditioner(s);
  } catch (const std::invalid_argument&) {
    throw BadValue{"none, jacobi or theta-circulant"};
  }
}
template <>
Problem parse_value<Problem>(const std::string& s) {
  try {
    return parse_problem(s);
  } catch (const std::invalid_argument&) {
    throw BadValue{"vortex or constadv"};
  }
}
template <>
Background parse_value<Background>(const std::string& s) {
  if (s == "auto") return Background::Auto;
  if (s == "on") return Background::On;
  if (s == "off") return Background::Off;
  throw BadValue{"auto, on or off"};
}
template <>
VparOutside parse_value<VparOutside>(const std::string& s) {
  if (s == "equilibrium") return VparOutside::Equilibrium;
  if (s == "zero") return VparOutside::Zero;
  throw BadValue{"equilibrium or zero"};
}

struct KeyDef {
  std::string name;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string&)> set;
};

template <class Acc>
KeyDef key(std::string name, Acc acc) {
  using T = std::remove_cvref_t<decltype(acc(std::declval<RunConfig&>()))>;
  return {std::move(name),
          [acc](const RunConfig& c) { return format_value(acc(const_cast<RunConfig&>(c))); },
          [acc](RunConfig& c, const std::string& s) { acc(c) = parse_value<T>(s); }};
}

#define GK_KEY(name, member) key(name, [](RunConfig& c) -> auto& { return c.member; })

const std::vector<KeyDef>& schema() {
  static const std::vector<KeyDef> keys = {
      GK_KEY("grid.nr", grid.nr),
      GK_KEY("grid.ntheta", grid.ntheta),
      GK_KEY("grid.nz", grid.nz),
      GK_KEY("grid.nv", grid.nv),
      GK_KEY("model.r_min", model.r_min),
      GK_KEY("model.r_max", model.r_max),
      GK_KEY("model.major_radius", model.major_radius),
      GK_KEY("model.epsilon", model.epsilon),
      GK_KEY("model.kappa_n0", model.kappa_n0),
      GK_KEY("model.delta_r_n0", model.delta_r_n0),
      GK_KEY("model.kappa_ti", model.kappa_ti),
      GK_KEY("model.delta_r_ti", model.delta_r_ti),
      GK_KEY("model.kappa_te", model.kappa_te),
      GK_KEY("model.delta_r_te", model.delta_r_te),
      GK_KEY("model.r_p", model.r_p),
      GK_KEY("model.envelope_width", model.envelope_width),
      GK_KEY("model.v_max", model.v_max),
      GK_KEY("model.m", model.m),
      GK_KEY("model.n", model.n),
      GK_KEY("model.iota", model.iota),
      GK_KEY("numerics.problem", numerics.problem),
      GK_KEY("numerics.order", numerics.order),
      GK_KEY("numerics.bc_r", numerics.bc_r),
      GK_KEY("numerics.bc_theta", numerics.bc_theta),
      GK_KEY("numerics.integrator", numerics.integrator.kind),
      GK_KEY("numerics.cn_tolerance", numerics.integrator.tolerance),
      GK_KEY("numerics.cn_max_iterations", numerics.integrator.max_iterations),
      GK_KEY("numerics.cn_restart", numerics.integrator.restart),
      GK_KEY("numerics.cn_preconditioner", numerics.integrator.preconditioner),
      GK_KEY("numerics.dt", numerics.dt),
      GK_KEY("numerics.steps", numerics.steps),
      GK_KEY("numerics.bump_power", numerics.bump_power),
      GK_KEY("numerics.background", numerics.background),
      GK_KEY("numerics.base", numerics.base),
      GK_KEY("numerics.levels", numerics.levels),
      GK_KEY("numerics.vpar_outside", numerics.vpar_outside),
      GK_KEY("numerics.indicators", numerics.indicators),
      GK_KEY("output.directory", output.directory),
      GK_KEY("output.snapshot_every", output.snapshot_every),
      GK_KEY("seed", seed),
  };
  return keys;
}

#undef GK_KEY

const KeyDef* find_key(const std::string& name) {
  for (const auto& k : schema())
    if (k.name == name) return &k;
  return nullptr;
}

void set_key(RunConfig& cfg, const KeyDef& def, const std::string& value, std::size_t line) {
  try {
    def.set(cfg, value);
  } catch (const BadValue& e) {
    throw ConfigError(line, def.name, "expected " + e.expected + ", got '" + value + "'");
  }
}

struct Line {
  std::size_t number;
  std::string key, value;
};

std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> out;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++number;
    std::string_view raw = text.substr(pos, end - pos);
    pos = end + 1;
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(number, "", "expected 'key = value'");
    Line l{number, trim(std::string_view(line).substr(0, eq)),
           trim(std::string_view(line).substr(eq + 1))};
    if (l.key.empty()) throw ConfigError(number, "", "missing key");
    out.push_back(std::move(l));
  }
  return out;
}

void fresh_provenance(ParsedConfig& p) {
  p.provenance.clear();
  p.provenance["preset"] = Source::Default;
  for (const auto& k : schema()) p.provenance[k.name] = Source::Default;
}

}  // namespace

std::vector<std::string> preset_names() { return {"vortex-paper", "gk-small", "gk-paper"}; }

RunConfig preset_config(const std::string& name) {
  RunConfig c;
  c.preset = name;
  if (name == "vortex-paper") {
    c.model.r_min = 1.0;
    c.model.r_max = 20.0;
    return c;
  }
  if (name == "gk-small" || name == "gk-paper") {
    const bool small = name == "gk-small";
    c.grid = small ? RunConfig::Grid{32, 32, 8, 32} : RunConfig::Grid{128, 256, 128, 72};
    c.numerics.dt = small ? 8.0 : 1.0;
    c.numerics.steps = small ? 1000 : 6000;
    c.output.snapshot_every = small ? 100 : 500;
    return c;
  }
  throw ConfigError(0, "preset", "unknown preset '" + name + "'");
}

std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const auto& k : schema()) out.push_back(k.name);
  return out;
}

std::string config_value(const RunConfig& cfg, const std::string& name) {
  if (name == "preset") return cfg.preset;
  const KeyDef* def = find_key(name);
  if (!def) throw ConfigError(0, name, "unknown key");
  return def->get(cfg);
}

void validate(const ParsedConfig& p) {
  const RunConfig& c = p.config;
  auto fail = [&](const std::string& k, const std::string& msg) {
    const auto it = p.lines.find(k);
    const auto src = p.provenance.find(k);
    std::string where;
    if (src != p.provenance.end() && src->second == Source::Flag) where = " (from flag)";
    throw ConfigError(it != p.lines.end() && src->second == Source::File ? it->second : 0, k,
                      msg + where);
  };
  auto min_size = [&](const char* k, std::size_t v, std::size_t lo) {
    if (v < lo) fail(k, "must be >= " + std::to_string(lo));
  };
  auto positive = [&](const char* k, double v) {
    if (!(v > 0.0)) fail(k, "must be > 0");
  };
  min_size("grid.nr", c.grid.nr, 4);
  min_size("grid.ntheta", c.grid.ntheta, 4);
  min_size("grid.nz", c.grid.nz, 4);
  min_size("grid.nv", c.grid.nv, 4);
  positive("model.r_min", c.model.r_min);
  if (!(c.model.r_max > c.model.r_min)) fail("model.r_max", "must exceed model.r_min");
  positive("model.major_radius", c.model.major_radius);
  if (c.model.epsilon < 0.0) fail("model.epsilon", "must be >= 0");
  positive("model.delta_r_n0", c.model.delta_r_n0);
  positive("model.delta_r_ti", c.model.delta_r_ti);
  positive("model.delta_r_te", c.model.delta_r_te);
  if (c.model.envelope_width == 0.0) fail("model.envelope_width", "must be > 0 (or negative for auto)");
  positive("model.v_max", c.model.v_max);
  if (c.numerics.bc_theta != "periodic") fail("numerics.bc_theta", "only 'periodic' is supported");
  positive("numerics.cn_tolerance", c.numerics.integrator.tolerance);
  min_size("numerics.cn_max_iterations", c.numerics.integrator.max_iterations, 1);
  min_size("numerics.cn_restart", c.numerics.integrator.restart, 1);
  positive("numerics.dt", c.numerics.dt);
  if (c.numerics.bump_power < 1) fail("numerics.bump_power", "must be >= 1");
  min_size("numerics.base", c.numerics.base, 4);
  min_size("numerics.levels", c.numerics.levels, 3);
  if (c.output.directory.empty()) fail("output.directory", "must not be empty");
}

ParsedConfig parse_config(std::string_view text, const std::string& default_preset) {
  const auto lines = split_lines(text);
  ParsedConfig p;

  std::string preset = default_preset;
  std::size_t preset_line = 0;
  for (const auto& l : lines) {
    if (l.key != "preset") continue;
    if (preset_line) throw ConfigError(l.number, "preset", "repeated key");
    preset = l.value;
    preset_line = l.number;
  }
  try {
    p.config = preset_config(preset);
  } catch (const ConfigError& e) {
    throw ConfigError(preset_line, "preset", "unknown preset '" + preset + "'");
  }
  fresh_provenance(p);
  if (preset_line) {
    p.provenance["preset"] = Source::File;
    p.lines["preset"] = preset_line;
  }

  for (const auto& l : lines) {
    if (l.key == "preset") continue;
    const KeyDef* def = find_key(l.key);
    if (!def) throw ConfigError(l.number, l.key, "unknown key");
    if (p.lines.count(l.key)) throw ConfigError(l.number, l.key, "repeated key");
    set_key(p.config, *def, l.value, l.number);
    p.provenance[l.key] = Source::File;
    p.lines[l.key] = l.number;
  }
  validate(p);
  return p;
}

ParsedConfig load_config(const std::filesystem::path& path, const std::string& default_preset) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(0, "", "cannot read config file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str(), default_preset);
  } catch (const ConfigError& e) {
    throw ConfigError(e.line, e.key, e.detail, path.string());
  }
}

void apply_flag(ParsedConfig& p, const std::string& name, const std::string& value) {
  if (name == "preset") throw ConfigError(0, name, "preset can only be set in a config file");
  const KeyDef* def = find_key(name);
  if (!def) throw ConfigError(0, name, "unknown key");
  set_key(p.config, *def, value, 0);
  p.provenance[name] = Source::Flag;
  p.lines.erase(name);
  validate(p);
}

std::string serialize(const RunConfig& cfg) {
  std::string out = "preset = " + cfg.preset + "\n";
  for (const auto& k : schema()) out += k.name + " = " + k.get(cfg) + "\n";
  return out;
}

std::string normalize(std::string_view text) { return serialize(parse_config(text).config); }

PoloidalRunConfig to_poloidal_run(const RunConfig& c) {
  PoloidalRunConfig p;
  p.problem = c.numerics.problem;
  p.nr = c.grid.nr;
  p.ntheta = c.grid.ntheta;
  p.dt = c.numerics.dt;
  p.steps = c.numerics.steps;
  p.order = c.numerics.order;
  p.bc_r = c.numerics.bc_r;
  p.integrator = c.numerics.integrator;
  p.model = c.model;
  p.bump_power = c.numerics.bump_power;
  p.background = c.numerics.background;
  return p;
}

GkRunConfig to_gk_run(const RunConfig& c) {
  GkRunConfig g;
  g.nr = c.grid.nr;
  g.ntheta = c.grid.ntheta;
  g.nz = c.grid.nz;
  g.nv = c.grid.nv;
  g.dt = c.numerics.dt;
  g.steps = c.numerics.steps;
  g.model = c.model;
  g.splitting.order = c.numerics.order;
  g.splitting.f_bc_r = c.numerics.bc_r;
  g.splitting.integrator = c.numerics.integrator;
  g.splitting.vpar_outside = c.numerics.vpar_outside;
  g.splitting.indicators = c.numerics.indicators;
  if (c.model.iota != 0.0) g.splitting.line = FieldLine::from_iota(c.model.iota);
  return g;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream ss;
  ss << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return ss.str();
}

void write_manifest(std::ostream& os, const Manifest& m) {
  os << "tool_version = " << m.tool_version << "\n";
  os << "command = " << m.command << "\n";
  os << "started = " << m.started << "\n";
  os << "finished = " << m.finished << "\n";
  for (const auto& [k, v] : m.extra) os << k << " = " << v << "\n";
  os << "\n[config]\n" << serialize(m.config.config);
  os << "\n[provenance]\n";
  auto src = [&](const std::string& k) {
    const auto it = m.config.provenance.find(k);
    return to_string(it == m.config.provenance.end() ? Source::Default : it->second);
  };
  os << "preset = " << src("preset") << "\n";
  for (const auto& k : schema()) os << k.name << " = " << src(k.name) << "\n";
}

// ---- snapshots

namespace {

constexpr std::string_view kMagic = "GKSPLIT-SNAPSHOT 1";
constexpr std::uint64_t kByteOrderTag = 0x0102030405060708ULL;

void put_le(std::ostream& os, std::uint64_t bits) {
  std::array<char, 8> b{};
  for (int k = 0; k < 8; ++k) b[k] = static_cast<char>((bits >> (8 * k)) & 0xff);
  os.write(b.data(), 8);
}

std::uint64_t from_le(const unsigned char* b) {
  std::uint64_t v = 0;
  for (int k = 7; k >= 0; --k) v = (v << 8) | b[k];
  return v;
}

std::uint64_t from_be(const unsigned char* b) {
  std::uint64_t v = 0;
  for (int k = 0; k < 8; ++k) v = (v << 8) | b[k];
  return v;
}

std::size_t count_values(const Snapshot& s) {
  std::size_t n = 1;
  for (const auto& a : s.axes) n *= a.size();
  return n;
}

void check_axes(const Snapshot& s, const std::vector<std::string>& names,
                const std::vector<Grid1D>& expected, const std::filesystem::path& path) {
  if (s.names != names)
    throw SnapshotError(path.string() + ": snapshot axes do not match the expected layout");
  for (std::size_t k = 0; k < expected.size(); ++k)
    if (!(s.axes[k] == expected[k]))
      throw SnapshotError(path.string() + ": axis '" + names[k] + "' differs from the expected grid");
}

}  // namespace

void write_snapshot(const std::filesystem::path& path, const Snapshot& s) {
  if (s.names.size() != s.axes.size()) throw SnapshotError("snapshot: names/axes size mismatch");
  if (s.values.size() != count_values(s)) throw SnapshotError("snapshot: value count mismatch");
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw SnapshotError("cannot write snapshot '" + path.string() + "'");
  os << kMagic << "\n";
  os << "axes " << s.axes.size() << "\n";
  for (std::size_t k = 0; k < s.axes.size(); ++k) {
    const auto& a = s.axes[k];
    os << "axis " << s.names[k] << " " << a.size() << " " << format_value(a.start()) << " "
       << format_value(a.stop()) << " " << (a.periodic() ? "periodic" : "bounded") << "\n";
  }
  os << "values " << s.values.size() << " float64-le\n";
  os << "data\n";
  put_le(os, kByteOrderTag);
  for (double v : s.values) put_le(os, std::bit_cast<std::uint64_t>(v));
  if (!os) throw SnapshotError("failed writing snapshot '" + path.string() + "'");
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SnapshotError("cannot read snapshot '" + path.string() + "'");
  const std::string where = path.string() + ": ";
  auto next_line = [&]() {
    std::string line;
    if (!std::getline(in, line)) throw SnapshotError(where + "truncated header");
    return line;
  };
  if (next_line() != kMagic) throw SnapshotError(where + "not a snapshot (header mismatch)");

  Snapshot s;
  std::size_t naxes = 0;
  {
    std::istringstream ls(next_line());
    std::string tag;
    if (!(ls >> tag >> naxes) || tag != "axes" || naxes == 0 || naxes > 8)
      throw SnapshotError(where + "header mismatch in axes line");
  }
  for (std::size_t k = 0; k < naxes; ++k) {
    std::istringstream ls(next_line());
    std::string tag, name, start, stop, kind;
    std::size_t n = 0;
    if (!(ls >> tag >> name >> n >> start >> stop >> kind) || tag != "axis" ||
        (kind != "periodic" && kind != "bounded"))
      throw SnapshotError(where + "header mismatch in axis line");
    try {
      s.axes.emplace_back(n, parse_value<double>(start), parse_value<double>(stop), kind == "periodic");
    } catch (const BadValue&) {
      throw SnapshotError(where + "bad axis bounds");
    } catch (const std::invalid_argument& e) {
      throw SnapshotError(where + e.what());
    }
    s.names.push_back(name);
  }
  std::size_t count = 0;
  {
    std::istringstream ls(next_line());
    std::string tag, fmt;
    if (!(ls >> tag >> count >> fmt) || tag != "values" || fmt != "float64-le")
      throw SnapshotError(where + "header mismatch in values line");
  }
  if (count != count_values(s)) throw SnapshotError(where + "value count does not match axes");
  if (next_line() != "data") throw SnapshotError(where + "header mismatch, expected 'data'");

  std::array<unsigned char, 8> b{};
  if (!in.read(reinterpret_cast<char*>(b.data()), 8)) throw SnapshotError(where + "truncated file");
  if (from_le(b.data()) != kByteOrderTag) {
    if (from_be(b.data()) == kByteOrderTag)
      throw SnapshotError(where + "byte order tag is big-endian; cross-endian snapshots are not supported");
    throw SnapshotError(where + "bad byte order tag");
  }
  s.values.resize(count);
  std::vector<unsigned char> raw(count * 8);
  if (!in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size())))
    throw SnapshotError(where + "truncated file");
  for (std::size_t k = 0; k < count; ++k)
    s.values[k] = std::bit_cast<double>(from_le(raw.data() + 8 * k));
  if (in.peek() != std::char_traits<char>::eof()) throw SnapshotError(where + "trailing bytes after payload");
  return s;
}

void write_snapshot(const std::filesystem::path& path, const Distribution4D& f) {
  const auto& g = f.grid();
  write_snapshot(path, Snapshot{{"r", "theta", "z", "vpar"},
                                {g.r, g.theta, g.z, g.vpar},
                                {f.values().begin(), f.values().end()}});
}

void write_snapshot(const std::filesystem::path& path, const Field3D& phi) {
  write_snapshot(path, Snapshot{{"r", "theta", "z"},
                                {phi.r(), phi.theta(), phi.z()},
                                {phi.values().begin(), phi.values().end()}});
}

void write_snapshot(const std::filesystem::path& path, const Field2D& f) {
  write_snapshot(path, Snapshot{{"first", "second"},
                                {f.grid().first, f.grid().second},
                                f.data()});
}

Distribution4D read_distribution(const std::filesystem::path& path, const PhaseGrid4D& g) {
  Snapshot s = read_snapshot(path);
  check_axes(s, {"r", "theta", "z", "vpar"}, {g.r, g.theta, g.z, g.vpar}, path);
  Distribution4D f(g);
  std::copy(s.values.begin(), s.values.end(), f.values().begin());
  return f;
}

Field3D read_field3d(const std::filesystem::path& path, const Grid1D& r, const Grid1D& theta,
                     const Grid1D& z) {
  Snapshot s = read_snapshot(path);
  check_axes(s, {"r", "theta", "z"}, {r, theta, z}, path);
  Field3D phi(r, theta, z);
  std::copy(s.values.begin(), s.values.end(), phi.values().begin());
  return phi;
}

Field2D read_field2d(const std::filesystem::path& path, const Grid2D& g) {
  Snapshot s = read_snapshot(path);
  check_axes(s, {"first", "second"}, {g.first, g.second}, path);
  return Field2D(g, std::move(s.values));
}

void write_field_csv(std::ostream& os, const Field2D& f) {
  const auto& g = f.grid();
  os << g.first.size() << "," << g.second.size() << " " << format_value(g.first.start()) << " "
     << format_value(g.first.stop()) << " " << format_value(g.second.start()) << " "
     << format_value(g.second.stop()) << "\n";
  const auto flags = os.flags();
  const auto prec = os.precision();
  os << std::setprecision(17);
  for (std::size_t i = 0; i < f.rows(); ++i) {
    for (std::size_t j = 0; j < f.cols(); ++j) os << (j ? "," : "") << f(i, j);
    os << "\n";
  }
  os.flags(flags);
  os.precision(prec);
}

}  // namespace gksplit
