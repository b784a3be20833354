#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gksplit/bracket.hpp"
#include "gksplit/grid.hpp"
#include "gksplit/harness.hpp"
#include "gksplit/physics.hpp"
#include "gksplit/semi_lagrangian.hpp"
#include "gksplit/time_integration.hpp"

namespace gksplit {

inline constexpr const char* kToolVersion = "gksplit 0.1.0";

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitNumericalAbort = 3;

struct RunConfig {
  std::string preset = "vortex-paper";

  struct Grid {
    std::size_t nr = 64, ntheta = 64, nz = 8, nv = 32;
  } grid;

  ModelParams model;

  struct Numerics {
    Problem problem = Problem::Vortex;
    StencilOrder order = StencilOrder::Order4;
    BoundaryRule::Kind bc_r = BoundaryRule::Kind::Extrapolation;
    std::string bc_theta = "periodic";
    IntegratorConfig integrator;
    double dt = 0.001 / 64;
    std::size_t steps = 1280;
    int bump_power = 4;
    Background background = Background::Auto;
    /// Refinement studies: base resolution and number of levels.
    std::size_t base = 15;
    std::size_t levels = 5;
    VparOutside vpar_outside = VparOutside::Equilibrium;
    bool indicators = true;
  } numerics;

  struct Output {
    std::string directory = "out";
    /// Snapshot every k steps; 0 writes only the initial and final states.
    std::size_t snapshot_every = 0;
  } output;

  std::uint64_t seed = 1;
};

/// Configuration errors carry the line (0 for flags and defaults) and key.
class ConfigError : public std::runtime_error {
public:
  ConfigError(std::size_t line, std::string key, const std::string& message,
              std::string file = {});
  std::size_t line;
  std::string key;
  std::string detail;
  std::string file;
};

enum class Source { Default, File, Flag };
std::string to_string(Source s);

struct ParsedConfig {
  RunConfig config;
  std::map<std::string, Source> provenance;
  /// Line of each key set from a file.
  std::map<std::string, std::size_t> lines;
};

/// Preset names: vortex-paper, gk-small, gk-paper.
RunConfig preset_config(const std::string& name);
std::vector<std::string> preset_names();

/// All recognized keys in serialization order (excluding `preset`).
std::vector<std::string> config_keys();

/// `key = value` lines, `#` comments. A `preset` line is applied before the
/// other keys wherever it appears; without one `default_preset` is used.
/// Throws ConfigError on unknown keys, type mismatches and constraint
/// violations.
ParsedConfig parse_config(std::string_view text, const std::string& default_preset = "vortex-paper");
ParsedConfig load_config(const std::filesystem::path& path,
                         const std::string& default_preset = "vortex-paper");

/// Command-line override; revalidates.
void apply_flag(ParsedConfig& parsed, const std::string& key, const std::string& value);

/// Throws ConfigError naming the first violated constraint.
void validate(const ParsedConfig& parsed);

/// Every key, one per line, doubles in shortest round-trip form.
std::string serialize(const RunConfig& cfg);
/// serialize(parse_config(text).config)
std::string normalize(std::string_view text);

std::string config_value(const RunConfig& cfg, const std::string& key);

PoloidalRunConfig to_poloidal_run(const RunConfig& cfg);
GkRunConfig to_gk_run(const RunConfig& cfg);

struct Manifest {
  std::string command;
  ParsedConfig config;
  std::string tool_version = kToolVersion;
  std::string started, finished;
  /// Free-form lines (step schedule, notes).
  std::vector<std::pair<std::string, std::string>> extra;
};

std::string utc_timestamp();
void write_manifest(std::ostream& os, const Manifest& m);

/// Binary snapshot: text header naming every axis (size, bounds,
/// periodicity), then an 8-byte byte-order tag and little-endian doubles in
/// row-major order.
struct Snapshot {
  std::vector<std::string> names;
  std::vector<Grid1D> axes;
  std::vector<double> values;
};

class SnapshotError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

void write_snapshot(const std::filesystem::path& path, const Snapshot& s);
Snapshot read_snapshot(const std::filesystem::path& path);

void write_snapshot(const std::filesystem::path& path, const Distribution4D& f);
void write_snapshot(const std::filesystem::path& path, const Field3D& phi);
void write_snapshot(const std::filesystem::path& path, const Field2D& f);

/// Read and check the stored axes against the expected grid.
Distribution4D read_distribution(const std::filesystem::path& path, const PhaseGrid4D& expected);
Field3D read_field3d(const std::filesystem::path& path, const Grid1D& r, const Grid1D& theta,
                     const Grid1D& z);
Field2D read_field2d(const std::filesystem::path& path, const Grid2D& expected);

/// Debug CSV for 2D data: header `nr,ntheta rmin rmax thetamin thetamax`,
/// then one row of 17-digit values per r node.
void write_field_csv(std::ostream& os, const Field2D& f);

}  // namespace gksplit
