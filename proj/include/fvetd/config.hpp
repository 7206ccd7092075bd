#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fvetd/error.hpp"
#include "fvetd/phi.hpp"
#include "fvetd/tpfa.hpp"

namespace fvetd {

/// Flat INI-style run configuration. Physical inputs are given in the units
/// named by the *_unit keys and converted to SI (m, s, Pa, Pa s, m^2) here.
struct RunConfig {
  struct Mesh {
    int dim = 2;
    std::vector<Index> counts;
    std::vector<double> sizes; // converted to metres
    std::vector<double> origin;
    std::string length_unit = "m";
  } mesh;

  struct Fields {
    std::string diffusion = "constant"; // constant | curved-shear
    std::vector<double> diffusion_value{1.0};
    std::string velocity = "none";      // none | curved-shear | darcy
    std::string permeability = "spe10-layered"; // preset or raster path
    std::string permeability_unit = "md";
    int raster_layers_total = 0; // >0: rasters hold this many layers, the top ones are used
    std::string porosity = "1";         // number, preset or raster path
    double porosity_min = 1e-4;
    double viscosity = 0.3;             // converted to Pa s
    std::string viscosity_unit = "cp";
    std::string reaction = "none";      // none | langmuir | manufactured
    double langmuir_lambda = 1.0;
    double langmuir_beta = 1e-3;
    std::string boundary = "dirichlet"; // dirichlet | neumann | corner-columns | manufactured
    double boundary_value = 0.0;
    double boundary_low = 0.0;
    double boundary_high = 1.0;
    double pressure_low = 3998.96;      // converted to Pa
    double pressure_high = 7997.92;
    std::string pressure_unit = "psi";
    TransmissibilityForm transmissibility = TransmissibilityForm::Harmonic;
    double c0 = 0.0;
  } fields;

  struct Time {
    std::optional<double> dt;
    double t0 = 0.0;
    std::optional<double> final_time;
    int snapshot_every = 0;
    std::string initial = "0"; // number or "manufactured"
  } time;

  PhiActionConfig phi;

  struct Output {
    std::filesystem::path directory = "out";
    std::vector<std::string> formats{"csv"};
  } output;

  struct Convergence {
    std::vector<Index> grids{16, 32, 64, 128};
    std::vector<double> dts{32, 16, 8, 4};
    double reference_dt = 0.5;
  } convergence;

  std::filesystem::path base_dir; // relative raster paths resolve here
  std::vector<std::string> sections_present;

  bool has_section(const std::string& name) const;
  std::filesystem::path resolve(const std::string& path) const;
};

/// Collected validation failures, one message per problem, each prefixed
/// with "line N:" when it can be tied to a line.
class ConfigErrors : public ConfigError {
public:
  explicit ConfigErrors(std::vector<std::string> messages);
  const std::vector<std::string>& messages() const { return messages_; }

private:
  std::vector<std::string> messages_;
};

RunConfig parse_config(const std::filesystem::path& path);
RunConfig parse_config_text(const std::string& text,
                            const std::filesystem::path& base_dir = std::filesystem::current_path());

/// Valid keys for a section (empty when the section is unknown).
std::vector<std::string> config_keys(const std::string& section);

std::size_t edit_distance(const std::string& a, const std::string& b);

namespace units {
inline constexpr double kFoot = 0.3048;
inline constexpr double kPsi = 6894.757293168361;
inline constexpr double kCentipoise = 1e-3;
inline constexpr double kMillidarcy = 9.869233e-16;
} // namespace units

} // namespace fvetd
