#include "fvetd/scenario.hpp"

#include <cmath>
#include <numbers>

#include "fvetd/error.hpp"
#include "fvetd/io.hpp"

namespace fvetd {

namespace {

bool parse_number(const std::string& s, double& out) {
  try {
    std::size_t pos = 0;
    out = std::stod(s, &pos);
    return pos == s.size();
  } catch (const std::exception&) {
    return false;
  }
}

/// Reads a raster that may hold several components and more layers than the
/// mesh; returns `components` fields of mesh size each.
std::vector<ScalarCellField> read_components(const std::filesystem::path& path,
                                             const StructuredMesh& mesh, int layers_total,
                                             std::initializer_list<int> allowed_components) {
  const auto values = read_numbers(path);
  const auto& c = mesh.counts();
  const Index layer = c[0] * c[1];
  const Index per_component = layers_total > 0 ? layer * layers_total : mesh.num_cells();
  int components = 0;
  for (int k : allowed_components) {
    if (static_cast<Index>(values.size()) == per_component * k) components = k;
  }
  if (components == 0) {
    std::string expected;
    for (int k : allowed_components) {
      expected += (expected.empty() ? "" : " or ") + std::to_string(per_component * k);
    }
    throw IoError("'" + path.string() + "': expected " + expected + ", found " +
                  std::to_string(values.size()));
  }
  if (layers_total > 0 && layers_total < c[2]) {
    throw IoError("'" + path.string() + "': raster has fewer layers than the mesh");
  }
  std::vector<ScalarCellField> out(static_cast<std::size_t>(components));
  for (int k = 0; k < components; ++k) {
    const auto begin = values.begin() + static_cast<std::ptrdiff_t>(k * per_component);
    out[static_cast<std::size_t>(k)].assign(begin, begin + mesh.num_cells());
  }
  return out;
}

CellDiffusionField permeability_from_config(const RunConfig& cfg, const StructuredMesh& mesh) {
  const auto& f = cfg.fields;
  if (f.permeability == "spe10-layered") return spe10_layered_permeability(mesh);
  const double scale = f.permeability_unit == "md" ? units::kMillidarcy : 1.0;
  double constant = 0.0;
  if (parse_number(f.permeability, constant)) {
    return constant_diffusion(mesh, constant * scale);
  }
  const auto comps = read_components(cfg.resolve(f.permeability), mesh, f.raster_layers_total, {1, 3});
  std::vector<std::array<double, 3>> k(static_cast<std::size_t>(mesh.num_cells()));
  for (std::size_t i = 0; i < k.size(); ++i) {
    for (int a = 0; a < 3; ++a) {
      const auto& src = comps[comps.size() == 1 ? 0 : static_cast<std::size_t>(a)];
      k[i][static_cast<std::size_t>(a)] = src[i] * scale;
    }
  }
  try {
    return diffusion_from_cells(std::move(k), mesh);
  } catch (const InvalidArgument& e) {
    throw IoError("'" + cfg.resolve(f.permeability).string() + "': " + e.what());
  }
}

ScalarCellField porosity_from_config(const RunConfig& cfg, const StructuredMesh& mesh) {
  const auto& f = cfg.fields;
  const auto n = static_cast<std::size_t>(mesh.num_cells());
  if (f.porosity == "spe10-layered") return spe10_layered_porosity(mesh);
  double constant = 0.0;
  if (parse_number(f.porosity, constant)) return ScalarCellField(n, constant);
  auto phi = read_components(cfg.resolve(f.porosity), mesh, f.raster_layers_total, {1})[0];
  for (double& v : phi) v = std::max(v, f.porosity_min);
  return phi;
}

} // namespace

bool touches_vertical_line(const StructuredMesh& mesh, const Face& face, double x_line, double y_line) {
  if (!face.is_boundary() || face.axis > 1) return false;
  const double tol = 1e-9 * mesh.h();
  const auto& s = mesh.sizes();
  const int along = 1 - face.axis; // the in-plane horizontal axis
  const double plane = face.axis == 0 ? x_line : y_line;
  const double line_pos = face.axis == 0 ? y_line : x_line;
  if (std::abs(face.center[static_cast<std::size_t>(face.axis)] - plane) > tol) return false;
  const double lo = face.center[static_cast<std::size_t>(along)] - 0.5 * s[static_cast<std::size_t>(along)];
  const double hi = face.center[static_cast<std::size_t>(along)] + 0.5 * s[static_cast<std::size_t>(along)];
  return line_pos >= lo - tol && line_pos <= hi + tol;
}

BoundarySpec corner_columns(const StructuredMesh& mesh, double low, double high) {
  const Point o = mesh.origin();
  const Point e = mesh.extent();
  BoundarySpec spec = BoundarySpec::all_neumann(mesh);
  for (Index fi = 0; fi < mesh.num_faces(); ++fi) {
    const Face& f = mesh.face(fi);
    if (touches_vertical_line(mesh, f, o[0], o[1])) {
      spec[fi] = {BoundaryKind::Dirichlet, [low](const Point&, double) { return low; }};
    } else if (touches_vertical_line(mesh, f, o[0] + e[0], o[1] + e[1])) {
      spec[fi] = {BoundaryKind::Dirichlet, [high](const Point&, double) { return high; }};
    }
  }
  return spec;
}

CellDiffusionField spe10_layered_permeability(const StructuredMesh& mesh) {
  static constexpr double kLayerMd[] = {200.0, 50.0, 800.0, 20.0, 400.0, 100.0, 1500.0, 10.0};
  const Point o = mesh.origin();
  const Point e = mesh.extent();
  std::vector<std::array<double, 3>> k(static_cast<std::size_t>(mesh.num_cells()));
  for (Index i = 0; i < mesh.num_cells(); ++i) {
    const auto ijk = mesh.cell_coords(i);
    const Point x = mesh.cell_center(i);
    const double u = (x[0] - o[0]) / e[0];
    const double v = (x[1] - o[1]) / e[1];
    const double lateral = std::exp(0.8 * std::sin(2.0 * std::numbers::pi * (u + 2.0 * v)));
    const double kh = kLayerMd[ijk[2] % 8] * lateral * units::kMillidarcy;
    k[static_cast<std::size_t>(i)] = {kh, kh, 0.1 * kh};
  }
  return diffusion_from_cells(std::move(k), mesh);
}

ScalarCellField spe10_layered_porosity(const StructuredMesh& mesh) {
  static constexpr double kLayerPhi[] = {0.20, 0.15, 0.25, 0.10, 0.22, 0.18, 0.28, 0.12};
  ScalarCellField phi(static_cast<std::size_t>(mesh.num_cells()));
  for (Index i = 0; i < mesh.num_cells(); ++i) {
    phi[static_cast<std::size_t>(i)] = kLayerPhi[mesh.cell_coords(i)[2] % 8];
  }
  return phi;
}

StructuredMesh mesh_from_config(const RunConfig& cfg) {
  return build_grid(cfg.mesh.dim, cfg.mesh.counts, cfg.mesh.sizes, cfg.mesh.origin);
}

DarcySolution solve_darcy(const RunConfig& cfg, const StructuredMesh& mesh) {
  const auto& f = cfg.fields;
  DarcySolution sol{permeability_from_config(cfg, mesh),
                    corner_columns(mesh, f.pressure_low, f.pressure_high), {}, {}, {}};
  const PressureSystem sys =
      assemble_pressure(mesh, sol.permeability, f.viscosity, sol.boundary, f.transmissibility);
  sol.pressure = solve_pressure(sys);
  sol.fluxes = extract_fluxes(mesh, sol.permeability, f.viscosity, sol.pressure, sol.boundary,
                              f.transmissibility);
  sol.balance = flux_balance(mesh, sol.fluxes, sol.boundary);
  return sol;
}

std::unique_ptr<Scenario> build_scenario(const RunConfig& cfg) {
  auto sc = std::make_unique<Scenario>(mesh_from_config(cfg));
  const auto& f = cfg.fields;
  const StructuredMesh& mesh = sc->mesh;

  const bool wants_mms = f.diffusion == "curved-shear" || f.velocity == "curved-shear" ||
                         f.reaction == "manufactured" || f.boundary == "manufactured" ||
                         cfg.time.initial == "manufactured";
  if (wants_mms) {
    CurvedShearParams params;
    if (mesh.dim() != 2) throw ConfigError("the curved-shear preset is two-dimensional");
    params.t0 = cfg.time.t0;
    if (cfg.time.final_time) params.final_time = *cfg.time.final_time;
    sc->manufactured = curved_shear_case(params);
  }

  if (f.diffusion == "curved-shear") {
    sc->diffusion = average_diffusion(sc->manufactured->diffusion, mesh);
  } else {
    std::array<double, 3> d{};
    for (int a = 0; a < 3; ++a) {
      d[static_cast<std::size_t>(a)] =
          f.diffusion_value.size() == 1 ? f.diffusion_value[0]
                                        : (a < mesh.dim() ? f.diffusion_value[static_cast<std::size_t>(a)] : 1.0);
    }
    sc->diffusion = average_diffusion([d](const Point&) { return d; }, mesh);
  }

  if (f.velocity == "darcy") {
    sc->darcy = solve_darcy(cfg, mesh);
    sc->fluxes = sc->darcy->fluxes;
  } else if (f.velocity == "curved-shear") {
    sc->fluxes = face_fluxes_from_velocity(sc->manufactured->velocity, mesh);
  } else {
    sc->fluxes = zero_fluxes(mesh);
  }

  sc->porosity = porosity_from_config(cfg, mesh);

  if (f.boundary == "dirichlet") {
    sc->boundary = BoundarySpec::all_dirichlet(mesh, [v = f.boundary_value](const Point&, double) { return v; });
  } else if (f.boundary == "neumann") {
    sc->boundary = BoundarySpec::all_neumann(mesh);
  } else if (f.boundary == "corner-columns") {
    sc->boundary = corner_columns(mesh, f.boundary_low, f.boundary_high);
  } else {
    sc->boundary = BoundarySpec::all_dirichlet(mesh, sc->manufactured->exact);
  }

  if (f.reaction == "langmuir") {
    sc->reaction = langmuir(f.langmuir_lambda, f.langmuir_beta);
  } else if (f.reaction == "manufactured") {
    sc->reaction = sc->manufactured->solver_reaction();
  } else {
    sc->reaction = no_reaction();
  }

  sc->options.c0 = f.c0;
  sc->options.form = f.transmissibility;
  sc->op = assemble(mesh, sc->diffusion, sc->fluxes, sc->porosity, sc->boundary, sc->options);

  sc->initial.resize(mesh.num_cells());
  if (cfg.time.initial == "manufactured") {
    for (Index i = 0; i < mesh.num_cells(); ++i) {
      sc->initial[i] = sc->manufactured->exact(mesh.cell_center(i), cfg.time.t0);
    }
  } else {
    sc->initial.setConstant(std::stod(cfg.time.initial));
  }
  return sc;
}

RunConfig spe10_analogue_config() {
  const std::string text = R"(
[mesh]
dim = 3
counts = 12 22 4
sizes = 100 100 10
length_unit = ft

[fields]
diffusion = constant
diffusion_value = 1e-6
velocity = darcy
permeability = spe10-layered
porosity = spe10-layered
viscosity = 0.3
viscosity_unit = cp
pressure_low = 3998.96
pressure_high = 7997.92
pressure_unit = psi
reaction = langmuir
langmuir_lambda = 1
langmuir_beta = 1e-3
boundary = corner-columns
boundary_low = 0
boundary_high = 1

[time]
t0 = 0
final_time = 4096
dt = 4
initial = 0

[phi]
method = krylov
tol = 1e-6
krylov_dim = 8

[convergence]
dts = 32 16 8 4
reference_dt = 0.5
)";
  return parse_config_text(text);
}

TimeStudySetup time_study(const Scenario& scenario, const RunConfig& cfg) {
  if (!cfg.time.final_time) throw ConfigError("[time] final_time is required for a time study");
  TimeStudySetup setup;
  setup.name = "time-convergence";
  setup.make_system = [&scenario]() { return scenario.system(); };
  setup.norm = [&scenario](const Vector& v) { return l2_norm(v, scenario.mesh); };
  setup.initial = scenario.initial;
  setup.t0 = cfg.time.t0;
  setup.final_time = *cfg.time.final_time;
  setup.phi = cfg.phi;
  return setup;
}

} // namespace fvetd
