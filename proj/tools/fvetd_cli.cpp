// Command-line front end: run, converge-space, converge-time, darcy, phi-bench.
#include <chrono>
#include <filesystem>
#include <iostream>
#include <random>

#include <CLI11.hpp>

#include "fvetd/config.hpp"
#include "fvetd/dense_expm.hpp"
#include "fvetd/error.hpp"
#include "fvetd/io.hpp"
#include "fvetd/scenario.hpp"

namespace fs = std::filesystem;
using namespace fvetd;

namespace {

enum ExitCode { kOk = 0, kConfig = 2, kSolver = 3, kIo = 4 };

bool wants(const RunConfig& cfg, const std::string& format) {
  return std::find(cfg.output.formats.begin(), cfg.output.formats.end(), format) !=
         cfg.output.formats.end();
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("'" + dir.string() + "': " + ec.message());
}

int cmd_run(const RunConfig& cfg, long long max_steps) {
  if (!cfg.time.dt) throw ConfigError("[time] dt is required for 'run'");
  if (!cfg.time.final_time) throw ConfigError("[time] final_time is required for 'run'");
  auto sc = build_scenario(cfg);
  RunPlan plan;
  plan.dt = *cfg.time.dt;
  plan.t0 = cfg.time.t0;
  plan.final_time = *cfg.time.final_time;
  plan.snapshot_every = cfg.time.snapshot_every;
  plan.phi = cfg.phi;
  try {
    plan.step_count();
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("[time] ") + e.what());
  }
  if (max_steps > 0 && max_steps < plan.step_count()) {
    plan.final_time = plan.t0 + static_cast<double>(max_steps) * plan.dt;
  }

  ensure_dir(cfg.output.directory);
  std::vector<std::vector<std::string>> rows;
  auto sink = [&](const Snapshot& s) {
    const double l2 = l2_norm(s.state.values, sc->mesh);
    rows.push_back({std::to_string(s.step), format_double(s.state.t), format_double(l2),
                    format_double(s.state.values.minCoeff()), format_double(s.state.values.maxCoeff())});
    if (wants(cfg, "vtk")) {
      ScalarCellField x(s.state.values.data(), s.state.values.data() + s.state.values.size());
      std::vector<std::pair<std::string, const ScalarCellField*>> fields{{"concentration", &x}};
      if (sc->darcy) fields.emplace_back("pressure", &sc->darcy->pressure);
      char name[64];
      std::snprintf(name, sizeof name, "state_%06lld.vtk", s.step);
      write_vtk(cfg.output.directory / name, sc->mesh, fields);
    }
  };
  Trajectory traj;
  try {
    traj = run(sc->system(), sc->initial, plan, sink, false);
  } catch (const StepFailure& e) {
    if (wants(cfg, "csv")) {
      write_csv(cfg.output.directory / "snapshots.csv", {"step", "t", "l2", "min", "max"}, rows);
    }
    throw;
  }
  if (wants(cfg, "csv")) {
    write_csv(cfg.output.directory / "snapshots.csv", {"step", "t", "l2", "min", "max"}, rows);
  }
  std::cout << "steps " << traj.steps << ", phi actions " << traj.phi_calls << ", matvecs "
            << traj.matvecs << ", final t = " << format_double(traj.snapshots.back().state.t) << "\n";
  return kOk;
}

void emit_report(const ConvergenceReport& report, const RunConfig& cfg, const std::string& file) {
  print_report(report, std::cout);
  if (wants(cfg, "csv")) {
    ensure_dir(cfg.output.directory);
    export_report_csv(report, cfg.output.directory / file);
  }
}

int cmd_converge_space(const RunConfig& cfg, bool has_config) {
  CurvedShearParams params;
  if (has_config && cfg.has_section("time")) {
    params.t0 = cfg.time.t0;
    if (cfg.time.final_time) params.final_time = *cfg.time.final_time;
  }
  const double dt = cfg.time.dt.value_or(1.0 / 3000.0);
  const auto report = space_convergence(curved_shear_case(params), cfg.convergence.grids, dt, cfg.phi);
  emit_report(report, cfg, "space_convergence.csv");
  return kOk;
}

int cmd_converge_time(const RunConfig& cfg) {
  auto sc = build_scenario(cfg);
  const auto report = time_convergence(time_study(*sc, cfg), cfg.convergence.dts, cfg.convergence.reference_dt);
  emit_report(report, cfg, "time_convergence.csv");
  return kOk;
}

int cmd_darcy(const RunConfig& cfg) {
  const StructuredMesh mesh = mesh_from_config(cfg);
  const DarcySolution sol = solve_darcy(cfg, mesh);
  const double rel = sol.balance.max_flux > 0.0 ? sol.balance.max_imbalance / sol.balance.max_flux : 0.0;
  std::cout << "cells " << mesh.num_cells() << ", max |q| = " << format_double(sol.balance.max_flux)
            << ", max imbalance = " << format_double(sol.balance.max_imbalance)
            << " (relative " << format_double(rel) << ")\n";
  ensure_dir(cfg.output.directory);
  if (wants(cfg, "csv")) {
    std::vector<std::vector<std::string>> rows;
    for (Index f = 0; f < mesh.num_faces(); ++f) {
      const Face& face = mesh.face(f);
      rows.push_back({std::to_string(f), std::to_string(face.axis), std::to_string(face.first),
                      std::to_string(face.second), format_double(sol.fluxes[f])});
    }
    write_csv(cfg.output.directory / "fluxes.csv", {"face", "axis", "first", "second", "flux"}, rows);
  }
  if (wants(cfg, "vtk")) {
    const auto net = cell_flux_imbalance(sol.fluxes, mesh);
    write_vtk(cfg.output.directory / "pressure.vtk", mesh,
              {{"pressure", &sol.pressure}, {"net_outflow", &net}});
  }
  if (rel > 1e-10) throw SolverError("flux imbalance " + format_double(rel) + " exceeds 1e-10 max|q|");
  return kOk;
}

/// Random 1D advection-diffusion-like operator with a known dense oracle.
SparseMatrix random_operator(Index n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.5, 1.5);
  std::vector<Eigen::Triplet<double>> t;
  for (Index i = 0; i < n; ++i) {
    const double dl = u(rng), dr = u(rng), adv = 0.5 * u(rng);
    double diag = 0.0;
    if (i > 0) {
      t.emplace_back(i, i - 1, -dl - adv);
      diag += dl + adv;
    }
    if (i + 1 < n) {
      t.emplace_back(i, i + 1, -dr);
      diag += dr;
    }
    t.emplace_back(i, i, diag + 0.1);
  }
  SparseMatrix a(n, n);
  a.setFromTriplets(t.begin(), t.end());
  return a;
}

int cmd_phi_bench(const std::vector<Index>& sizes, const std::vector<double>& dts, const std::string& out,
                  const PhiActionConfig& base, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::vector<std::string>> rows;
  for (Index n : sizes) {
    const SparseMatrix a = random_operator(n, rng);
    const LinearOperator op = make_operator(a);
    Vector v = Vector::NullaryExpr(n, [&] { return std::normal_distribution<double>()(rng); });
    for (double dt : dts) {
      // phi_1(-dt A) v from the augmented exponential of [[-dt A, v], [0, 0]]
      DenseMatrix aug = DenseMatrix::Zero(n + 1, n + 1);
      aug.topLeftCorner(n, n) = -dt * DenseMatrix(a);
      aug.topRightCorner(n, 1) = v;
      const Vector oracle = expm(aug).topRightCorner(n, 1);
      for (PhiMethod m : {PhiMethod::Krylov, PhiMethod::Leja, PhiMethod::Dense}) {
        PhiActionConfig cfg = base;
        cfg.method = m;
        const auto t0 = std::chrono::steady_clock::now();
        const PhiResult r = phi1_action(op, dt, v, cfg);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const double err = (r.w - oracle).norm() / oracle.norm();
        rows.push_back({std::to_string(n), to_string(m), format_double(dt),
                        format_double(r.diagnostics.error_estimate), format_double(err), format_double(secs)});
      }
    }
  }
  const std::vector<std::string> header{"n", "method", "dt", "estimated_error", "oracle_error", "wall_time_s"};
  if (out.empty()) {
    std::cout << "n,method,dt,estimated_error,oracle_error,wall_time_s\n";
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) std::cout << (i ? "," : "") << csv_escape(r[i]);
      std::cout << "\n";
    }
  } else {
    write_csv(out, header, rows);
  }
  return kOk;
}

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ';');
  return s;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-volume ETD solver for advection-diffusion-reaction in porous media"};
  app.require_subcommand(1);

  std::string config_path;
  long long max_steps = 0;
  std::string output_override;

  auto* run_cmd = app.add_subcommand("run", "Integrate a configured problem");
  run_cmd->add_option("config", config_path, "Configuration file")->required();
  run_cmd->add_option("--max-steps", max_steps, "Stop after this many steps");
  run_cmd->add_option("-o,--output", output_override, "Output directory");

  auto* space_cmd = app.add_subcommand("converge-space", "Spatial convergence on the curved-shear case");
  space_cmd->add_option("config", config_path, "Optional configuration ([time], [phi], [convergence], [output])");
  std::vector<Index> grid_override;
  double dt_override = 0.0;
  space_cmd->add_option("--grids", grid_override, "Cells per axis");
  space_cmd->add_option("--dt", dt_override, "Time step");
  space_cmd->add_option("-o,--output", output_override, "Output directory");

  auto* time_cmd = app.add_subcommand("converge-time", "Temporal self-convergence");
  time_cmd->add_option("config", config_path, "Configuration (default: layered reservoir analogue)");
  time_cmd->add_option("-o,--output", output_override, "Output directory");

  auto* darcy_cmd = app.add_subcommand("darcy", "Solve the pressure problem and report flux balance");
  darcy_cmd->add_option("config", config_path, "Configuration file (default: layered reservoir analogue)");
  darcy_cmd->add_option("-o,--output", output_override, "Output directory");

  auto* bench_cmd = app.add_subcommand("phi-bench", "Compare phi_1 actions against a dense oracle");
  std::vector<Index> sizes{50, 100, 200};
  std::vector<double> dts{0.01, 0.1, 1.0};
  std::string bench_out;
  unsigned seed = 1;
  PhiActionConfig bench_phi;
  bench_cmd->add_option("--sizes", sizes, "Operator sizes");
  bench_cmd->add_option("--dts", dts, "Step sizes");
  bench_cmd->add_option("--tol", bench_phi.tol, "Tolerance");
  bench_cmd->add_option("--krylov-dim", bench_phi.krylov_dim, "Krylov dimension");
  bench_cmd->add_option("--seed", seed, "Random seed");
  bench_cmd->add_option("-o,--output", bench_out, "CSV file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kConfig;
  }

  try {
    kernels::configure_threads_from_env();
    if (bench_cmd->parsed()) {
      bench_phi.validate();
      return cmd_phi_bench(sizes, dts, bench_out, bench_phi, seed);
    }
    const bool has_config = !config_path.empty();
    RunConfig cfg;
    if (has_config) {
      cfg = parse_config(config_path);
    } else if (time_cmd->parsed() || darcy_cmd->parsed()) {
      cfg = spe10_analogue_config();
    } else {
      cfg = parse_config_text("[mesh]\ndim = 2\ncounts = 1 1\nsizes = 1 1\n");
    }
    if (!output_override.empty()) cfg.output.directory = output_override;

    if (run_cmd->parsed()) return cmd_run(cfg, max_steps);
    if (space_cmd->parsed()) {
      if (!grid_override.empty()) cfg.convergence.grids = grid_override;
      if (dt_override > 0.0) cfg.time.dt = dt_override;
      return cmd_converge_space(cfg, has_config);
    }
    if (time_cmd->parsed()) return cmd_converge_time(cfg);
    if (darcy_cmd->parsed()) return cmd_darcy(cfg);
  } catch (const ConfigErrors& e) {
    std::string msg;
    for (const auto& m : e.messages()) msg += (msg.empty() ? "" : "; ") + m;
    std::cerr << "config error: " << msg << "\n";
    return kConfig;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << one_line(e.what()) << "\n";
    return kConfig;
  } catch (const InvalidArgument& e) {
    std::cerr << "invalid input: " << one_line(e.what()) << "\n";
    return kConfig;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << one_line(e.what()) << "\n";
    return kIo;
  } catch (const StepFailure& e) {
    std::cerr << "solver failure: " << one_line(e.what()) << "\n";
    return kSolver;
  } catch (const SolverError& e) {
    std::cerr << "solver failure: " << one_line(e.what()) << "\n";
    return kSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << one_line(e.what()) << "\n";
    return kSolver;
  }
  return kOk;
}
