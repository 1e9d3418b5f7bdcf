#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "lcamr/assembly.hpp"
#include "lcamr/newton.hpp"
#include "lcamr/reports.hpp"
#include "lcamr/runconfig.hpp"

namespace {

struct Overrides {
  std::string out;
  int levels = -1;
  bool uniform = false;
  bool amr = false;
  std::string marking;
  double nu = -1.0;
  bool count_only = false;
  bool vtk = false;
  bool dump_systems = false;
};

void apply(const Overrides& ov, lcamr::RunConfig& cfg) {
  if (!ov.out.empty()) cfg.out = ov.out;
  if (ov.levels > 0) cfg.levels = ov.levels;
  if (ov.uniform) cfg.uniform = true;
  if (ov.amr) cfg.uniform = false;
  if (!ov.marking.empty()) {
    cfg.marking = lcamr::parse_marking(ov.marking);
    cfg.uniform = false;
  }
  if (ov.nu > 0.0) {
    if (ov.nu >= 1.0) throw std::runtime_error("--nu must lie in (0, 1)");
    cfg.nu = ov.nu;
    cfg.uniform = false;
  }
  if (ov.count_only) {
    cfg.count_only = true;
    cfg.uniform = true;
  }
  if (ov.vtk) cfg.emit_vtk = true;
  if (ov.dump_systems) cfg.dump_systems = true;
}

int run_command(const std::string& config_path, const Overrides& ov) {
  lcamr::RunConfig cfg = lcamr::load_config(config_path);
  apply(ov, cfg);

  const bool emit = !cfg.out.empty();
  if (emit && !lcamr::ensure_directory(cfg.out))
    throw std::runtime_error("cannot create output directory " + cfg.out);

  const lcamr::Problem prob = lcamr::make_problem(cfg);
  const lcamr::NIOptions opt = lcamr::make_ni_options(cfg);

  lcamr::LevelSink sink = [&](const lcamr::LevelReport& lr,
                              const lcamr::LevelData& data,
                              const lcamr::Problem&) {
    std::printf("level %d: cells %d, dofs %lld (%lld free)", lr.level,
                lr.active_cells, static_cast<long long>(lr.raw_dofs),
                static_cast<long long>(lr.reduced_dofs));
    if (!cfg.count_only)
      std::printf(", newton %d, residual %.3e%s, energy %.10g, estimate %.4e",
                  lr.newton_iters, lr.final_residual,
                  lr.converged ? "" : " (not converged)", lr.energy,
                  lr.estimate);
    std::printf("\n");
    std::fflush(stdout);
    if (emit && !cfg.count_only) {
      lcamr::write_level_artifacts(cfg.out, lr, data);
      if (cfg.emit_vtk)
        lcamr::write_vtk(
            cfg.out + "/fields_level" + std::to_string(lr.level) + ".vtk",
            data, &lr);
    }
  };

  const lcamr::RunReport rep = lcamr::nested_iteration(prob, opt, sink);

  if (emit) {
    lcamr::write_run_artifacts(cfg.out, cfg, rep);
    if (rep.failed) lcamr::write_failure(cfg.out, rep.failure);
    if (cfg.dump_systems && rep.has_final) {
      lcamr::FieldState st =
          lcamr::state_view(rep.final_state, prob.params, cfg.quad_points);
      lcamr::write_matrix_market(cfg.out + "/hessian_final.mtx",
                                 lcamr::assemble_hessian(st));
    }
  }

  if (rep.failed) {
    std::fprintf(stderr, "run failed: %s\n", rep.failure.c_str());
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive finite elements for liquid-crystal equilibria"};
  app.require_subcommand(1);

  std::string config_path;
  Overrides ov;
  int seed = 0;

  CLI::App* run = app.add_subcommand("run", "Execute a configured experiment");
  run->add_option("config", config_path, "Run configuration file")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("--out", ov.out, "Override the output directory");
  run->add_option("--levels", ov.levels, "Override the level budget");
  run->add_flag("--uniform", ov.uniform, "Force uniform refinement");
  run->add_flag("--amr", ov.amr, "Force adaptive refinement");
  run->add_option("--marking", ov.marking,
                  "Marking strategy: fixed | bandwidth | dorfler");
  run->add_option("--nu", ov.nu, "Marking fraction in (0, 1)");
  run->add_flag("--count-only", ov.count_only,
                "Report mesh and DOF sizes without solving");
  run->add_flag("--vtk", ov.vtk, "Write a field snapshot per level");
  run->add_flag("--dump-systems", ov.dump_systems,
                "Write the final-level Hessian in Matrix Market format");
  run->add_option("--seed", seed,
                  "Seed for randomized test drivers; batch runs ignore it");

  CLI11_PARSE(app, argc, argv);
  (void)seed;

  try {
    return run_command(config_path, ov);
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return 2;
  }
}
