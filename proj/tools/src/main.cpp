#include "icf/cli/commands.hpp"
#include "icf/cli/io.hpp"
#include "icf/errors.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

using namespace icf::cli;

struct CommonFlags {
  std::string grid;
};

void add_common(CLI::App* app, CommonOptions& common, CommonFlags& flags) {
  app->add_option("--out", common.out_dir, "Output directory")->capture_default_str();
  app->add_option("--name", common.name, "Output file stem (default: input file stem)");
  app->add_option("--grid", flags.grid, "Grid NTHETAxNPHI; the input is resampled when it differs");
}

void resolve(CommonOptions& common, const CommonFlags& flags) {
  if (!flags.grid.empty()) common.grid = icf::GridSpec::parse(flags.grid);
}

int fail(const std::string& kind, const std::string& message) {
  std::cerr << dump_json(error_json(kind, message));
  return kExitInputError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Curvature flow laboratory for star-shaped surfaces"};
  app.set_version_flag("--version", ICF_VERSION);
  app.require_subcommand(1);

  GenOptions gen;
  CommonFlags gen_flags;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a surface: sphere R | spheroid a c | harmonic base l,m,amp ...");
  gen_cmd->add_option("kind", gen.kind, "sphere, spheroid or harmonic")->required();
  gen_cmd->add_option("params", gen.params, "Kind parameters");
  add_common(gen_cmd, gen.common, gen_flags);
  gen_cmd->get_option("--grid")->description("Grid NTHETAxNPHI (default 64x128)");

  FlowOptions flow;
  CommonFlags flow_flags;
  bool no_rescale = false, no_filter = false;
  auto* flow_cmd = app.add_subcommand("flow", "Run the curvature flow; writes a CSV trace and a summary");
  flow_cmd->add_option("surface", flow.input, "Surface JSON")->required()->check(CLI::ExistingFile);
  flow_cmd->add_option("--speed", flow.speed, "H | quotient:k | power:k | ratio:i,j")->capture_default_str();
  flow_cmd->add_option("--t-end", flow.t_end, "Final time")->capture_default_str();
  flow_cmd->add_option("--dt-safety", flow.dt_safety, "Time step safety factor")->capture_default_str();
  flow_cmd->add_option("--record-every", flow.record_every, "Steps between trace records")->capture_default_str();
  flow_cmd->add_flag("--no-rescale", no_rescale, "Integrate f instead of the rescaled radius");
  flow_cmd->add_flag("--no-filter", no_filter, "Disable the spectral filter");
  add_common(flow_cmd, flow.common, flow_flags);

  SurfaceOptions diag;
  CommonFlags diag_flags;
  auto* diag_cmd = app.add_subcommand("diag", "Energy report: W, Q_k, E sup norms, qbar");
  diag_cmd->add_option("surface", diag.input, "Surface JSON")->required()->check(CLI::ExistingFile);
  add_common(diag_cmd, diag.common, diag_flags);

  InvarianceOptions inv;
  CommonFlags inv_flags;
  auto* inv_cmd = app.add_subcommand("invariance", "Audit E inversion invariance, Hsiung-Minkowski residuals, qbar");
  inv_cmd->add_option("surface", inv.input, "Surface JSON")->required()->check(CLI::ExistingFile);
  inv_cmd->add_option("--seed", inv.seed, "Seed for the random conformal fields")->capture_default_str();
  inv_cmd->add_option("--trials", inv.trials, "Number of random conformal fields")->capture_default_str();
  add_common(inv_cmd, inv.common, inv_flags);

  SolitonOptions sol;
  CommonFlags sol_flags;
  auto* sol_cmd = app.add_subcommand("soliton", "Fit a conformal Killing field and classify");
  sol_cmd->add_option("surface", sol.input, "Surface JSON")->required()->check(CLI::ExistingFile);
  sol_cmd->add_option("--speed", sol.speed, "H | quotient:k | power:k | ratio:i,j")->capture_default_str();
  sol_cmd->add_option("--tol", sol.tol, "Relative residual tolerance")->capture_default_str();
  add_common(sol_cmd, sol.common, sol_flags);

  SurfaceOptions ineq;
  CommonFlags ineq_flags;
  auto* ineq_cmd = app.add_subcommand("inequality", "Check the sharp qbar bounds");
  ineq_cmd->add_option("surface", ineq.input, "Surface JSON")->required()->check(CLI::ExistingFile);
  add_common(ineq_cmd, ineq.common, ineq_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what());
  }

  try {
    if (*gen_cmd) {
      resolve(gen.common, gen_flags);
      return run_gen(gen, std::cout);
    }
    if (*flow_cmd) {
      resolve(flow.common, flow_flags);
      flow.rescale = !no_rescale;
      flow.filter = !no_filter;
      return run_flow(flow, std::cout);
    }
    if (*diag_cmd) {
      resolve(diag.common, diag_flags);
      return run_diag(diag, std::cout);
    }
    if (*inv_cmd) {
      resolve(inv.common, inv_flags);
      return run_invariance(inv, std::cout);
    }
    if (*sol_cmd) {
      resolve(sol.common, sol_flags);
      return run_soliton(sol, std::cout);
    }
    if (*ineq_cmd) {
      resolve(ineq.common, ineq_flags);
      return run_inequality(ineq, std::cout);
    }
  } catch (const icf::Error& e) {
    return fail(e.kind(), e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail("io", e.what());
  }
  return kExitInputError;
}
