#pragma once

#include "icf/sphere_grid.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace icf::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitAuditFailure = 2;
inline constexpr int kExitInputError = 3;

struct CommonOptions {
  std::string out_dir = ".";
  std::string name;               // output stem; derived from the input when empty
  std::optional<GridSpec> grid;   // resample the input onto this grid
};

struct GenOptions {
  CommonOptions common;
  std::string kind;                 // sphere | spheroid | harmonic
  std::vector<std::string> params;  // sphere R | spheroid a c | harmonic base l,m,amp ...
};

struct FlowOptions {
  CommonOptions common;
  std::string input;
  std::string speed = "H";
  double t_end = 1.0;
  double dt_safety = 0.2;
  int record_every = 10;
  bool rescale = true;
  bool filter = true;
};

struct SurfaceOptions {
  CommonOptions common;
  std::string input;
};

struct InvarianceOptions {
  CommonOptions common;
  std::string input;
  std::uint64_t seed = 1;
  int trials = 20;
};

struct SolitonOptions {
  CommonOptions common;
  std::string input;
  std::string speed = "H";
  double tol = 1e-6;
};

/// Each writes its outputs plus `<name>.<command>.manifest.json` under
/// out_dir, prints a one-line summary to `log` and returns the exit code.
/// Library errors propagate as exceptions.
int run_gen(const GenOptions& opt, std::ostream& log);
int run_flow(const FlowOptions& opt, std::ostream& log);
int run_diag(const SurfaceOptions& opt, std::ostream& log);
int run_invariance(const InvarianceOptions& opt, std::ostream& log);
int run_soliton(const SolitonOptions& opt, std::ostream& log);
int run_inequality(const SurfaceOptions& opt, std::ostream& log);

// Pinned audit thresholds.
inline constexpr double kEGapTolerance = 1e-6;
inline constexpr double kMinkowskiTolerance = 1e-6;
inline constexpr double kQbarTolerance = 1e-9;

}  // namespace icf::cli
