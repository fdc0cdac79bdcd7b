#pragma once

#include "icf/invariants.hpp"
#include "icf/radial_graph.hpp"
#include "icf/speed.hpp"

#include <string>
#include <vector>

namespace icf {

/// 1/rho(kappa) per node. Throws CurvatureConeError at the first node whose
/// principal curvatures leave the speed's cone.
ScalarField normal_speed(const GeometryBundle& geo, const SpeedFunction& speed);
ScalarField normal_speed(const StarShapedHypersurface& surface, const SpeedFunction& speed);

struct StepOptions {
  SpectralFilter filter{};
  /// Evolve u~ = e^{-t/mu} f instead of f: u~_t = w/rho - u~/mu.
  bool rescale = false;
};

/// df/dt = sqrt(1 + |grad log f|^2) / rho(kappa), minus f/mu when rescaled;
/// filtered when the filter is enabled.
ScalarField flow_tendency(const StarShapedHypersurface& surface, const SpeedFunction& speed,
                          const StepOptions& options = {});

/// One classical RK4 step.
StarShapedHypersurface step(const StarShapedHypersurface& surface, const SpeedFunction& speed, double dt,
                            const StepOptions& options = {});

/// dt_safety * h_min^2 / max_nodes (sum_i d rho/d kappa_i) / (rho^2 f^2).
double stable_time_step(const GeometryBundle& geo, const StarShapedHypersurface& surface,
                        const SpeedFunction& speed, double dt_safety);

struct FlowConfig {
  SpeedFunction speed = SpeedFunction::mean_curvature();
  double t_end = 1.0;
  double dt_safety = 0.2;
  int record_every = 10;
  bool rescale = true;
  std::vector<double> a_values = default_a_values();
  SpectralFilter filter{};
  double fixed_dt = 0.0;  // > 0 overrides the stability estimate

  /// Throws InvalidArgument.
  void validate() const;
};

struct FlowRecord {
  int step = 0;
  double t = 0.0;
  double W = 0.0;
  std::vector<double> Q;      // Q_1 .. Q_{n-1}
  std::vector<double> E_sup;  // of the rescaled surface, one per a value
  double osc = 1.0;           // max f / min f
  double ubar_mean = 0.0;     // mean of u~ over the unit sphere
  double ubar_osc = 0.0;      // max u~ - min u~
  double shape_dev = 0.0;     // sup |u~ h~_i^j - delta_i^j|
  double willmore_rate = 0.0;
};

struct FlowTrace {
  std::string speed;
  double mu = 0.0;
  GridSpec grid;
  std::vector<double> a_values;
  std::vector<FlowRecord> records;
  int steps = 0;
  double beta = 0.0;  // fitted decay rate of shape_dev
  bool filter_enabled = true;
  double filter_strength = 0.0;
  ScalarField final_f;     // unrescaled radius
  ScalarField final_ubar;  // e^{-t/mu} f

  std::vector<double> times() const;
  std::vector<double> column(double FlowRecord::*member) const;
  /// Throws InvalidArgument unless times strictly increase and every entry is finite.
  void validate() const;
};

FlowTrace run(const StarShapedHypersurface& initial, const FlowConfig& config);

/// -slope of the least-squares line through log(values) against t over the
/// trailing half of the samples; NaN when fewer than two positive values.
double fit_decay_rate(const std::vector<double>& t, const std::vector<double>& values);

struct AsymptoticsReport {
  bool W_monotone = true;
  bool Q_monotone = true;
  bool E_decreased = true;
  bool beta_positive = true;
  bool osc_monotone_after_transient = true;
  double osc_transient_end = 0.0;  // time of the last osc increase
  double beta = 0.0;
  std::vector<double> E_rates;  // fitted decay rate per a
  std::vector<double> E_final;
  std::vector<std::string> violations;
  bool passed() const {
    return W_monotone && Q_monotone && E_decreased && beta_positive && osc_monotone_after_transient;
  }
};

/// Flags: W and Q_k nonincreasing record to record (tolerance 1e-8 relative),
/// E_sup final < initial, beta > 0 and osc monotone over the second half.
/// Quantities already at round-off level (sphere) pass trivially.
AsymptoticsReport asymptotics_check(const FlowTrace& trace);

}  // namespace icf
