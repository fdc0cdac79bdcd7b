#include "icf/flow.hpp"

#include "icf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace icf {

namespace {

[[noreturn]] void cone_violation(const SpeedFunction& speed, std::size_t node, const std::array<double, 2>& k) {
  std::ostringstream msg;
  msg.precision(10);
  msg << "principal curvatures (" << k[0] << ", " << k[1] << ") at node " << node << " leave the cone of speed "
      << speed.name();
  throw CurvatureConeError(msg.str());
}

bool finite(double v) { return std::isfinite(v); }

}  // namespace

ScalarField normal_speed(const GeometryBundle& geo, const SpeedFunction& speed) {
  speed.validate(geo.n);
  ScalarField out(geo.grid);
  for (std::size_t k = 0; k < geo.size(); ++k) {
    const auto& kap = geo.kappa[k];
    if (!speed.in_cone(kap)) cone_violation(speed, k, kap);
    const double rho = speed(kap);
    if (!(rho > 0.0) || !finite(rho)) cone_violation(speed, k, kap);
    out[k] = 1.0 / rho;
  }
  return out;
}

ScalarField normal_speed(const StarShapedHypersurface& surface, const SpeedFunction& speed) {
  return normal_speed(geometry(surface), speed);
}

namespace {

ScalarField tendency_from(const GeometryBundle& geo, const StarShapedHypersurface& surface,
                          const SpeedFunction& speed, const StepOptions& options) {
  ScalarField rate = normal_speed(geo, speed);
  const double inv_mu = options.rescale ? 1.0 / speed.mu(geo.n) : 0.0;
  const auto& f = surface.f();
  for (std::size_t k = 0; k < rate.size(); ++k) rate[k] = geo.w[k] * rate[k] - inv_mu * f[k];
  if (options.filter.enabled) rate = geo.grid->project(rate, options.filter);
  return rate;
}

StarShapedHypersurface rk4(const StarShapedHypersurface& s, const ScalarField& k1, const SpeedFunction& speed,
                           double dt, const StepOptions& options) {
  auto stage = [&](const ScalarField& base_rate, double c) {
    ScalarField f = s.f();
    for (std::size_t k = 0; k < f.size(); ++k) f[k] += c * dt * base_rate[k];
    StarShapedHypersurface next(std::move(f));
    return flow_tendency(next, speed, options);
  };
  const ScalarField k2 = stage(k1, 0.5);
  const ScalarField k3 = stage(k2, 0.5);
  const ScalarField k4 = stage(k3, 1.0);
  ScalarField f = s.f();
  for (std::size_t k = 0; k < f.size(); ++k) f[k] += dt / 6.0 * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
  return StarShapedHypersurface(std::move(f));
}

}  // namespace

ScalarField flow_tendency(const StarShapedHypersurface& surface, const SpeedFunction& speed,
                          const StepOptions& options) {
  return tendency_from(geometry(surface), surface, speed, options);
}

StarShapedHypersurface step(const StarShapedHypersurface& surface, const SpeedFunction& speed, double dt,
                            const StepOptions& options) {
  if (!(dt > 0.0) || !finite(dt)) throw InvalidArgument("step: dt must be positive");
  return rk4(surface, flow_tendency(surface, speed, options), speed, dt, options);
}

double stable_time_step(const GeometryBundle& geo, const StarShapedHypersurface& surface,
                        const SpeedFunction& speed, double dt_safety) {
  const auto& f = surface.f();
  double diffusivity = 0.0;
  for (std::size_t k = 0; k < geo.size(); ++k) {
    const auto& kap = geo.kappa[k];
    if (!speed.in_cone(kap)) cone_violation(speed, k, kap);
    const double rho = speed(kap);
    double sum = 0.0;
    for (double d : speed.gradient(kap)) sum += d;
    diffusivity = std::max(diffusivity, sum / (rho * rho * f[k] * f[k]));
  }
  const double h = geo.grid->min_spacing();
  if (!(diffusivity > 0.0) || !finite(diffusivity)) throw ResolutionError("degenerate diffusivity estimate");
  return dt_safety * h * h / diffusivity;
}

void FlowConfig::validate() const {
  if (!(t_end > 0.0) || !finite(t_end)) throw InvalidArgument("t_end must be positive");
  if (!(dt_safety > 0.0 && dt_safety <= 0.5)) throw InvalidArgument("dt_safety must lie in (0, 0.5]");
  if (record_every < 1) throw InvalidArgument("record_every must be >= 1");
  if (fixed_dt < 0.0 || !finite(fixed_dt)) throw InvalidArgument("fixed_dt must be >= 0");
  for (double a : a_values)
    if (!finite(a)) throw InvalidArgument("a values must be finite");
}

// ---------------------------------------------------------------------------

std::vector<double> FlowTrace::times() const { return column(&FlowRecord::t); }

std::vector<double> FlowTrace::column(double FlowRecord::*member) const {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.*member);
  return out;
}

void FlowTrace::validate() const {
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (i > 0 && !(r.t > records[i - 1].t)) throw InvalidArgument("trace times are not strictly increasing");
    bool ok = finite(r.t) && finite(r.W) && finite(r.osc) && finite(r.ubar_mean) && finite(r.ubar_osc) &&
              finite(r.shape_dev) && finite(r.willmore_rate);
    for (double q : r.Q) ok = ok && finite(q);
    for (double e : r.E_sup) ok = ok && finite(e);
    if (!ok) throw InvalidArgument("trace record " + std::to_string(i) + " has non-finite entries");
  }
}

namespace {

FlowRecord make_record(int step_index, double t, const StarShapedHypersurface& state, const GeometryBundle& geo,
                       const FlowConfig& cfg, double mu) {
  FlowRecord r;
  r.step = step_index;
  r.t = t;
  r.W = willmore(geo);
  for (int k = 1; k < geo.n; ++k) r.Q.push_back(guan_li_Q(geo, k));
  // The state is u~ itself when rescaled, f otherwise.
  const double to_ubar = cfg.rescale ? 1.0 : std::exp(-t / mu);
  for (double a : cfg.a_values) r.E_sup.push_back(e_tensor(geo, a).sup / (to_ubar * to_ubar));
  const auto& u = state.f();
  r.osc = u.max() / u.min();
  const auto& grid = *geo.grid;
  r.ubar_mean = to_ubar * grid.integrate(u) / (4.0 * std::numbers::pi);
  r.ubar_osc = to_ubar * (u.max() - u.min());
  for (std::size_t k = 0; k < geo.size(); ++k) {
    for (double kap : geo.kappa[k]) r.shape_dev = std::max(r.shape_dev, std::abs(u[k] * kap - 1.0));
  }
  r.willmore_rate = willmore_rate(geo, normal_speed(geo, cfg.speed));
  return r;
}

}  // namespace

FlowTrace run(const StarShapedHypersurface& initial, const FlowConfig& config) {
  config.validate();
  config.speed.validate(initial.dimension());
  const double mu = config.speed.mu(initial.dimension());
  const StepOptions options{config.filter, config.rescale};

  FlowTrace trace;
  trace.speed = config.speed.name();
  trace.mu = mu;
  trace.grid = initial.grid()->spec();
  trace.a_values = config.a_values;
  trace.filter_enabled = config.filter.enabled;
  trace.filter_strength = config.filter.enabled ? config.filter.strength : 0.0;

  StarShapedHypersurface state =
      config.filter.enabled ? StarShapedHypersurface(initial.grid()->project(initial.f(), config.filter)) : initial;
  double t = 0.0;
  int steps = 0;
  GeometryBundle geo = geometry(state);
  trace.records.push_back(make_record(0, t, state, geo, config, mu));

  const double t_stop = config.t_end * (1.0 - 1e-12);
  while (t < t_stop) {
    double dt = config.fixed_dt > 0.0 ? config.fixed_dt : stable_time_step(geo, state, config.speed, config.dt_safety);
    const double remaining = config.t_end - t;
    if (remaining > dt * (1.0 + 1e-9) && remaining < 1.5 * dt) dt = 0.5 * remaining;
    const bool last = t + dt >= t_stop;
    if (last) dt = remaining;
    state = rk4(state, tendency_from(geo, state, config.speed, options), config.speed, dt, options);
    t = last ? config.t_end : t + dt;
    ++steps;
    geo = geometry(state);
    if (last || steps % config.record_every == 0) trace.records.push_back(make_record(steps, t, state, geo, config, mu));
  }
  trace.steps = steps;

  const double scale = std::exp(t / mu);
  trace.final_ubar = config.rescale ? state.f() : (1.0 / scale) * state.f();
  trace.final_f = config.rescale ? scale * state.f() : state.f();
  trace.beta = fit_decay_rate(trace.times(), trace.column(&FlowRecord::shape_dev));
  trace.validate();
  return trace;
}

double fit_decay_rate(const std::vector<double>& t, const std::vector<double>& values) {
  const std::size_t n = std::min(t.size(), values.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int m = 0;
  for (std::size_t i = n / 2; i < n; ++i) {
    if (!(values[i] > 0.0)) continue;
    const double x = t[i], y = std::log(values[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  const double den = m * sxx - sx * sx;
  if (m < 2 || !(den > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  return -(m * sxy - sx * sy) / den;
}

AsymptoticsReport asymptotics_check(const FlowTrace& trace) {
  constexpr double kMonotoneTol = 1e-8;
  constexpr double kRoundOff = 1e-10;  // quantities below this are already converged
  if (trace.records.empty()) throw InvalidArgument("asymptotics_check: empty trace");
  AsymptoticsReport rep;
  const auto& rec = trace.records;
  const auto t = trace.times();
  auto flag = [&](bool& which, const std::string& what) {
    which = false;
    rep.violations.push_back(what);
  };

  for (std::size_t i = 1; i < rec.size(); ++i) {
    if (rec[i].W > rec[i - 1].W + kMonotoneTol * std::abs(rec[i - 1].W)) {
      std::ostringstream s;
      s << "W increased at t = " << rec[i].t << " by " << rec[i].W - rec[i - 1].W;
      flag(rep.W_monotone, s.str());
    }
    for (std::size_t k = 0; k < rec[i].Q.size(); ++k) {
      if (rec[i].Q[k] > rec[i - 1].Q[k] + kMonotoneTol * std::abs(rec[i - 1].Q[k])) {
        std::ostringstream s;
        s << "Q_" << k + 1 << " increased at t = " << rec[i].t;
        flag(rep.Q_monotone, s.str());
      }
    }
  }

  for (std::size_t a = 0; a < trace.a_values.size(); ++a) {
    std::vector<double> e;
    for (const auto& r : rec) e.push_back(r.E_sup[a]);
    rep.E_final.push_back(e.back());
    rep.E_rates.push_back(e.front() > kRoundOff ? fit_decay_rate(t, e) : 0.0);
    if (e.front() > kRoundOff && !(e.back() < e.front())) {
      std::ostringstream s;
      s << "E_sup(a = " << trace.a_values[a] << ") did not decrease";
      flag(rep.E_decreased, s.str());
    }
  }

  double max_dev = 0.0;
  for (const auto& r : rec) max_dev = std::max(max_dev, r.shape_dev);
  rep.beta = fit_decay_rate(t, trace.column(&FlowRecord::shape_dev));
  if (max_dev > kRoundOff && !(rep.beta > 0.0)) flag(rep.beta_positive, "fitted beta is not positive");

  for (std::size_t i = 1; i < rec.size(); ++i) {
    if (rec[i].osc > rec[i - 1].osc * (1.0 + 1e-12)) rep.osc_transient_end = rec[i].t;
  }
  if (rep.osc_transient_end > 0.5 * t.back()) flag(rep.osc_monotone_after_transient, "osc still increasing late in the flow");
  return rep;
}

}  // namespace icf
