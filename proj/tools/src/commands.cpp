#include "icf/cli/commands.hpp"

#include "icf/cli/io.hpp"
#include "icf/errors.hpp"
#include "icf/flow.hpp"
#include "icf/invariants.hpp"
#include "icf/soliton.hpp"
#include "icf/surfaces.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <ostream>
#include <random>

#ifndef ICF_VERSION
#define ICF_VERSION "unknown"
#endif

namespace icf::cli {

namespace fs = std::filesystem;

namespace {

class Manifest {
 public:
  Manifest(std::string command, const CommonOptions& common)
      : command_(std::move(command)), dir_(common.out_dir), start_(std::chrono::steady_clock::now()) {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    started_ = buf;
  }

  void input(const std::string& path) { inputs_.push_back(path); }
  void config(Json c) { config_ = std::move(c); }
  void grid(const GridSpec& g) { grid_ = g.str(); }

  fs::path output(const std::string& filename) {
    const auto p = dir_ / filename;
    outputs_.push_back(p.string());
    return p;
  }

  void write(const std::string& stem, int exit_code) const {
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    Json j;
    j["command"] = command_;
    j["tool_version"] = ICF_VERSION;
    j["inputs"] = inputs_;
    j["config"] = config_;
    j["grid"] = grid_;
    j["started_utc"] = started_;
    j["wall_clock_seconds"] = elapsed;
    j["outputs"] = outputs_;
    j["exit_code"] = exit_code;
    write_file_atomic(dir_ / (stem + "." + command_ + ".manifest.json"), dump_json(j));
  }

 private:
  std::string command_;
  fs::path dir_;
  std::chrono::steady_clock::time_point start_;
  std::string started_;
  std::vector<std::string> inputs_;
  Json config_ = Json::object();
  std::string grid_;
  std::vector<std::string> outputs_;
};

std::string stem_of(const CommonOptions& common, const std::string& input) {
  if (!common.name.empty()) return common.name;
  std::string base = fs::path(input).filename().string();
  for (const std::string suffix : {".surface.json", ".json"}) {
    if (base.size() > suffix.size() && base.ends_with(suffix)) return base.substr(0, base.size() - suffix.size());
  }
  return base;
}

SurfaceDocument load(const std::string& input, const CommonOptions& common) {
  auto doc = read_surface(input);
  if (common.grid && !(*common.grid == doc.surface.grid()->spec())) {
    common.grid->validate();
    doc.surface = resample(doc.surface, SphereGrid::make(*common.grid));
  }
  return doc;
}

double parse_number(const std::string& text, const std::string& what) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size()) throw InputError(what + ": '" + text + "' is not a number");
  return v;
}

int parse_int(const std::string& text, const std::string& what) {
  const double v = parse_number(text, what);
  if (v != std::floor(v) || std::abs(v) > 1e6) throw InputError(what + ": '" + text + "' is not an integer");
  return static_cast<int>(v);
}

HarmonicTerm parse_term(const std::string& text) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (std::size_t k = 0; k <= text.size(); ++k) {
    if (k == text.size() || text[k] == ',') {
      parts.push_back(text.substr(start, k - start));
      start = k + 1;
    }
  }
  if (parts.size() != 3) throw InputError("harmonic term '" + text + "' must be l,m,amplitude");
  return {parse_int(parts[0], "harmonic degree"), parse_int(parts[1], "harmonic order"),
          parse_number(parts[2], "harmonic amplitude")};
}

std::string grid_str(const StarShapedHypersurface& s) { return s.grid()->spec().str(); }

Json common_json(const CommonOptions& c) {
  return {{"out_dir", c.out_dir}, {"name", c.name}, {"grid", c.grid ? Json(c.grid->str()) : Json()}};
}

double qbar_inversion_gap(const StarShapedHypersurface& s, const QbarReport& q) {
  return std::abs(qbar(s.invert()).qbar - q.qbar) / std::abs(q.qbar);
}

}  // namespace

int run_gen(const GenOptions& opt, std::ostream& log) {
  Manifest manifest("gen", opt.common);
  const GridSpec spec = opt.common.grid.value_or(GridSpec{64, 128});
  spec.validate();
  const auto grid = SphereGrid::make(spec);
  const auto& p = opt.params;
  auto expect = [&](std::size_t n, const char* usage) {
    if (p.size() != n) throw InputError(std::string("gen ") + opt.kind + " expects: " + usage);
  };
  Json params;
  std::optional<StarShapedHypersurface> surface;
  if (opt.kind == "sphere") {
    expect(1, "R");
    const double R = parse_number(p[0], "sphere radius");
    params = {{"R", R}};
    surface = make_sphere(grid, R);
  } else if (opt.kind == "spheroid") {
    expect(2, "a c");
    const double a = parse_number(p[0], "spheroid a"), c = parse_number(p[1], "spheroid c");
    params = {{"a", a}, {"c", c}};
    surface = make_spheroid(grid, a, c);
  } else if (opt.kind == "harmonic") {
    if (p.empty()) throw InputError("gen harmonic expects: base [l,m,amplitude ...]");
    const double base = parse_number(p[0], "harmonic base");
    std::vector<HarmonicTerm> terms;
    Json jt = Json::array();
    for (std::size_t k = 1; k < p.size(); ++k) {
      terms.push_back(parse_term(p[k]));
      jt.push_back({{"l", terms.back().l}, {"m", terms.back().m}, {"amplitude", terms.back().amplitude}});
    }
    params = {{"base", base}, {"terms", jt}};
    surface = make_harmonic(grid, base, terms);
  } else {
    throw InputError("unknown surface kind '" + opt.kind + "' (sphere | spheroid | harmonic)");
  }
  const std::string stem = opt.common.name.empty() ? opt.kind : opt.common.name;
  Json meta = {{"name", stem}, {"kind", opt.kind}, {"params", params}};
  manifest.config({{"common", common_json(opt.common)}, {"kind", opt.kind}, {"params", params}});
  manifest.grid(spec);
  const auto path = manifest.output(stem + ".surface.json");
  write_file_atomic(path, dump_json(surface_to_json(*surface, meta)));
  manifest.write(stem, kExitOk);
  log << "wrote " << path.string() << "\n";
  return kExitOk;
}

int run_flow(const FlowOptions& opt, std::ostream& log) {
  Manifest manifest("flow", opt.common);
  manifest.input(opt.input);
  const auto doc = load(opt.input, opt.common);
  const std::string stem = stem_of(opt.common, opt.input);
  FlowConfig cfg;
  cfg.speed = SpeedFunction::parse(opt.speed);
  cfg.t_end = opt.t_end;
  cfg.dt_safety = opt.dt_safety;
  cfg.record_every = opt.record_every;
  cfg.rescale = opt.rescale;
  cfg.filter.enabled = opt.filter;
  cfg.validate();
  manifest.config({{"common", common_json(opt.common)},
                   {"speed", cfg.speed.name()},
                   {"t_end", cfg.t_end},
                   {"dt_safety", cfg.dt_safety},
                   {"record_every", cfg.record_every},
                   {"rescale", cfg.rescale},
                   {"filter", cfg.filter.enabled}});
  manifest.grid(doc.surface.grid()->spec());

  const auto trace = run(doc.surface, cfg);
  trace.validate();
  const auto check = asymptotics_check(trace);
  const int code = check.passed() ? kExitOk : kExitAuditFailure;

  const auto csv = manifest.output(stem + ".trace.csv");
  write_file_atomic(csv, trace_csv(trace));
  const auto final_path = manifest.output(stem + ".final.surface.json");
  const StarShapedHypersurface final_surface(trace.final_f);
  write_file_atomic(final_path,
                    dump_json(surface_to_json(final_surface, {{"name", stem + "-final"},
                                                              {"kind", "flow"},
                                                              {"params", {{"source", opt.input},
                                                                          {"speed", trace.speed},
                                                                          {"t_end", cfg.t_end}}}})));
  const auto& first = trace.records.front();
  const auto& last = trace.records.back();
  auto snapshot = [](const FlowRecord& r) {
    return Json{{"t", r.t}, {"W", r.W}, {"Q", r.Q}, {"E_sup", r.E_sup}, {"osc", r.osc}, {"shape_dev", r.shape_dev}};
  };
  Json summary = {{"speed", trace.speed},
                  {"mu", trace.mu},
                  {"grid", trace.grid.str()},
                  {"t_end", cfg.t_end},
                  {"steps", trace.steps},
                  {"records", trace.records.size()},
                  {"a_values", trace.a_values},
                  {"filter", {{"enabled", trace.filter_enabled}, {"strength", trace.filter_strength}}},
                  {"beta", trace.beta},
                  {"initial", snapshot(first)},
                  {"final", snapshot(last)},
                  {"asymptotics", to_json(check)},
                  {"trace", csv.string()},
                  {"final_surface", final_path.string()}};
  const auto sp = manifest.output(stem + ".summary.json");
  write_file_atomic(sp, dump_json(summary));
  manifest.write(stem, code);
  log << "flow " << trace.speed << ": " << trace.steps << " steps to t = " << format_double(last.t)
      << ", W " << format_double(first.W) << " -> " << format_double(last.W) << ", asymptotics "
      << (check.passed() ? "pass" : "FAIL") << "\n";
  return code;
}

int run_diag(const SurfaceOptions& opt, std::ostream& log) {
  Manifest manifest("diag", opt.common);
  manifest.input(opt.input);
  const auto doc = load(opt.input, opt.common);
  const std::string stem = stem_of(opt.common, opt.input);
  manifest.config({{"common", common_json(opt.common)}, {"a_values", default_a_values()}});
  manifest.grid(doc.surface.grid()->spec());
  const auto rep = energy_report(doc.surface, default_a_values());
  Json j = {{"grid", grid_str(doc.surface)}, {"meta", doc.meta}};
  const Json body = to_json(rep);
  for (const auto& [k, v] : body.items()) j[k] = v;
  const auto path = manifest.output(stem + ".diag.json");
  write_file_atomic(path, dump_json(j));
  manifest.write(stem, kExitOk);
  log << "W = " << format_double(rep.W) << ", wrote " << path.string() << "\n";
  return kExitOk;
}

int run_invariance(const InvarianceOptions& opt, std::ostream& log) {
  if (opt.trials < 1) throw InputError("--trials must be positive");
  Manifest manifest("invariance", opt.common);
  manifest.input(opt.input);
  const auto doc = load(opt.input, opt.common);
  const auto& s = doc.surface;
  const std::string stem = stem_of(opt.common, opt.input);
  manifest.config({{"common", common_json(opt.common)}, {"seed", opt.seed}, {"trials", opt.trials}});
  manifest.grid(s.grid()->spec());
  bool passed = true;

  Json e = Json::array();
  for (double a : default_a_values()) {
    const double gap = e_tensor_inversion_gap(s, a);
    const bool ok = gap < kEGapTolerance;
    passed = passed && ok;
    e.push_back({{"a", a}, {"gap", gap}, {"threshold", kEGapTolerance}, {"passed", ok}});
  }

  const auto geo = geometry(s);
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> U(-0.5, 0.5);
  Json trials = Json::array();
  double hm_max = 0.0;
  for (int t = 0; t < opt.trials; ++t) {
    ConformalKillingField V;
    V.v = {U(rng), U(rng), U(rng)};
    V.S_lower = {U(rng), U(rng), U(rng)};
    V.mu = U(rng);
    V.b = {U(rng), U(rng), U(rng)};
    Json row = {{"trial", t}, {"field", ckf_to_json(V)}};
    for (int k : {0, 1}) {
      const double rel = hsiung_minkowski_residual(geo, V, k).relative();
      hm_max = std::max(hm_max, rel);
      row["relative_residual_k" + std::to_string(k)] = rel;
    }
    trials.push_back(std::move(row));
  }
  const bool hm_ok = hm_max < kMinkowskiTolerance;
  passed = passed && hm_ok;

  const auto q = qbar(s);
  const double q_gap = qbar_inversion_gap(s, q);
  const bool q_ok = q.holds && q_gap < kQbarTolerance;
  passed = passed && q_ok;

  double e_max = 0.0;
  for (const auto& row : e) e_max = std::max(e_max, row["gap"].get<double>());
  Json j = {{"grid", grid_str(s)},
            {"meta", doc.meta},
            {"seed", opt.seed},
            {"passed", passed},
            {"max_residuals",
             {{"e_tensor_inversion", e_max}, {"hsiung_minkowski", hm_max}, {"qbar_inversion", q_gap}}},
            {"e_tensor_inversion", e},
            {"hsiung_minkowski",
             {{"threshold", kMinkowskiTolerance}, {"max_relative", hm_max}, {"passed", hm_ok}, {"trials", trials}}},
            {"qbar",
             {{"report", to_json(q)},
              {"within_bounds", q.holds},
              {"inversion_gap", q_gap},
              {"threshold", kQbarTolerance},
              {"passed", q_ok}}}};
  const auto path = manifest.output(stem + ".invariance.json");
  write_file_atomic(path, dump_json(j));
  const int code = passed ? kExitOk : kExitAuditFailure;
  manifest.write(stem, code);
  log << "invariance audit " << (passed ? "pass" : "FAIL") << ": max E gap " << format_double(e_max)
      << ", max HM residual " << format_double(hm_max) << "\n";
  return code;
}

int run_soliton(const SolitonOptions& opt, std::ostream& log) {
  Manifest manifest("soliton", opt.common);
  manifest.input(opt.input);
  const auto doc = load(opt.input, opt.common);
  const std::string stem = stem_of(opt.common, opt.input);
  const auto speed = SpeedFunction::parse(opt.speed);
  manifest.config({{"common", common_json(opt.common)}, {"speed", speed.name()}, {"tol", opt.tol}});
  manifest.grid(doc.surface.grid()->spec());
  const auto rep = classify(doc.surface, speed, opt.tol);
  Json j = {{"grid", grid_str(doc.surface)}, {"meta", doc.meta}, {"speed", speed.name()}};
  const Json body = to_json(rep);
  for (const auto& [k, v] : body.items()) j[k] = v;
  const auto path = manifest.output(stem + ".soliton.json");
  write_file_atomic(path, dump_json(j));
  manifest.write(stem, kExitOk);
  log << to_string(rep.verdict) << ": relative residual " << format_double(rep.relative_residual) << "\n";
  return kExitOk;
}

int run_inequality(const SurfaceOptions& opt, std::ostream& log) {
  Manifest manifest("inequality", opt.common);
  manifest.input(opt.input);
  const auto doc = load(opt.input, opt.common);
  const auto& s = doc.surface;
  const std::string stem = stem_of(opt.common, opt.input);
  manifest.config({{"common", common_json(opt.common)}});
  manifest.grid(s.grid()->spec());
  const auto q = qbar(s);
  const bool within = q.holds;
  const double tol = kQbarTolerance * std::abs(q.qbar);
  const bool equality = std::abs(q.qbar - q.lower) <= tol && std::abs(q.upper - q.qbar) <= tol;
  Json j = {{"grid", grid_str(s)},
            {"meta", doc.meta},
            {"report", to_json(q)},
            {"within_bounds", within},
            {"equality", equality},
            {"inversion_gap", qbar_inversion_gap(s, q)},
            {"tolerance", kQbarTolerance}};
  const auto path = manifest.output(stem + ".inequality.json");
  write_file_atomic(path, dump_json(j));
  const int code = within ? kExitOk : kExitAuditFailure;
  manifest.write(stem, code);
  log << "qbar " << format_double(q.qbar) << " in [" << format_double(q.lower) << ", " << format_double(q.upper)
      << "]: " << (within ? "holds" : "VIOLATED") << "\n";
  return code;
}

}  // namespace icf::cli
