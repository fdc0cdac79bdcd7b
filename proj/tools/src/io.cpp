#include "icf/cli/io.hpp"

#include "icf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unistd.h>

namespace icf::cli {

namespace {

bool is_scalar(const Json& j) { return !j.is_array() && !j.is_object(); }

void dump(const Json& j, std::string& out, int level) {
  const std::string pad(2 * (level + 1), ' '), close(2 * level, ' ');
  switch (j.type()) {
    case Json::value_t::number_float: {
      const double x = j.get<double>();
      out += std::isfinite(x) ? format_double(x) : "null";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      const bool flat = std::all_of(j.begin(), j.end(), is_scalar);
      out += flat ? "[" : "[\n";
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += flat ? ", " : ",\n";
        first = false;
        if (!flat) out += pad;
        dump(v, out, level + 1);
      }
      out += flat ? "]" : "\n" + close + "]";
      return;
    }
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad + Json(k).dump() + ": ";
        dump(v, out, level + 1);
      }
      out += "\n" + close + "}";
      return;
    }
    default:
      out += j.dump();
  }
}

Json vec3(const Eigen::Vector3d& v) { return Json::array({v.x(), v.y(), v.z()}); }

Eigen::Vector3d read_vec3(const Json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array() || j[key].size() != 3) {
    throw InputError(std::string("CKF field '") + key + "' must be an array of 3 numbers");
  }
  Eigen::Vector3d v;
  for (int i = 0; i < 3; ++i) {
    if (!j[key][i].is_number()) throw InputError(std::string("CKF field '") + key + "' must be numeric");
    v[i] = j[key][i].get<double>();
  }
  return v;
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string dump_json(const Json& j) {
  std::string out;
  dump(j, out, 0);
  out += "\n";
  return out;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw InputError("cannot open '" + tmp.string() + "' for writing");
    os << contents;
    os.flush();
    if (!os) throw InputError("failed writing '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InputError("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

Json read_json(const std::filesystem::path& path) {
  try {
    return Json::parse(read_file(path));
  } catch (const Json::parse_error& e) {
    throw InputError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

Json surface_to_json(const StarShapedHypersurface& surface, const Json& meta) {
  const auto& spec = surface.grid()->spec();
  Json j;
  j["grid"] = {{"n_theta", spec.n_theta}, {"n_phi", spec.n_phi}};
  Json f = Json::array();
  for (double v : surface.f().values()) f.push_back(v);
  j["f"] = std::move(f);
  j["meta"] = meta.is_null() ? Json::object() : meta;
  return j;
}

SurfaceDocument surface_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("grid") || !j.contains("f")) {
    throw InputError("surface document needs 'grid' and 'f'");
  }
  const auto& g = j["grid"];
  if (!g.is_object() || !g.contains("n_theta") || !g.contains("n_phi") || !g["n_theta"].is_number_integer() ||
      !g["n_phi"].is_number_integer()) {
    throw InputError("surface 'grid' needs integer 'n_theta' and 'n_phi'");
  }
  GridSpec spec{g["n_theta"].get<int>(), g["n_phi"].get<int>()};
  spec.validate();
  const auto& f = j["f"];
  const std::size_t n = static_cast<std::size_t>(spec.n_theta) * spec.n_phi;
  if (!f.is_array() || f.size() != n) {
    throw InputError("surface 'f' must hold n_theta * n_phi = " + std::to_string(n) + " numbers");
  }
  std::vector<double> values(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (!f[k].is_number()) throw InputError("surface 'f' entry " + std::to_string(k) + " is not a number");
    values[k] = f[k].get<double>();
  }
  Json meta = j.contains("meta") ? j["meta"] : Json::object();
  return {StarShapedHypersurface(ScalarField(SphereGrid::make(spec), std::move(values))), std::move(meta)};
}

SurfaceDocument read_surface(const std::filesystem::path& path) { return surface_from_json(read_json(path)); }

Json ckf_to_json(const ConformalKillingField& V) {
  return {{"v", vec3(V.v)},
          {"S_lower", Json::array({V.S_lower[0], V.S_lower[1], V.S_lower[2]})},
          {"mu", V.mu},
          {"b", vec3(V.b)}};
}

ConformalKillingField ckf_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("CKF must be an object");
  ConformalKillingField V;
  V.v = read_vec3(j, "v");
  const auto S = read_vec3(j, "S_lower");
  V.S_lower = {S[0], S[1], S[2]};
  if (!j.contains("mu") || !j["mu"].is_number()) throw InputError("CKF field 'mu' must be a number");
  V.mu = j["mu"].get<double>();
  V.b = read_vec3(j, "b");
  return V;
}

Json to_json(const QbarReport& r) {
  return {{"q1", r.q1},   {"q1_inverted", r.q1_inverted}, {"qbar", r.qbar},     {"lower", r.lower},
          {"upper", r.upper}, {"R", r.R}, {"r", r.r}, {"holds", r.holds}, {"margin", r.margin()}};
}

Json to_json(const EnergyReport& r) {
  Json j;
  j["W"] = r.W;
  Json q = Json::object();
  for (const auto& [k, v] : r.Q) q[std::to_string(k)] = v;
  j["Q"] = std::move(q);
  j["qbar"] = to_json(r.qbar);
  Json e = Json::array();
  for (const auto& [a, v] : r.E_sup) e.push_back({{"a", a}, {"sup", v}});
  j["E_sup"] = std::move(e);
  j["area"] = r.area;
  j["sigma_integrals"] = r.sigma_integrals;
  return j;
}

Json to_json(const SolitonReport& r) {
  Json j;
  j["verdict"] = to_string(r.verdict);
  j["tolerance"] = r.tolerance;
  j["residual_sup"] = r.residual_sup;
  j["residual_l2"] = r.residual_l2;
  j["mean_speed"] = r.mean_speed;
  j["relative_residual"] = r.relative_residual;
  j["fitted"] = r.fitted ? ckf_to_json(*r.fitted) : Json();
  j["rank"] = r.rank;
  j["gram_condition"] = r.gram_condition;
  j["ill_conditioned"] = r.ill_conditioned;
  j["warnings"] = r.warnings;
  j["suggestion"] = r.suggestion;
  return j;
}

Json to_json(const AsymptoticsReport& r) {
  return {{"passed", r.passed()},
          {"W_monotone", r.W_monotone},
          {"Q_monotone", r.Q_monotone},
          {"E_decreased", r.E_decreased},
          {"beta_positive", r.beta_positive},
          {"osc_monotone_after_transient", r.osc_monotone_after_transient},
          {"osc_transient_end", r.osc_transient_end},
          {"beta", r.beta},
          {"E_rates", r.E_rates},
          {"E_final", r.E_final},
          {"violations", r.violations}};
}

std::string trace_csv(const FlowTrace& trace) {
  std::string out = "step,t,W";
  const std::size_t nq = trace.records.empty() ? 0 : trace.records.front().Q.size();
  for (std::size_t k = 0; k < nq; ++k) out += ",Q" + std::to_string(k + 1);
  for (double a : trace.a_values) out += ",E_sup_a=" + format_double(a);
  out += ",osc,ubar_mean,ubar_osc,shape_dev,willmore_rate\n";
  for (const auto& r : trace.records) {
    out += std::to_string(r.step) + "," + format_double(r.t) + "," + format_double(r.W);
    for (double q : r.Q) out += "," + format_double(q);
    for (double e : r.E_sup) out += "," + format_double(e);
    for (double v : {r.osc, r.ubar_mean, r.ubar_osc, r.shape_dev, r.willmore_rate}) out += "," + format_double(v);
    out += "\n";
  }
  return out;
}

Json error_json(const std::string& kind, const std::string& message) {
  return {{"error", {{"kind", kind}, {"message", message}}}};
}

}  // namespace icf::cli
