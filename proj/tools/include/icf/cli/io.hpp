#pragma once

#include "icf/conformal.hpp"
#include "icf/flow.hpp"
#include "icf/invariants.hpp"
#include "icf/radial_graph.hpp"
#include "icf/soliton.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace icf::cli {

using Json = nlohmann::ordered_json;

/// Decimal with 17 significant digits ("%.17g").
std::string format_double(double x);

/// Pretty JSON with every double written by format_double; non-finite
/// values become null. Arrays of scalars stay on one line.
std::string dump_json(const Json& j);

/// Writes through a temporary sibling and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);
std::string read_file(const std::filesystem::path& path);
Json read_json(const std::filesystem::path& path);

struct SurfaceDocument {
  StarShapedHypersurface surface;
  Json meta;  // {"name", "params"}
};

/// {"grid": {"n_theta", "n_phi"}, "f": [...], "meta": {...}}; f is row-major
/// (colatitude ring, longitude).
Json surface_to_json(const StarShapedHypersurface& surface, const Json& meta);
/// Throws InputError on malformed documents.
SurfaceDocument surface_from_json(const Json& j);
SurfaceDocument read_surface(const std::filesystem::path& path);

Json ckf_to_json(const ConformalKillingField& V);
ConformalKillingField ckf_from_json(const Json& j);

Json to_json(const QbarReport& r);
Json to_json(const EnergyReport& r);
Json to_json(const SolitonReport& r);
Json to_json(const AsymptoticsReport& r);

/// step,t,W,Q1..,E_sup_a=<a>..,osc,ubar_mean,ubar_osc,shape_dev,willmore_rate
std::string trace_csv(const FlowTrace& trace);

Json error_json(const std::string& kind, const std::string& message);

}  // namespace icf::cli
