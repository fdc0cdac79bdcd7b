#pragma once

#include <stdexcept>
#include <string>

namespace icf {

/// Base class of every error raised by the library. `kind()` is a stable
/// machine-readable tag used by the CLI when it reports structured errors.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& m) : Error("invalid_argument", m) {}
};

class GridMismatch : public Error {
 public:
  explicit GridMismatch(const std::string& m) : Error("grid_mismatch", m) {}
};

/// Radius field at or below the positivity floor.
class DegenerateSurface : public Error {
 public:
  explicit DegenerateSurface(const std::string& m) : Error("degenerate_surface", m) {}
};

/// Non-finite derivatives or an ill-conditioned first fundamental form.
class ResolutionError : public Error {
 public:
  explicit ResolutionError(const std::string& m) : Error("resolution", m) {}
};

class MeanConvexityError : public Error {
 public:
  explicit MeanConvexityError(const std::string& m) : Error("mean_convexity", m) {}
};

class ConvexityClassError : public Error {
 public:
  explicit ConvexityClassError(const std::string& m) : Error("convexity_class", m) {}
};

/// Principal curvatures left the admissible cone of a speed function.
class CurvatureConeError : public Error {
 public:
  explicit CurvatureConeError(const std::string& m) : Error("curvature_cone", m) {}
};

class FlowBlowUp : public Error {
 public:
  explicit FlowBlowUp(const std::string& m) : Error("flow_blow_up", m) {}
};

class NotStarShaped : public Error {
 public:
  explicit NotStarShaped(const std::string& m) : Error("not_star_shaped", m) {}
};

class InputError : public Error {
 public:
  explicit InputError(const std::string& m) : Error("input", m) {}
};

}  // namespace icf
