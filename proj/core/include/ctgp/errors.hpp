#pragma once

#include <stdexcept>
#include <string>

namespace ctgp {

// Numerical failures. A pivot block that is not positive definite usually
// means the assembled system is not a valid information matrix; no jitter is
// added silently.
struct NotPositiveDefinite : std::runtime_error {
  explicit NotPositiveDefinite(const std::string& what) : std::runtime_error(what) {}
};

struct DimensionMismatch : std::runtime_error {
  explicit DimensionMismatch(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidInterval : std::runtime_error {
  explicit InvalidInterval(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidGrid : std::runtime_error {
  explicit InvalidGrid(const std::string& what) : std::runtime_error(what) {}
};

struct MeasurementOffGrid : std::runtime_error {
  explicit MeasurementOffGrid(const std::string& what) : std::runtime_error(what) {}
};

struct OutOfSpan : std::runtime_error {
  explicit OutOfSpan(const std::string& what) : std::runtime_error(what) {}
};

struct EmptyWindow : std::runtime_error {
  explicit EmptyWindow(const std::string& what) : std::runtime_error(what) {}
};

struct GraphMismatch : std::runtime_error {
  explicit GraphMismatch(const std::string& what) : std::runtime_error(what) {}
};

struct DegenerateData : std::runtime_error {
  explicit DegenerateData(const std::string& what) : std::runtime_error(what) {}
};

struct NonFiniteObjective : std::runtime_error {
  explicit NonFiniteObjective(const std::string& what) : std::runtime_error(what) {}
};

struct SingularCovariance : std::runtime_error {
  explicit SingularCovariance(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigParse : std::runtime_error {
  explicit ConfigParse(const std::string& what) : std::runtime_error(what) {}
};

struct MissingInput : std::runtime_error {
  explicit MissingInput(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ctgp
