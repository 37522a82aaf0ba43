#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace conley {

enum class ErrorKind {
  Catalog,
  Domain,
  Numerical,
  Precondition,
  Capacity,
  NotIsolating,
  Construction,
  RegionOverlap,
  Filtration,
  Selection,
  Ingestion,
  Config,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Catalog: return "catalog";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Numerical: return "numerical";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::Capacity: return "capacity";
    case ErrorKind::NotIsolating: return "not-isolating";
    case ErrorKind::Construction: return "construction";
    case ErrorKind::RegionOverlap: return "region-overlap";
    case ErrorKind::Filtration: return "filtration";
    case ErrorKind::Selection: return "selection";
    case ErrorKind::Ingestion: return "ingestion";
    case ErrorKind::Config: return "config";
  }
  return "unknown";
}

/// Every failure raised by the library carries a kind so drivers can map it
/// to an exit status without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + " error: " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline void require(bool condition, ErrorKind kind, const std::string& message) {
  if (!condition) throw Error(kind, message);
}

}  // namespace conley
