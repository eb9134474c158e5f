#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gwn {

enum class ErrorKind {
  DegenerateProjection,
  OverlappingArcs,
  NonManifoldEdge,
  OpenChain,
  NonOrientable,
  DegenerateNormal,
  NumericallyUnstableVertex,
  InteriorPointFailure,
  OnBoundary,
  InconsistentIncrements,
  SeedExhausted,
  CycleInconsistency,
  GridMismatch,
  SingularPoint,
  SingularSystem,
  OutsideDomain,
  OnSurface,
  DegenerateQuery,
  InvalidInput,
  Io,
};

std::string_view to_string(ErrorKind kind);

/// Single exception type for the library; callers branch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// True for errors that a small perturbation of the query point resolves.
inline bool is_query_degeneracy(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DegenerateProjection:
    case ErrorKind::OverlappingArcs:
    case ErrorKind::NumericallyUnstableVertex:
    case ErrorKind::OnBoundary:
    case ErrorKind::OnSurface:
    case ErrorKind::InteriorPointFailure:
    case ErrorKind::SeedExhausted:
    case ErrorKind::InconsistentIncrements:
    case ErrorKind::CycleInconsistency:
      return true;
    default:
      return false;
  }
}

}  // namespace gwn
