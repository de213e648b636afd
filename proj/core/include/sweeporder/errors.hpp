#pragma once

#include <stdexcept>
#include <string>

namespace sweeporder {

// Mesh is malformed: parse failure, bad indices, degenerate or non-convex
// cells, non-conforming connectivity, hanging nodes.
class MeshError : public std::runtime_error {
  public:
    explicit MeshError(const std::string& what) : std::runtime_error(what) {}
};

// A claimed dependency cycle does not validate against the mesh and direction.
class NotACycleError : public std::runtime_error {
  public:
    explicit NotACycleError(const std::string& what) : std::runtime_error(what) {}
};

// A claimed sweep ordering is not a valid topological order for the graph.
class InvalidOrderError : public std::runtime_error {
  public:
    explicit InvalidOrderError(const std::string& what) : std::runtime_error(what) {}
};

// A sweep cell balance has no outflow and no absorption, so the flux is
// undetermined. Unreachable on valid meshes at the default tolerance.
class ZeroDenominatorError : public std::runtime_error {
  public:
    explicit ZeroDenominatorError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sweeporder
