#pragma once

#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "sweeporder/mesh.hpp"

namespace sweeporder {

// Dot products within this tolerance of zero are grazing: the edge exchanges
// no information in either direction.
inline constexpr double kGrazingTol = 1e-12;

// Unit direction of particle travel. Normalized on construction; throws
// std::invalid_argument for zero or non-finite input.
class Direction {
  public:
    Direction(double x, double y);

    static Direction from_angle(double radians);

    double x() const { return x_; }
    double y() const { return y_; }
    Vec2 vec() const { return {x_, y_}; }

    // Omega rotated +90 degrees.
    Vec2 perp() const { return {-y_, x_}; }

  private:
    double x_;
    double y_;
};

enum class EdgeDependency { Depends, None };

// Dependency rule for one cell side: the cell whose inward normal this is
// depends on its neighbor iff <inward_normal, omega> > tol. Grazing edges
// (|dot| <= tol) and outflow edges yield None.
EdgeDependency edge_dependency(Vec2 inward_normal, const Direction& omega, double tol = kGrazingTol);

struct DirectedEdge {
    int upwind;
    int downwind;
    int mesh_edge;  // undirected edge id in the EdgeAdjacency, or -1 if synthetic
};

// Directed dependency graph over cells for one direction. Immutable.
class DependencyGraph {
  public:
    // Validates ids and rejects self-loops (std::invalid_argument). mesh_edge
    // ids are not interpreted, so synthetic graphs may pass -1.
    DependencyGraph(int num_cells, std::vector<DirectedEdge> edges, Direction direction,
                    std::vector<int> grazing_edges = {});

    int num_cells() const { return num_cells_; }
    const std::vector<DirectedEdge>& edges() const { return edges_; }
    const std::vector<int>& in_degree() const { return in_degree_; }
    const Direction& direction() const { return direction_; }

    // Undirected mesh edge ids whose normal is grazing with respect to the
    // direction (zero-flux edges).
    const std::vector<int>& grazing_edges() const { return grazing_edges_; }

    // Downwind neighbors of a cell, ascending.
    std::span<const int> successors(int cell) const {
        return {succ_.data() + succ_offsets_[cell], succ_.data() + succ_offsets_[cell + 1]};
    }

  private:
    int num_cells_;
    std::vector<DirectedEdge> edges_;
    Direction direction_;
    std::vector<int> grazing_edges_;
    std::vector<int> in_degree_;
    std::vector<int> succ_offsets_;
    std::vector<int> succ_;
};

// One pass over interior edges; at most one directed edge per mesh edge,
// oriented upwind to downwind. Boundary edges contribute nothing; grazing
// edges are recorded by id. Throws std::invalid_argument for tol < 0 (a
// negative tolerance would direct the same edge both ways).
DependencyGraph build_graph(const Mesh& mesh, const EdgeAdjacency& adjacency, const Direction& omega,
                            double tol = kGrazingTol);

struct SweepOrder {
    std::vector<int> order;  // permutation of cell ids, upwind before downwind
};

struct LevelSchedule {
    std::vector<std::vector<int>> levels;  // wavefronts; ascending ids within a level
};

struct CycleFound {
    std::vector<int> residual;  // cells on or downstream of a cycle, ascending
};

// Kahn's algorithm; ready cells are emitted in ascending id order, which makes
// the result deterministic.
std::variant<SweepOrder, CycleFound> topo_sort(const DependencyGraph& graph);

// Level of a cell = 1 + max level of its predecessors, sources at level 0.
std::variant<LevelSchedule, CycleFound> level_schedule(const DependencyGraph& graph);

// One simple directed cycle if any exists (first cell not repeated at the
// end). Deterministic: DFS from ascending roots over ascending successors,
// reporting the first back edge.
std::optional<std::vector<int>> find_cycle(const DependencyGraph& graph);

enum class CycleOrientation { Counterclockwise, Clockwise };

struct CycleAudit {
    std::vector<int> cycle;
    std::vector<Vec2> normals;   // inward normal of each hop's downwind cell
    std::vector<double> alphas;  // signed turning angles normals[i] -> normals[i+1], cyclic
    double theta;                // counterclockwise angle from omega-perp to normals[0], in [0, 2*pi)
    double winding;              // sum of alphas
    CycleOrientation orientation;
};

// Validates and measures a claimed dependency cycle: every consecutive pair
// must share a mesh edge whose crossing satisfies the dependency rule at
// tolerance tol, and the turning angles must compose exactly (each
// rotate(normals[i], alphas[i]) reproduces normals[i+1] within 1e-12).
// Throws NotACycleError when a hop shares no edge or violates the rule.
// Relaxed (negative) tol admits hops the strict rule rejects, which lets the
// winding machinery run on synthetic cycles.
CycleAudit audit_cycle(const Mesh& mesh, const EdgeAdjacency& adjacency, const std::vector<int>& cycle,
                       const Direction& omega, double tol = kGrazingTol);

}  // namespace sweeporder
