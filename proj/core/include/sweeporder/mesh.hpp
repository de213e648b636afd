#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sweeporder/errors.hpp"
#include "sweeporder/geometry.hpp"

namespace sweeporder {

// A convex polygonal cell, vertices in counterclockwise order after
// normalization by make_mesh.
struct Cell {
    std::vector<int> vertices;

    int size() const { return static_cast<int>(vertices.size()); }
    bool is_triangle() const { return vertices.size() == 3; }
};

// Conforming 2D polygonal mesh. Construct through make_mesh or parse_mesh;
// both validate and orient cells counterclockwise. bbox_scale is the larger
// bounding-box extent of the vertices referenced by cells (1.0 for meshes
// with no spatial extent) and is the length scale for all mesh tolerances.
struct Mesh {
    std::vector<Point2> vertices;
    std::vector<Cell> cells;
    double bbox_scale = 1.0;

    int num_vertices() const { return static_cast<int>(vertices.size()); }
    int num_cells() const { return static_cast<int>(cells.size()); }
};

// Validates connectivity and geometry, orients every cell counterclockwise.
// Throws MeshError on: out-of-range or repeated vertex indices, cells with
// fewer than 3 vertices, non-finite coordinates, degenerate area
// (< 1e-12 * bbox_scale^2), edges shorter than 1e-12 * bbox_scale,
// non-convex cells, an edge shared by more than two cells, coincident
// vertices, and hanging nodes (a vertex strictly inside another cell's edge).
Mesh make_mesh(std::vector<Point2> vertices, std::vector<Cell> cells);

// Text format:
//   vertices <Nv>
//   <x> <y>            (Nv lines)
//   cells <Nc>
//   <k> <i0> ... <ik-1>  (Nc lines)
// Blank lines and lines whose first non-space character is '#' are skipped.
// Parse errors throw MeshError naming the offending line; the result is
// validated exactly as by make_mesh.
Mesh parse_mesh(std::string_view text);

// Inverse of parse_mesh. Floating-point values are written with 17
// significant digits so that parse(serialize(m)) reproduces m bit-exactly.
std::string serialize_mesh(const Mesh& mesh);

Mesh load_mesh_file(const std::filesystem::path& path);
void save_mesh_file(const Mesh& mesh, const std::filesystem::path& path);

// Shoelace area; positive for the counterclockwise cells a valid Mesh holds.
double cell_area(const Mesh& mesh, int cell);

// Arithmetic mean of the cell's vertices.
Point2 cell_centroid(const Mesh& mesh, int cell);

// Unit outward normal of the cell's local edge (from vertex local_edge to
// vertex local_edge+1, cyclically).
Vec2 outward_normal(const Mesh& mesh, int cell, int local_edge);

// An undirected mesh edge. cells[0] is the lower-numbered incident cell and
// v0 -> v1 follows that cell's traversal; locals[i] is the edge's local index
// within cells[i]. Boundary edges have cells[1] == EdgeAdjacency::kBoundary.
struct UndirectedEdge {
    int v0 = -1;
    int v1 = -1;
    int cells[2] = {-1, -1};
    int locals[2] = {-1, -1};

    bool is_boundary() const { return cells[1] < 0; }
};

// Per-(cell, local edge) view of one side of a mesh edge.
struct EdgeRecord {
    int neighbor = -1;  // adjacent cell, or EdgeAdjacency::kBoundary
    int edge_id = -1;   // index into EdgeAdjacency::undirected()
    Vec2 outward_normal;
    double length = 0.0;
    Point2 midpoint;
};

// Edge-based cell adjacency for a valid Mesh.
class EdgeAdjacency {
  public:
    static constexpr int kBoundary = -1;

    EdgeAdjacency(std::vector<int> offsets, std::vector<EdgeRecord> records,
                  std::vector<UndirectedEdge> edges, std::vector<Vec2> edge_normals)
        : offsets_(std::move(offsets)),
          records_(std::move(records)),
          edges_(std::move(edges)),
          edge_normals_(std::move(edge_normals)) {}

    int num_cells() const { return static_cast<int>(offsets_.size()) - 1; }

    // Records for the cell's edges, in local edge order.
    std::span<const EdgeRecord> cell_edges(int cell) const {
        return {records_.data() + offsets_[cell],
                records_.data() + offsets_[cell + 1]};
    }

    const EdgeRecord& record(int cell, int local_edge) const {
        return records_[offsets_[cell] + local_edge];
    }

    const std::vector<UndirectedEdge>& undirected() const { return edges_; }

    // Outward normal of the edge as seen from cells[0]; for interior edges
    // this is the inward normal of cells[1]. Same value as the cells[0]
    // record, kept densely indexed by edge id.
    Vec2 edge_normal(int edge_id) const { return edge_normals_[edge_id]; }

    int num_interior() const;

  private:
    std::vector<int> offsets_;
    std::vector<EdgeRecord> records_;
    std::vector<UndirectedEdge> edges_;
    std::vector<Vec2> edge_normals_;
};

EdgeAdjacency build_adjacency(const Mesh& mesh);

}  // namespace sweeporder
