#include "sweeporder/depgraph.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <stdexcept>
#include <string>

namespace sweeporder {

Direction::Direction(double x, double y) {
    double len = std::hypot(x, y);
    if (!std::isfinite(len) || len == 0.0) {
        throw std::invalid_argument("Direction: components must be finite and not both zero");
    }
    x_ = x / len;
    y_ = y / len;
}

Direction Direction::from_angle(double radians) {
    if (!std::isfinite(radians)) {
        throw std::invalid_argument("Direction: angle must be finite");
    }
    return Direction(std::cos(radians), std::sin(radians));
}

EdgeDependency edge_dependency(Vec2 inward_normal, const Direction& omega, double tol) {
    return dot(inward_normal, omega.vec()) > tol ? EdgeDependency::Depends : EdgeDependency::None;
}

DependencyGraph::DependencyGraph(int num_cells, std::vector<DirectedEdge> edges, Direction direction,
                                 std::vector<int> grazing_edges)
    : num_cells_(num_cells),
      edges_(std::move(edges)),
      direction_(direction),
      grazing_edges_(std::move(grazing_edges)) {
    if (num_cells_ < 0) throw std::invalid_argument("DependencyGraph: negative cell count");
    in_degree_.assign(num_cells_, 0);
    succ_offsets_.assign(num_cells_ + 1, 0);
    for (const auto& e : edges_) {
        if (e.upwind < 0 || e.upwind >= num_cells_ || e.downwind < 0 || e.downwind >= num_cells_) {
            throw std::invalid_argument("DependencyGraph: edge cell id out of range");
        }
        if (e.upwind == e.downwind) {
            throw std::invalid_argument("DependencyGraph: self-loop on cell " + std::to_string(e.upwind));
        }
        ++in_degree_[e.downwind];
        ++succ_offsets_[e.upwind + 1];
    }
    for (int c = 0; c < num_cells_; ++c) succ_offsets_[c + 1] += succ_offsets_[c];
    succ_.resize(edges_.size());
    // Counting-sort fill: offsets advance to their row ends, then shift back.
    for (const auto& e : edges_) succ_[succ_offsets_[e.upwind]++] = e.downwind;
    for (int c = num_cells_; c > 0; --c) succ_offsets_[c] = succ_offsets_[c - 1];
    succ_offsets_[0] = 0;
    // Successor rows are a handful of neighbors each; insertion sort in place.
    for (int c = 0; c < num_cells_; ++c) {
        int* first = succ_.data() + succ_offsets_[c];
        int* last = succ_.data() + succ_offsets_[c + 1];
        for (int* p = first + 1; p < last; ++p) {
            int v = *p;
            int* q = p;
            for (; q > first && q[-1] > v; --q) *q = q[-1];
            *q = v;
        }
    }
}

DependencyGraph build_graph(const Mesh& mesh, const EdgeAdjacency& adjacency, const Direction& omega,
                            double tol) {
    if (tol < 0.0) {
        throw std::invalid_argument("build_graph: tolerance must be non-negative");
    }
    std::vector<DirectedEdge> edges;
    std::vector<int> grazing;
    edges.reserve(adjacency.num_interior());
    const auto& undirected = adjacency.undirected();
    for (int eid = 0; eid < static_cast<int>(undirected.size()); ++eid) {
        const auto& e = undirected[eid];
        if (e.is_boundary()) continue;
        // Outward normal of cells[0] is the inward normal of cells[1].
        double d = dot(adjacency.edge_normal(eid), omega.vec());
        if (d > tol) {
            edges.push_back({e.cells[0], e.cells[1], eid});
        } else if (d < -tol) {
            edges.push_back({e.cells[1], e.cells[0], eid});
        } else {
            grazing.push_back(eid);
        }
    }
    return DependencyGraph(mesh.num_cells(), std::move(edges), omega, std::move(grazing));
}

namespace {

// Shared tail of topo_sort and level_schedule: cells whose in-degree never
// reached zero sit on or downstream of a cycle.
CycleFound residual_of(const std::vector<int>& indeg) {
    CycleFound found;
    for (int c = 0; c < static_cast<int>(indeg.size()); ++c) {
        if (indeg[c] > 0) found.residual.push_back(c);
    }
    return found;
}

}  // namespace

std::variant<SweepOrder, CycleFound> topo_sort(const DependencyGraph& graph) {
    const int n = graph.num_cells();
    std::vector<int> indeg = graph.in_degree();
    std::priority_queue<int, std::vector<int>, std::greater<int>> ready;
    for (int c = 0; c < n; ++c) {
        if (indeg[c] == 0) ready.push(c);
    }

    SweepOrder result;
    result.order.reserve(n);
    while (!ready.empty()) {
        int c = ready.top();
        ready.pop();
        result.order.push_back(c);
        for (int s : graph.successors(c)) {
            if (--indeg[s] == 0) ready.push(s);
        }
    }

    if (static_cast<int>(result.order.size()) != n) return residual_of(indeg);
    return result;
}

std::variant<LevelSchedule, CycleFound> level_schedule(const DependencyGraph& graph) {
    const int n = graph.num_cells();
    std::vector<int> indeg = graph.in_degree();
    std::vector<int> level(n, 0);
    std::queue<int> ready;
    for (int c = 0; c < n; ++c) {
        if (indeg[c] == 0) ready.push(c);
    }

    int emitted_count = 0;
    int max_level = -1;
    while (!ready.empty()) {
        int c = ready.front();
        ready.pop();
        ++emitted_count;
        max_level = std::max(max_level, level[c]);
        for (int s : graph.successors(c)) {
            level[s] = std::max(level[s], level[c] + 1);
            if (--indeg[s] == 0) ready.push(s);
        }
    }

    if (emitted_count != n) return residual_of(indeg);

    LevelSchedule schedule;
    schedule.levels.resize(max_level + 1);
    for (int c = 0; c < n; ++c) schedule.levels[level[c]].push_back(c);
    return schedule;  // ids ascend within each level because cells are scanned in order
}

std::optional<std::vector<int>> find_cycle(const DependencyGraph& graph) {
    const int n = graph.num_cells();
    enum : char { White, Gray, Black };
    std::vector<char> color(n, White);
    std::vector<int> path;

    struct Frame {
        int cell;
        size_t next;  // index into successors(cell)
    };
    std::vector<Frame> stack;

    for (int root = 0; root < n; ++root) {
        if (color[root] != White) continue;
        stack.push_back({root, 0});
        color[root] = Gray;
        path.push_back(root);
        while (!stack.empty()) {
            Frame& frame = stack.back();
            auto succ = graph.successors(frame.cell);
            if (frame.next < succ.size()) {
                int s = succ[frame.next++];
                if (color[s] == Gray) {
                    // Back edge: the cycle is the path segment from s onward.
                    auto it = std::find(path.begin(), path.end(), s);
                    return std::vector<int>(it, path.end());
                }
                if (color[s] == White) {
                    color[s] = Gray;
                    path.push_back(s);
                    stack.push_back({s, 0});
                }
            } else {
                color[frame.cell] = Black;
                path.pop_back();
                stack.pop_back();
            }
        }
    }
    return std::nullopt;
}

CycleAudit audit_cycle(const Mesh& mesh, const EdgeAdjacency& adjacency, const std::vector<int>& cycle,
                       const Direction& omega, double tol) {
    const int m = static_cast<int>(cycle.size());
    if (m < 2) throw NotACycleError("cycle must contain at least 2 cells");
    for (int i = 0; i < m; ++i) {
        if (cycle[i] < 0 || cycle[i] >= mesh.num_cells()) {
            throw NotACycleError("cell id " + std::to_string(cycle[i]) + " out of range");
        }
        for (int j = i + 1; j < m; ++j) {
            if (cycle[i] == cycle[j]) {
                throw NotACycleError("cell " + std::to_string(cycle[i]) + " repeats; cycle must be simple");
            }
        }
    }

    CycleAudit audit;
    audit.cycle = cycle;
    audit.normals.reserve(m);
    for (int i = 0; i < m; ++i) {
        int upwind = cycle[i];
        int downwind = cycle[(i + 1) % m];
        // The downwind cell's inward normal is the upwind cell's outward one.
        const EdgeRecord* hop = nullptr;
        for (const auto& rec : adjacency.cell_edges(upwind)) {
            if (rec.neighbor != downwind) continue;
            if (dot(rec.outward_normal, omega.vec()) > tol) {
                hop = &rec;
                break;
            }
            if (!hop) hop = &rec;  // shared but rule-violating; remembered for the error below
        }
        if (!hop) {
            throw NotACycleError("cells " + std::to_string(upwind) + " and " + std::to_string(downwind) +
                                 " share no edge");
        }
        if (!(dot(hop->outward_normal, omega.vec()) > tol)) {
            throw NotACycleError("hop " + std::to_string(upwind) + " -> " + std::to_string(downwind) +
                                 " violates the dependency rule");
        }
        audit.normals.push_back(hop->outward_normal);
    }

    audit.alphas.resize(m);
    audit.winding = 0.0;
    for (int i = 0; i < m; ++i) {
        Vec2 a = audit.normals[i];
        Vec2 b = audit.normals[(i + 1) % m];
        audit.alphas[i] = signed_angle(a, b);
        audit.winding += audit.alphas[i];
        Vec2 r = rotate(a, audit.alphas[i]);
        if (std::abs(r.x - b.x) > 1e-12 || std::abs(r.y - b.y) > 1e-12) {
            throw std::logic_error("audit_cycle: rotation identity violated on hop " + std::to_string(i));
        }
    }

    double theta = std::atan2(cross(omega.perp(), audit.normals[0]), dot(omega.perp(), audit.normals[0]));
    if (theta < 0.0) theta += 2.0 * std::numbers::pi;
    audit.theta = theta;
    audit.orientation =
        audit.winding >= 0.0 ? CycleOrientation::Counterclockwise : CycleOrientation::Clockwise;
    return audit;
}

}  // namespace sweeporder
