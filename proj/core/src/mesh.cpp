#include "sweeporder/mesh.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_map>
#include <utility>

namespace sweeporder {

namespace {

// Relative tolerances, scaled by bbox_scale (squared for areas).
constexpr double kAreaRelTol = 1e-12;
constexpr double kLengthRelTol = 1e-12;
constexpr double kConvexRelTol = 1e-12;
constexpr double kHangingRelTol = 1e-9;

double polygon_signed_area(const std::vector<Point2>& verts, const std::vector<int>& ids) {
    double twice = 0.0;
    size_t n = ids.size();
    for (size_t i = 0; i < n; ++i) {
        twice += cross(verts[ids[i]], verts[ids[(i + 1) % n]]);
    }
    return 0.5 * twice;
}

uint64_t edge_key(int u, int v) {
    auto [a, b] = std::minmax(u, v);
    return (static_cast<uint64_t>(static_cast<uint32_t>(a)) << 32) |
           static_cast<uint64_t>(static_cast<uint32_t>(b));
}

// Uniform bucket grid over a fixed point set, for small-box neighborhood
// queries during duplicate and hanging-node detection.
class PointGrid {
  public:
    PointGrid(const std::vector<Point2>& verts, std::vector<int> ids, Point2 lo, Point2 hi)
        : verts_(verts), ids_(std::move(ids)), lo_(lo) {
        int n = static_cast<int>(ids_.size());
        side_ = std::clamp(static_cast<int>(std::ceil(std::sqrt(static_cast<double>(std::max(n, 1))))), 1, 4096);
        double ext = std::max({hi.x - lo.x, hi.y - lo.y, 0.0});
        h_ = ext > 0.0 ? ext / side_ : 1.0;
        offsets_.assign(static_cast<size_t>(side_) * side_ + 1, 0);
        for (int id : ids_) ++offsets_[bucket(verts_[id]) + 1];
        for (size_t i = 1; i < offsets_.size(); ++i) offsets_[i] += offsets_[i - 1];
        slots_.resize(ids_.size());
        std::vector<int> cursor(offsets_.begin(), offsets_.end() - 1);
        for (int id : ids_) slots_[cursor[bucket(verts_[id])]++] = id;
    }

    template <typename F>
    void for_each_in_box(Point2 blo, Point2 bhi, F&& f) const {
        auto [ix0, iy0] = cell_of(blo);
        auto [ix1, iy1] = cell_of(bhi);
        for (int iy = iy0; iy <= iy1; ++iy) {
            for (int ix = ix0; ix <= ix1; ++ix) {
                size_t b = static_cast<size_t>(iy) * side_ + ix;
                for (int s = offsets_[b]; s < offsets_[b + 1]; ++s) f(slots_[s]);
            }
        }
    }

  private:
    std::pair<int, int> cell_of(Point2 p) const {
        auto axis = [this](double d) {
            int i = static_cast<int>(std::floor(d / h_));
            return std::clamp(i, 0, side_ - 1);
        };
        return {axis(p.x - lo_.x), axis(p.y - lo_.y)};
    }

    size_t bucket(Point2 p) const {
        auto [ix, iy] = cell_of(p);
        return static_cast<size_t>(iy) * side_ + ix;
    }

    const std::vector<Point2>& verts_;
    std::vector<int> ids_;
    Point2 lo_;
    int side_ = 1;
    double h_ = 1.0;
    std::vector<int> offsets_;
    std::vector<int> slots_;
};

struct SegmentProjection {
    double dist;
    double t;  // clamped parameter along the segment, in [0, 1]
};

SegmentProjection project_to_segment(Point2 p, Point2 a, Point2 b) {
    Vec2 e = b - a;
    double len2 = dot(e, e);
    double t = len2 > 0.0 ? std::clamp(dot(p - a, e) / len2, 0.0, 1.0) : 0.0;
    return {norm(p - (a + t * e)), t};
}

[[noreturn]] void cell_fail(int cell, const std::string& msg) {
    throw MeshError("cell " + std::to_string(cell) + ": " + msg);
}

}  // namespace

Mesh make_mesh(std::vector<Point2> vertices, std::vector<Cell> cells) {
    const int nv = static_cast<int>(vertices.size());
    for (int i = 0; i < nv; ++i) {
        if (!std::isfinite(vertices[i].x) || !std::isfinite(vertices[i].y)) {
            throw MeshError("vertex " + std::to_string(i) + ": non-finite coordinates");
        }
    }

    std::vector<char> used(nv, 0);
    for (size_t c = 0; c < cells.size(); ++c) {
        const auto& vs = cells[c].vertices;
        if (vs.size() < 3) cell_fail(static_cast<int>(c), "fewer than 3 vertices");
        for (int id : vs) {
            if (id < 0 || id >= nv) {
                cell_fail(static_cast<int>(c), "vertex index " + std::to_string(id) + " out of range");
            }
            used[id] = 1;
        }
        for (size_t i = 0; i < vs.size(); ++i) {
            for (size_t j = i + 1; j < vs.size(); ++j) {
                if (vs[i] == vs[j]) {
                    cell_fail(static_cast<int>(c), "repeated vertex index " + std::to_string(vs[i]));
                }
            }
        }
    }

    std::vector<int> used_ids;
    used_ids.reserve(nv);
    Point2 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    Point2 hi{-lo.x, -lo.y};
    for (int i = 0; i < nv; ++i) {
        if (!used[i]) continue;
        used_ids.push_back(i);
        lo.x = std::min(lo.x, vertices[i].x);
        lo.y = std::min(lo.y, vertices[i].y);
        hi.x = std::max(hi.x, vertices[i].x);
        hi.y = std::max(hi.y, vertices[i].y);
    }
    double bbox_scale = used_ids.empty() ? 0.0 : std::max(hi.x - lo.x, hi.y - lo.y);
    if (bbox_scale <= 0.0) bbox_scale = 1.0;

    const double min_area = kAreaRelTol * bbox_scale * bbox_scale;
    const double min_len = kLengthRelTol * bbox_scale;
    for (size_t c = 0; c < cells.size(); ++c) {
        auto& vs = cells[c].vertices;
        double area = polygon_signed_area(vertices, vs);
        if (std::abs(area) < min_area) cell_fail(static_cast<int>(c), "degenerate: area below tolerance");
        if (area < 0.0) std::reverse(vs.begin(), vs.end());

        size_t n = vs.size();
        for (size_t i = 0; i < n; ++i) {
            Point2 a = vertices[vs[i]];
            Point2 b = vertices[vs[(i + 1) % n]];
            Point2 d = vertices[vs[(i + 2) % n]];
            Vec2 e1 = b - a;
            Vec2 e2 = d - b;
            double l1 = norm(e1);
            if (l1 < min_len) cell_fail(static_cast<int>(c), "edge shorter than tolerance");
            if (cross(e1, e2) < -kConvexRelTol * l1 * norm(e2)) {
                cell_fail(static_cast<int>(c), "not convex at vertex " + std::to_string(vs[(i + 1) % n]));
            }
        }
    }

    // Conformity: each undirected edge borders at most two cells, and the two
    // traversals run in opposite directions (equal directions mean the mesh
    // folds back over itself).
    std::unordered_map<uint64_t, std::pair<int, int>> edge_info;  // key -> (count, first u)
    std::vector<uint64_t> edge_order;
    size_t total_edges = 0;
    for (const auto& cell : cells) total_edges += cell.vertices.size();
    edge_info.reserve(total_edges);
    edge_order.reserve(total_edges);
    for (size_t c = 0; c < cells.size(); ++c) {
        const auto& vs = cells[c].vertices;
        size_t n = vs.size();
        for (size_t i = 0; i < n; ++i) {
            int u = vs[i];
            int v = vs[(i + 1) % n];
            auto [it, inserted] = edge_info.try_emplace(edge_key(u, v), std::pair<int, int>{0, u});
            if (inserted) edge_order.push_back(it->first);
            auto& [count, first_u] = it->second;
            if (++count > 2) {
                cell_fail(static_cast<int>(c), "edge (" + std::to_string(u) + "," + std::to_string(v) +
                                                   ") shared by more than two cells");
            }
            if (count == 2 && u == first_u) {
                cell_fail(static_cast<int>(c), "edge (" + std::to_string(u) + "," + std::to_string(v) +
                                                   ") traversed twice in the same direction");
            }
        }
    }

    if (!used_ids.empty()) {
        PointGrid grid(vertices, used_ids, lo, hi);

        const double dup_tol = kLengthRelTol * bbox_scale;
        for (int id : used_ids) {
            Point2 p = vertices[id];
            grid.for_each_in_box({p.x - dup_tol, p.y - dup_tol}, {p.x + dup_tol, p.y + dup_tol}, [&](int other) {
                if (other >= id) return;
                if (norm(vertices[other] - p) <= dup_tol) {
                    throw MeshError("vertices " + std::to_string(other) + " and " + std::to_string(id) +
                                    " coincide");
                }
            });
        }

        const double hang_tol = kHangingRelTol * bbox_scale;
        for (uint64_t key : edge_order) {
            int u = static_cast<int>(key >> 32);
            int v = static_cast<int>(key & 0xffffffffu);
            Point2 a = vertices[u];
            Point2 b = vertices[v];
            Point2 blo{std::min(a.x, b.x) - hang_tol, std::min(a.y, b.y) - hang_tol};
            Point2 bhi{std::max(a.x, b.x) + hang_tol, std::max(a.y, b.y) + hang_tol};
            double len = norm(b - a);
            grid.for_each_in_box(blo, bhi, [&](int w) {
                if (w == u || w == v) return;
                auto [dist, t] = project_to_segment(vertices[w], a, b);
                if (dist <= hang_tol && t * len > 10.0 * hang_tol && (1.0 - t) * len > 10.0 * hang_tol) {
                    throw MeshError("hanging node: vertex " + std::to_string(w) + " lies inside edge (" +
                                    std::to_string(u) + "," + std::to_string(v) + ")");
                }
            });
        }
    }

    Mesh mesh;
    mesh.vertices = std::move(vertices);
    mesh.cells = std::move(cells);
    mesh.bbox_scale = bbox_scale;
    return mesh;
}

namespace {

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
        size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

[[noreturn]] void parse_fail(int line, const std::string& msg) {
    throw MeshError("line " + std::to_string(line) + ": " + msg);
}

double to_double(std::string_view tok, int line) {
    double v;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size()) {
        parse_fail(line, "bad number '" + std::string(tok) + "'");
    }
    return v;
}

long long to_count(std::string_view tok, int line) {
    long long v;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size() || v < 0) {
        parse_fail(line, "bad count '" + std::string(tok) + "'");
    }
    return v;
}

int to_index(std::string_view tok, int line) {
    long long v;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size() ||
        v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
        parse_fail(line, "bad vertex index '" + std::string(tok) + "'");
    }
    return static_cast<int>(v);
}

struct TokenLine {
    int number;
    std::vector<std::string_view> tokens;
};

}  // namespace

Mesh parse_mesh(std::string_view text) {
    std::vector<TokenLine> lines;
    int number = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t nl = text.find('\n', pos);
        std::string_view raw = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++number;
        raw = raw.substr(0, raw.find('#'));  // '#' comments out the rest of the line
        auto tokens = split_ws(raw);
        if (!tokens.empty()) lines.push_back({number, std::move(tokens)});
    }

    size_t cursor = 0;
    auto next_line = [&](const char* what) -> const TokenLine& {
        if (cursor >= lines.size()) {
            parse_fail(number, std::string("unexpected end of input, expected ") + what);
        }
        return lines[cursor++];
    };

    const TokenLine& vh = next_line("'vertices <count>'");
    if (vh.tokens.size() != 2 || vh.tokens[0] != "vertices") {
        parse_fail(vh.number, "expected 'vertices <count>'");
    }
    long long nv = to_count(vh.tokens[1], vh.number);

    std::vector<Point2> vertices;
    vertices.reserve(static_cast<size_t>(std::min<long long>(nv, 1 << 24)));
    for (long long i = 0; i < nv; ++i) {
        const TokenLine& ln = next_line("a vertex line '<x> <y>'");
        if (ln.tokens.size() != 2) parse_fail(ln.number, "expected 2 coordinates");
        vertices.push_back({to_double(ln.tokens[0], ln.number), to_double(ln.tokens[1], ln.number)});
    }

    const TokenLine& ch = next_line("'cells <count>'");
    if (ch.tokens.size() != 2 || ch.tokens[0] != "cells") {
        parse_fail(ch.number, "expected 'cells <count>'");
    }
    long long nc = to_count(ch.tokens[1], ch.number);

    std::vector<Cell> cells;
    cells.reserve(static_cast<size_t>(std::min<long long>(nc, 1 << 24)));
    for (long long i = 0; i < nc; ++i) {
        const TokenLine& ln = next_line("a cell line '<k> <i0> ... <ik-1>'");
        long long k = to_count(ln.tokens[0], ln.number);
        if (static_cast<long long>(ln.tokens.size()) != k + 1) {
            parse_fail(ln.number, "cell declares " + std::to_string(k) + " vertices but lists " +
                                      std::to_string(ln.tokens.size() - 1));
        }
        Cell cell;
        cell.vertices.reserve(static_cast<size_t>(k));
        for (long long j = 1; j <= k; ++j) {
            cell.vertices.push_back(to_index(ln.tokens[static_cast<size_t>(j)], ln.number));
        }
        cells.push_back(std::move(cell));
    }

    if (cursor != lines.size()) {
        parse_fail(lines[cursor].number, "trailing content after cell list");
    }

    return make_mesh(std::move(vertices), std::move(cells));
}

std::string serialize_mesh(const Mesh& mesh) {
    std::string out;
    out.reserve(32 * mesh.vertices.size() + 16 * mesh.cells.size() + 64);
    char buf[80];
    out += "vertices " + std::to_string(mesh.num_vertices()) + "\n";
    for (const auto& p : mesh.vertices) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g\n", p.x, p.y);
        out += buf;
    }
    out += "cells " + std::to_string(mesh.num_cells()) + "\n";
    for (const auto& cell : mesh.cells) {
        out += std::to_string(cell.size());
        for (int id : cell.vertices) {
            out += ' ';
            out += std::to_string(id);
        }
        out += '\n';
    }
    return out;
}

Mesh load_mesh_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MeshError("cannot open mesh file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_mesh(ss.str());
}

void save_mesh_file(const Mesh& mesh, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw MeshError("cannot open file for writing: " + path.string());
    out << serialize_mesh(mesh);
    if (!out) throw MeshError("failed writing mesh file: " + path.string());
}

double cell_area(const Mesh& mesh, int cell) {
    return polygon_signed_area(mesh.vertices, mesh.cells[cell].vertices);
}

Point2 cell_centroid(const Mesh& mesh, int cell) {
    const auto& vs = mesh.cells[cell].vertices;
    Point2 sum{0.0, 0.0};
    for (int id : vs) sum = sum + mesh.vertices[id];
    return sum / static_cast<double>(vs.size());
}

Vec2 outward_normal(const Mesh& mesh, int cell, int local_edge) {
    const auto& vs = mesh.cells[cell].vertices;
    size_t n = vs.size();
    Point2 a = mesh.vertices[vs[local_edge]];
    Point2 b = mesh.vertices[vs[(local_edge + 1) % n]];
    Vec2 e = b - a;
    double len = norm(e);
    return {e.y / len, -e.x / len};
}

int EdgeAdjacency::num_interior() const {
    int n = 0;
    for (const auto& e : edges_) {
        if (!e.is_boundary()) ++n;
    }
    return n;
}

EdgeAdjacency build_adjacency(const Mesh& mesh) {
    const int nc = mesh.num_cells();
    std::vector<int> offsets(nc + 1, 0);
    for (int c = 0; c < nc; ++c) offsets[c + 1] = offsets[c] + mesh.cells[c].size();
    std::vector<EdgeRecord> records(offsets[nc]);
    std::vector<UndirectedEdge> edges;
    std::vector<Vec2> normals;
    edges.reserve(offsets[nc]);
    normals.reserve(offsets[nc]);

    std::unordered_map<uint64_t, int> edge_of;
    edge_of.reserve(records.size());
    for (int c = 0; c < nc; ++c) {
        const auto& vs = mesh.cells[c].vertices;
        int n = static_cast<int>(vs.size());
        for (int l = 0; l < n; ++l) {
            int u = vs[l];
            int v = vs[(l + 1) % n];
            auto [it, inserted] = edge_of.try_emplace(edge_key(u, v), static_cast<int>(edges.size()));
            int eid = it->second;
            Point2 pu = mesh.vertices[u];
            Point2 pv = mesh.vertices[v];
            Vec2 d = pv - pu;
            double len = norm(d);
            Vec2 nrm = {d.y / len, -d.x / len};
            if (inserted) {
                UndirectedEdge e;
                e.v0 = u;
                e.v1 = v;
                e.cells[0] = c;
                e.locals[0] = l;
                edges.push_back(e);
                normals.push_back(nrm);
            } else {
                edges[eid].cells[1] = c;
                edges[eid].locals[1] = l;
            }
            records[offsets[c] + l] = {EdgeAdjacency::kBoundary, eid, nrm, len, 0.5 * (pu + pv)};
        }
    }

    for (const auto& e : edges) {
        if (e.is_boundary()) continue;
        records[offsets[e.cells[0]] + e.locals[0]].neighbor = e.cells[1];
        records[offsets[e.cells[1]] + e.locals[1]].neighbor = e.cells[0];
    }

    return EdgeAdjacency(std::move(offsets), std::move(records), std::move(edges), std::move(normals));
}

}  // namespace sweeporder
