#include "sweeporder/meshgen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <unordered_map>

namespace sweeporder {

namespace {

// Uniform double in [0, 1) from the engine's full 64-bit output; avoids
// std::uniform_real_distribution, whose output is implementation-defined.
double unit_double(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double triangle_area(Point2 a, Point2 b, Point2 c) {
    return 0.5 * cross(b - a, c - a);
}

}  // namespace

Mesh structured_triangulation(int nx, int ny, DiagonalPattern pattern, uint64_t seed) {
    if (nx < 1 || ny < 1) {
        throw std::invalid_argument("structured_triangulation: nx and ny must be >= 1");
    }

    std::vector<Point2> vertices;
    vertices.reserve(static_cast<size_t>(nx + 1) * (ny + 1));
    for (int j = 0; j <= ny; ++j) {
        for (int i = 0; i <= nx; ++i) {
            vertices.push_back({static_cast<double>(i) / nx, static_cast<double>(j) / ny});
        }
    }

    auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };

    std::mt19937_64 rng(seed);
    std::vector<Cell> cells;
    cells.reserve(static_cast<size_t>(2) * nx * ny);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            int a = vid(i, j);
            int b = vid(i + 1, j);
            int c = vid(i + 1, j + 1);
            int d = vid(i, j + 1);
            bool diag_ac;
            switch (pattern) {
                case DiagonalPattern::Uniform: diag_ac = true; break;
                case DiagonalPattern::Alternating: diag_ac = (i + j) % 2 == 0; break;
                case DiagonalPattern::Random: diag_ac = (rng() & 1) != 0; break;
                default: throw std::invalid_argument("structured_triangulation: bad pattern");
            }
            if (diag_ac) {
                cells.push_back({{a, b, c}});
                cells.push_back({{a, c, d}});
            } else {
                cells.push_back({{a, b, d}});
                cells.push_back({{b, c, d}});
            }
        }
    }

    return make_mesh(std::move(vertices), std::move(cells));
}

Mesh jitter(const Mesh& mesh, const JitterSpec& spec) {
    if (!(spec.amplitude >= 0.0) || spec.amplitude >= 0.5) {
        throw std::invalid_argument("jitter: amplitude must lie in [0, 0.5)");
    }
    for (const auto& cell : mesh.cells) {
        if (!cell.is_triangle()) {
            throw std::invalid_argument("jitter: mesh must contain only triangles");
        }
    }
    if (spec.amplitude == 0.0) return mesh;

    const int nv = mesh.num_vertices();

    // Incident cells per vertex, and boundary flags from the edge map.
    std::vector<std::vector<int>> incident(nv);
    std::unordered_map<uint64_t, int> edge_count;
    for (int c = 0; c < mesh.num_cells(); ++c) {
        const auto& vs = mesh.cells[c].vertices;
        for (size_t i = 0; i < vs.size(); ++i) {
            incident[vs[i]].push_back(c);
            int u = vs[i];
            int v = vs[(i + 1) % vs.size()];
            auto [a, b] = std::minmax(u, v);
            ++edge_count[(static_cast<uint64_t>(static_cast<uint32_t>(a)) << 32) |
                         static_cast<uint64_t>(static_cast<uint32_t>(b))];
        }
    }
    std::vector<char> boundary(nv, 0);
    for (int c = 0; c < mesh.num_cells(); ++c) {
        const auto& vs = mesh.cells[c].vertices;
        for (size_t i = 0; i < vs.size(); ++i) {
            int u = vs[i];
            int v = vs[(i + 1) % vs.size()];
            auto [a, b] = std::minmax(u, v);
            uint64_t key = (static_cast<uint64_t>(static_cast<uint32_t>(a)) << 32) |
                           static_cast<uint64_t>(static_cast<uint32_t>(b));
            if (edge_count[key] == 1) {
                boundary[u] = 1;
                boundary[v] = 1;
            }
        }
    }

    std::vector<Point2> verts = mesh.vertices;
    std::mt19937_64 rng(spec.seed);
    constexpr int kMaxTries = 100;
    constexpr double kMinAreaKeep = 0.05;  // of the triangle's pre-move area

    for (int v = 0; v < nv; ++v) {
        if (boundary[v] || incident[v].empty()) continue;

        double shortest = std::numeric_limits<double>::infinity();
        for (int c : incident[v]) {
            const auto& vs = mesh.cells[c].vertices;
            for (size_t i = 0; i < vs.size(); ++i) {
                if (vs[i] != v) continue;
                shortest = std::min(shortest, norm(verts[vs[(i + 1) % 3]] - verts[v]));
                shortest = std::min(shortest, norm(verts[vs[(i + 2) % 3]] - verts[v]));
            }
        }
        double radius = spec.amplitude * shortest;

        std::vector<double> pre_area(incident[v].size());
        for (size_t k = 0; k < incident[v].size(); ++k) {
            const auto& vs = mesh.cells[incident[v][k]].vertices;
            pre_area[k] = triangle_area(verts[vs[0]], verts[vs[1]], verts[vs[2]]);
        }

        for (int attempt = 0; attempt < kMaxTries; ++attempt) {
            double r = radius * std::sqrt(unit_double(rng));
            double ang = 2.0 * std::numbers::pi * unit_double(rng);
            Point2 candidate = verts[v] + Vec2{r * std::cos(ang), r * std::sin(ang)};

            bool ok = true;
            for (size_t k = 0; k < incident[v].size() && ok; ++k) {
                const auto& vs = mesh.cells[incident[v][k]].vertices;
                Point2 p[3];
                for (int i = 0; i < 3; ++i) p[i] = vs[i] == v ? candidate : verts[vs[i]];
                ok = triangle_area(p[0], p[1], p[2]) >= kMinAreaKeep * pre_area[k];
            }
            if (ok) {
                verts[v] = candidate;
                break;
            }
        }
    }

    return make_mesh(std::move(verts), mesh.cells);
}

Mesh pinwheel_quads(const PinwheelSpec& spec) {
    if (spec.num_quads < 3) {
        throw std::invalid_argument("pinwheel_quads: num_quads must be >= 3");
    }
    if (!(spec.inner_radius > 0.0) || !std::isfinite(spec.inner_radius)) {
        throw std::invalid_argument("pinwheel_quads: inner_radius must be positive");
    }
    if (!(spec.outer_radius > spec.inner_radius) || !std::isfinite(spec.outer_radius)) {
        throw std::invalid_argument("pinwheel_quads: outer_radius must exceed inner_radius");
    }
    if (!std::isfinite(spec.slant)) {
        throw std::invalid_argument("pinwheel_quads: slant must be finite");
    }

    const int k = spec.num_quads;
    std::vector<Point2> vertices(static_cast<size_t>(2) * k);
    for (int i = 0; i < k; ++i) {
        double phi = 2.0 * std::numbers::pi * i / k;
        vertices[i] = {spec.inner_radius * std::cos(phi), spec.inner_radius * std::sin(phi)};
        vertices[k + i] = {spec.outer_radius * std::cos(phi + spec.slant),
                           spec.outer_radius * std::sin(phi + spec.slant)};
    }

    std::vector<Cell> cells(k);
    for (int i = 0; i < k; ++i) {
        int next = (i + 1) % k;
        cells[i].vertices = {i, k + i, k + next, next};
    }

    return make_mesh(std::move(vertices), std::move(cells));
}

}  // namespace sweeporder
