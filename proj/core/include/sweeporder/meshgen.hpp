#pragma once

#include <cstdint>

#include "sweeporder/mesh.hpp"

namespace sweeporder {

enum class DiagonalPattern { Uniform, Alternating, Random };

struct JitterSpec {
    double amplitude = 0.0;  // fraction of the shortest incident edge, in [0, 0.5)
    uint64_t seed = 0;
};

struct PinwheelSpec {
    int num_quads = 4;          // >= 3
    double inner_radius = 1.0;  // > 0
    double outer_radius = 2.0;  // > inner_radius
    double slant = 0.0;         // angular lead of each quad's outer edge (radians)
};

// Triangulation of the unit square into 2*nx*ny triangles over an
// (nx+1)-by-(ny+1) vertex grid; each grid quad is split along a diagonal
// chosen by `pattern` (seed is used only by DiagonalPattern::Random).
// Throws std::invalid_argument for nx or ny < 1.
Mesh structured_triangulation(int nx, int ny, DiagonalPattern pattern = DiagonalPattern::Uniform,
                              uint64_t seed = 0);

// Displaces interior vertices of a triangle mesh by random offsets of radius
// at most amplitude times the vertex's shortest incident edge. Displacements
// that would flip or nearly collapse an incident triangle are rejected and
// redrawn, up to 100 tries per vertex, after which the vertex stays put.
// Boundary vertices and connectivity are unchanged; same spec, same output.
// Throws std::invalid_argument for amplitude outside [0, 0.5) or a
// non-triangle mesh.
Mesh jitter(const Mesh& mesh, const JitterSpec& spec);

// Ring of num_quads convex quadrilaterals around a central hole. Inner
// vertices sit at angles 2*pi*k/K on the inner circle, outer vertices lead
// them by `slant` on the outer circle; quad k spans slots k and k+1, sharing
// one full spoke edge with each angular neighbor. Throws std::invalid_argument
// for out-of-domain parameters and MeshError when the requested slant makes a
// quad non-convex or degenerate.
Mesh pinwheel_quads(const PinwheelSpec& spec);

}  // namespace sweeporder
