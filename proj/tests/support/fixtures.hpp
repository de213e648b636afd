#pragma once

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "sweeporder/mesh.hpp"

namespace fixtures {

// Unit square split along the (0,0)-(1,1) diagonal: cell 0 lower-right,
// cell 1 upper-left.
inline sweeporder::Mesh two_triangle_square() {
    return sweeporder::make_mesh({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{{0, 1, 2}}, {{0, 2, 3}}});
}

// Right triangle (0,0), (1,0), (0,1).
inline sweeporder::Mesh single_triangle() {
    return sweeporder::make_mesh({{0, 0}, {1, 0}, {0, 1}}, {{{0, 1, 2}}});
}

// Unique per-process scratch directory, created on first use.
inline std::filesystem::path scratch_dir() {
    static const std::filesystem::path dir = [] {
        auto d = std::filesystem::temp_directory_path() /
                 ("sweeporder-tests-" + std::to_string(::getpid()));
        std::filesystem::create_directories(d);
        return d;
    }();
    return dir;
}

inline std::filesystem::path write_file(const std::string& name, const std::string& content) {
    auto path = scratch_dir() / name;
    std::ofstream f(path, std::ios::binary);
    f << content;
    return path;
}

}  // namespace fixtures
