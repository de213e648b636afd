#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <random>
#include <stdexcept>
#include <variant>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "sweeporder/errors.hpp"
#include "sweeporder/meshgen.hpp"
#include "sweeporder/sweep.hpp"

using namespace sweeporder;

namespace {

SweepOrder order_of(const Mesh& mesh, const EdgeAdjacency& adj, const Direction& omega) {
    auto res = topo_sort(build_graph(mesh, adj, omega));
    REQUIRE(std::holds_alternative<SweepOrder>(res));
    return std::get<SweepOrder>(res);
}

LevelSchedule levels_of(const Mesh& mesh, const EdgeAdjacency& adj, const Direction& omega) {
    auto res = level_schedule(build_graph(mesh, adj, omega));
    REQUIRE(std::holds_alternative<LevelSchedule>(res));
    return std::get<LevelSchedule>(res);
}

}  // namespace

TEST_CASE("uniform_problem fills per cell arrays") {
    TransportProblem p = uniform_problem(3, 2.0, 6.0, 3.0, Direction(1.0, 0.0));
    CHECK(p.sigma_t == std::vector<double>{2.0, 2.0, 2.0});
    CHECK(p.source == std::vector<double>{6.0, 6.0, 6.0});
    CHECK(p.inflow == 3.0);
}

TEST_CASE("malformed problems are rejected") {
    Mesh mesh = fixtures::single_triangle();
    EdgeAdjacency adj = build_adjacency(mesh);
    Direction omega(1.0, 0.0);
    SweepOrder order = order_of(mesh, adj, omega);

    TransportProblem bad_size{{1.0, 1.0}, {0.0}, 0.0, omega};
    CHECK_THROWS_AS(sweep_solve(mesh, adj, order, bad_size), std::invalid_argument);
    TransportProblem neg_sigma{{-1.0}, {0.0}, 0.0, omega};
    CHECK_THROWS_AS(sweep_solve(mesh, adj, order, neg_sigma), std::invalid_argument);
    TransportProblem bad_inflow{{1.0}, {0.0}, std::nan(""), omega};
    CHECK_THROWS_AS(sweep_solve(mesh, adj, order, bad_inflow), std::invalid_argument);
}

TEST_CASE("pure streaming through a single triangle carries the inflow") {
    Mesh mesh = fixtures::single_triangle();
    EdgeAdjacency adj = build_adjacency(mesh);
    Direction omega(1.0, 0.0);
    SweepOrder order = order_of(mesh, adj, omega);
    FluxField field = sweep_solve(mesh, adj, order, uniform_problem(1, 0.0, 0.0, 1.0, omega));
    REQUIRE(field.psi.size() == 1);
    CHECK(field.psi[0] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("uniform equilibrium is reproduced") {
    Mesh mesh = jitter(structured_triangulation(16, 16, DiagonalPattern::Alternating),
                       JitterSpec{0.3, 33});
    EdgeAdjacency adj = build_adjacency(mesh);
    for (double angle : {0.0, 0.9, 2.3, 4.5}) {
        Direction omega = Direction::from_angle(angle);
        SweepOrder order = order_of(mesh, adj, omega);
        TransportProblem p = uniform_problem(mesh.num_cells(), 2.0, 6.0, 3.0, omega);
        FluxField field = sweep_solve(mesh, adj, order, p);
        for (double v : field.psi) {
            CHECK(std::abs(v - 3.0) < 1e-13);
        }
    }
}

TEST_CASE("grazing aligned direction still transports the inflow") {
    Mesh mesh = structured_triangulation(4, 4, DiagonalPattern::Uniform);
    EdgeAdjacency adj = build_adjacency(mesh);
    Direction omega(0.0, 1.0);  // every vertical edge is grazing
    SweepOrder order = order_of(mesh, adj, omega);
    FluxField field = sweep_solve(mesh, adj, order, uniform_problem(mesh.num_cells(), 0.0, 0.0, 2.5, omega));
    for (double v : field.psi) {
        CHECK(std::abs(v - 2.5) < 1e-12);
    }
}

TEST_CASE("the field does not depend on which valid order is used") {
    Mesh mesh = jitter(structured_triangulation(10, 8, DiagonalPattern::Random, 5),
                       JitterSpec{0.25, 6});
    EdgeAdjacency adj = build_adjacency(mesh);
    Direction omega = Direction::from_angle(1.1);
    SweepOrder kahn = order_of(mesh, adj, omega);
    LevelSchedule sched = levels_of(mesh, adj, omega);

    // concatenating levels with each level reversed is another valid order
    SweepOrder alt;
    for (const auto& level : sched.levels) {
        for (auto it = level.rbegin(); it != level.rend(); ++it) alt.order.push_back(*it);
    }

    TransportProblem p = uniform_problem(mesh.num_cells(), 1.0, 0.5, 1.0, omega);
    FluxField a = sweep_solve(mesh, adj, kahn, p);
    FluxField b = sweep_solve(mesh, adj, alt, p);
    CHECK(a.psi == b.psi);
}

TEST_CASE("sweep_solve_levels matches sweep_solve bitwise") {
    // narrow serial levels
    Mesh small = jitter(structured_triangulation(9, 9, DiagonalPattern::Alternating),
                        JitterSpec{0.3, 77});
    EdgeAdjacency sadj = build_adjacency(small);
    Direction omega = Direction::from_angle(0.6);
    TransportProblem sp = uniform_problem(small.num_cells(), 0.7, 0.2, 1.5, omega);
    FluxField serial = sweep_solve(small, sadj, order_of(small, sadj, omega), sp);
    FluxField leveled = sweep_solve_levels(small, sadj, levels_of(small, sadj, omega), sp);
    CHECK(serial.psi == leveled.psi);

    // ny rows per wavefront, wide enough to engage the thread pool
    Mesh wide = structured_triangulation(3, 1200, DiagonalPattern::Uniform);
    EdgeAdjacency wadj = build_adjacency(wide);
    Direction right(1.0, 0.0);
    TransportProblem wp = uniform_problem(wide.num_cells(), 0.4, 0.1, 2.0, right);
    LevelSchedule wsched = levels_of(wide, wadj, right);
    size_t widest = 0;
    for (const auto& level : wsched.levels) widest = std::max(widest, level.size());
    CHECK(widest >= 1024);
    FluxField wserial = sweep_solve(wide, wadj, order_of(wide, wadj, right), wp);
    FluxField wpar = sweep_solve_levels(wide, wadj, wsched, wp, kGrazingTol, 4);
    CHECK(wserial.psi == wpar.psi);
}

TEST_CASE("invalid orders and schedules are rejected") {
    Mesh mesh = fixtures::two_triangle_square();
    EdgeAdjacency adj = build_adjacency(mesh);
    Direction omega(1.0, 0.0);
    TransportProblem p = uniform_problem(2, 1.0, 0.0, 1.0, omega);

    CHECK_THROWS_AS(sweep_solve(mesh, adj, SweepOrder{{0}}, p), InvalidOrderError);
    CHECK_THROWS_AS(sweep_solve(mesh, adj, SweepOrder{{0, 0}}, p), InvalidOrderError);
    CHECK_THROWS_AS(sweep_solve(mesh, adj, SweepOrder{{0, 2}}, p), InvalidOrderError);
    // cell 0 reads the diagonal neighbor before it is computed
    CHECK_THROWS_AS(sweep_solve(mesh, adj, SweepOrder{{0, 1}}, p), InvalidOrderError);

    CHECK_THROWS_AS(sweep_solve_levels(mesh, adj, LevelSchedule{{{1}}}, p), InvalidOrderError);
    CHECK_THROWS_AS(sweep_solve_levels(mesh, adj, LevelSchedule{{{1}, {1, 0}}}, p),
                    InvalidOrderError);
    CHECK_THROWS_AS(sweep_solve_levels(mesh, adj, LevelSchedule{{{0}, {1}}}, p), InvalidOrderError);
}

TEST_CASE("a cell with no outflow and no absorption is reported") {
    Mesh mesh = fixtures::single_triangle();
    EdgeAdjacency adj = build_adjacency(mesh);
    Direction omega(1.0, 0.0);
    TransportProblem p = uniform_problem(1, 0.0, 0.0, 1.0, omega);
    CHECK_THROWS_AS(sweep_solve(mesh, adj, SweepOrder{{0}}, p, 10.0), ZeroDenominatorError);
}

TEST_CASE("positivity and the maximum principle") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 20; ++trial) {
        int nx = 3 + static_cast<int>(rng() % 8);
        int ny = 3 + static_cast<int>(rng() % 8);
        Mesh mesh = jitter(structured_triangulation(nx, ny, DiagonalPattern::Random, rng()),
                           JitterSpec{0.3, rng()});
        EdgeAdjacency adj = build_adjacency(mesh);
        Direction omega = Direction::from_angle(2.0 * std::numbers::pi * oracles::unit_double(rng));
        SweepOrder order = order_of(mesh, adj, omega);

        double sigma = trial % 4 == 0 ? 0.0 : 3.0 * oracles::unit_double(rng);
        double source = trial % 2 == 0 ? 0.0 : 5.0 * oracles::unit_double(rng);
        double inflow = 4.0 * oracles::unit_double(rng);
        TransportProblem p = uniform_problem(mesh.num_cells(), sigma, source, inflow, omega);
        FluxField field = sweep_solve(mesh, adj, order, p);

        for (double v : field.psi) {
            CHECK(std::isfinite(v));
            CHECK(v >= 0.0);
        }
        if (source == 0.0) {
            // without interior sources the inflow bounds the field from above
            for (double v : field.psi) {
                CHECK(v <= inflow + 1e-12);
            }
            if (sigma == 0.0) {
                for (double v : field.psi) {
                    CHECK(v >= inflow - 1e-12);
                }
            }
        }
    }
}

TEST_CASE("attenuation converges at first order to the analytic solution") {
    Direction omega(1.0, 0.0);
    const double sigma = 1.0;
    const double psi_in = 1.0;
    std::vector<double> errors;
    uint64_t seed = 101;
    for (int n : {16, 32, 64}) {
        Mesh mesh = jitter(structured_triangulation(n, n, DiagonalPattern::Alternating),
                           JitterSpec{0.3, seed++});
        EdgeAdjacency adj = build_adjacency(mesh);
        SweepOrder order = order_of(mesh, adj, omega);
        TransportProblem p = uniform_problem(mesh.num_cells(), sigma, 0.0, psi_in, omega);
        FluxField field = sweep_solve(mesh, adj, order, p);

        double err = 0.0;
        for (int c = 0; c < mesh.num_cells(); ++c) {
            double exact = oracles::attenuation_cell_average(mesh, c, sigma, psi_in);
            err += cell_area(mesh, c) * std::abs(field.psi[c] - exact);
        }
        errors.push_back(err);
    }
    double p1 = std::log2(errors[0] / errors[1]);
    double p2 = std::log2(errors[1] / errors[2]);
    CHECK(p1 >= 0.8);
    CHECK(p2 >= 0.8);
}

TEST_CASE("analytic_attenuation closed form") {
    CHECK(analytic_attenuation(0.0, 2.0, 5.0) == 5.0);
    CHECK(analytic_attenuation(3.7, 0.0, 5.0) == 5.0);
    CHECK(analytic_attenuation(1.0, 1.0, 1.0) ==
          doctest::Approx(0.36787944117144233).epsilon(1e-15));
}

TEST_CASE("attenuation oracle integrates the exponential exactly") {
    // unit square: integral of exp(-x) over it is 1 - exp(-1)
    std::vector<Point2> square = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    double got = oracles::integral_exp_over_polygon(square, 1.0);
    CHECK(got == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-14));
    // splitting the square along the diagonal preserves the integral
    std::vector<Point2> lower = {{0, 0}, {1, 0}, {1, 1}};
    std::vector<Point2> upper = {{0, 0}, {1, 1}, {0, 1}};
    double parts =
        oracles::integral_exp_over_polygon(lower, 0.35) + oracles::integral_exp_over_polygon(upper, 0.35);
    CHECK(parts == doctest::Approx(oracles::integral_exp_over_polygon(square, 0.35)).epsilon(1e-14));
}

TEST_CASE("quadrature_directions stays off the axes") {
    CHECK_THROWS_AS(quadrature_directions(0), std::invalid_argument);
    std::vector<Direction> four = quadrature_directions(4);
    REQUIRE(four.size() == 4);
    for (const Direction& d : four) {
        CHECK(std::abs(std::hypot(d.x(), d.y()) - 1.0) < 1e-15);
        CHECK(std::abs(d.x()) > 0.1);
        CHECK(std::abs(d.y()) > 0.1);
    }
    CHECK(four[0].x() == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
    CHECK(four[0].y() == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
}

TEST_CASE("solve_quadrature with one direction equals a plain sweep") {
    Mesh mesh = jitter(structured_triangulation(8, 8, DiagonalPattern::Random, 9),
                       JitterSpec{0.2, 10});
    EdgeAdjacency adj = build_adjacency(mesh);
    Direction omega = quadrature_directions(1)[0];
    TransportProblem p = uniform_problem(mesh.num_cells(), 1.3, 0.7, 0.4, omega);
    std::vector<FluxField> fields = solve_quadrature(mesh, {p});
    REQUIRE(fields.size() == 1);
    FluxField direct = sweep_solve(mesh, adj, order_of(mesh, adj, omega), p);
    CHECK(fields[0].psi == direct.psi);
}

TEST_CASE("solve_quadrature respects the mesh symmetry") {
    // the alternating pattern on an even grid maps onto itself under a
    // quarter turn about the center, and the K=4 directions permute cyclically
    const int n = 8;
    Mesh mesh = structured_triangulation(n, n, DiagonalPattern::Alternating);
    std::vector<Direction> dirs = quadrature_directions(4);
    std::vector<TransportProblem> problems;
    for (const Direction& d : dirs) {
        problems.push_back(uniform_problem(mesh.num_cells(), 1.0, 1.0, 0.0, d));
    }
    std::vector<FluxField> fields = solve_quadrature(mesh, problems);
    REQUIRE(fields.size() == 4);

    // index cells by rounded centroid on the 1/(3n) lattice
    std::map<std::pair<long long, long long>, int> by_centroid;
    for (int c = 0; c < mesh.num_cells(); ++c) {
        Point2 g = cell_centroid(mesh, c);
        by_centroid[{std::llround(g.x * 3 * n), std::llround(g.y * 3 * n)}] = c;
    }
    auto rotated_cell = [&](int c) {
        Point2 g = cell_centroid(mesh, c);
        Point2 r{1.0 - g.y, g.x};  // quarter turn about (0.5, 0.5)
        auto it = by_centroid.find({std::llround(r.x * 3 * n), std::llround(r.y * 3 * n)});
        REQUIRE(it != by_centroid.end());
        return it->second;
    };

    for (int k = 0; k < 4; ++k) {
        int next = (k + 1) % 4;
        for (int c = 0; c < mesh.num_cells(); ++c) {
            CHECK(fields[next].psi[rotated_cell(c)] ==
                  doctest::Approx(fields[k].psi[c]).epsilon(1e-10));
        }
    }
}

TEST_CASE("solve_quadrature reports the failing direction") {
    Mesh mesh = fixtures::single_triangle();
    TransportProblem bad = uniform_problem(1, -1.0, 0.0, 0.0, Direction(1.0, 0.0));
    CHECK_THROWS_WITH_AS(solve_quadrature(mesh, {bad}), doctest::Contains("direction 0"),
                         std::runtime_error);
}
