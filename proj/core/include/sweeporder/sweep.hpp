#pragma once

#include <vector>

#include "sweeporder/depgraph.hpp"
#include "sweeporder/mesh.hpp"

namespace sweeporder {

// Single-direction streaming-plus-absorption problem
//   omega . grad(psi) + sigma_t psi = q
// with a constant inflow value psi_in on every inflow boundary edge.
struct TransportProblem {
    std::vector<double> sigma_t;  // per cell, >= 0
    std::vector<double> source;   // per cell
    double inflow = 0.0;
    Direction omega;
};

TransportProblem uniform_problem(int num_cells, double sigma, double source, double inflow,
                                 const Direction& omega);

struct FluxField {
    std::vector<double> psi;  // per cell
};

// First-order upwind finite-volume sweep: visits cells in `order`, solving
//   psi_i = (q_i A_i + sum_in |<omega,n>| L psi_up) / (sigma_i A_i + sum_out <omega,n> L)
// per cell; psi_up is the already-computed neighbor value, or the problem's
// inflow on boundary edges. Grazing edges (|<omega,n>| <= tol) join neither
// sum. Throws InvalidOrderError when `order` is not a permutation or reads a
// neighbor before it is computed, ZeroDenominatorError when a cell has zero
// absorption and no outflow (unreachable for tol below the cell's smallest
// non-grazing dot product), std::invalid_argument for malformed problems.
FluxField sweep_solve(const Mesh& mesh, const EdgeAdjacency& adjacency, const SweepOrder& order,
                      const TransportProblem& problem, double tol = kGrazingTol);

// Level-parallel variant: cells within one level are independent, so each
// level is computed concurrently (chunked across threads). Produces bitwise
// the same field as sweep_solve for schedules of the same graph.
// num_threads = 0 picks the hardware concurrency.
FluxField sweep_solve_levels(const Mesh& mesh, const EdgeAdjacency& adjacency,
                             const LevelSchedule& schedule, const TransportProblem& problem,
                             double tol = kGrazingTol, int num_threads = 0);

// psi_in * exp(-sigma * depth): exact solution of the slab attenuation
// problem, the oracle for convergence testing.
double analytic_attenuation(double depth, double sigma, double psi_in);

// K equi-spaced unit directions rotated half a slot off the axes:
// omega_k = (cos(2 pi k / K + pi / K), sin(...)).
std::vector<Direction> quadrature_directions(int k);

// Orders and sweeps each problem's direction independently (concurrently);
// results are indexed like `problems`. A direction whose graph has a cycle or
// whose solve fails raises std::runtime_error naming the direction index.
std::vector<FluxField> solve_quadrature(const Mesh& mesh, const std::vector<TransportProblem>& problems,
                                        double tol = kGrazingTol);

}  // namespace sweeporder
