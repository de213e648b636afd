#include "sweeporder/sweep.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <variant>

namespace sweeporder {

namespace {

void validate_problem(const TransportProblem& problem, int num_cells) {
    if (static_cast<int>(problem.sigma_t.size()) != num_cells ||
        static_cast<int>(problem.source.size()) != num_cells) {
        throw std::invalid_argument("TransportProblem: per-cell arrays must match the cell count");
    }
    for (double s : problem.sigma_t) {
        if (!(s >= 0.0) || !std::isfinite(s)) {
            throw std::invalid_argument("TransportProblem: sigma_t must be finite and >= 0");
        }
    }
    for (double q : problem.source) {
        if (!std::isfinite(q)) throw std::invalid_argument("TransportProblem: source must be finite");
    }
    if (!std::isfinite(problem.inflow)) {
        throw std::invalid_argument("TransportProblem: inflow must be finite");
    }
}

// The per-cell upwind balance. Everything the cell needs is already in psi
// (guarded by `computed`), so calls for distinct cells are independent.
double solve_cell(const Mesh& mesh, const EdgeAdjacency& adjacency, const TransportProblem& problem,
                  double tol, const std::vector<double>& psi, const std::vector<char>& computed, int c) {
    double area = cell_area(mesh, c);
    double numerator = problem.source[c] * area;
    double denominator = problem.sigma_t[c] * area;
    Vec2 omega = problem.omega.vec();
    for (const auto& rec : adjacency.cell_edges(c)) {
        double d = dot(omega, rec.outward_normal);
        if (d > tol) {
            denominator += d * rec.length;
        } else if (d < -tol) {
            double upwind;
            if (rec.neighbor == EdgeAdjacency::kBoundary) {
                upwind = problem.inflow;
            } else {
                if (!computed[rec.neighbor]) {
                    throw InvalidOrderError("cell " + std::to_string(c) + " reads neighbor " +
                                            std::to_string(rec.neighbor) + " before it is computed");
                }
                upwind = psi[rec.neighbor];
            }
            numerator += -d * rec.length * upwind;
        }
    }
    if (!(denominator > 0.0)) {
        throw ZeroDenominatorError("cell " + std::to_string(c) +
                                   " has zero absorption and no outflow edges");
    }
    return numerator / denominator;
}

}  // namespace

TransportProblem uniform_problem(int num_cells, double sigma, double source, double inflow,
                                 const Direction& omega) {
    return {std::vector<double>(num_cells, sigma), std::vector<double>(num_cells, source), inflow, omega};
}

FluxField sweep_solve(const Mesh& mesh, const EdgeAdjacency& adjacency, const SweepOrder& order,
                      const TransportProblem& problem, double tol) {
    const int n = mesh.num_cells();
    validate_problem(problem, n);
    if (static_cast<int>(order.order.size()) != n) {
        throw InvalidOrderError("order lists " + std::to_string(order.order.size()) + " cells, mesh has " +
                                std::to_string(n));
    }
    std::vector<char> computed(n, 0);
    std::vector<double> psi(n, 0.0);
    for (int c : order.order) {
        if (c < 0 || c >= n) throw InvalidOrderError("order contains out-of-range cell id");
        if (computed[c]) throw InvalidOrderError("order repeats cell " + std::to_string(c));
        psi[c] = solve_cell(mesh, adjacency, problem, tol, psi, computed, c);
        computed[c] = 1;
    }
    return {std::move(psi)};
}

FluxField sweep_solve_levels(const Mesh& mesh, const EdgeAdjacency& adjacency,
                             const LevelSchedule& schedule, const TransportProblem& problem, double tol,
                             int num_threads) {
    const int n = mesh.num_cells();
    validate_problem(problem, n);
    if (num_threads <= 0) {
        num_threads = std::max(1u, std::thread::hardware_concurrency());
    }

    std::vector<char> computed(n, 0);
    std::vector<double> psi(n, 0.0);
    int seen = 0;
    for (const auto& level : schedule.levels) {
        for (int c : level) {
            if (c < 0 || c >= n) throw InvalidOrderError("schedule contains out-of-range cell id");
            if (computed[c]) throw InvalidOrderError("schedule repeats cell " + std::to_string(c));
        }

        auto run_chunk = [&](size_t begin, size_t end) {
            for (size_t i = begin; i < end; ++i) {
                int c = level[i];
                psi[c] = solve_cell(mesh, adjacency, problem, tol, psi, computed, c);
            }
        };

        constexpr size_t kSerialLevel = 1024;  // below this, threads cost more than they save
        if (num_threads == 1 || level.size() < kSerialLevel) {
            run_chunk(0, level.size());
        } else {
            size_t chunks = std::min<size_t>(num_threads, level.size());
            std::vector<std::thread> workers;
            workers.reserve(chunks);
            std::vector<std::exception_ptr> errors(chunks);
            for (size_t t = 0; t < chunks; ++t) {
                size_t begin = level.size() * t / chunks;
                size_t end = level.size() * (t + 1) / chunks;
                workers.emplace_back([&, t, begin, end] {
                    try {
                        run_chunk(begin, end);
                    } catch (...) {
                        errors[t] = std::current_exception();
                    }
                });
            }
            for (auto& w : workers) w.join();
            for (const auto& err : errors) {
                if (err) std::rethrow_exception(err);
            }
        }

        for (int c : level) computed[c] = 1;
        seen += static_cast<int>(level.size());
    }
    if (seen != n) {
        throw InvalidOrderError("schedule covers " + std::to_string(seen) + " of " + std::to_string(n) +
                                " cells");
    }
    return {std::move(psi)};
}

double analytic_attenuation(double depth, double sigma, double psi_in) {
    return psi_in * std::exp(-sigma * depth);
}

std::vector<Direction> quadrature_directions(int k) {
    if (k < 1) throw std::invalid_argument("quadrature_directions: k must be >= 1");
    std::vector<Direction> dirs;
    dirs.reserve(k);
    for (int i = 0; i < k; ++i) {
        dirs.push_back(Direction::from_angle(2.0 * std::numbers::pi * i / k + std::numbers::pi / k));
    }
    return dirs;
}

std::vector<FluxField> solve_quadrature(const Mesh& mesh, const std::vector<TransportProblem>& problems,
                                        double tol) {
    if (problems.empty()) throw std::invalid_argument("solve_quadrature: at least one problem required");
    EdgeAdjacency adjacency = build_adjacency(mesh);

    const int k = static_cast<int>(problems.size());
    std::vector<FluxField> fields(k);
    std::vector<std::exception_ptr> errors(k);
    std::atomic<int> next{0};

    auto worker = [&] {
        for (int i = next.fetch_add(1); i < k; i = next.fetch_add(1)) {
            try {
                auto graph = build_graph(mesh, adjacency, problems[i].omega, tol);
                auto sorted = topo_sort(graph);
                if (std::holds_alternative<CycleFound>(sorted)) {
                    throw std::runtime_error("dependency cycle; no sweep ordering exists");
                }
                fields[i] =
                    sweep_solve(mesh, adjacency, std::get<SweepOrder>(sorted), problems[i], tol);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };

    int threads = std::min<int>(k, std::max(1u, std::thread::hardware_concurrency()));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& w : pool) w.join();
    }

    for (int i = 0; i < k; ++i) {
        if (!errors[i]) continue;
        try {
            std::rethrow_exception(errors[i]);
        } catch (const std::exception& e) {
            throw std::runtime_error("direction " + std::to_string(i) + ": " + e.what());
        }
    }
    return fields;
}

}  // namespace sweeporder
