#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "sweeporder/depgraph.hpp"
#include "sweeporder/mesh.hpp"
#include "sweeporder/meshgen.hpp"
#include "sweeporder/sweep.hpp"

namespace sweeporder::cli {

namespace {

using nlohmann::json;

// Thrown by handlers to finish with a specific exit code; the message goes to
// stderr in the active format.
struct ExitWith {
    int code;
    std::string message;
};

struct Options {
    std::string mesh_path;
    std::optional<std::string> omega;
    std::optional<double> angle;
    double tol = kGrazingTol;
    std::string format = "json";
    std::string out_path;
    bool parallel = false;

    double sigma = 0.0;
    double source = 0.0;
    double inflow = 0.0;

    int nx = 1;
    int ny = 1;
    std::string pattern = "uniform";
    double jitter_amplitude = 0.0;
    uint64_t seed = 0;

    int num_quads = 4;
    double slant = 0.0;
    double rin = 1.0;
    double rout = 2.0;

    int repeat = 3;
};

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void emit_error(std::ostream& err, const std::string& format, const std::string& message) {
    if (format == "csv") {
        err << "error: " << message << "\n";
    } else {
        err << json{{"error", message}}.dump() << "\n";
    }
}

void emit(const std::string& text, const Options& o, std::ostream& out) {
    if (o.out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(o.out_path, std::ios::binary);
    if (!f) throw ExitWith{1, "cannot open output file: " + o.out_path};
    f << text;
    if (!f) throw ExitWith{1, "failed writing output file: " + o.out_path};
}

double parse_component(std::string_view tok) {
    double v;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size()) {
        throw ExitWith{1, "--omega expects 'X,Y' with numeric components"};
    }
    return v;
}

Direction resolve_direction(const Options& o) {
    if (o.omega.has_value() == o.angle.has_value()) {
        throw ExitWith{1, "pass exactly one of --omega X,Y or --angle RADIANS"};
    }
    if (o.angle) return Direction::from_angle(*o.angle);
    const std::string& s = *o.omega;
    size_t comma = s.find(',');
    if (comma == std::string::npos) throw ExitWith{1, "--omega expects 'X,Y'"};
    double x = parse_component(std::string_view(s).substr(0, comma));
    double y = parse_component(std::string_view(s).substr(comma + 1));
    return Direction(x, y);  // normalizes; rejects zero vectors
}

DiagonalPattern resolve_pattern(const std::string& name) {
    if (name == "uniform") return DiagonalPattern::Uniform;
    if (name == "alternating") return DiagonalPattern::Alternating;
    return DiagonalPattern::Random;
}

json cycle_report(const DependencyGraph& graph, const CycleFound& found) {
    json report;
    report["cycle"] = find_cycle(graph).value_or(std::vector<int>{});
    report["residual"] = found.residual;
    return report;
}

int cmd_validate(const Options& o, std::ostream& out) {
    Mesh mesh = load_mesh_file(o.mesh_path);
    EdgeAdjacency adjacency = build_adjacency(mesh);
    int interior = adjacency.num_interior();
    int total = static_cast<int>(adjacency.undirected().size());
    json report{{"valid", true},
                {"vertices", mesh.num_vertices()},
                {"cells", mesh.num_cells()},
                {"edges", total},
                {"interior_edges", interior},
                {"boundary_edges", total - interior}};
    emit(report.dump() + "\n", o, out);
    return 0;
}

int cmd_graph(const Options& o, std::ostream& out) {
    Mesh mesh = load_mesh_file(o.mesh_path);
    EdgeAdjacency adjacency = build_adjacency(mesh);
    DependencyGraph graph = build_graph(mesh, adjacency, resolve_direction(o), o.tol);
    json edges = json::array();
    for (const auto& e : graph.edges()) edges.push_back({e.upwind, e.downwind});
    json report{{"num_cells", graph.num_cells()}, {"edges", edges}, {"grazing_edges", graph.grazing_edges()}};
    emit(report.dump() + "\n", o, out);
    return 0;
}

int cmd_order(const Options& o, std::ostream& out) {
    Mesh mesh = load_mesh_file(o.mesh_path);
    EdgeAdjacency adjacency = build_adjacency(mesh);
    DependencyGraph graph = build_graph(mesh, adjacency, resolve_direction(o), o.tol);
    auto sorted = topo_sort(graph);
    if (const auto* found = std::get_if<CycleFound>(&sorted)) {
        emit(cycle_report(graph, *found).dump() + "\n", o, out);
        return 3;
    }
    const auto& order = std::get<SweepOrder>(sorted).order;
    if (o.format == "csv") {
        std::string text = "position,cell\n";
        for (size_t i = 0; i < order.size(); ++i) {
            text += std::to_string(i) + "," + std::to_string(order[i]) + "\n";
        }
        emit(text, o, out);
    } else {
        emit(json{{"order", order}}.dump() + "\n", o, out);
    }
    return 0;
}

int cmd_levels(const Options& o, std::ostream& out) {
    Mesh mesh = load_mesh_file(o.mesh_path);
    EdgeAdjacency adjacency = build_adjacency(mesh);
    DependencyGraph graph = build_graph(mesh, adjacency, resolve_direction(o), o.tol);
    auto scheduled = level_schedule(graph);
    if (const auto* found = std::get_if<CycleFound>(&scheduled)) {
        emit(cycle_report(graph, *found).dump() + "\n", o, out);
        return 3;
    }
    const auto& levels = std::get<LevelSchedule>(scheduled).levels;
    if (o.format == "csv") {
        std::string text = "level,cell\n";
        for (size_t l = 0; l < levels.size(); ++l) {
            for (int c : levels[l]) text += std::to_string(l) + "," + std::to_string(c) + "\n";
        }
        emit(text, o, out);
    } else {
        size_t max_width = 0;
        for (const auto& level : levels) max_width = std::max(max_width, level.size());
        json report{{"levels", levels}, {"num_levels", levels.size()}, {"max_width", max_width}};
        emit(report.dump() + "\n", o, out);
    }
    return 0;
}

int cmd_cycles(const Options& o, std::ostream& out) {
    Mesh mesh = load_mesh_file(o.mesh_path);
    EdgeAdjacency adjacency = build_adjacency(mesh);
    DependencyGraph graph = build_graph(mesh, adjacency, resolve_direction(o), o.tol);
    auto cycle = find_cycle(graph);
    if (!cycle) {
        emit(json{{"acyclic", true}}.dump() + "\n", o, out);
        return 0;
    }
    emit(json{{"acyclic", false}, {"cycle", *cycle}}.dump() + "\n", o, out);
    return 3;
}

int cmd_audit(const Options& o, std::ostream& out) {
    Mesh mesh = load_mesh_file(o.mesh_path);
    EdgeAdjacency adjacency = build_adjacency(mesh);
    Direction omega = resolve_direction(o);
    DependencyGraph graph = build_graph(mesh, adjacency, omega, o.tol);
    auto cycle = find_cycle(graph);
    if (!cycle) throw ExitWith{3, "graph is acyclic; nothing to audit"};
    CycleAudit audit = audit_cycle(mesh, adjacency, *cycle, omega, o.tol);
    json report{{"cycle", audit.cycle},
                {"alphas", audit.alphas},
                {"theta", audit.theta},
                {"winding", audit.winding}};
    emit(report.dump() + "\n", o, out);
    return 0;
}

int cmd_sweep(const Options& o, std::ostream& out) {
    Mesh mesh = load_mesh_file(o.mesh_path);
    EdgeAdjacency adjacency = build_adjacency(mesh);
    Direction omega = resolve_direction(o);
    DependencyGraph graph = build_graph(mesh, adjacency, omega, o.tol);
    TransportProblem problem = uniform_problem(mesh.num_cells(), o.sigma, o.source, o.inflow, omega);

    FluxField field;
    if (o.parallel) {
        auto scheduled = level_schedule(graph);
        if (std::holds_alternative<CycleFound>(scheduled)) {
            throw ExitWith{3, "dependency cycle; no sweep ordering exists"};
        }
        field = sweep_solve_levels(mesh, adjacency, std::get<LevelSchedule>(scheduled), problem, o.tol);
    } else {
        auto sorted = topo_sort(graph);
        if (std::holds_alternative<CycleFound>(sorted)) {
            throw ExitWith{3, "dependency cycle; no sweep ordering exists"};
        }
        field = sweep_solve(mesh, adjacency, std::get<SweepOrder>(sorted), problem, o.tol);
    }

    if (o.format == "csv") {
        std::string text = "cell_id,psi\n";
        for (size_t c = 0; c < field.psi.size(); ++c) {
            text += std::to_string(c) + "," + fmt17(field.psi[c]) + "\n";
        }
        emit(text, o, out);
    } else {
        emit(json{{"psi", field.psi}}.dump() + "\n", o, out);
    }
    return 0;
}

int cmd_gen_structured(const Options& o, std::ostream& out) {
    Mesh mesh = structured_triangulation(o.nx, o.ny, resolve_pattern(o.pattern), o.seed);
    if (o.jitter_amplitude != 0.0) {
        mesh = jitter(mesh, {o.jitter_amplitude, o.seed});
    }
    emit(serialize_mesh(mesh), o, out);
    return 0;
}

int cmd_gen_pinwheel(const Options& o, std::ostream& out) {
    PinwheelSpec spec{o.num_quads, o.rin, o.rout, o.slant};
    emit(serialize_mesh(pinwheel_quads(spec)), o, out);
    return 0;
}

int cmd_bench(const Options& o, std::ostream& out) {
    using clock = std::chrono::steady_clock;
    auto seconds_since = [](clock::time_point t0) {
        return std::chrono::duration<double>(clock::now() - t0).count();
    };

    auto t0 = clock::now();
    Mesh mesh = structured_triangulation(o.nx, o.ny, resolve_pattern(o.pattern), o.seed);
    double gen_seconds = seconds_since(t0);

    t0 = clock::now();
    EdgeAdjacency adjacency = build_adjacency(mesh);
    double adjacency_seconds = seconds_since(t0);

    Direction omega = resolve_direction(o);
    std::vector<double> build_seconds;
    std::vector<double> sort_seconds;
    for (int r = 0; r < o.repeat; ++r) {
        std::optional<DependencyGraph> graph;
        t0 = clock::now();
        graph.emplace(build_graph(mesh, adjacency, omega, o.tol));
        build_seconds.push_back(seconds_since(t0));

        t0 = clock::now();
        auto sorted = topo_sort(*graph);
        sort_seconds.push_back(seconds_since(t0));

        if (std::holds_alternative<CycleFound>(sorted)) {
            throw ExitWith{3, "dependency cycle during bench; mesh should be acyclic"};
        }
        if (std::get<SweepOrder>(sorted).order.size() != static_cast<size_t>(mesh.num_cells())) {
            throw ExitWith{1, "bench: sort emitted the wrong cell count"};
        }
    }

    auto min_of = [](const std::vector<double>& v) { return *std::min_element(v.begin(), v.end()); };
    json report{{"nx", o.nx},
                {"ny", o.ny},
                {"cells", mesh.num_cells()},
                {"repeat", o.repeat},
                {"gen_seconds", gen_seconds},
                {"adjacency_seconds", adjacency_seconds},
                {"build_seconds", build_seconds},
                {"sort_seconds", sort_seconds},
                {"build_min_seconds", min_of(build_seconds)},
                {"sort_min_seconds", min_of(sort_seconds)}};
    emit(report.dump() + "\n", o, out);
    return 0;
}

void add_mesh_option(CLI::App* cmd, Options& o) {
    cmd->add_option("--mesh", o.mesh_path, "mesh file to read")->required();
}

void add_direction_options(CLI::App* cmd, Options& o) {
    cmd->add_option("--omega", o.omega, "direction as 'X,Y' (normalized on parse)");
    cmd->add_option("--angle", o.angle, "direction angle in radians");
    cmd->add_option("--tol", o.tol, "grazing tolerance for <n,omega>")->check(CLI::NonNegativeNumber);
}

void add_format_option(CLI::App* cmd, Options& o) {
    cmd->add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "csv"}));
}

void add_out_option(CLI::App* cmd, Options& o) {
    cmd->add_option("--out", o.out_path, "write output to this file instead of stdout");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"sweep orderings for direction-dependent transport on 2D unstructured meshes"};
    app.name("sweeporder");
    app.require_subcommand(1);

    CLI::App* validate = app.add_subcommand("validate", "parse a mesh and report conformity");
    add_mesh_option(validate, o);
    add_out_option(validate, o);

    CLI::App* graph = app.add_subcommand("graph", "emit the dependency graph for a direction");
    add_mesh_option(graph, o);
    add_direction_options(graph, o);
    add_out_option(graph, o);

    CLI::App* order = app.add_subcommand("order", "compute a sweep ordering");
    add_mesh_option(order, o);
    add_direction_options(order, o);
    add_format_option(order, o);
    add_out_option(order, o);

    CLI::App* levels = app.add_subcommand("levels", "compute wavefront levels");
    add_mesh_option(levels, o);
    add_direction_options(levels, o);
    add_format_option(levels, o);
    add_out_option(levels, o);

    CLI::App* cycles = app.add_subcommand("cycles", "search the dependency graph for a cycle");
    add_mesh_option(cycles, o);
    add_direction_options(cycles, o);
    add_out_option(cycles, o);

    CLI::App* audit = app.add_subcommand("audit", "measure turning angles along a found cycle");
    add_mesh_option(audit, o);
    add_direction_options(audit, o);
    add_out_option(audit, o);

    CLI::App* sweep = app.add_subcommand("sweep", "run the upwind sweep solver");
    add_mesh_option(sweep, o);
    add_direction_options(sweep, o);
    add_format_option(sweep, o);
    add_out_option(sweep, o);
    sweep->add_option("--sigma", o.sigma, "total cross-section")->check(CLI::NonNegativeNumber);
    sweep->add_option("--source", o.source, "volumetric source");
    sweep->add_option("--inflow", o.inflow, "boundary inflow value");
    sweep->add_flag("--parallel", o.parallel, "level-parallel sweep (same output bytes)");

    CLI::App* gen = app.add_subcommand("gen", "generate a mesh");
    gen->require_subcommand(1);
    CLI::App* structured = gen->add_subcommand("structured", "triangulated unit-square grid");
    structured->add_option("--nx", o.nx, "quads along x")->required()->check(CLI::PositiveNumber);
    structured->add_option("--ny", o.ny, "quads along y")->required()->check(CLI::PositiveNumber);
    structured->add_option("--pattern", o.pattern, "diagonal pattern")
        ->check(CLI::IsMember({"uniform", "alternating", "random"}));
    structured->add_option("--jitter", o.jitter_amplitude, "jitter amplitude in [0,0.5)");
    structured->add_option("--seed", o.seed, "seed for random pattern and jitter");
    add_out_option(structured, o);
    CLI::App* pinwheel = gen->add_subcommand("pinwheel", "ring of slanted quads around a hole");
    pinwheel->add_option("--n", o.num_quads, "number of quads")->required();
    pinwheel->add_option("--slant", o.slant, "angular lead of outer vertices (radians)")->required();
    pinwheel->add_option("--rin", o.rin, "inner radius")->required();
    pinwheel->add_option("--rout", o.rout, "outer radius")->required();
    add_out_option(pinwheel, o);

    CLI::App* bench = app.add_subcommand("bench", "time graph build and topological sort");
    bench->add_option("--nx", o.nx, "quads along x")->required()->check(CLI::PositiveNumber);
    bench->add_option("--ny", o.ny, "quads along y")->required()->check(CLI::PositiveNumber);
    bench->add_option("--pattern", o.pattern, "diagonal pattern")
        ->check(CLI::IsMember({"uniform", "alternating", "random"}));
    bench->add_option("--seed", o.seed, "seed for the random pattern");
    bench->add_option("--repeat", o.repeat, "timing repetitions")->check(CLI::PositiveNumber);
    add_direction_options(bench, o);
    add_out_option(bench, o);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(std::move(reversed));

        if (app.got_subcommand(validate)) return cmd_validate(o, out);
        if (app.got_subcommand(graph)) return cmd_graph(o, out);
        if (app.got_subcommand(order)) return cmd_order(o, out);
        if (app.got_subcommand(levels)) return cmd_levels(o, out);
        if (app.got_subcommand(cycles)) return cmd_cycles(o, out);
        if (app.got_subcommand(audit)) return cmd_audit(o, out);
        if (app.got_subcommand(sweep)) return cmd_sweep(o, out);
        if (app.got_subcommand(gen)) {
            if (gen->got_subcommand(structured)) return cmd_gen_structured(o, out);
            return cmd_gen_pinwheel(o, out);
        }
        if (app.got_subcommand(bench)) return cmd_bench(o, out);
        emit_error(err, o.format, "no subcommand selected");
        return 1;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            return app.exit(e, out, err);  // --help lands here
        }
        emit_error(err, o.format, std::string("usage error: ") + e.what());
        return 1;
    } catch (const ExitWith& e) {
        emit_error(err, o.format, e.message);
        return e.code;
    } catch (const MeshError& e) {
        emit_error(err, o.format, e.what());
        return 2;
    } catch (const std::exception& e) {
        emit_error(err, o.format, e.what());
        return 1;
    }
}

}  // namespace sweeporder::cli
