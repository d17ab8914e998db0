// waypath: anytime toolpath planning over contour dependency graphs.
//
// Subcommands:
//   ingest   convert a G-code file to the native JSON model format
//   plan     run a planner on a model and emit G-code / SVG / traces
//   cluster  inspect the dependency clustering of a model
//   bench    run the planner comparison harness on generated families

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "waypath/baselines.hpp"
#include "waypath/bench.hpp"
#include "waypath/clustering.hpp"
#include "waypath/depgraph.hpp"
#include "waypath/errors.hpp"
#include "waypath/mcts.hpp"
#include "waypath/model_io.hpp"
#include "waypath/util.hpp"

namespace {

using namespace waypath;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << content;
    if (!out) throw Error("short write to " + path);
}

Model load_model(const std::string& path) {
    const std::filesystem::path p(path);
    const std::string ext = p.extension().string();
    if (ext == ".json") return parse_native(read_file(path));
    if (ext == ".gcode") return parse_gcode(read_file(path), p.stem().string());
    throw CLI::ValidationError("input must end in .json or .gcode: " + path);
}

struct PlanOptions {
    std::string input;
    std::string planner = "mcts";
    double gamma = 0.5;
    double clearance = 1.0;
    double cone_slope = 0.0;
    std::uint64_t seed = 0;
    std::int64_t iterations = -1;
    std::int64_t wall_ms = 0;
    std::int64_t stagnation_ms = 300000;
    double ucb = std::numbers::sqrt2;
    std::string rollout_policy = "uniform";
    double greedy_bias = 0.0;
    int local_passes = 50;
    int exact_limit = 9;
    std::string gcode_out;
    std::string svg_dir;
    std::string dot_out;
    std::string trace_out;
    bool trace_wallclock = false;
    double travel_feed = 9000.0;
    double print_feed = 1800.0;
    double extrude_per_mm = 0.05;
};

int run_plan(const PlanOptions& o) {
    const Model m = load_model(o.input);
    const DependencyGraph d =
        build_dependency_graph(m, {o.clearance, o.cone_slope});
    const ClusteredGraph cg = cluster_dependency_graph(d, {o.gamma});

    Toolpath path;
    SearchResult search_result;
    if (o.planner == "layerwise") {
        path = plan_layerwise(m, d);
    } else if (o.planner == "greedy") {
        path = plan_greedy(m, d);
    } else if (o.planner == "local") {
        path = plan_local_search(m, d, o.seed, o.local_passes);
    } else if (o.planner == "exact") {
        path = plan_exact(m, d, o.exact_limit);
    } else if (o.planner == "mcts") {
        SearchConfig sc;
        sc.seed = o.seed;
        sc.max_iterations = o.iterations;
        sc.wall_budget = std::chrono::milliseconds(o.wall_ms);
        sc.stagnation_budget = std::chrono::milliseconds(o.stagnation_ms);
        sc.ucb_constant = o.ucb;
        sc.greedy_bias = o.greedy_bias;
        sc.rollout_policy = o.rollout_policy == "greedy_biased"
                                ? RolloutPolicy::greedy_biased
                                : RolloutPolicy::uniform;
        search_result = search(m, d, cg, sc);
        path.order = search_result.best.flattened;
        path.travel = search_result.best.travel;
        path.planner = "mcts";
        log(LogLevel::info,
            "search iterations=" + std::to_string(search_result.iterations) +
                " elapsed_ms=" + std::to_string(search_result.elapsed_ms));
    } else {
        throw CLI::ValidationError("unknown planner: " + o.planner);
    }

    if (!o.gcode_out.empty())
        write_file(o.gcode_out,
                   emit_gcode(path, m, d, {o.travel_feed, o.print_feed, o.extrude_per_mm}));
    if (!o.svg_dir.empty()) {
        std::filesystem::create_directories(o.svg_dir);
        for (std::size_t layer = 0; layer < m.layer_heights.size(); ++layer) {
            const std::string file = o.svg_dir + "/" + m.name + "_L" +
                                     std::to_string(layer) + ".svg";
            write_file(file, emit_layer_svg(path, m, static_cast<int>(layer)));
        }
    }
    if (!o.dot_out.empty()) write_file(o.dot_out, d.to_dot());
    if (!o.trace_out.empty()) {
        if (o.planner == "mcts")
            write_file(o.trace_out, trace_csv(search_result, o.trace_wallclock));
        else
            log(LogLevel::warn, "--trace applies to the mcts planner only; skipped");
    }

    std::cout << "model=" << m.name << " planner=" << path.planner
              << " contours=" << m.contours.size()
              << " clusters=" << cg.cluster_count()
              << " travel_mm=" << format_double(path.travel) << "\n";
    return 0;
}

struct ClusterOptions {
    std::string input;
    double gamma = 0.5;
    double clearance = 1.0;
    double cone_slope = 0.0;
    std::string dot_out;
    std::string json_out;
    std::string svg_dir;
};

int run_cluster(const ClusterOptions& o) {
    const Model m = load_model(o.input);
    const DependencyGraph d =
        build_dependency_graph(m, {o.clearance, o.cone_slope});
    const ClusteredGraph cg = cluster_dependency_graph(d, {o.gamma});

    std::cout << "model=" << m.name << " contours=" << m.contours.size()
              << " clusters=" << cg.cluster_count()
              << " gamma=" << format_double(o.gamma) << "\n";
    for (const Cluster& cl : cg.clusters()) {
        std::cout << "cluster id=" << cl.id << " size=" << cl.members.size()
                  << " depth=" << cl.min_depth << ".." << cl.max_depth << " members=";
        for (std::size_t k = 0; k < cl.members.size(); ++k) {
            if (k) std::cout << ",";
            std::cout << cl.members[k];
        }
        std::cout << "\n";
    }

    // Connectedness statistics over the same-depth pairs that share at least
    // one dependee or depender (the pairs the clusterer actually scores).
    {
        const TransitiveClosure tc(d);
        std::size_t count = 0;
        double sum = 0.0, lo = 0.0, hi = 0.0;
        for (int i = 0; i < d.contour_count(); ++i) {
            for (int j = i + 1; j < d.contour_count(); ++j) {
                if (d.depth_of(i) != d.depth_of(j)) continue;
                const std::size_t shared_dep = DynamicBitset::intersection_count(
                    tc.ancestors(i), tc.ancestors(j));
                const std::size_t shared_des = DynamicBitset::intersection_count(
                    tc.descendants(i), tc.descendants(j));
                if (shared_dep == 0 && shared_des == 0) continue;
                const double g = degree_of_connectedness(tc, i, j);
                if (count == 0) {
                    lo = hi = g;
                } else {
                    lo = std::min(lo, g);
                    hi = std::max(hi, g);
                }
                sum += g;
                ++count;
            }
        }
        std::cout << "gamma_pairs count=" << count;
        if (count > 0)
            std::cout << " min=" << format_double(lo)
                      << " mean=" << format_double(sum / static_cast<double>(count))
                      << " max=" << format_double(hi);
        std::cout << "\n";
    }

    if (!o.dot_out.empty()) write_file(o.dot_out, cg.to_dot());
    if (!o.json_out.empty()) write_file(o.json_out, cg.to_json());
    if (!o.svg_dir.empty()) {
        // Cluster-colored rendering: reuse the layer SVG over a layerwise path
        // is wrong here; emit simple per-layer colored polylines instead.
        std::filesystem::create_directories(o.svg_dir);
        for (std::size_t layer = 0; layer < m.layer_heights.size(); ++layer) {
            std::ostringstream os;
            double min_x = 0, min_y = 0, max_x = 0, max_y = 0;
            bool first = true;
            for (const Contour& c : m.contours) {
                const Rect2 r = xy_footprint(c);
                if (first) {
                    min_x = r.min_x; min_y = r.min_y; max_x = r.max_x; max_y = r.max_y;
                    first = false;
                } else {
                    min_x = std::min(min_x, r.min_x);
                    min_y = std::min(min_y, r.min_y);
                    max_x = std::max(max_x, r.max_x);
                    max_y = std::max(max_y, r.max_y);
                }
            }
            const double pad = 2.0;
            os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
               << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"0 0 "
               << format_double(max_x - min_x + 2 * pad) << " "
               << format_double(max_y - min_y + 2 * pad) << "\">\n";
            for (const Contour& c : m.contours) {
                if (c.layer != static_cast<int>(layer)) continue;
                os << "<polyline fill=\"none\" stroke=\""
                   << cg.color_of(cg.cluster_of(c.id)) << "\" stroke-width=\"0.3\" points=\"";
                os << format_double(c.segments.front().start.x - min_x + pad) << ","
                   << format_double(max_y - c.segments.front().start.y + pad);
                for (const LineSegment& s : c.segments)
                    os << " " << format_double(s.end.x - min_x + pad) << ","
                       << format_double(max_y - s.end.y + pad);
                os << "\"/>\n";
            }
            os << "</svg>\n";
            write_file(o.svg_dir + "/" + m.name + "_L" + std::to_string(layer) + ".svg",
                       os.str());
        }
    }
    return 0;
}

struct IngestOptions {
    std::string input;
    std::string output;
};

int run_ingest(const IngestOptions& o) {
    const std::filesystem::path p(o.input);
    if (p.extension() != ".gcode")
        throw CLI::ValidationError("ingest expects a .gcode input");
    const Model m = parse_gcode(read_file(o.input), p.stem().string());
    write_file(o.output, emit_native(m));
    std::cout << "model=" << m.name << " contours=" << m.contours.size()
              << " layers=" << m.layer_heights.size() << "\n";
    return 0;
}

struct BenchOptions {
    std::string family = "towers";
    int k = 4;
    int layers = 20;
    double spacing = 40.0;
    double side = 4.0;
    int n = 20;
    int count = 1;
    std::uint64_t seed = 1;
    double gamma = 0.5;
    double clearance = 1.0;
    double cone_slope = 0.0;
    std::int64_t iterations = 20000;
    std::int64_t stagnation_ms = 300000;
    int local_passes = 50;
    int exact_limit = 9;
    int jobs = 1;
    std::string out_dir = ".";
    std::vector<std::string> planners{"layerwise", "greedy", "local", "mcts"};
    std::vector<std::string> inputs;
};

int run_bench(const BenchOptions& o) {
    std::vector<Model> models;
    for (int i = 0; i < o.count; ++i) {
        const std::uint64_t seed = o.seed + static_cast<std::uint64_t>(i);
        if (o.family == "towers")
            models.push_back(generate_towers(o.k, o.layers, o.spacing, o.side, seed));
        else if (o.family == "random")
            models.push_back(generate_random_model(o.n, o.layers, seed));
        else if (o.family == "plates")
            models.push_back(generate_plate_stack(o.layers, o.k, o.side, 1.0, seed));
        else
            throw CLI::ValidationError("unknown family: " + o.family);
    }
    for (const std::string& path : o.inputs) models.push_back(load_model(path));

    BenchConfig cfg;
    cfg.gamma = o.gamma;
    cfg.extruder = {o.clearance, o.cone_slope};
    cfg.seed = o.seed;
    cfg.mcts_iterations = o.iterations;
    cfg.mcts_stagnation = std::chrono::milliseconds(o.stagnation_ms);
    cfg.local_search_passes = o.local_passes;
    cfg.exact_limit = o.exact_limit;
    cfg.planners = o.planners;
    cfg.jobs = o.jobs;

    const BenchReport report = run_comparison(models, cfg);
    std::filesystem::create_directories(o.out_dir);
    write_file(o.out_dir + "/report.csv", report.to_csv());
    write_file(o.out_dir + "/report.json", report.to_json());
    for (const auto& [planner, median] : report.median_reduction_pct)
        std::cout << "median_reduction planner=" << planner
                  << " pct=" << format_double(median) << "\n";
    std::cout << "rows=" << report.rows.size() << " out=" << o.out_dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"anytime toolpath planner for FDM printing"};
    app.require_subcommand(1);

    PlanOptions plan_opts;
    CLI::App* plan = app.add_subcommand("plan", "plan a toolpath for a model");
    plan->add_option("input", plan_opts.input, "model file (.json or .gcode)")->required();
    plan->add_option("--planner", plan_opts.planner,
                     "layerwise|greedy|local|exact|mcts");
    plan->add_option("--gamma", plan_opts.gamma, "clustering threshold");
    plan->add_option("--clearance", plan_opts.clearance, "nozzle clearance radius, mm");
    plan->add_option("--cone-slope", plan_opts.cone_slope, "clearance growth per mm");
    plan->add_option("--seed", plan_opts.seed, "random seed");
    plan->add_option("--iterations", plan_opts.iterations, "mcts iteration cap (-1 none)");
    plan->add_option("--wall-ms", plan_opts.wall_ms, "mcts wall budget (0 none)");
    plan->add_option("--stagnation-ms", plan_opts.stagnation_ms,
                     "stop after this long without improvement (0 none)");
    plan->add_option("--ucb", plan_opts.ucb, "UCB exploration constant");
    plan->add_option("--rollout-policy", plan_opts.rollout_policy,
                     "uniform|greedy_biased");
    plan->add_option("--greedy-bias", plan_opts.greedy_bias,
                     "greedy step probability under greedy_biased");
    plan->add_option("--local-passes", plan_opts.local_passes,
                     "local search pass budget");
    plan->add_option("--exact-limit", plan_opts.exact_limit,
                     "contour cap for the exact planner");
    plan->add_option("--gcode", plan_opts.gcode_out, "write planned G-code here");
    plan->add_option("--svg-dir", plan_opts.svg_dir, "write per-layer SVGs here");
    plan->add_option("--dot", plan_opts.dot_out, "write dependency graph DOT here");
    plan->add_option("--trace", plan_opts.trace_out, "write convergence CSV here");
    plan->add_flag("--trace-wallclock", plan_opts.trace_wallclock,
                   "record measured elapsed_ms in the trace (not reproducible)");
    plan->add_option("--travel-feed", plan_opts.travel_feed, "G0 feed, mm/min");
    plan->add_option("--print-feed", plan_opts.print_feed, "G1 feed, mm/min");
    plan->add_option("--extrude-per-mm", plan_opts.extrude_per_mm,
                     "filament units per printed mm");

    ClusterOptions cluster_opts;
    CLI::App* cluster = app.add_subcommand("cluster", "inspect dependency clustering");
    cluster->add_option("input", cluster_opts.input, "model file (.json or .gcode)")
        ->required();
    cluster->add_option("--gamma", cluster_opts.gamma, "clustering threshold");
    cluster->add_option("--clearance", cluster_opts.clearance, "nozzle clearance radius");
    cluster->add_option("--cone-slope", cluster_opts.cone_slope, "clearance growth");
    cluster->add_option("--dot", cluster_opts.dot_out, "write cluster DOT here");
    cluster->add_option("--json", cluster_opts.json_out, "write cluster JSON here");
    cluster->add_option("--svg-dir", cluster_opts.svg_dir,
                        "write cluster-colored per-layer SVGs here");

    IngestOptions ingest_opts;
    CLI::App* ingest = app.add_subcommand("ingest", "convert G-code to native JSON");
    ingest->add_option("input", ingest_opts.input, "G-code file")->required();
    ingest->add_option("-o,--output", ingest_opts.output, "output JSON path")->required();

    BenchOptions bench_opts;
    CLI::App* bench = app.add_subcommand("bench", "run the comparison harness");
    bench->add_option("--family", bench_opts.family, "towers|random|plates");
    bench->add_option("--k", bench_opts.k, "towers/plates per layer");
    bench->add_option("--layers", bench_opts.layers, "layer count");
    bench->add_option("--spacing", bench_opts.spacing, "tower grid spacing, mm");
    bench->add_option("--side", bench_opts.side, "square side, mm");
    bench->add_option("--n", bench_opts.n, "contours per random model");
    bench->add_option("--count", bench_opts.count, "instances of the family");
    bench->add_option("--seed", bench_opts.seed, "base seed");
    bench->add_option("--gamma", bench_opts.gamma, "clustering threshold");
    bench->add_option("--clearance", bench_opts.clearance, "nozzle clearance radius");
    bench->add_option("--cone-slope", bench_opts.cone_slope, "clearance growth");
    bench->add_option("--iterations", bench_opts.iterations, "mcts iteration cap");
    bench->add_option("--stagnation-ms", bench_opts.stagnation_ms,
                      "mcts stagnation budget");
    bench->add_option("--local-passes", bench_opts.local_passes, "local search passes");
    bench->add_option("--exact-limit", bench_opts.exact_limit, "exact planner cap");
    bench->add_option("--jobs", bench_opts.jobs, "parallel rows");
    bench->add_option("--out-dir", bench_opts.out_dir, "report directory");
    bench->add_option("--planners", bench_opts.planners,
                      "planners to run (layerwise greedy local mcts exact)");
    bench->add_option("--input", bench_opts.inputs, "extra model files to include");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand(plan)) return run_plan(plan_opts);
        if (app.got_subcommand(cluster)) return run_cluster(cluster_opts);
        if (app.got_subcommand(ingest)) return run_ingest(ingest_opts);
        if (app.got_subcommand(bench)) return run_bench(bench_opts);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "waypath: " << e.what() << "\n";
        return 1;
    } catch (const TooLargeError& e) {
        std::cerr << "waypath: " << e.what() << "\n";
        return 1;
    } catch (const InfeasibleToolpathError& e) {
        std::cerr << "waypath: " << e.what() << "\n";
        return 3;
    } catch (const NotAPermutationError& e) {
        std::cerr << "waypath: " << e.what() << "\n";
        return 3;
    } catch (const LayerOutOfRangeError& e) {
        std::cerr << "waypath: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        // Parse, schema, model and I/O failures: bad input.
        std::cerr << "waypath: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "waypath: internal error: " << e.what() << "\n";
        return 3;
    }
    return 1;
}
