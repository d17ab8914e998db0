#include "waypath/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "waypath/baselines.hpp"
#include "waypath/clustering.hpp"
#include "waypath/errors.hpp"
#include "waypath/mcts.hpp"
#include "waypath/util.hpp"

namespace waypath {

namespace {

constexpr double kLayerPitch = 0.3;  // mm between generated layers

Contour make_rect(int id, int layer, double x, double y, double w, double h, double z) {
    Contour c;
    c.id = id;
    c.layer = layer;
    c.closed = true;
    const Point3 p0{x, y, z};
    const Point3 p1{x + w, y, z};
    const Point3 p2{x + w, y + h, z};
    const Point3 p3{x, y + h, z};
    c.segments = {{p0, p1}, {p1, p2}, {p2, p3}, {p3, p0}};
    return c;
}

}  // namespace

Model generate_towers(int k, int layers, double spacing, double side,
                      std::uint64_t seed) {
    Rng rng(seed);
    const int cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(k))));
    std::vector<std::pair<double, double>> origins;
    origins.reserve(k);
    for (int t = 0; t < k; ++t) {
        const double jx = rng.range(-0.1 * side, 0.1 * side);
        const double jy = rng.range(-0.1 * side, 0.1 * side);
        origins.emplace_back((t % cols) * spacing + jx, (t / cols) * spacing + jy);
    }

    Model m;
    m.name = "towers-k" + std::to_string(k) + "-l" + std::to_string(layers) + "-seed" +
             std::to_string(seed);
    std::vector<double> contour_z;
    for (int l = 0; l < layers; ++l) {
        const double z = (l + 1) * kLayerPitch;
        for (int t = 0; t < k; ++t) {
            const int id = static_cast<int>(m.contours.size());
            m.contours.push_back(
                make_rect(id, l, origins[t].first, origins[t].second, side, side, z));
            contour_z.push_back(z);
        }
    }
    assign_layers(m, contour_z);
    return m;
}

Model generate_random_model(int n, int layers, std::uint64_t seed) {
    Rng rng(seed);
    Model m;
    m.name = "random-n" + std::to_string(n) + "-seed" + std::to_string(seed);
    std::vector<double> contour_z;
    for (int i = 0; i < n; ++i) {
        const int layer = static_cast<int>(rng.bounded(static_cast<std::size_t>(layers)));
        const double x = rng.range(5.0, 85.0);
        const double y = rng.range(5.0, 85.0);
        const double w = rng.range(2.0, 8.0);
        const double h = rng.range(2.0, 8.0);
        const double z = (layer + 1) * kLayerPitch;
        m.contours.push_back(make_rect(i, layer, x, y, w, h, z));
        contour_z.push_back(z);
    }
    assign_layers(m, contour_z);
    return m;
}

Model generate_plate_stack(int layers, int per_layer, double side, double gap,
                           std::uint64_t seed) {
    Model m;
    m.name = "plates-l" + std::to_string(layers) + "-p" + std::to_string(per_layer) +
             "-seed" + std::to_string(seed);
    std::vector<double> contour_z;
    for (int l = 0; l < layers; ++l) {
        const double z = (l + 1) * kLayerPitch;
        for (int p = 0; p < per_layer; ++p) {
            const int id = static_cast<int>(m.contours.size());
            m.contours.push_back(make_rect(id, l, p * (side + gap), 0.0, side, side, z));
            contour_z.push_back(z);
        }
    }
    assign_layers(m, contour_z);
    return m;
}

namespace {

std::int64_t ms_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - t0)
        .count();
}

BenchRow bench_one(const Model& m, const BenchConfig& cfg, std::uint64_t row_seed) {
    BenchRow row;
    row.model = m.name;
    row.contours = static_cast<int>(m.contours.size());
    row.seed = row_seed;

    const DependencyGraph d = build_dependency_graph(m, cfg.extruder);
    const ClusteredGraph cg = cluster_dependency_graph(d, {cfg.gamma});
    row.clusters = cg.cluster_count();

    // Layerwise always runs: it is the reduction baseline.
    PlannerStats layerwise;
    {
        const auto t0 = std::chrono::steady_clock::now();
        const Toolpath t = plan_layerwise(m, d);
        layerwise.ran = true;
        layerwise.travel_mm = t.travel;
        layerwise.wall_ms = ms_since(t0);
    }
    const double base = layerwise.travel_mm;
    auto reduction = [base](double travel) {
        return base > 0.0 ? 100.0 * (base - travel) / base : 0.0;
    };
    layerwise.reduction_pct = 0.0;
    row.planners["layerwise"] = layerwise;

    for (const std::string& planner : cfg.planners) {
        if (planner == "layerwise" || row.planners.count(planner)) continue;
        PlannerStats stats;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            if (planner == "greedy") {
                stats.travel_mm = plan_greedy(m, d).travel;
            } else if (planner == "local") {
                stats.travel_mm =
                    plan_local_search(m, d, row_seed, cfg.local_search_passes).travel;
            } else if (planner == "exact") {
                if (row.contours > cfg.exact_limit) continue;  // skip, not an error
                stats.travel_mm = plan_exact(m, d, cfg.exact_limit).travel;
            } else if (planner == "mcts") {
                SearchConfig sc;
                sc.seed = row_seed;
                sc.max_iterations = cfg.mcts_iterations;
                sc.wall_budget = cfg.mcts_wall;
                sc.stagnation_budget = cfg.mcts_stagnation;
                const SearchResult res = search(m, d, cg, sc);
                stats.travel_mm = res.best.travel;
                stats.iterations = res.iterations;
            } else {
                stats.error = "unknown planner";
            }
        } catch (const Error& e) {
            stats.error = e.what();
        }
        stats.wall_ms = ms_since(t0);
        if (stats.error.empty()) {
            stats.ran = true;
            stats.reduction_pct = reduction(stats.travel_mm);
        }
        row.planners[planner] = std::move(stats);
    }
    return row;
}

}  // namespace

BenchReport run_comparison(const std::vector<Model>& models, const BenchConfig& cfg) {
    BenchReport report;
    report.rows.resize(models.size());

    const int jobs = std::max(1, cfg.jobs);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= models.size()) return;
            report.rows[i] = bench_one(models[i], cfg, cfg.seed + i);
        }
    };
    if (jobs == 1 || models.size() <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (std::thread& th : pool) th.join();
    }

    std::sort(report.rows.begin(), report.rows.end(),
              [](const BenchRow& a, const BenchRow& b) { return a.model < b.model; });

    // Median reduction per planner over the rows where it ran.
    std::map<std::string, std::vector<double>> reductions;
    for (const BenchRow& row : report.rows)
        for (const auto& [planner, stats] : row.planners)
            if (stats.ran) reductions[planner].push_back(stats.reduction_pct);
    for (auto& [planner, values] : reductions) {
        std::sort(values.begin(), values.end());
        const std::size_t n = values.size();
        report.median_reduction_pct[planner] =
            n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
    }
    return report;
}

namespace {

const char* kPlannerOrder[] = {"layerwise", "greedy", "local", "mcts", "exact"};

}  // namespace

std::string BenchReport::to_csv() const {
    std::ostringstream os;
    os << "model,planner,contours,clusters,seed,travel_mm,reduction_pct,iterations,"
          "wall_ms,error\n";
    for (const BenchRow& row : rows) {
        for (const char* planner : kPlannerOrder) {
            const auto it = row.planners.find(planner);
            if (it == row.planners.end()) continue;
            const PlannerStats& s = it->second;
            os << row.model << ',' << planner << ',' << row.contours << ','
               << row.clusters << ',' << row.seed << ',';
            if (s.ran) os << format_double(s.travel_mm);
            os << ',';
            if (s.ran) os << format_double(s.reduction_pct);
            os << ',' << s.iterations << ',' << s.wall_ms << ",\"";
            for (char c : s.error) os.put(c == '"' ? '\'' : c);
            os << "\"\n";
        }
    }
    return os.str();
}

std::string BenchReport::to_json() const {
    nlohmann::ordered_json doc;
    doc["models"] = nlohmann::ordered_json::array();
    for (const BenchRow& row : rows) {
        nlohmann::ordered_json jr;
        jr["model"] = row.model;
        jr["contours"] = row.contours;
        jr["clusters"] = row.clusters;
        jr["seed"] = row.seed;
        jr["planners"] = nlohmann::ordered_json::object();
        for (const char* planner : kPlannerOrder) {
            const auto it = row.planners.find(planner);
            if (it == row.planners.end()) continue;
            const PlannerStats& s = it->second;
            nlohmann::ordered_json js;
            js["ran"] = s.ran;
            if (s.ran) {
                js["travel_mm"] = s.travel_mm;
                js["reduction_pct"] = s.reduction_pct;
            }
            if (s.iterations > 0) js["iterations"] = s.iterations;
            js["wall_ms"] = s.wall_ms;
            if (!s.error.empty()) js["error"] = s.error;
            jr["planners"][planner] = std::move(js);
        }
        doc["models"].push_back(std::move(jr));
    }
    doc["median_reduction_pct"] = median_reduction_pct;
    return doc.dump(1) + "\n";
}

}  // namespace waypath
