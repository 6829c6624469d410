#pragma once

#include <algorithm>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "slkd/textio.hpp"
#include "slkd/trainer.hpp"

namespace slkd {

// sorted middle element; even-sized lists average the two middles
inline double median(std::vector<double> v) {
    require(!v.empty(), "median: empty list");
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    if (n % 2 == 1) return v[n / 2];
    return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// One experiment arm across seeds. The median is always recomputed from the
// per-seed list, never cached.
struct ComparisonRow {
    std::string arm;
    std::vector<std::uint64_t> seeds;
    std::vector<double> accuracies;      // final test accuracy per seed, seed order
    std::vector<long long> iterations;   // cumulative training iterations per seed

    double median_accuracy() const { return median(accuracies); }
    long long max_iterations() const {
        long long m = 0;
        for (long long it : iterations) m = std::max(m, it);
        return m;
    }
};

struct ComparisonTable {
    std::vector<ComparisonRow> rows;
};

// group per-run summaries (run_meta.json contents) into a table by arm
inline ComparisonTable build_comparison(const std::vector<json>& metas) {
    std::map<std::string, ComparisonRow> by_arm;
    for (const json& m : metas) {
        require(m.contains("arm") && m.contains("seed") && m.contains("final_test_acc"),
                "run meta: needs arm, seed and final_test_acc fields");
        ComparisonRow& row = by_arm[m["arm"].get<std::string>()];
        row.arm = m["arm"].get<std::string>();
        row.seeds.push_back(m["seed"].get<std::uint64_t>());
        row.accuracies.push_back(m["final_test_acc"].get<double>());
        row.iterations.push_back(m.value("cum_iters", 0LL));
    }
    ComparisonTable t;
    for (auto& [arm, row] : by_arm) {
        // keep the per-seed lists in seed order for stable output
        std::vector<std::size_t> order(row.seeds.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return row.seeds[a] < row.seeds[b]; });
        ComparisonRow sorted;
        sorted.arm = row.arm;
        for (std::size_t i : order) {
            sorted.seeds.push_back(row.seeds[i]);
            sorted.accuracies.push_back(row.accuracies[i]);
            sorted.iterations.push_back(row.iterations[i]);
        }
        t.rows.push_back(std::move(sorted));
    }
    return t;
}

// every run_meta.json found one level under root (one directory per run)
inline std::vector<json> scan_run_metas(const std::string& root) {
    require(std::filesystem::is_directory(root), "report: '" + root + "' is not a directory");
    std::vector<std::filesystem::path> metas;
    for (const auto& entry : std::filesystem::directory_iterator(root)) {
        if (!entry.is_directory()) continue;
        const auto meta = entry.path() / "run_meta.json";
        if (std::filesystem::exists(meta)) metas.push_back(meta);
        // ablation runs keep their arms one level deeper
        for (const auto& sub : std::filesystem::directory_iterator(entry.path())) {
            if (!sub.is_directory()) continue;
            const auto submeta = sub.path() / "run_meta.json";
            if (std::filesystem::exists(submeta)) metas.push_back(submeta);
        }
    }
    std::sort(metas.begin(), metas.end());
    std::vector<json> out;
    for (const auto& p : metas) {
        try {
            out.push_back(json::parse(read_text_file(p.string())));
        } catch (const json::exception& e) {
            fail("report: " + p.string() + " is not valid JSON: " + e.what());
        }
    }
    return out;
}

inline std::string comparison_to_text(const ComparisonTable& t) {
    std::string out;
    out += "arm              median_acc  per_seed_acc";
    out += std::string(29, ' ');
    out += "cum_iters\n";
    for (const ComparisonRow& r : t.rows) {
        char head[64];
        std::snprintf(head, sizeof head, "%-16s %9.4f   ", r.arm.c_str(), r.median_accuracy());
        out += head;
        std::string per;
        for (std::size_t i = 0; i < r.accuracies.size(); ++i) {
            if (i) per += " ";
            char b[32];
            std::snprintf(b, sizeof b, "%.4f", r.accuracies[i]);
            per += b;
        }
        per.resize(std::max<std::size_t>(per.size(), 40), ' ');
        out += per;
        out += "  " + std::to_string(r.max_iterations());
        out += "\n";
    }
    return out;
}

inline std::string comparison_to_csv(const ComparisonTable& t) {
    std::string out = "arm,median_acc,seed,acc,cum_iters\n";
    for (const ComparisonRow& r : t.rows)
        for (std::size_t i = 0; i < r.seeds.size(); ++i) {
            out += r.arm;
            out += ',';
            out += fmt_f64(r.median_accuracy());
            out += ',';
            out += std::to_string(r.seeds[i]);
            out += ',';
            out += fmt_f64(r.accuracies[i]);
            out += ',';
            out += std::to_string(r.iterations[i]);
            out += '\n';
        }
    return out;
}

// the per-run summary the CLI drops next to each run's artifacts
inline json run_meta_json(const RunConfig& cfg, const std::string& arm, const TrainOutcome& out) {
    json j;
    j["arm"] = arm;
    j["name"] = cfg.name;
    j["seed"] = cfg.seed;
    j["config_hash"] = config_hash(cfg);
    j["config"] = config_to_json(cfg);
    j["final_test_acc"] = out.final_test_acc();
    j["best_test_acc"] = out.best_test_acc;
    j["best_epoch"] = out.best_epoch;
    j["cum_iters"] = out.total_iterations();
    j["final_ckpt"] = out.final_ckpt_id;
    j["best_ckpt"] = out.best_ckpt_id;
    json plans = json::array();
    for (const CurriculumPlan& p : out.plans) plans.push_back(p.source_snapshot);
    j["plan_snapshots"] = plans;
    return j;
}

} // namespace slkd
