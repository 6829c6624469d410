// Acceptance gate for the toolkit: eight checks, one verdict line each.
// Usage: acceptance [path-to-cli]   (the cli path is needed by check 8)
//
// Heavy checks share one benchmark sweep: the desk preset over seeds 1..5,
// four arms each (teacher, student-alone, uniform kd, staged kd).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "slkd/slkd.hpp"

#include "../support/fd_check.hpp"

using namespace slkd;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v, const char* spec = "%.4g") {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

void progress(const std::string& msg) { std::cerr << "  .. " << msg << "\n"; }

// ---- check 1: finite-difference gradient sweep ------------------------------

Verdict check_gradients() {
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    long long coords = 0;
    auto run_spec = [&](const ModelSpec& spec, int batch, std::uint64_t seed) {
        const fd::Report r = fd::check_spec(spec, batch, 20, seed);
        worst = std::max(worst, r.max_rel_err);
        coords += r.coords;
    };

    ModelSpec dense1;
    dense1.input_shape = {4};
    dense1.layers = {LayerSpec::dense(4, 3)};
    run_spec(dense1, 3, 101);

    ModelSpec mlp;
    mlp.input_shape = {6};
    mlp.layers = {LayerSpec::dense(6, 5), LayerSpec::relu(), LayerSpec::dense(5, 3)};
    run_spec(mlp, 3, 102);

    ModelSpec conv;
    conv.input_shape = {2, 4, 4};
    conv.layers = {LayerSpec::conv3x3(2, 3), LayerSpec::flatten(), LayerSpec::dense(48, 2)};
    run_spec(conv, 2, 103);

    ModelSpec pool;
    pool.input_shape = {1, 4, 4};
    pool.layers = {LayerSpec::maxpool2x2(), LayerSpec::flatten(), LayerSpec::dense(4, 3)};
    run_spec(pool, 2, 104);

    // conv-relu-pool stacked: small enough that kink-free draws stay cheap
    ModelSpec full;
    full.input_shape = {1, 4, 4};
    full.layers = {LayerSpec::conv3x3(1, 2), LayerSpec::relu(), LayerSpec::maxpool2x2(), LayerSpec::flatten(),
                   LayerSpec::dense(8, 3)};
    run_spec(full, 2, 105);

    auto run_loss = [&](const std::function<double(const fd::DTensor&)>& value,
                        const std::function<fd::DTensor(const fd::DTensor&)>& grad, std::uint64_t seed) {
        const fd::Report r = fd::check_loss(value, grad, 4, 5, 20, seed);
        worst = std::max(worst, r.max_rel_err);
        coords += r.coords;
    };

    const Tensor y = one_hot({0, 2, 4, 1}, 5);
    run_loss([&](const fd::DTensor& s) { return cross_entropy(softmax_t(s, 1.0), y); },
             [&](const fd::DTensor& s) { return ce_grad_student<double>(s, y); }, 201);

    Rng rng(202);
    for (double tau : {1.0, 2.0, 4.0, 8.0}) {
        const fd::DTensor t = fd::random_tensor(rng, {4, 5}, -2.0, 2.0);
        run_loss([&](const fd::DTensor& s) { return kd_loss(t, s, tau); },
                 [&](const fd::DTensor& s) { return kd_loss_grad_student(t, s, tau); },
                 300 + static_cast<std::uint64_t>(tau));
    }

    const fd::DTensor tfix = fd::random_tensor(rng, {4, 5}, -2.0, 2.0);
    for (const auto& [mode, lambda] : {std::pair{LossMode::convex, 0.3}, std::pair{LossMode::additive, 2.0}}) {
        const LossMode m = mode;
        const double l = lambda;
        run_loss(
            [&, m, l](const fd::DTensor& s) {
                return student_loss(cross_entropy(softmax_t(s, 1.0), y), kd_loss(tfix, s, 4.0), l, m);
            },
            [&, m, l](const fd::DTensor& s) { return student_loss_grad(tfix, s, y, 4.0, l, m); },
            m == LossMode::convex ? 401 : 402);
    }
    run_loss([&](const fd::DTensor& s) { return slkd_stage_loss(s, tfix, y, 2.0, 0.5).total; },
             [&](const fd::DTensor& s) { return student_loss_grad(tfix, s, y, 2.0, 0.5, LossMode::additive); },
             403);

    const double secs = seconds_since(t0);
    Verdict v;
    v.pass = worst < fd::kTol && secs < 60.0;
    v.detail = "5 layer stacks + 7 loss forms, 20 instances each, " + std::to_string(coords) +
               " coordinates, max rel err " + fmt(worst, "%.3g") + ", " + fmt(secs, "%.1f") + "s";
    return v;
}

// ---- check 2: closed-form loss identities ------------------------------------

Verdict check_identities() {
    Rng rng(7);
    bool ok = true;
    std::string why;

    for (double tau : {1.0, 2.0, 4.0, 8.0})
        for (int rep = 0; rep < 25 && ok; ++rep) {
            Tensor a = Tensor::zeros({3, 6});
            for (float& x : a.data) x = rng.uniform(-8.0f, 8.0f);
            if (kd_loss(a, a, tau) != 0.0) {
                ok = false;
                why = "kd_loss(a,a," + fmt(tau, "%.0f") + ") != 0";
            }
        }

    for (int k = 2; k <= 10 && ok; ++k) {
        Tensor flat = Tensor::zeros({4, k});
        for (int r = 0; r < 4; ++r) {
            const float c = rng.uniform(-3.0f, 3.0f); // constant per row: uniform distribution
            for (int j = 0; j < k; ++j) flat.at2(r, j) = c;
        }
        const Tensor y = one_hot({0, k - 1, k / 2, 1}, k);
        const double ce = cross_entropy(softmax_t(flat, 1.0), y);
        if (std::abs(ce - std::log(static_cast<double>(k))) > 1e-6) {
            ok = false;
            why = "cross_entropy(uniform) != ln " + std::to_string(k);
        }
    }

    for (int rep = 0; rep < 50 && ok; ++rep) {
        const double ce = rng.uniform_unit_double() * 4.0 + 0.01;
        const double kd = rng.uniform_unit_double() * 4.0 + 0.01;
        const bool exact = student_loss(ce, kd, 0.0, LossMode::convex) == ce &&
                           student_loss(ce, kd, 0.0, LossMode::additive) == ce &&
                           student_loss(ce, kd, 1.0, LossMode::convex) == kd &&
                           student_loss(ce, kd, 1.0, LossMode::additive) == ce + kd;
        if (!exact) {
            ok = false;
            why = "lambda 0/1 reduction of student_loss is not exact";
        }
    }

    Verdict v;
    v.pass = ok;
    v.detail = ok ? "kd(a,a,tau)=0 exact for tau in {1,2,4,8}; ce(uniform)=ln K within 1e-6 for K=2..10; "
                    "lambda 0/1 reductions exact"
                  : why;
    return v;
}

// ---- check 3: partition vs exhaustive oracle ---------------------------------

// minimal exhaustive search over per-class stage assignments: minimize
// sum over samples of (n_stages - stage) * difficulty subject to the
// per-class counts staying within one of each other, ties resolved toward
// the lexicographically smallest assignment vector
struct BruteBest {
    double cost = std::numeric_limits<double>::infinity();
    std::vector<int> assign;
};

void brute_assign(const std::vector<ScoredSample>& members, int n_stages, std::size_t pos,
                  std::vector<int>& counts, std::vector<int>& assign, double cost, BruteBest& best) {
    const int q = static_cast<int>(members.size()) / n_stages;
    const int extras = static_cast<int>(members.size()) % n_stages;
    if (pos == members.size()) {
        int at_cap = 0;
        for (int st = 0; st < n_stages; ++st) {
            if (counts[static_cast<std::size_t>(st)] != q && counts[static_cast<std::size_t>(st)] != q + 1) return;
            if (counts[static_cast<std::size_t>(st)] == q + 1) ++at_cap;
        }
        if (at_cap != extras) return;
        if (cost < best.cost || (cost == best.cost && assign < best.assign)) {
            best.cost = cost;
            best.assign = assign;
        }
        return;
    }
    for (int st = 0; st < n_stages; ++st) {
        const int cap = q + (extras > 0 ? 1 : 0);
        if (counts[static_cast<std::size_t>(st)] == cap) continue;
        counts[static_cast<std::size_t>(st)]++;
        assign[pos] = st;
        brute_assign(members, n_stages, pos + 1, counts, assign, cost + (n_stages - st) * static_cast<double>(members[pos].difficulty), best);
        counts[static_cast<std::size_t>(st)]--;
    }
}

std::vector<std::vector<int>> brute_force_partition(const std::vector<ScoredSample>& scores, int n_stages,
                                                    int class_count) {
    std::vector<std::vector<ScoredSample>> per_class(static_cast<std::size_t>(class_count));
    for (const ScoredSample& s : scores) per_class[static_cast<std::size_t>(s.label)].push_back(s);
    std::vector<std::vector<int>> stages(static_cast<std::size_t>(n_stages));
    for (auto& members : per_class) {
        if (members.empty()) continue;
        std::sort(members.begin(), members.end(), [](const ScoredSample& a, const ScoredSample& b) {
            if (a.difficulty != b.difficulty) return a.difficulty < b.difficulty;
            return a.index < b.index;
        });
        BruteBest best;
        std::vector<int> counts(static_cast<std::size_t>(n_stages), 0);
        std::vector<int> assign(members.size(), 0);
        brute_assign(members, n_stages, 0, counts, assign, 0.0, best);
        for (std::size_t i = 0; i < members.size(); ++i)
            stages[static_cast<std::size_t>(best.assign[i])].push_back(members[i].index);
    }
    for (auto& st : stages) std::sort(st.begin(), st.end());
    return stages;
}

Verdict check_curriculum_oracle() {
    Rng rng(404);
    int compared = 0;
    for (int rep = 0; rep < 200 && compared < 120; ++rep) {
        const int n_stages = 1 + static_cast<int>(rng.uniform_int(4));
        const int classes = 1 + static_cast<int>(rng.uniform_int(3));
        std::vector<int> sizes(static_cast<std::size_t>(classes), n_stages);
        int total = classes * n_stages;
        if (total > 12) continue;
        int budget = 12 - total;
        for (int c = 0; c < classes && budget > 0; ++c) {
            const int extra = static_cast<int>(rng.uniform_int(static_cast<std::uint32_t>(budget) + 1));
            sizes[static_cast<std::size_t>(c)] += extra;
            budget -= extra;
        }
        std::vector<ScoredSample> scores;
        int next_index = 0;
        const bool tie_heavy = rep % 2 == 0;
        for (int c = 0; c < classes; ++c)
            for (int i = 0; i < sizes[static_cast<std::size_t>(c)]; ++i) {
                ScoredSample s;
                s.index = next_index++;
                s.label = c;
                s.difficulty = tie_heavy ? 0.1f * (1 + static_cast<int>(rng.uniform_int(4)))
                                         : rng.uniform(0.01f, 1.0f);
                scores.push_back(s);
            }
        rng.shuffle(scores);
        const CurriculumPlan plan =
            partition_balanced(scores, n_stages, classes);
        const auto oracle = brute_force_partition(scores, n_stages, classes);
        if (plan.stages != oracle) {
            Verdict v;
            v.detail = "mismatch vs exhaustive oracle on a " + std::to_string(scores.size()) + "-sample dataset";
            return v;
        }
        ++compared;
    }

    // balance invariant at scale
    int balance_checked = 0;
    for (int rep = 0; rep < 10; ++rep) {
        const int classes = rep == 0 ? 10 : 2 + static_cast<int>(rng.uniform_int(9));
        const int n_stages = rep % 2 == 0 ? 3 : 5;
        std::vector<ScoredSample> scores;
        int next_index = 0;
        for (int c = 0; c < classes; ++c) {
            const int n = rep == 0 ? 1000
                                   : n_stages + static_cast<int>(rng.uniform_int(
                                                    static_cast<std::uint32_t>(1000 - n_stages)));
            for (int i = 0; i < n; ++i) {
                ScoredSample s;
                s.index = next_index++;
                s.label = c;
                s.difficulty = rng.uniform(0.001f, 1.0f);
                scores.push_back(s);
            }
        }
        const CurriculumPlan plan = partition_balanced(scores, n_stages, classes);
        validate_plan(plan);
        for (int c = 0; c < classes; ++c) {
            int mn = std::numeric_limits<int>::max(), mx = 0;
            for (int st = 1; st <= n_stages; ++st) {
                int cnt = 0;
                for (int idx : plan.stages[static_cast<std::size_t>(st - 1)])
                    if (scores[static_cast<std::size_t>(idx)].label == c) ++cnt;
                mn = std::min(mn, cnt);
                mx = std::max(mx, cnt);
            }
            if (mx - mn > 1) {
                Verdict v;
                v.detail = "class " + std::to_string(c) + " spread " + std::to_string(mx - mn) + " > 1";
                return v;
            }
        }
        ++balance_checked;
    }

    Verdict v;
    v.pass = true;
    v.detail = std::to_string(compared) + " exhaustive comparisons (ties included) identical; balance within 1 on " +
               std::to_string(balance_checked) + " datasets up to 10 classes x 1000 samples";
    return v;
}

// ---- checks 4..7 share the desk benchmark sweep -------------------------------

struct DeskSweep {
    RunConfig base;
    std::vector<double> teacher_acc, alone_acc, kd_acc, slkd_acc;
    std::vector<TrainOutcome> slkd_outcomes;
    std::vector<Dataset> trains;
    TrainOutcome teacher1, kd1; // seed 1, reused by the accounting check
    Model teacher1_model;
    double secs = 0.0;
};

DeskSweep run_desk_sweep() {
    DeskSweep s;
    s.base = preset_desk_blobs();
    const auto t0 = std::chrono::steady_clock::now();
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        RunConfig cfg = s.base;
        cfg.seed = seed;
        Dataset train, test;
        load_data(cfg, train, test);
        const TrainOutcome teacher = train_teacher(cfg, train, test);
        const TrainOutcome alone = train_supervised(cfg, train, test);
        const TrainOutcome kd = distill_kd(teacher.model, cfg, train, test);
        TrainOutcome slkd_out = distill_slkd(teacher.model, cfg, train, test);
        s.teacher_acc.push_back(teacher.final_test_acc());
        s.alone_acc.push_back(alone.final_test_acc());
        s.kd_acc.push_back(kd.final_test_acc());
        s.slkd_acc.push_back(slkd_out.final_test_acc());
        if (seed == 1) {
            s.teacher1 = teacher;
            s.teacher1_model = teacher.model;
            s.kd1 = kd;
        }
        s.slkd_outcomes.push_back(std::move(slkd_out));
        s.trains.push_back(std::move(train));
        progress("desk sweep seed " + std::to_string(seed) + ": teacher " + fmt(s.teacher_acc.back()) +
                 " alone " + fmt(s.alone_acc.back()) + " kd " + fmt(s.kd_acc.back()) + " slkd " +
                 fmt(s.slkd_acc.back()));
    }
    s.secs = seconds_since(t0);
    return s;
}

Verdict check_accounting(const DeskSweep& s) {
    const RunConfig& cfg = s.base;
    const int n = cfg.data.class_count * cfg.data.per_class_train;
    const long long kd_closed =
        static_cast<long long>(cfg.epochs_total) * epoch_iterations(n, cfg.batch_size);

    Verdict v;
    for (std::size_t i = 0; i < s.slkd_outcomes.size(); ++i) {
        const TrainOutcome& out = s.slkd_outcomes[i];
        long long closed = static_cast<long long>(cfg.slkd.initial_kd_epochs + cfg.slkd.final_epochs) *
                           epoch_iterations(n, cfg.batch_size);
        for (int st = 1; st <= cfg.slkd.n_stages; ++st) {
            const auto active = stage_active_set(out.plans[static_cast<std::size_t>(st - 1)], st);
            closed += static_cast<long long>(cfg.slkd.stage_epochs[static_cast<std::size_t>(st - 1)]) *
                      epoch_iterations(static_cast<int>(active.size()), cfg.batch_size);
        }
        if (out.total_iterations() != closed) {
            v.detail = "seed " + std::to_string(i + 1) + ": recorded " + std::to_string(out.total_iterations()) +
                       " != closed form " + std::to_string(closed);
            return v;
        }
        if (!(out.total_iterations() < kd_closed)) {
            v.detail = "staged count " + std::to_string(out.total_iterations()) + " not below uniform " +
                       std::to_string(kd_closed);
            return v;
        }
    }
    if (s.kd1.total_iterations() != kd_closed) {
        v.detail = "uniform arm recorded " + std::to_string(s.kd1.total_iterations()) + " != 60*ceil(n/B) " +
                   std::to_string(kd_closed);
        return v;
    }
    v.pass = true;
    v.detail = "staged " + std::to_string(s.slkd_outcomes[0].total_iterations()) + " vs uniform " +
               std::to_string(kd_closed) + " iterations (both match their closed forms on all 5 seeds)";
    return v;
}

Verdict check_benchmark(const DeskSweep& s) {
    const double mt = median(s.teacher_acc);
    const double ma = median(s.alone_acc);
    const double mk = median(s.kd_acc);
    const double ms = median(s.slkd_acc);
    Verdict v;
    const bool order = mt > ms && ms >= mk && mk >= ma && (ms - mk) >= 0.0;
    const bool fast = s.secs < 600.0;
    v.pass = order && fast;
    v.detail = "5-seed medians: teacher " + fmt(mt) + " > slkd " + fmt(ms) + " >= kd " + fmt(mk) +
               " >= alone " + fmt(ma) + ", slkd-kd " + fmt(ms - mk, "%+.4f") + ", " + fmt(s.secs, "%.0f") + "s";
    if (!order) v.detail = "ordering violated: " + v.detail;
    if (!fast) v.detail += " (over the 600s budget)";
    return v;
}

Verdict check_lessons(const DeskSweep& s) {
    Verdict v;
    std::string first;
    for (std::size_t i = 0; i < s.slkd_outcomes.size(); ++i) {
        const TrainOutcome& out = s.slkd_outcomes[i];
        const auto stats = lesson_report(out.model, out.plans.back(), s.trains[i]);
        for (std::size_t k = 1; k < stats.size(); ++k)
            if (stats[k].mean_loss < stats[k - 1].mean_loss) {
                v.detail = "seed " + std::to_string(i + 1) + ": stage " + std::to_string(k + 1) + " mean loss " +
                           fmt(stats[k].mean_loss) + " below stage " + std::to_string(k) + " (" +
                           fmt(stats[k - 1].mean_loss) + ")";
                return v;
            }
        if (i == 0) {
            first = "seed 1 tier losses";
            for (const LessonStat& st : stats) first += " " + fmt(st.mean_loss);
        }
    }
    v.pass = true;
    v.detail = first + ", non-decreasing on all 5 seeds";
    return v;
}

Verdict check_determinism(const DeskSweep& s) {
    RunConfig cfg = s.base;
    cfg.seed = 1;
    Dataset train, test;
    load_data(cfg, train, test);
    const TrainOutcome rerun = distill_slkd(s.teacher1_model, cfg, train, test);
    const TrainOutcome& orig = s.slkd_outcomes[0];

    Verdict v;
    if (record_to_csv(rerun.record) != record_to_csv(orig.record)) {
        v.detail = "repeat run produced a different train record";
        return v;
    }
    if (!models_bit_identical(rerun.model, orig.model)) {
        v.detail = "repeat run produced different weights";
        return v;
    }

    const auto bytes = serialize_checkpoint(orig.model, orig.opt, json{{"arm", "slkd"}});
    const Checkpoint back = parse_checkpoint(bytes, "memory");
    if (serialize_checkpoint(back.model, back.opt, back.meta) != bytes || !models_bit_identical(back.model, orig.model)) {
        v.detail = "checkpoint round trip is not bit-exact";
        return v;
    }

    const std::string csv = export_plan_csv(orig.plans.back());
    const CurriculumPlan round = import_plan_csv(csv);
    if (export_plan_csv(round) != csv || round.stages != orig.plans.back().stages) {
        v.detail = "plan csv round trip changed the plan";
        return v;
    }

    v.pass = true;
    v.detail = "repeat run record identical (" + std::to_string(record_to_csv(orig.record).size()) +
               " bytes); checkpoint and plan csv round trips bit-exact";
    return v;
}

// ---- check 8: the ablation subcommand ----------------------------------------

Verdict check_ablation_cli(const std::string& cli) {
    Verdict v;
    if (cli.empty()) {
        v.detail = "no cli path given (expected as argv[1])";
        return v;
    }
    namespace fs = std::filesystem;
    const auto ns = std::chrono::steady_clock::now().time_since_epoch().count();
    const fs::path root = fs::temp_directory_path() / ("slkd_accept_" + std::to_string(ns));
    fs::create_directories(root);

    const std::string cmd = "\"" + cli + "\" ablate-snapshots --preset desk-blobs --seed 1 --out \"" +
                            root.string() + "\" > \"" + (root / "stdout.txt").string() + "\" 2>&1";
    progress("running: " + cmd);
    const int rc = std::system(cmd.c_str());
    if (rc != 0) {
        v.detail = "cli exited with status " + std::to_string(rc) + " (artifacts kept at " + root.string() + ")";
        return v;
    }

    const RunConfig preset = preset_desk_blobs();
    const fs::path run_dir =
        root / ("ablate-snapshots-" + preset.name + "-" + config_hash(preset).substr(0, 8) + "-s1");
    const fs::path record = run_dir / "ablation.json";
    if (!fs::exists(record)) {
        v.detail = "paired record " + record.string() + " missing";
        return v;
    }
    json paired;
    try {
        paired = json::parse(read_text_file(record.string()));
    } catch (const std::exception& e) {
        v.detail = std::string("paired record unreadable: ") + e.what();
        return v;
    }
    if (!paired.contains("snapshot_s") || !paired.contains("snapshot_t")) {
        v.detail = "paired record lacks the two arms";
        return v;
    }
    const double acc_s = paired["snapshot_s"].value("final_test_acc", -1.0);
    const double acc_t = paired["snapshot_t"].value("final_test_acc", -1.0);

    std::error_code ec;
    fs::remove_all(root, ec);

    v.pass = acc_s >= 0.0 && acc_t >= 0.0;
    v.detail = "both arms completed; snapshot-S " + fmt(acc_s) + " vs snapshot-T " + fmt(acc_t) +
               " at desk scale (informational, like the full-scale reference 70.02 vs 68.11; not asserted)";
    return v;
}

} // namespace

int main(int argc, char** argv) {
    const std::string cli = argc > 1 ? argv[1] : "";
    std::vector<std::pair<std::string, Verdict>> results(8);

    auto guard = [](const char* name, auto&& fn) -> Verdict {
        try {
            return fn();
        } catch (const std::exception& e) {
            Verdict v;
            v.detail = std::string(name) + " threw: " + e.what();
            return v;
        }
    };

    progress("gradient sweep");
    results[0] = {"gradient suite", guard("gradient suite", check_gradients)};
    progress("loss identities");
    results[1] = {"loss identities", guard("loss identities", check_identities)};
    progress("curriculum oracle");
    results[2] = {"curriculum oracle", guard("curriculum oracle", check_curriculum_oracle)};

    DeskSweep sweep;
    bool sweep_ok = false;
    try {
        sweep = run_desk_sweep();
        sweep_ok = true;
    } catch (const std::exception& e) {
        const std::string why = std::string("desk sweep threw: ") + e.what();
        for (int i = 3; i <= 6; ++i) results[static_cast<std::size_t>(i)].second.detail = why;
    }
    if (sweep_ok) {
        results[3] = {"iteration accounting", guard("iteration accounting", [&] { return check_accounting(sweep); })};
        results[4] = {"desk benchmark ordering", guard("desk benchmark", [&] { return check_benchmark(sweep); })};
        results[5] = {"lesson report monotonicity", guard("lesson report", [&] { return check_lessons(sweep); })};
        results[6] = {"determinism and round trips", guard("determinism", [&] { return check_determinism(sweep); })};
    } else {
        results[3].first = "iteration accounting";
        results[4].first = "desk benchmark ordering";
        results[5].first = "lesson report monotonicity";
        results[6].first = "determinism and round trips";
    }
    progress("ablation cli");
    results[7] = {"snapshot-source ablation", guard("ablation cli", [&] { return check_ablation_cli(cli); })};

    bool all = true;
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& [name, v] = results[i];
        std::cout << (v.pass ? "[PASS]" : "[FAIL]") << " criterion " << (i + 1) << ": " << name << " — "
                  << v.detail << "\n";
        all = all && v.pass;
    }
    return all ? 0 : 1;
}
