#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "slkd/curriculum.hpp"
#include "slkd/dataset.hpp"
#include "slkd/rng.hpp"

using namespace slkd;

namespace {

// ---- exhaustive reference minimizer -----------------------------------------
// The partition weights stage s by (N+1-s), so easy samples surface early and
// the objective sum((N+1-stage_i) * difficulty_i) is minimal over all
// assignments whose per-stage class counts stay within +-1. Ties resolve to
// the lexicographically smallest stage vector over members sorted by
// (difficulty, index). Costs are exact: float difficulties times small
// integer weights accumulate in double without rounding.

struct BruteBest {
    double cost = std::numeric_limits<double>::infinity();
    std::vector<int> assign; // stage per sorted member, 1-based
};

void brute_assign(const std::vector<const ScoredSample*>& members, int n_stages, std::size_t pos,
                  std::vector<int>& counts, std::vector<int>& assign, double cost, BruteBest& best) {
    const int m = static_cast<int>(members.size());
    const int q = m / n_stages;
    const int extras = m % n_stages;
    if (pos == members.size()) {
        int over = 0;
        for (int st = 0; st < n_stages; ++st) {
            if (counts[static_cast<std::size_t>(st)] == q + 1) ++over;
            else if (counts[static_cast<std::size_t>(st)] != q) return;
        }
        if (over != extras) return;
        if (cost < best.cost || (cost == best.cost && assign < best.assign)) {
            best.cost = cost;
            best.assign = assign;
        }
        return;
    }
    for (int st = 0; st < n_stages; ++st) {
        if (counts[static_cast<std::size_t>(st)] == q + (extras > 0 ? 1 : 0)) continue; // stage full
        counts[static_cast<std::size_t>(st)]++;
        assign[pos] = st + 1;
        brute_assign(members, n_stages, pos + 1, counts, assign, cost +
                     static_cast<double>(n_stages - st) * static_cast<double>(members[pos]->difficulty), best);
        counts[static_cast<std::size_t>(st)]--;
    }
}

std::vector<std::vector<int>> brute_force_partition(const std::vector<ScoredSample>& scores, int n_stages,
                                                    int class_count) {
    std::vector<std::vector<const ScoredSample*>> by_class(static_cast<std::size_t>(class_count));
    for (const ScoredSample& s : scores) by_class[static_cast<std::size_t>(s.label)].push_back(&s);
    std::vector<std::vector<int>> stages(static_cast<std::size_t>(n_stages));
    for (auto& members : by_class) {
        if (members.empty()) continue;
        std::sort(members.begin(), members.end(), [](const ScoredSample* a, const ScoredSample* b) {
            if (a->difficulty != b->difficulty) return a->difficulty < b->difficulty;
            return a->index < b->index;
        });
        BruteBest best;
        std::vector<int> counts(static_cast<std::size_t>(n_stages), 0);
        std::vector<int> assign(members.size(), 0);
        brute_assign(members, n_stages, 0, counts, assign, 0.0, best);
        REQUIRE(std::isfinite(best.cost));
        for (std::size_t i = 0; i < members.size(); ++i)
            stages[static_cast<std::size_t>(best.assign[i] - 1)].push_back(members[i]->index);
    }
    for (auto& st : stages) std::sort(st.begin(), st.end());
    return stages;
}

} // namespace

TEST_CASE("partition matches the exhaustive minimizer on small datasets", "[curriculum]") {
    Rng rng(31);
    const float alphabet[4] = {0.1f, 0.2f, 0.3f, 0.4f};
    int checked = 0;
    while (checked < 150) {
        const int n_stages = 1 + static_cast<int>(rng.uniform_int(4));
        const int classes = 1 + static_cast<int>(rng.uniform_int(3));
        if (classes * n_stages > 12) continue;

        // split a budget of at most 12 samples, at least n_stages per class
        std::vector<int> sizes(static_cast<std::size_t>(classes), n_stages);
        int budget = 12 - classes * n_stages;
        for (int c = 0; c < classes && budget > 0; ++c) {
            const int extra = static_cast<int>(rng.uniform_int(static_cast<std::uint32_t>(budget + 1)));
            sizes[static_cast<std::size_t>(c)] += extra;
            budget -= extra;
        }

        // tie-heavy draws on odd rounds, generic positives on even rounds
        std::vector<ScoredSample> scores;
        int next_index = 0;
        for (int c = 0; c < classes; ++c)
            for (int k = 0; k < sizes[static_cast<std::size_t>(c)]; ++k) {
                ScoredSample s;
                s.index = next_index++;
                s.label = c;
                s.difficulty = (checked % 2) ? alphabet[rng.uniform_int(4)] : rng.uniform(0.01f, 1.0f);
                scores.push_back(s);
            }
        // interleave classes so dataset order carries no information
        std::vector<int> shuffled_ids(scores.size());
        for (std::size_t i = 0; i < scores.size(); ++i) shuffled_ids[i] = static_cast<int>(i);
        rng.shuffle(shuffled_ids);
        for (std::size_t i = 0; i < scores.size(); ++i) scores[i].index = shuffled_ids[i];

        const CurriculumPlan plan = partition_balanced(scores, n_stages, classes);
        validate_plan(plan);
        REQUIRE(plan.stages == brute_force_partition(scores, n_stages, classes));
        ++checked;
    }
    REQUIRE(checked >= 100);
}

TEST_CASE("per-class balance holds at scale", "[curriculum]") {
    Rng rng(33);
    for (int n_stages : {3, 5}) {
        std::vector<ScoredSample> scores;
        std::vector<int> per_class(10);
        int next_index = 0;
        for (int c = 0; c < 10; ++c) {
            per_class[static_cast<std::size_t>(c)] =
                n_stages + static_cast<int>(rng.uniform_int(1000 - static_cast<std::uint32_t>(n_stages)));
            for (int k = 0; k < per_class[static_cast<std::size_t>(c)]; ++k)
                scores.push_back({next_index++, c, rng.uniform(0.0f, 1.0f)});
        }
        const CurriculumPlan plan = partition_balanced(scores, n_stages, 10);
        REQUIRE_NOTHROW(validate_plan(plan));

        // count stage membership per class directly
        std::vector<int> label_of(scores.size());
        for (const ScoredSample& s : plan.rows) label_of[static_cast<std::size_t>(s.index)] = s.label;
        for (int c = 0; c < 10; ++c) {
            int cmin = static_cast<int>(scores.size()), cmax = 0, total = 0;
            for (int st = 0; st < n_stages; ++st) {
                int n = 0;
                for (int idx : plan.stages[static_cast<std::size_t>(st)])
                    if (label_of[static_cast<std::size_t>(idx)] == c) ++n;
                cmin = std::min(cmin, n);
                cmax = std::max(cmax, n);
                total += n;
            }
            REQUIRE(total == per_class[static_cast<std::size_t>(c)]);
            REQUIRE(cmax - cmin <= 1);
        }
    }
}

TEST_CASE("difficulty is one minus the true-class probability", "[curriculum]") {
    const Dataset d = synth_blobs(3, 8, 5, 1.5, 21);
    ModelSpec spec;
    spec.input_shape = {5};
    spec.layers = {LayerSpec::dense(5, 7, {3, InitScheme::he_uniform}), LayerSpec::relu(),
                   LayerSpec::dense(7, 3, {4, InitScheme::he_uniform})};
    const Model snap = build_model<float>(spec, Role::snapshot);

    const auto scores = score_dataset(snap, d);
    REQUIRE(static_cast<int>(scores.size()) == d.size());
    for (int i = 0; i < d.size(); ++i) {
        Tensor images, labels;
        gather_batch(d, {i}, images, labels);
        const Tensor logits = forward(snap, images);
        const SoftTargets p = softmax_t(logits, 1.0);
        REQUIRE(scores[static_cast<std::size_t>(i)].index == i);
        REQUIRE(scores[static_cast<std::size_t>(i)].label == d.labels[static_cast<std::size_t>(i)]);
        REQUIRE_THAT(scores[static_cast<std::size_t>(i)].difficulty,
                     Catch::Matchers::WithinAbs(1.0f - p.probs.at2(0, d.labels[static_cast<std::size_t>(i)]), 1e-6));
        REQUIRE(scores[static_cast<std::size_t>(i)].difficulty > 0.0f);
    }

    ModelSpec wide = spec;
    wide.layers[2] = LayerSpec::dense(7, 4);
    REQUIRE_THROWS_WITH(score_dataset(build_model<float>(wide, Role::snapshot), d),
                        Catch::Matchers::ContainsSubstring("emits 4 classes but dataset has 3"));
}

TEST_CASE("partition rejects malformed score sets", "[curriculum]") {
    std::vector<ScoredSample> ok = {{0, 0, 0.1f}, {1, 0, 0.2f}, {2, 1, 0.3f}, {3, 1, 0.4f}};
    REQUIRE_THROWS_WITH(partition_balanced(ok, 0, 2), Catch::Matchers::ContainsSubstring("n_stages"));
    REQUIRE_THROWS_WITH(partition_balanced({}, 2, 2), Catch::Matchers::ContainsSubstring("no scored samples"));

    auto dupe = ok;
    dupe[3].index = 2;
    REQUIRE_THROWS_WITH(partition_balanced(dupe, 2, 2),
                        Catch::Matchers::ContainsSubstring("duplicate sample index 2"));

    auto bad_label = ok;
    bad_label[0].label = 5;
    REQUIRE_THROWS_WITH(partition_balanced(bad_label, 2, 2),
                        Catch::Matchers::ContainsSubstring("label 5 outside [0,2)"));

    auto nan = ok;
    nan[1].difficulty = std::numeric_limits<float>::quiet_NaN();
    REQUIRE_THROWS_WITH(partition_balanced(nan, 2, 2),
                        Catch::Matchers::ContainsSubstring("non-finite difficulty at index 1"));

    // class 1 has two members but three stages want one each
    REQUIRE_THROWS_WITH(partition_balanced(ok, 3, 2),
                        Catch::Matchers::ContainsSubstring("unbalanceable class 0"));
}

TEST_CASE("cumulative active sets grow and stay sorted", "[curriculum]") {
    std::vector<ScoredSample> scores;
    for (int i = 0; i < 9; ++i) scores.push_back({i, i % 3, 0.1f * static_cast<float>(i + 1)});
    const CurriculumPlan plan = partition_balanced(scores, 3, 3);

    std::vector<int> prev;
    for (int st = 1; st <= 3; ++st) {
        const auto active = stage_active_set(plan, st);
        REQUIRE(std::is_sorted(active.begin(), active.end()));
        REQUIRE(active.size() == static_cast<std::size_t>(3 * st));
        REQUIRE(std::includes(active.begin(), active.end(), prev.begin(), prev.end()));
        prev = active;
    }
    REQUIRE(prev.size() == scores.size());
    REQUIRE_THROWS_WITH(stage_active_set(plan, 0), Catch::Matchers::ContainsSubstring("outside [1,3]"));
    REQUIRE_THROWS_WITH(stage_active_set(plan, 4), Catch::Matchers::ContainsSubstring("outside [1,3]"));
}

TEST_CASE("plan validation catches structural damage", "[curriculum]") {
    CurriculumPlan p;
    p.class_count = 1;
    p.rows = {{0, 0, 0.1f}, {1, 0, 0.2f}, {2, 0, 0.3f}, {3, 0, 0.4f}};
    p.stages = {{0, 1}, {2, 3}};
    REQUIRE_NOTHROW(validate_plan(p));

    p.stages = {{0, 1}, {1, 2, 3}};
    REQUIRE_THROWS_WITH(validate_plan(p), Catch::Matchers::ContainsSubstring("stages overlap at index 1"));

    p.stages = {{0, 1}, {2}};
    REQUIRE_THROWS_WITH(validate_plan(p), Catch::Matchers::ContainsSubstring("does not cover"));

    p.stages = {{0}, {1, 2, 3}};
    REQUIRE_THROWS_WITH(validate_plan(p), Catch::Matchers::ContainsSubstring("stage counts spread 2"));

    p.stages = {{0, 3}, {1, 2}};
    REQUIRE_THROWS_WITH(validate_plan(p),
                        Catch::Matchers::ContainsSubstring("difficulty not monotone between stages 1 and 2"));
}

TEST_CASE("scores survive the csv round trip", "[curriculum]") {
    std::vector<ScoredSample> scores = {{0, 2, 0.125f}, {1, 0, 0.7331f}, {2, 1, 1.0f / 3.0f}};
    const std::string csv = export_scores_csv(scores);
    REQUIRE(csv.substr(0, 23) == "index,class,difficulty\n");
    const auto back = import_scores_csv(csv);
    REQUIRE(back.size() == scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) {
        REQUIRE(back[i].index == scores[i].index);
        REQUIRE(back[i].label == scores[i].label);
        REQUIRE(back[i].difficulty == scores[i].difficulty); // %.9g parses back bit-exact
    }
    REQUIRE_THROWS_WITH(import_scores_csv("index,difficulty\n0,1\n"),
                        Catch::Matchers::ContainsSubstring("bad header"));
    REQUIRE_THROWS_WITH(import_scores_csv("index,class,difficulty\n0,1\n"),
                        Catch::Matchers::ContainsSubstring("want 3 fields"));
    REQUIRE_THROWS_WITH(import_scores_csv("index,class,difficulty\n0,x,0.5\n"),
                        Catch::Matchers::ContainsSubstring("bad integer"));
    REQUIRE_THROWS_WITH(import_scores_csv(""), Catch::Matchers::ContainsSubstring("empty file"));
}

TEST_CASE("plans survive the csv round trip", "[curriculum]") {
    Rng rng(41);
    std::vector<ScoredSample> scores;
    for (int i = 0; i < 14; ++i) scores.push_back({i, i % 2, rng.uniform(0.05f, 0.95f)});
    const CurriculumPlan plan = partition_balanced(scores, 3, 2, "cafe0123");

    const std::string csv = export_plan_csv(plan);
    const auto lines = split_lines(csv);
    REQUIRE(lines[0] == "index,class,difficulty,stage");
    REQUIRE(lines.size() == 15);

    const CurriculumPlan back = import_plan_csv(csv);
    REQUIRE(back.stages == plan.stages);
    REQUIRE(back.class_count == plan.class_count);
    REQUIRE(back.rows.size() == plan.rows.size());
    for (std::size_t i = 0; i < plan.rows.size(); ++i) {
        REQUIRE(back.rows[i].index == plan.rows[i].index);
        REQUIRE(back.rows[i].label == plan.rows[i].label);
        REQUIRE(back.rows[i].difficulty == plan.rows[i].difficulty);
    }
    // export of the re-imported plan is byte-identical
    REQUIRE(export_plan_csv(back) == csv);

    REQUIRE_THROWS_WITH(import_plan_csv("index,class,difficulty\n"),
                        Catch::Matchers::ContainsSubstring("bad header"));
    REQUIRE_THROWS_WITH(import_plan_csv("index,class,difficulty,stage\n0,0,0.5,0\n"),
                        Catch::Matchers::ContainsSubstring("stage must be >= 1"));
}

TEST_CASE("lesson report walks the tiers in order", "[curriculum]") {
    const Dataset d = synth_blobs(2, 6, 4, 1.0, 51);
    ModelSpec spec;
    spec.input_shape = {4};
    spec.layers = {LayerSpec::dense(4, 6, {9, InitScheme::he_uniform}), LayerSpec::relu(),
                   LayerSpec::dense(6, 2, {10, InitScheme::he_uniform})};
    const Model m = build_model<float>(spec, Role::student);

    const CurriculumPlan plan = partition_balanced(score_dataset(m, d), 3, 2);
    const auto stats = lesson_report(m, plan, d);
    REQUIRE(stats.size() == 3);
    for (int st = 0; st < 3; ++st) {
        REQUIRE(stats[static_cast<std::size_t>(st)].stage == st + 1);
        REQUIRE(stats[static_cast<std::size_t>(st)].count == 4);
        REQUIRE(stats[static_cast<std::size_t>(st)].accuracy >= 0.0);
        REQUIRE(stats[static_cast<std::size_t>(st)].accuracy <= 1.0);
        REQUIRE(stats[static_cast<std::size_t>(st)].mean_loss >= 0.0);
    }

    Dataset wrong = d;
    wrong.class_count = 3;
    REQUIRE_THROWS_WITH(lesson_report(m, plan, wrong),
                        Catch::Matchers::ContainsSubstring("class counts differ"));
}
