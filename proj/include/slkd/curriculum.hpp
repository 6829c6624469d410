#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "slkd/eval.hpp"
#include "slkd/textio.hpp"

namespace slkd {

struct ScoredSample {
    int index = 0;
    int label = 0;
    float difficulty = 0.0f; // higher = harder
};

// Disjoint class-balanced difficulty tiers. stages[i] holds the dataset
// indices of tier i+1, ascending; rows holds the generating scores, ascending
// by index. Training at stage s uses the cumulative union of tiers 1..s.
struct CurriculumPlan {
    std::vector<ScoredSample> rows;
    std::vector<std::vector<int>> stages;
    int class_count = 0;
    std::string source_snapshot;

    int n_stages() const { return static_cast<int>(stages.size()); }
    int total() const { return static_cast<int>(rows.size()); }
};

// difficulty(x, y) = 1 - p_model(y | x), plain softmax on un-augmented inputs
inline std::vector<ScoredSample> score_dataset(const Model& snapshot, const Dataset& data) {
    data.validate();
    require(data.size() > 0, "score_dataset: dataset is empty");
    require(output_classes(snapshot.spec) == data.class_count,
            "score_dataset: snapshot emits " + std::to_string(output_classes(snapshot.spec)) +
                " classes but dataset has " + std::to_string(data.class_count));
    const Tensor logits = model_logits(snapshot, data, all_indices(data));
    const SoftTargets probs = softmax_t(logits, 1.0);
    std::vector<ScoredSample> out(static_cast<std::size_t>(data.size()));
    for (int i = 0; i < data.size(); ++i) {
        ScoredSample& s = out[static_cast<std::size_t>(i)];
        s.index = i;
        s.label = data.labels[static_cast<std::size_t>(i)];
        s.difficulty = 1.0f - probs.probs.at2(i, s.label);
        require(std::isfinite(s.difficulty), "score_dataset: non-finite difficulty");
    }
    return out;
}

namespace detail {

inline void check_scores(const std::vector<ScoredSample>& scores, int class_count) {
    require(!scores.empty(), "partition: no scored samples");
    require(class_count > 0, "partition: class_count must be positive");
    std::vector<int> seen;
    seen.reserve(scores.size());
    for (const ScoredSample& s : scores) {
        require(s.index >= 0, "partition: negative sample index");
        require(s.label >= 0 && s.label < class_count,
                "partition: label " + std::to_string(s.label) + " outside [0," + std::to_string(class_count) + ")");
        require(std::isfinite(s.difficulty), "partition: non-finite difficulty at index " + std::to_string(s.index));
        seen.push_back(s.index);
    }
    std::sort(seen.begin(), seen.end());
    for (std::size_t i = 1; i < seen.size(); ++i)
        require(seen[i] != seen[i - 1], "partition: duplicate sample index " + std::to_string(seen[i]));
}

} // namespace detail

// Per class: sort ascending by (difficulty, index) and deal consecutive
// blocks to stages 1..N, easiest block first. When the class size is not a
// multiple of N the blocks of size q+1 go to the LATEST stages, so early
// lessons stay small; counts per stage are q or q+1 (balance within 1).
inline CurriculumPlan partition_balanced(const std::vector<ScoredSample>& scores, int n_stages, int class_count,
                                         std::string source_snapshot = "") {
    require(n_stages >= 1, "partition: n_stages must be >= 1");
    detail::check_scores(scores, class_count);

    std::vector<std::vector<const ScoredSample*>> by_class(static_cast<std::size_t>(class_count));
    for (const ScoredSample& s : scores) by_class[static_cast<std::size_t>(s.label)].push_back(&s);

    CurriculumPlan plan;
    plan.class_count = class_count;
    plan.source_snapshot = std::move(source_snapshot);
    plan.stages.assign(static_cast<std::size_t>(n_stages), {});

    for (int c = 0; c < class_count; ++c) {
        auto& members = by_class[static_cast<std::size_t>(c)];
        require(static_cast<int>(members.size()) >= n_stages,
                "unbalanceable class " + std::to_string(c) + ": " + std::to_string(members.size()) +
                    " samples for " + std::to_string(n_stages) + " stages");
        std::sort(members.begin(), members.end(), [](const ScoredSample* a, const ScoredSample* b) {
            if (a->difficulty != b->difficulty) return a->difficulty < b->difficulty;
            return a->index < b->index;
        });
        const int m = static_cast<int>(members.size());
        const int q = m / n_stages;
        const int extras = m % n_stages; // the last `extras` stages take q+1
        std::size_t pos = 0;
        for (int st = 0; st < n_stages; ++st) {
            const int take = q + (st >= n_stages - extras ? 1 : 0);
            for (int k = 0; k < take; ++k, ++pos)
                plan.stages[static_cast<std::size_t>(st)].push_back(members[pos]->index);
        }
    }
    for (auto& st : plan.stages) std::sort(st.begin(), st.end());

    plan.rows = scores;
    std::sort(plan.rows.begin(), plan.rows.end(),
              [](const ScoredSample& a, const ScoredSample& b) { return a.index < b.index; });
    return plan;
}

// X_1 ∪ … ∪ X_stage, ascending; stage is 1-based
inline std::vector<int> stage_active_set(const CurriculumPlan& plan, int stage) {
    require(stage >= 1 && stage <= plan.n_stages(),
            "stage_active_set: stage " + std::to_string(stage) + " outside [1," +
                std::to_string(plan.n_stages()) + "]");
    std::vector<int> out;
    for (int s = 0; s < stage; ++s)
        out.insert(out.end(), plan.stages[static_cast<std::size_t>(s)].begin(),
                   plan.stages[static_cast<std::size_t>(s)].end());
    std::sort(out.begin(), out.end());
    return out;
}

// Structural invariants: stages disjoint and total over rows, per-class
// counts within +-1 across stages, and within each class every member of
// stage i no harder than every member of stage i+1.
inline void validate_plan(const CurriculumPlan& plan) {
    require(plan.n_stages() >= 1, "plan: no stages");
    require(plan.class_count > 0, "plan: class_count must be positive");
    std::vector<int> unioned;
    for (const auto& st : plan.stages) unioned.insert(unioned.end(), st.begin(), st.end());
    std::sort(unioned.begin(), unioned.end());
    for (std::size_t i = 1; i < unioned.size(); ++i)
        require(unioned[i] != unioned[i - 1], "plan: stages overlap at index " + std::to_string(unioned[i]));
    std::vector<int> row_indices;
    for (const ScoredSample& s : plan.rows) row_indices.push_back(s.index);
    std::sort(row_indices.begin(), row_indices.end());
    require(unioned == row_indices, "plan: stage union does not cover the scored index set");

    std::vector<const ScoredSample*> by_index;
    {
        int max_index = 0;
        for (const ScoredSample& s : plan.rows) max_index = std::max(max_index, s.index);
        by_index.assign(static_cast<std::size_t>(max_index) + 1, nullptr);
        for (const ScoredSample& s : plan.rows) by_index[static_cast<std::size_t>(s.index)] = &s;
    }

    // per-class counts and difficulty envelopes per stage
    const int N = plan.n_stages();
    std::vector<std::vector<int>> count(static_cast<std::size_t>(N),
                                        std::vector<int>(static_cast<std::size_t>(plan.class_count), 0));
    std::vector<std::vector<float>> lo(static_cast<std::size_t>(N)), hi(static_cast<std::size_t>(N));
    for (auto& v : lo) v.assign(static_cast<std::size_t>(plan.class_count), 0.0f);
    for (auto& v : hi) v.assign(static_cast<std::size_t>(plan.class_count), 0.0f);
    std::vector<std::vector<bool>> any(static_cast<std::size_t>(N),
                                       std::vector<bool>(static_cast<std::size_t>(plan.class_count), false));
    for (int st = 0; st < N; ++st)
        for (int idx : plan.stages[static_cast<std::size_t>(st)]) {
            const ScoredSample* s = by_index[static_cast<std::size_t>(idx)];
            const std::size_t c = static_cast<std::size_t>(s->label);
            ++count[static_cast<std::size_t>(st)][c];
            if (!any[static_cast<std::size_t>(st)][c]) {
                lo[static_cast<std::size_t>(st)][c] = hi[static_cast<std::size_t>(st)][c] = s->difficulty;
                any[static_cast<std::size_t>(st)][c] = true;
            } else {
                lo[static_cast<std::size_t>(st)][c] = std::min(lo[static_cast<std::size_t>(st)][c], s->difficulty);
                hi[static_cast<std::size_t>(st)][c] = std::max(hi[static_cast<std::size_t>(st)][c], s->difficulty);
            }
        }
    for (int c = 0; c < plan.class_count; ++c) {
        int cmin = count[0][static_cast<std::size_t>(c)], cmax = cmin;
        for (int st = 1; st < N; ++st) {
            cmin = std::min(cmin, count[static_cast<std::size_t>(st)][static_cast<std::size_t>(c)]);
            cmax = std::max(cmax, count[static_cast<std::size_t>(st)][static_cast<std::size_t>(c)]);
        }
        require(cmax - cmin <= 1, "plan: class " + std::to_string(c) + " stage counts spread " +
                                      std::to_string(cmax - cmin) + " (must be within 1)");
        for (int st = 0; st + 1 < N; ++st) {
            const std::size_t cc = static_cast<std::size_t>(c);
            if (any[static_cast<std::size_t>(st)][cc] && any[static_cast<std::size_t>(st) + 1][cc])
                require(hi[static_cast<std::size_t>(st)][cc] <= lo[static_cast<std::size_t>(st) + 1][cc],
                        "plan: class " + std::to_string(c) + " difficulty not monotone between stages " +
                            std::to_string(st + 1) + " and " + std::to_string(st + 2));
        }
    }
}

struct LessonStat {
    int stage = 0; // 1-based
    int count = 0;
    double accuracy = 0.0;
    double mean_loss = 0.0;
};

// accuracy / mean cross-entropy of `model` restricted to each tier X_i
inline std::vector<LessonStat> lesson_report(const Model& model, const CurriculumPlan& plan, const Dataset& data) {
    validate_plan(plan);
    require(plan.class_count == data.class_count, "lesson_report: plan and dataset class counts differ");
    std::vector<LessonStat> out;
    for (int st = 0; st < plan.n_stages(); ++st) {
        const auto& idx = plan.stages[static_cast<std::size_t>(st)];
        require(!idx.empty(), "lesson_report: stage " + std::to_string(st + 1) + " is empty");
        const EvalResult r = evaluate_subset(model, data, idx);
        out.push_back({st + 1, static_cast<int>(idx.size()), r.top1_accuracy, r.mean_loss});
    }
    return out;
}

// ---- scores CSV: index,class,difficulty -------------------------------------

inline std::string export_scores_csv(const std::vector<ScoredSample>& scores) {
    std::string out = "index,class,difficulty\n";
    for (const ScoredSample& s : scores) {
        out += std::to_string(s.index);
        out += ',';
        out += std::to_string(s.label);
        out += ',';
        out += fmt_f32(s.difficulty);
        out += '\n';
    }
    return out;
}

inline std::vector<ScoredSample> import_scores_csv(const std::string& text) {
    const auto lines = split_lines(text);
    require(!lines.empty(), "scores csv: empty file");
    require(lines[0] == "index,class,difficulty",
            "scores csv: bad header '" + lines[0] + "', want 'index,class,difficulty'");
    std::vector<ScoredSample> out;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        const std::string ctx = "scores csv line " + std::to_string(li + 1);
        const auto f = split_csv_line(lines[li]);
        require(f.size() == 3, ctx + ": want 3 fields, got " + std::to_string(f.size()));
        ScoredSample s;
        s.index = static_cast<int>(parse_ll(f[0], ctx));
        s.label = static_cast<int>(parse_ll(f[1], ctx));
        s.difficulty = static_cast<float>(parse_f64(f[2], ctx));
        out.push_back(s);
    }
    require(!out.empty(), "scores csv: no data rows");
    return out;
}

// ---- plan CSV (audit interface): index,class,difficulty,stage --------------

inline std::string export_plan_csv(const CurriculumPlan& plan) {
    validate_plan(plan);
    std::vector<int> stage_of;
    {
        int max_index = 0;
        for (const ScoredSample& s : plan.rows) max_index = std::max(max_index, s.index);
        stage_of.assign(static_cast<std::size_t>(max_index) + 1, 0);
        for (int st = 0; st < plan.n_stages(); ++st)
            for (int idx : plan.stages[static_cast<std::size_t>(st)])
                stage_of[static_cast<std::size_t>(idx)] = st + 1;
    }
    std::string out = "index,class,difficulty,stage\n";
    for (const ScoredSample& s : plan.rows) {
        out += std::to_string(s.index);
        out += ',';
        out += std::to_string(s.label);
        out += ',';
        out += fmt_f32(s.difficulty);
        out += ',';
        out += std::to_string(stage_of[static_cast<std::size_t>(s.index)]);
        out += '\n';
    }
    return out;
}

inline CurriculumPlan import_plan_csv(const std::string& text) {
    const auto lines = split_lines(text);
    require(!lines.empty(), "plan csv: empty file");
    require(lines[0] == "index,class,difficulty,stage",
            "plan csv: bad header '" + lines[0] + "', want 'index,class,difficulty,stage'");
    CurriculumPlan plan;
    int n_stages = 0;
    std::vector<int> stage_col;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        const std::string ctx = "plan csv line " + std::to_string(li + 1);
        const auto f = split_csv_line(lines[li]);
        require(f.size() == 4, ctx + ": want 4 fields, got " + std::to_string(f.size()));
        ScoredSample s;
        s.index = static_cast<int>(parse_ll(f[0], ctx));
        s.label = static_cast<int>(parse_ll(f[1], ctx));
        s.difficulty = static_cast<float>(parse_f64(f[2], ctx));
        const int stage = static_cast<int>(parse_ll(f[3], ctx));
        require(stage >= 1, ctx + ": stage must be >= 1");
        plan.rows.push_back(s);
        stage_col.push_back(stage);
        n_stages = std::max(n_stages, stage);
        plan.class_count = std::max(plan.class_count, s.label + 1);
    }
    require(!plan.rows.empty(), "plan csv: no data rows");
    plan.stages.assign(static_cast<std::size_t>(n_stages), {});
    for (std::size_t i = 0; i < plan.rows.size(); ++i)
        plan.stages[static_cast<std::size_t>(stage_col[i]) - 1].push_back(plan.rows[i].index);
    for (auto& st : plan.stages) std::sort(st.begin(), st.end());
    std::sort(plan.rows.begin(), plan.rows.end(),
              [](const ScoredSample& a, const ScoredSample& b) { return a.index < b.index; });
    validate_plan(plan);
    return plan;
}

} // namespace slkd
