#pragma once

#include <cmath>
#include <filesystem>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "slkd/batching.hpp"
#include "slkd/config.hpp"
#include "slkd/curriculum.hpp"
#include "slkd/eval.hpp"
#include "slkd/textio.hpp"

namespace slkd {

struct TrainRecordRow {
    int epoch = 0; // 1-based within the run
    int stage = 0; // 0 before the first curriculum stage
    int active = 0;
    int iters = 0;
    long long cum_iters = 0;
    double train_loss = 0.0;
    double test_acc = 0.0;
    double lr = 0.0;
};

struct TrainRecord {
    std::vector<TrainRecordRow> rows;
};

inline const char* kRecordHeader = "epoch,stage,active,iters,cum_iters,train_loss,test_acc,lr";

inline std::string record_to_csv(const TrainRecord& r) {
    std::string out = std::string(kRecordHeader) + "\n";
    for (const TrainRecordRow& w : r.rows) {
        out += std::to_string(w.epoch);
        out += ',';
        out += std::to_string(w.stage);
        out += ',';
        out += std::to_string(w.active);
        out += ',';
        out += std::to_string(w.iters);
        out += ',';
        out += std::to_string(w.cum_iters);
        out += ',';
        out += fmt_f64(w.train_loss);
        out += ',';
        out += fmt_f64(w.test_acc);
        out += ',';
        out += fmt_f64(w.lr);
        out += '\n';
    }
    return out;
}

inline TrainRecord record_from_csv(const std::string& text) {
    const auto lines = split_lines(text);
    require(!lines.empty(), "record csv: empty file");
    require(lines[0] == kRecordHeader, "record csv: bad header '" + lines[0] + "'");
    TrainRecord r;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        const std::string ctx = "record csv line " + std::to_string(li + 1);
        const auto f = split_csv_line(lines[li]);
        require(f.size() == 8, ctx + ": want 8 fields, got " + std::to_string(f.size()));
        TrainRecordRow w;
        w.epoch = static_cast<int>(parse_ll(f[0], ctx));
        w.stage = static_cast<int>(parse_ll(f[1], ctx));
        w.active = static_cast<int>(parse_ll(f[2], ctx));
        w.iters = static_cast<int>(parse_ll(f[3], ctx));
        w.cum_iters = parse_ll(f[4], ctx);
        w.train_loss = parse_f64(f[5], ctx);
        w.test_acc = parse_f64(f[6], ctx);
        w.lr = parse_f64(f[7], ctx);
        r.rows.push_back(w);
    }
    return r;
}

// base lr times every schedule multiplier whose boundary epoch is <= epoch
inline double lr_at(const RunConfig& c, int epoch) {
    double lr = c.optimizer.lr;
    for (const auto& [boundary, mult] : c.lr_schedule)
        if (boundary <= epoch) lr *= mult;
    return lr;
}

// Artifact drop target for one run; an empty dir disables persistence.
struct RunSink {
    std::string dir;

    bool enabled() const { return !dir.empty(); }
    std::string path(const std::string& name) const { return dir + "/" + name; }
    void text(const std::string& name, const std::string& content) const {
        if (enabled()) write_text_file(path(name), content);
    }
    RunSink sub(const std::string& name) const {
        if (!enabled()) return {};
        RunSink s{dir + "/" + name};
        std::filesystem::create_directories(s.dir);
        return s;
    }
};

struct TrainOutcome {
    Model model;
    OptimizerState opt;
    TrainRecord record;
    Model best_model;
    int best_epoch = 0;
    double best_test_acc = 0.0;
    std::vector<Model> snapshots;      // teacher history / stage snapshots
    std::vector<CurriculumPlan> plans; // staged runs only
    std::string final_ckpt_id;
    std::string best_ckpt_id;

    double final_test_acc() const { return record.rows.empty() ? 0.0 : record.rows.back().test_acc; }
    long long total_iterations() const { return record.rows.empty() ? 0 : record.rows.back().cum_iters; }
};

namespace detail {

constexpr std::uint64_t kTeacherInitTag = 0x7e4c;
constexpr std::uint64_t kStudentInitTag = 0x57de;
constexpr std::uint64_t kEpochSeedTag = 0xba7c;
constexpr std::uint64_t kAugmentTag = 0xa06e;

inline ModelSpec seeded_spec(ModelSpec s, std::uint64_t base) {
    for (std::size_t i = 0; i < s.layers.size(); ++i) {
        LayerSpec& l = s.layers[i];
        if (l.kind == LayerKind::dense || l.kind == LayerKind::conv3x3) l.init.seed = mix64(base, i);
    }
    return s;
}

// per-batch objective: (images, student logits, one-hot labels) ->
// (loss value, d loss / d student logits)
using Objective = std::function<std::pair<double, Tensor>(const Tensor&, const Tensor&, const Tensor&)>;

inline Objective supervised_objective() {
    return [](const Tensor&, const Tensor& logits, const Tensor& labels) {
        const double ce = cross_entropy(softmax_t(logits, 1.0), labels);
        return std::make_pair(ce, ce_grad_student<float>(logits, labels));
    };
}

// Eq-style blended objective; lambda == 0 never touches the teacher, so the
// run is bit-identical to plain supervised training.
inline Objective kd_objective(const Model& teacher, const KdConfig& kd) {
    if (kd.lambda == 0.0) return supervised_objective();
    return [&teacher, kd](const Tensor& images, const Tensor& logits, const Tensor& labels) {
        const Tensor tlogits = forward(teacher, images);
        const double ce = cross_entropy(softmax_t(logits, 1.0), labels);
        const double kdv = kd_loss(tlogits, logits, kd.tau);
        const double loss = student_loss(ce, kdv, kd.lambda, kd.mode);
        return std::make_pair(loss, student_loss_grad(tlogits, logits, labels, kd.tau, kd.lambda, kd.mode));
    };
}

// stage objective: hard cross-entropy plus lambda * softened divergence
inline Objective stage_objective(const Model& teacher, const KdConfig& kd) {
    if (kd.lambda == 0.0) return supervised_objective();
    return [&teacher, kd](const Tensor& images, const Tensor& logits, const Tensor& labels) {
        const Tensor tlogits = forward(teacher, images);
        const LossBreakdown lb = slkd_stage_loss(logits, tlogits, labels, kd.tau, kd.lambda);
        return std::make_pair(lb.total,
                              student_loss_grad(tlogits, logits, labels, kd.tau, kd.lambda, LossMode::additive));
    };
}

inline void optimizer_step(Model& m, const Grads& g, const OptimizerConfig& oc, double lr, OptimizerState& st) {
    if (oc.kind == OptKind::sgd) {
        st.kind = OptKind::sgd;
        sgd_step(m, g, static_cast<float>(lr), static_cast<float>(oc.momentum),
                 static_cast<float>(oc.weight_decay), st.sgd);
    } else {
        st.kind = OptKind::adam;
        adam_step(m, g, static_cast<float>(lr), static_cast<float>(oc.beta1), static_cast<float>(oc.beta2),
                  static_cast<float>(oc.eps), st.adam);
    }
}

struct EpochStats {
    double mean_loss = 0.0;
    int iters = 0;
};

inline EpochStats run_epoch(Model& student, OptimizerState& opt, const RunConfig& cfg, const Dataset& train,
                            const std::vector<int>& active, int epoch, double lr, const Objective& objective) {
    const BatchPlan plan = make_batches(active, cfg.batch_size, mix64(cfg.seed, kEpochSeedTag, epoch));
    AugmentPolicy aug = cfg.augment;
    aug.seed = mix64(cfg.seed, kAugmentTag);
    double loss_sum = 0.0;
    for (int b = 0; b < plan.batch_count(); ++b) {
        const std::vector<int> idx = plan.batch(b);
        Tensor images, labels;
        gather_batch(train, idx, images, labels);
        if (!aug.identity()) images = augment(images, aug, epoch, b);
        const ForwardTrace trace = forward_trace(student, images);
        const auto [loss, dlogits] = objective(images, trace.acts.back(), labels);
        require(std::isfinite(loss),
                "training diverged: non-finite loss at epoch " + std::to_string(epoch) + ", batch " +
                    std::to_string(b));
        const Grads grads = backward(student, trace, dlogits);
        optimizer_step(student, grads, cfg.optimizer, lr, opt);
        loss_sum += loss * static_cast<double>(idx.size());
    }
    return {loss_sum / static_cast<double>(active.size()), plan.batch_count()};
}

inline void track_best(TrainOutcome& out, const Model& m, int epoch, double acc) {
    if (out.record.rows.size() == 1 || acc > out.best_test_acc) {
        out.best_model = m;
        out.best_epoch = epoch;
        out.best_test_acc = acc;
    }
}

inline void push_row(TrainOutcome& out, int epoch, int stage, int active, const EpochStats& st, double acc,
                     double lr) {
    TrainRecordRow row;
    row.epoch = epoch;
    row.stage = stage;
    row.active = active;
    row.iters = st.iters;
    row.cum_iters = (out.record.rows.empty() ? 0 : out.record.rows.back().cum_iters) + st.iters;
    row.train_loss = st.mean_loss;
    row.test_acc = acc;
    row.lr = lr;
    out.record.rows.push_back(row);
}

inline json ckpt_meta(const RunConfig& cfg, const std::string& arm, const std::string& which, int epoch,
                      double test_acc) {
    return json{{"name", cfg.name}, {"arm", arm},         {"which", which},
                {"seed", cfg.seed}, {"config", config_hash(cfg)}, {"epoch", epoch},
                {"test_acc", test_acc}};
}

inline void persist_outcome(TrainOutcome& out, const RunConfig& cfg, const std::string& arm,
                            const RunSink& sink, const std::string& stem) {
    const int last_epoch = out.record.rows.empty() ? 0 : out.record.rows.back().epoch;
    const auto final_bytes =
        serialize_checkpoint(out.model, out.opt, ckpt_meta(cfg, arm, "final", last_epoch, out.final_test_acc()));
    out.final_ckpt_id = checkpoint_id(final_bytes);
    const auto best_bytes = serialize_checkpoint(
        out.best_model, OptimizerState{}, ckpt_meta(cfg, arm, "best", out.best_epoch, out.best_test_acc));
    out.best_ckpt_id = checkpoint_id(best_bytes);
    if (!sink.enabled()) return;
    write_file_bytes(sink.path(stem + "_final.ckpt"), final_bytes);
    write_file_bytes(sink.path(stem + "_best.ckpt"), best_bytes);
    sink.text(stem + "_record.csv", record_to_csv(out.record));
}

} // namespace detail

// Stage 1: plain cross-entropy training of the teacher. Keeps the best
// test-accuracy model alongside the final one, plus parameter snapshots at
// the resolved snapshot epochs (used by the ablation harness).
inline TrainOutcome train_teacher(const RunConfig& cfg, const Dataset& train, const Dataset& test,
                                  const RunSink& sink = {}) {
    validate_config(cfg);
    train.validate();
    require(train.size() > 0, "train_teacher: train split is empty");
    const std::vector<int> snap_epochs = resolved_teacher_snapshot_epochs(cfg);

    TrainOutcome out;
    out.model = build_model<float>(detail::seeded_spec(cfg.teacher_spec, mix64(cfg.seed, detail::kTeacherInitTag)),
                                   Role::teacher);
    out.best_model = out.model;
    const std::vector<int> active = all_indices(train);
    const detail::Objective obj = detail::supervised_objective();

    auto snapshot_now = [&](int epoch) {
        for (int se : snap_epochs)
            if (se == epoch) {
                Model snap = out.model;
                snap.role = Role::snapshot;
                out.snapshots.push_back(std::move(snap));
            }
    };
    snapshot_now(0);
    for (int epoch = 1; epoch <= cfg.teacher_epochs; ++epoch) {
        const double lr = lr_at(cfg, epoch);
        const detail::EpochStats st = detail::run_epoch(out.model, out.opt, cfg, train, active, epoch, lr, obj);
        const double acc = evaluate(out.model, test).top1_accuracy;
        detail::push_row(out, epoch, 0, static_cast<int>(active.size()), st, acc, lr);
        detail::track_best(out, out.model, epoch, acc);
        snapshot_now(epoch);
    }
    detail::persist_outcome(out, cfg, "teacher", sink, "teacher");
    if (sink.enabled())
        for (std::size_t i = 0; i < out.snapshots.size(); ++i)
            save_checkpoint(out.snapshots[i], OptimizerState{},
                            detail::ckpt_meta(cfg, "teacher", "snapshot", snap_epochs[i], 0.0),
                            sink.path("teacher_snap" + std::to_string(i + 1) + ".ckpt"));
    return out;
}

// Baseline arm: the student alone on hard labels, no teacher anywhere.
inline TrainOutcome train_supervised(const RunConfig& cfg, const Dataset& train, const Dataset& test,
                                     const RunSink& sink = {}) {
    validate_config(cfg);
    train.validate();
    require(train.size() > 0, "train_supervised: train split is empty");
    TrainOutcome out;
    out.model = build_model<float>(detail::seeded_spec(cfg.student_spec, mix64(cfg.seed, detail::kStudentInitTag)),
                                   Role::student);
    out.best_model = out.model;
    const std::vector<int> active = all_indices(train);
    const detail::Objective obj = detail::supervised_objective();
    for (int epoch = 1; epoch <= cfg.epochs_total; ++epoch) {
        const double lr = lr_at(cfg, epoch);
        const detail::EpochStats st = detail::run_epoch(out.model, out.opt, cfg, train, active, epoch, lr, obj);
        const double acc = evaluate(out.model, test).top1_accuracy;
        detail::push_row(out, epoch, 0, static_cast<int>(active.size()), st, acc, lr);
        detail::track_best(out, out.model, epoch, acc);
    }
    detail::persist_outcome(out, cfg, "alone", sink, "student");
    return out;
}

// Uniform distillation: every epoch sees the full set; the teacher's
// softened outputs are recomputed per batch and no gradient reaches them.
inline TrainOutcome distill_kd(const Model& teacher, const RunConfig& cfg, const Dataset& train,
                               const Dataset& test, const RunSink& sink = {}) {
    validate_config(cfg);
    train.validate();
    require(train.size() > 0, "distill_kd: train split is empty");
    require(output_classes(teacher.spec) == train.class_count,
            "distill_kd: teacher emits " + std::to_string(output_classes(teacher.spec)) +
                " classes but data has " + std::to_string(train.class_count));
    TrainOutcome out;
    out.model = build_model<float>(detail::seeded_spec(cfg.student_spec, mix64(cfg.seed, detail::kStudentInitTag)),
                                   Role::student);
    out.best_model = out.model;
    const std::vector<int> active = all_indices(train);
    const detail::Objective obj = detail::kd_objective(teacher, cfg.kd);
    for (int epoch = 1; epoch <= cfg.epochs_total; ++epoch) {
        const double lr = lr_at(cfg, epoch);
        const detail::EpochStats st = detail::run_epoch(out.model, out.opt, cfg, train, active, epoch, lr, obj);
        const double acc = evaluate(out.model, test).top1_accuracy;
        detail::push_row(out, epoch, 0, static_cast<int>(active.size()), st, acc, lr);
        detail::track_best(out, out.model, epoch, acc);
    }
    detail::persist_outcome(out, cfg, "kd", sink, "student");
    return out;
}

// Supplies the classifier that scores difficulty at each stage boundary.
// The default takes the live student (Algorithm "snapshot of the student");
// the ablation swaps in stored teacher states instead.
using SnapshotProvider = std::function<Model(int stage, const Model& student)>;

inline SnapshotProvider student_snapshot_provider() {
    return [](int, const Model& student) {
        Model snap = student;
        snap.role = Role::snapshot;
        return snap;
    };
}

// Staged distillation: initial uniform phase, then per stage
// snapshot -> rescore -> repartition -> train on the cumulative union,
// then a full-set closing phase. Optimizer state and the lr schedule run
// straight through every boundary.
inline TrainOutcome distill_slkd(const Model& teacher, const RunConfig& cfg, const Dataset& train,
                                 const Dataset& test, const RunSink& sink = {},
                                 const SnapshotProvider& provider = student_snapshot_provider()) {
    validate_config(cfg);
    train.validate();
    require(train.size() > 0, "distill_slkd: train split is empty");
    require(output_classes(teacher.spec) == train.class_count,
            "distill_slkd: teacher emits " + std::to_string(output_classes(teacher.spec)) +
                " classes but data has " + std::to_string(train.class_count));

    TrainOutcome out;
    out.model = build_model<float>(detail::seeded_spec(cfg.student_spec, mix64(cfg.seed, detail::kStudentInitTag)),
                                   Role::student);
    out.best_model = out.model;
    const std::vector<int> full = all_indices(train);
    const detail::Objective warm = detail::kd_objective(teacher, cfg.kd);
    const detail::Objective staged = detail::stage_objective(teacher, cfg.kd);

    int epoch = 0;
    auto run_block = [&](int epochs, const std::vector<int>& active, int stage, const detail::Objective& obj) {
        for (int k = 0; k < epochs; ++k) {
            ++epoch;
            const double lr = lr_at(cfg, epoch);
            const detail::EpochStats st = detail::run_epoch(out.model, out.opt, cfg, train, active, epoch, lr, obj);
            const double acc = evaluate(out.model, test).top1_accuracy;
            detail::push_row(out, epoch, stage, static_cast<int>(active.size()), st, acc, lr);
            detail::track_best(out, out.model, epoch, acc);
        }
    };

    run_block(cfg.slkd.initial_kd_epochs, full, 0, warm);
    for (int stage = 1; stage <= cfg.slkd.n_stages; ++stage) {
        Model snap = provider(stage, out.model);
        snap.role = Role::snapshot;
        const json snap_meta = detail::ckpt_meta(cfg, "slkd", "snapshot", epoch, 0.0);
        const auto snap_bytes = serialize_checkpoint(snap, OptimizerState{}, snap_meta);
        if (sink.enabled())
            write_file_bytes(sink.path("snapshot_stage" + std::to_string(stage) + ".ckpt"), snap_bytes);
        CurriculumPlan plan = partition_balanced(score_dataset(snap, train), cfg.slkd.n_stages,
                                                 train.class_count, checkpoint_id(snap_bytes));
        sink.text("plan_stage" + std::to_string(stage) + ".csv", export_plan_csv(plan));
        const std::vector<int> active = stage_active_set(plan, stage);
        out.plans.push_back(std::move(plan));
        run_block(cfg.slkd.stage_epochs[static_cast<std::size_t>(stage - 1)], active, stage, staged);
    }
    run_block(cfg.slkd.final_epochs, full, cfg.slkd.n_stages, staged);

    detail::persist_outcome(out, cfg, "slkd", sink, "student");
    return out;
}

struct AblationResult {
    TrainOutcome teacher;
    TrainOutcome snapshot_s;
    TrainOutcome snapshot_t;

    json paired_record(const RunConfig& cfg) const {
        return json{{"name", cfg.name},
                    {"seed", cfg.seed},
                    {"config", config_hash(cfg)},
                    {"teacher_test_acc", teacher.final_test_acc()},
                    {"snapshot_s", {{"final_test_acc", snapshot_s.final_test_acc()},
                                    {"best_test_acc", snapshot_s.best_test_acc},
                                    {"cum_iters", snapshot_s.total_iterations()}}},
                    {"snapshot_t", {{"final_test_acc", snapshot_t.final_test_acc()},
                                    {"best_test_acc", snapshot_t.best_test_acc},
                                    {"cum_iters", snapshot_t.total_iterations()}}}};
    }
};

// Paired comparison of curriculum sources: plans generated from student
// snapshots (arm S) versus stored teacher training states (arm T). Both
// arms share the teacher, the data, the seed and the schedule.
inline AblationResult ablate_snapshot_source(const RunConfig& cfg, const Dataset& train, const Dataset& test,
                                             const RunSink& sink = {}) {
    validate_config(cfg);
    AblationResult res;
    res.teacher = train_teacher(cfg, train, test, sink.sub("teacher"));
    require(static_cast<int>(res.teacher.snapshots.size()) == cfg.slkd.n_stages,
            "ablate: teacher history has " + std::to_string(res.teacher.snapshots.size()) +
                " snapshots, need one per stage (" + std::to_string(cfg.slkd.n_stages) + ")");
    res.snapshot_s = distill_slkd(res.teacher.model, cfg, train, test, sink.sub("snapshot-s"),
                                  student_snapshot_provider());
    const auto& teacher_snaps = res.teacher.snapshots;
    SnapshotProvider teacher_provider = [&teacher_snaps](int stage, const Model&) {
        return teacher_snaps[static_cast<std::size_t>(stage - 1)];
    };
    res.snapshot_t = distill_slkd(res.teacher.model, cfg, train, test, sink.sub("snapshot-t"), teacher_provider);
    sink.text("ablation.json", res.paired_record(cfg).dump(2) + "\n");
    return res;
}

} // namespace slkd
