// slkd: teacher-student distillation with a snapshot-driven curriculum.
//
// Subcommands: train-teacher, distill-kd, distill-slkd, score, partition,
// eval, ablate-snapshots, report, plot. Run artifacts land under
// $SLKD_RUN_ROOT (or --out, or ./runs), one directory per run named
// {command}-{name}-{confighash8}-s{seed}.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "slkd/slkd.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::string preset;
    std::string out_dir;
    std::int64_t seed = -1;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool config_needed) {
    auto* cfg = cmd->add_option("--config", o.config_path, "JSON config file");
    auto* pre = cmd->add_option("--preset", o.preset, "named preset: desk-blobs, paper-n5, paper-n3");
    cfg->excludes(pre);
    if (config_needed) {
        // one of the two must arrive; checked in resolve_config for a clean message
    }
    cmd->add_option("--seed", o.seed, "seed override (wins over the config)");
    cmd->add_option("--out", o.out_dir, "output root (wins over SLKD_RUN_ROOT)");
}

slkd::RunConfig resolve_config(const CommonOpts& o) {
    slkd::RunConfig c;
    if (!o.config_path.empty())
        c = slkd::parse_config_text(slkd::read_text_file(o.config_path));
    else if (!o.preset.empty())
        c = slkd::preset_by_name(o.preset);
    else
        slkd::fail("need --config or --preset");
    if (o.seed >= 0) c.seed = static_cast<std::uint64_t>(o.seed);
    slkd::validate_config(c);
    return c;
}

std::string run_root(const CommonOpts& o) {
    if (!o.out_dir.empty()) return o.out_dir;
    if (const char* env = std::getenv("SLKD_RUN_ROOT"); env && *env) return env;
    return "runs";
}

// one directory per run: {command}-{name}-{hash8}-s{seed}
std::string make_run_dir(const CommonOpts& o, const std::string& command, const slkd::RunConfig& cfg) {
    const std::string dir = run_root(o) + "/" + command + "-" + cfg.name + "-" +
                            slkd::config_hash(cfg).substr(0, 8) + "-s" + std::to_string(cfg.seed);
    std::filesystem::create_directories(dir);
    return dir;
}

void save_run_inputs(const slkd::RunConfig& cfg, const slkd::Dataset& train, const slkd::Dataset& test,
                     const slkd::RunSink& sink) {
    sink.text("config.json", slkd::config_to_json(cfg).dump(2) + "\n");
    if (cfg.data.kind == slkd::DataKind::blobs) { // file-backed corpora are already on disk
        slkd::save_dataset_checkpoint(train, sink.path("dataset_train.ckpt"));
        slkd::save_dataset_checkpoint(test, sink.path("dataset_test.ckpt"));
    }
}

void print_outcome(const std::string& what, const slkd::TrainOutcome& out, const slkd::RunSink& sink) {
    std::cout << what << ": final test acc " << slkd::fmt_f64(out.final_test_acc()) << ", best "
              << slkd::fmt_f64(out.best_test_acc) << " @ epoch " << out.best_epoch
              << ", cumulative iterations " << out.total_iterations() << "\n";
    if (sink.enabled()) std::cout << "artifacts: " << sink.dir << "\n";
}

int cmd_train_teacher(const CommonOpts& o, std::string& run_dir) {
    const slkd::RunConfig cfg = resolve_config(o);
    run_dir = make_run_dir(o, "train-teacher", cfg);
    slkd::RunSink sink{run_dir};
    slkd::Dataset train, test;
    slkd::load_data(cfg, train, test);
    save_run_inputs(cfg, train, test, sink);
    const slkd::TrainOutcome out = slkd::train_teacher(cfg, train, test, sink);
    sink.text("run_meta.json", slkd::run_meta_json(cfg, "teacher", out).dump(2) + "\n");
    print_outcome("teacher", out, sink);
    return 0;
}

int cmd_distill(const CommonOpts& o, const std::string& teacher_path, bool slkd_mode, std::string& run_dir) {
    const slkd::RunConfig cfg = resolve_config(o);
    const slkd::Model teacher = slkd::load_checkpoint(teacher_path).model;
    run_dir = make_run_dir(o, slkd_mode ? "distill-slkd" : "distill-kd", cfg);
    slkd::RunSink sink{run_dir};
    slkd::Dataset train, test;
    slkd::load_data(cfg, train, test);
    save_run_inputs(cfg, train, test, sink);
    const slkd::TrainOutcome out = slkd_mode ? slkd::distill_slkd(teacher, cfg, train, test, sink)
                                             : slkd::distill_kd(teacher, cfg, train, test, sink);
    sink.text("run_meta.json", slkd::run_meta_json(cfg, slkd_mode ? "slkd" : "kd", out).dump(2) + "\n");
    print_outcome(slkd_mode ? "slkd student" : "kd student", out, sink);
    return 0;
}

int cmd_score(const std::string& snapshot_path, const std::string& data_path, const std::string& out_file) {
    const slkd::Model snap = slkd::load_checkpoint(snapshot_path).model;
    const slkd::Dataset data = slkd::load_dataset_checkpoint(data_path);
    const auto scores = slkd::score_dataset(snap, data);
    slkd::write_text_file(out_file, slkd::export_scores_csv(scores));
    std::cout << "scored " << scores.size() << " samples -> " << out_file << "\n";
    return 0;
}

int cmd_partition(const std::string& scores_file, int stages, const std::string& out_file) {
    const auto scores = slkd::import_scores_csv(slkd::read_text_file(scores_file));
    int class_count = 0;
    for (const auto& s : scores) class_count = std::max(class_count, s.label + 1);
    const slkd::CurriculumPlan plan = slkd::partition_balanced(scores, stages, class_count);
    slkd::write_text_file(out_file, slkd::export_plan_csv(plan));
    std::cout << "plan with " << plan.n_stages() << " stages -> " << out_file << "\n";
    for (int s = 1; s <= plan.n_stages(); ++s)
        std::cout << "  stage " << s << ": " << plan.stages[static_cast<std::size_t>(s - 1)].size()
                  << " samples, cumulative " << slkd::stage_active_set(plan, s).size() << "\n";
    return 0;
}

int cmd_eval(const CommonOpts& o, const std::string& ckpt_path, const std::string& data_path) {
    const slkd::Model m = slkd::load_checkpoint(ckpt_path).model;
    slkd::Dataset data;
    if (!data_path.empty()) {
        data = slkd::load_dataset_checkpoint(data_path);
    } else {
        const slkd::RunConfig cfg = resolve_config(o);
        slkd::Dataset train;
        slkd::load_data(cfg, train, data);
    }
    const slkd::EvalResult r = slkd::evaluate(m, data);
    std::cout << "top1_accuracy " << slkd::fmt_f64(r.top1_accuracy) << "\n"
              << "mean_loss " << slkd::fmt_f64(r.mean_loss) << "\n"
              << "samples " << r.count << "\n";
    return 0;
}

int cmd_ablate(const CommonOpts& o, std::string& run_dir) {
    const slkd::RunConfig cfg = resolve_config(o);
    run_dir = make_run_dir(o, "ablate-snapshots", cfg);
    slkd::RunSink sink{run_dir};
    slkd::Dataset train, test;
    slkd::load_data(cfg, train, test);
    save_run_inputs(cfg, train, test, sink);
    const slkd::AblationResult res = slkd::ablate_snapshot_source(cfg, train, test, sink);
    sink.sub("teacher").text("run_meta.json", slkd::run_meta_json(cfg, "teacher", res.teacher).dump(2) + "\n");
    sink.sub("snapshot-s")
        .text("run_meta.json", slkd::run_meta_json(cfg, "snapshot-s", res.snapshot_s).dump(2) + "\n");
    sink.sub("snapshot-t")
        .text("run_meta.json", slkd::run_meta_json(cfg, "snapshot-t", res.snapshot_t).dump(2) + "\n");
    std::cout << res.paired_record(cfg).dump(2) << "\n";
    print_outcome("snapshot-s", res.snapshot_s, sink);
    print_outcome("snapshot-t", res.snapshot_t, sink);
    return 0;
}

int cmd_report(const std::string& runs_dir) {
    const auto metas = slkd::scan_run_metas(runs_dir);
    if (metas.empty()) {
        std::cout << "no completed runs under " << runs_dir << "\n";
        return 0;
    }
    const slkd::ComparisonTable table = slkd::build_comparison(metas);
    std::cout << slkd::comparison_to_text(table);
    slkd::write_text_file(runs_dir + "/report.csv", slkd::comparison_to_csv(table));
    std::cout << "written: " << runs_dir << "/report.csv\n";
    return 0;
}

// one labelled curve per completed run: the record csv next to its run_meta.json
void collect_records(const std::filesystem::path& dir,
                     std::vector<std::pair<std::string, slkd::TrainRecord>>& records) {
    const auto meta_path = dir / "run_meta.json";
    if (!std::filesystem::exists(meta_path)) return;
    slkd::json meta;
    try {
        meta = slkd::json::parse(slkd::read_text_file(meta_path.string()));
    } catch (...) {
        return;
    }
    const std::string arm = meta.value("arm", std::string("run"));
    const std::uint64_t seed = meta.value("seed", std::uint64_t{0});
    const char* stem = arm == "teacher" ? "teacher_record.csv" : "student_record.csv";
    const auto rec_path = dir / stem;
    if (!std::filesystem::exists(rec_path)) return;
    records.emplace_back(arm + "-s" + std::to_string(seed),
                         slkd::record_from_csv(slkd::read_text_file(rec_path.string())));
}

int cmd_plot(const std::string& runs_dir, const std::string& out_dir) {
    slkd::require(std::filesystem::is_directory(runs_dir), "plot: '" + runs_dir + "' is not a directory");
    std::vector<std::filesystem::path> dirs;
    for (const auto& entry : std::filesystem::directory_iterator(runs_dir)) {
        if (!entry.is_directory()) continue;
        dirs.push_back(entry.path());
        for (const auto& sub : std::filesystem::directory_iterator(entry.path()))
            if (sub.is_directory()) dirs.push_back(sub.path()); // ablation arms nest one deeper
    }
    std::sort(dirs.begin(), dirs.end());
    std::vector<std::pair<std::string, slkd::TrainRecord>> records;
    for (const auto& d : dirs) collect_records(d, records);
    slkd::require(!records.empty(), "plot: no records found under " + runs_dir);
    slkd::emit_plots(records, out_dir);
    std::cout << "written: " << out_dir << "/loss.svg and " << out_dir << "/accuracy.svg\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"teacher-student distillation with snapshot-driven curriculum"};
    app.require_subcommand(1);

    CommonOpts teacher_opts, kd_opts, slkd_opts, ablate_opts, eval_opts;
    std::string kd_teacher, slkd_teacher;
    std::string score_snapshot, score_data, score_out = "scores.csv";
    std::string part_scores, part_out = "plan.csv";
    int part_stages = 3;
    std::string eval_ckpt, eval_data;
    std::string report_runs, plot_runs, plot_out;

    auto* c_teacher = app.add_subcommand("train-teacher", "train the teacher on hard labels");
    add_common(c_teacher, teacher_opts, true);

    auto* c_kd = app.add_subcommand("distill-kd", "uniform distillation into the student");
    add_common(c_kd, kd_opts, true);
    c_kd->add_option("--teacher", kd_teacher, "teacher checkpoint")->required();

    auto* c_slkd = app.add_subcommand("distill-slkd", "staged curriculum distillation into the student");
    add_common(c_slkd, slkd_opts, true);
    c_slkd->add_option("--teacher", slkd_teacher, "teacher checkpoint")->required();

    auto* c_score = app.add_subcommand("score", "score a dataset's difficulty with a snapshot");
    c_score->add_option("--snapshot", score_snapshot, "snapshot checkpoint")->required();
    c_score->add_option("--data", score_data, "dataset checkpoint")->required();
    c_score->add_option("--out", score_out, "output scores csv");

    auto* c_part = app.add_subcommand("partition", "build a class-balanced staged plan from scores");
    c_part->add_option("--scores", part_scores, "scores csv from `score`")->required();
    c_part->add_option("--stages", part_stages, "number of stages")->required();
    c_part->add_option("--out", part_out, "output plan csv");

    auto* c_eval = app.add_subcommand("eval", "evaluate a checkpoint");
    add_common(c_eval, eval_opts, false);
    c_eval->add_option("--checkpoint", eval_ckpt, "model checkpoint")->required();
    c_eval->add_option("--data", eval_data, "dataset checkpoint (default: config test split)");

    auto* c_ablate = app.add_subcommand("ablate-snapshots", "paired student- vs teacher-snapshot curricula");
    add_common(c_ablate, ablate_opts, true);

    auto* c_report = app.add_subcommand("report", "aggregate per-seed accuracies into a table");
    c_report->add_option("--runs", report_runs, "runs directory (default: run root)");

    auto* c_plot = app.add_subcommand("plot", "loss/accuracy SVG charts from run records");
    c_plot->add_option("--runs", plot_runs, "runs directory (default: run root)");
    c_plot->add_option("--out", plot_out, "output directory (default: the runs directory)");

    CLI11_PARSE(app, argc, argv);

    std::string run_dir; // populated before long work so failures can be marked
    try {
        if (c_teacher->parsed()) return cmd_train_teacher(teacher_opts, run_dir);
        if (c_kd->parsed()) return cmd_distill(kd_opts, kd_teacher, false, run_dir);
        if (c_slkd->parsed()) return cmd_distill(slkd_opts, slkd_teacher, true, run_dir);
        if (c_score->parsed()) return cmd_score(score_snapshot, score_data, score_out);
        if (c_part->parsed()) return cmd_partition(part_scores, part_stages, part_out);
        if (c_eval->parsed()) return cmd_eval(eval_opts, eval_ckpt, eval_data);
        if (c_ablate->parsed()) return cmd_ablate(ablate_opts, run_dir);
        if (c_report->parsed()) {
            CommonOpts o;
            return cmd_report(report_runs.empty() ? run_root(o) : report_runs);
        }
        if (c_plot->parsed()) {
            CommonOpts o;
            const std::string runs = plot_runs.empty() ? run_root(o) : plot_runs;
            return cmd_plot(runs, plot_out.empty() ? runs : plot_out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        if (!run_dir.empty()) {
            try {
                slkd::write_text_file(run_dir + "/FAILED", std::string(e.what()) + "\n");
            } catch (...) {
            }
        }
        return 1;
    }
    return 0;
}
