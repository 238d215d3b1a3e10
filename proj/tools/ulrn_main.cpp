// Copyright (c) 2026 the ulrn authors
// SPDX-License-Identifier: Apache-2.0

// ulrn: data-free class-unlearning experiment harness.
//
//   ulrn train-teacher --config toy.cfg
//   ulrn unlearn       --config toy.cfg --method ISPF --forget 3
//   ulrn eval          --config toy.cfg --student out/ISPF_f3_s1.ulrn
//   ulrn sweep         --config toy.cfg
//
// Exit codes: 0 success, 1 runtime failure, 2 usage or config error.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "ulrn/checkpoint.hpp"
#include "ulrn/config.hpp"
#include "ulrn/csv.hpp"
#include "ulrn/engine.hpp"
#include "ulrn/eval.hpp"

namespace fs = std::filesystem;
using namespace ulrn;

namespace {

struct Workspace {
    ExperimentConfig config;
    DatasetPair data;
    ClassifierSpec cls_spec;
    GeneratorSpec gen_spec;
    fs::path out;

    static Workspace open(const std::string& config_path) {
        ExperimentConfig config = ExperimentConfig::load(config_path);
        DatasetPair data = config.load_data();
        const std::size_t k = std::max(data.train.num_classes(), data.test.num_classes());
        ClassifierSpec cls = config.classifier_spec(data.train.dim(), k);
        double lo, hi;
        data.train.min_max(lo, hi);
        GeneratorSpec gen = config.generator_spec(data.train.dim(), lo, hi);
        fs::path out = config.output_dir();
        fs::create_directories(out);
        return Workspace{std::move(config), std::move(data), std::move(cls), std::move(gen), out};
    }

    std::size_t num_classes() const { return cls_spec.num_classes; }
};

// label-split mistakes coming from CLI flags are usage errors (exit 2)
LabelSplit make_split(std::size_t num_classes, const std::vector<std::size_t>& forget) {
    try {
        return LabelSplit(num_classes, forget);
    } catch (const ContractError& e) {
        throw ConfigError(e.what());
    }
}

std::string classes_tag(const std::vector<std::size_t>& classes) {
    std::string tag = "f";
    for (std::size_t i = 0; i < classes.size(); ++i) {
        if (i) tag += '-';
        tag += std::to_string(classes[i]);
    }
    return tag;
}

std::string hash_tag(std::uint64_t h) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i, h >>= 4) s[i] = digits[h & 0xF];
    return s;
}

fs::path teacher_path(const Workspace& ws) { return ws.out / "teacher.ulrn"; }

fs::path seed_teacher_path(const Workspace& ws, std::uint64_t seed) {
    return ws.out / ("teacher_s" + std::to_string(seed) + ".ulrn");
}

fs::path gold_path(const Workspace& ws, const std::vector<std::size_t>& forget,
                   std::uint64_t seed) {
    return ws.out / ("gold_" + classes_tag(forget) + "_s" + std::to_string(seed) + "_" +
                     hash_tag(ws.config.hash()) + ".ulrn");
}

ParameterSet ensure_teacher(const Workspace& ws, const fs::path& path, std::uint64_t seed) {
    if (!fs::exists(path)) {
        TeacherResult teacher =
            train_teacher(ws.data.train, ws.data.test, ws.cls_spec, ws.config.teacher_config(seed));
        save_checkpoint(path, teacher.params);
        append_runs_csv(ws.out / "runs.csv", {"train-teacher", seed, teacher.train_acc,
                                              teacher.test_acc, path.filename().string()});
    }
    return load_checkpoint(path);
}

ParameterSet ensure_gold(const Workspace& ws, const LabelSplit& split, std::uint64_t seed) {
    const fs::path path = gold_path(ws, split.forget(), seed);
    if (!fs::exists(path)) {
        TeacherResult gold = retrain_gold(ws.data.train, ws.data.test, split, ws.cls_spec,
                                          ws.config.teacher_config(seed));
        save_checkpoint(path, gold.params);
        append_runs_csv(ws.out / "runs.csv", {"retrain-gold", seed, gold.train_acc, gold.test_acc,
                                              path.filename().string()});
    }
    return load_checkpoint(path);
}

RunMetrics evaluate_student(const Workspace& ws, const std::string& label,
                            const ParameterSet& student, const ParameterSet& teacher,
                            const ParameterSet& gold, const LabelSplit& split, std::uint64_t seed,
                            const MiaAttacker& attacker) {
    const Dataset& train = ws.data.train;
    const Dataset& test = ws.data.test;
    const Dataset d_f_train = restrict(train, split.forget());
    const Dataset d_r_train = restrict(train, split.retain());
    const Dataset d_r_test = restrict(test, split.retain());

    RunMetrics m;
    m.method = label;
    m.seed = seed;
    m.a_f = accuracy(student, ws.cls_spec, test, split.forget());
    m.a_r = accuracy(student, ws.cls_spec, test, split.retain());
    m.mia_i = mia_i(student, ws.cls_spec, d_f_train, d_r_train, d_r_test).percent;
    m.mia_ii = mia_ii_attack(attacker, student, ws.cls_spec, train, test);
    m.ain = ain(student, gold, teacher, ws.cls_spec, train, test, split, ws.config.relearn_config());
    m.per_class = per_class_accuracy(student, ws.cls_spec, test);
    return m;
}

int cmd_train_teacher(const std::string& config_path, std::optional<std::uint64_t> seed_flag) {
    Workspace ws = Workspace::open(config_path);
    const std::uint64_t seed = seed_flag.value_or(ws.config.seeds().front());
    TeacherResult teacher =
        train_teacher(ws.data.train, ws.data.test, ws.cls_spec, ws.config.teacher_config(seed));
    const fs::path path = teacher_path(ws);
    save_checkpoint(path, teacher.params);
    append_runs_csv(ws.out / "runs.csv", {"train-teacher", seed, teacher.train_acc,
                                          teacher.test_acc, path.filename().string()});
    std::cout << "teacher: " << path.string() << " train_acc=" << csv_num(teacher.train_acc)
              << " test_acc=" << csv_num(teacher.test_acc) << "\n";
    return 0;
}

int cmd_unlearn(const std::string& config_path, const std::string& method_flag,
                const std::string& forget_flag, std::optional<std::uint64_t> seed_flag) {
    Workspace ws = Workspace::open(config_path);
    if (!method_flag.empty()) ws.config.set("unlearn.method", method_flag);
    if (!forget_flag.empty()) ws.config.set("unlearn.forget", forget_flag);
    const std::uint64_t seed = seed_flag.value_or(ws.config.seeds().front());

    const fs::path tpath = teacher_path(ws);
    if (!fs::exists(tpath)) {
        std::cerr << "error: teacher checkpoint missing: " << tpath.string()
                  << " (run train-teacher first)\n";
        return 1;
    }
    ParameterSet teacher = load_checkpoint(tpath);
    LabelSplit split = make_split(ws.num_classes(), ws.config.forget_classes());
    TrainConfig train_cfg = ws.config.unlearn_config(seed, ws.num_classes());

    UnlearnResult result = run_unlearning(teacher, ws.cls_spec, ws.gen_spec, train_cfg, split);
    const std::string method = method_name(train_cfg.method);
    const fs::path student_path =
        ws.out / (method + "_" + classes_tag(split.forget()) + "_s" + std::to_string(seed) +
                  ".ulrn");
    save_checkpoint(student_path, result.student);
    write_steps_csv(ws.out / (method + "_steps.csv"), result.steps);
    std::cout << "student: " << student_path.string() << " steps=" << result.steps.size() << "\n";
    return 0;
}

int cmd_eval(const std::string& config_path, const std::string& student_path,
             std::optional<std::uint64_t> seed_flag, std::string label) {
    Workspace ws = Workspace::open(config_path);
    const std::uint64_t seed = seed_flag.value_or(ws.config.seeds().front());
    if (!fs::exists(student_path)) {
        throw ConfigError("student checkpoint missing: " + student_path);
    }
    ParameterSet student = load_checkpoint(student_path);
    const ClassifierSpec student_spec = infer_classifier_spec(student);
    if (student_spec.input_dim != ws.cls_spec.input_dim ||
        student_spec.num_classes != ws.cls_spec.num_classes) {
        throw ConfigError("student checkpoint shape " + std::to_string(student_spec.input_dim) +
                          "->" + std::to_string(student_spec.num_classes) +
                          " does not match config " + std::to_string(ws.cls_spec.input_dim) +
                          "->" + std::to_string(ws.cls_spec.num_classes));
    }

    LabelSplit split = make_split(ws.num_classes(), ws.config.forget_classes());
    ParameterSet teacher = ensure_teacher(ws, teacher_path(ws), seed);
    ParameterSet gold = ensure_gold(ws, split, seed);
    const MiaAttacker attacker =
        train_mia_attacker(ws.cls_spec, ws.data.train, ws.config.mia_config(seed));

    if (label.empty()) label = fs::path(student_path).stem().string();
    const RunMetrics m =
        evaluate_student(ws, label, student, teacher, gold, split, seed, attacker);
    const auto rows = assemble_report({m});
    std::cout << report_header() << "\n" << report_row_line(rows.front()) << "\n";
    std::cout << "per_class:";
    for (std::size_t c = 0; c < m.per_class.size(); ++c) {
        std::cout << ' ' << c << '=' << csv_num(m.per_class[c]);
    }
    std::cout << "\n";

    const fs::path eval_csv = ws.out / "eval.csv";
    const bool fresh = !fs::exists(eval_csv);
    std::ofstream f(eval_csv, std::ios::app);
    if (fresh) f << report_header() << "\n";
    f << report_row_line(rows.front()) << "\n";
    return 0;
}

int cmd_sweep(const std::string& config_path) {
    Workspace ws = Workspace::open(config_path);
    const auto seeds = ws.config.seeds();
    const auto methods = ws.config.sweep_methods();
    const auto groups = ws.config.sweep_forget_groups();

    std::vector<RunMetrics> runs;
    std::size_t failures = 0;
    for (const auto& group : groups) {
        LabelSplit split = make_split(ws.num_classes(), group);
        for (std::uint64_t seed : seeds) {
            ParameterSet teacher = ensure_teacher(ws, seed_teacher_path(ws, seed), seed);
            ParameterSet gold = ensure_gold(ws, split, seed);
            const MiaAttacker attacker =
                train_mia_attacker(ws.cls_spec, ws.data.train, ws.config.mia_config(seed));

            runs.push_back(evaluate_student(ws, "Original", teacher, teacher, gold, split, seed,
                                            attacker));
            runs.push_back(
                evaluate_student(ws, "Retrain", gold, teacher, gold, split, seed, attacker));

            for (const auto& method : methods) {
                const fs::path student_path =
                    ws.out / (method + "_" + classes_tag(group) + "_s" + std::to_string(seed) +
                              ".ulrn");
                try {
                    if (!fs::exists(student_path)) {
                        // copy so the gold-cache hash stays that of the loaded config
                        ExperimentConfig run_config = ws.config;
                        run_config.set("unlearn.method", method);
                        TrainConfig cfg = run_config.unlearn_config(seed, ws.num_classes());
                        UnlearnResult result =
                            run_unlearning(teacher, ws.cls_spec, ws.gen_spec, cfg, split);
                        save_checkpoint(student_path, result.student);
                        write_steps_csv(ws.out / (method + "_" + classes_tag(group) + "_s" +
                                                  std::to_string(seed) + "_steps.csv"),
                                        result.steps);
                    }
                    ParameterSet student = load_checkpoint(student_path);
                    runs.push_back(evaluate_student(ws, method, student, teacher, gold, split,
                                                    seed, attacker));
                } catch (const Error& e) {
                    ++failures;
                    std::cerr << "sweep: " << method << " " << classes_tag(group) << " seed "
                              << seed << " failed: " << e.what() << "\n";
                }
            }
        }
    }
    write_report_csv(ws.out / "report.csv", assemble_report(runs));
    std::cout << "report: " << (ws.out / "report.csv").string() << " runs=" << runs.size()
              << " failures=" << failures << "\n";
    return failures == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"data-free class-unlearning experiments"};
    app.require_subcommand(1);

    std::string config_path, method, forget, student, label;
    std::optional<std::uint64_t> seed;

    auto add_config = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "experiment config file")->required();
    };

    CLI::App* train = app.add_subcommand("train-teacher", "train the original model");
    add_config(train);
    train->add_option("--seed", seed, "override the config's first seed");

    CLI::App* unlearn = app.add_subcommand("unlearn", "run one unlearning method");
    add_config(unlearn);
    unlearn->add_option("--method", method, "method name (DFKD, BlockF, GKT, IS, PF, ISPF, PD, PD_IS)");
    unlearn->add_option("--forget", forget, "comma-separated forgetting classes");
    unlearn->add_option("--seed", seed, "override the config's first seed");

    CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate a student checkpoint");
    add_config(eval_cmd);
    eval_cmd->add_option("--student", student, "student checkpoint path")->required();
    eval_cmd->add_option("--seed", seed, "seed for gold caching and attack fitting");
    eval_cmd->add_option("--label", label, "method label for the report row");

    CLI::App* sweep = app.add_subcommand("sweep", "run every (method, seed, forget) combination");
    add_config(sweep);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (train->parsed()) return cmd_train_teacher(config_path, seed);
        if (unlearn->parsed()) return cmd_unlearn(config_path, method, forget, seed);
        if (eval_cmd->parsed()) return cmd_eval(config_path, student, seed, label);
        if (sweep->parsed()) return cmd_sweep(config_path);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
