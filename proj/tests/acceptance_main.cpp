// Copyright (c) 2026 the ulrn authors
// SPDX-License-Identifier: Apache-2.0

// End-to-end acceptance suite for the unlearning engine. Runs the full
// method grid on the 5-class Gaussian toy (seeds 1, 2, 3, forgetting class
// 3) plus the property and format gates, and prints one PASS/FAIL line per
// criterion. Exits nonzero when any criterion fails.
//
// Usage: acceptance <path-to-ulrn-cli> <scratch-dir>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "testutil.hpp"
#include "ulrn/checkpoint.hpp"
#include "ulrn/csv.hpp"
#include "ulrn/engine.hpp"
#include "ulrn/eval.hpp"

using namespace ulrn;
namespace fs = std::filesystem;

namespace {

struct CriterionOutcome {
    int id;
    std::string title;
    bool pass;
    std::string detail;
};

std::vector<CriterionOutcome> outcomes;

void record(int id, const std::string& title, bool pass, const std::string& detail) {
    outcomes.push_back({id, title, pass, detail});
    std::printf("%s criterion %2d: %s  [%s]\n", pass ? "PASS" : "FAIL", id, title.c_str(),
                detail.c_str());
    std::fflush(stdout);
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

// ---------------------------------------------------------------------------
// Shared toy experiment: every method, three seeds.

struct RunOutcome {
    double a_f = 0.0;
    double a_r = 0.0;
    double nf_tail = 0.0;   // mean n_forget_synth, final 20% of steps
    double filt_tail = 0.0; // mean n_filtered, final 20%
    double h_b_mean = 0.0;  // mean per-step H_B, whole run
};

struct SeedOutcome {
    double teacher_af = 0.0;
    double gold_ar = 0.0;
    double mia_teacher = 0.0;
    double mia_gold = 0.0;
    double ain_gold_identity = 0.0;
    double ain_dfkd = 0.0;
    double ain_ispf = 0.0;
    std::map<Method, RunOutcome> runs;
};

double tail_mean(const std::vector<StepLog>& steps, auto field) {
    const std::size_t start = steps.size() - steps.size() / 5;
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t i = start; i < steps.size(); ++i) {
        sum += field(steps[i]);
        ++n;
    }
    return n ? sum / static_cast<double>(n) : 0.0;
}

SeedOutcome run_seed(std::uint64_t seed) {
    BlobSpec blob;
    blob.num_classes = 5;
    blob.dim = 2;
    blob.radius = 3.0;
    blob.sigma = 1.2;
    blob.train_per_class = 80;
    blob.test_per_class = 200;
    blob.seed = 42;
    DatasetPair data = make_blobs(blob);

    ClassifierSpec cls{2, {64, 64}, 5};
    LabelSplit split(5, {3});

    SupConfig sup;
    sup.epochs = 600;
    sup.batch_size = 16;
    sup.lr = 0.02;
    sup.momentum = 0.9;
    sup.seed = seed;

    TeacherResult teacher = train_teacher(data.train, data.test, cls, sup);
    TeacherResult gold = retrain_gold(data.train, data.test, split, cls, sup);

    double lo, hi;
    data.train.min_max(lo, hi);
    GeneratorSpec gen{8, {32, 32}, 2, lo, hi};

    SeedOutcome out;
    out.teacher_af = accuracy(teacher.params, cls, data.test, split.forget());
    out.gold_ar = accuracy(gold.params, cls, data.test, split.retain());

    const Dataset d_f_train = restrict(data.train, split.forget());
    const Dataset d_r_train = restrict(data.train, split.retain());
    const Dataset d_r_test = restrict(data.test, split.retain());
    out.mia_teacher = mia_i(teacher.params, cls, d_f_train, d_r_train, d_r_test).percent;
    out.mia_gold = mia_i(gold.params, cls, d_f_train, d_r_train, d_r_test).percent;

    RelearnConfig relearn;
    relearn.lr = 0.01;
    relearn.max_steps = 300;
    relearn.alpha = 0.05;
    relearn.eval_every = 1;
    relearn.batch_size = 64;
    relearn.seed = 99;
    out.ain_gold_identity = ain(gold.params, gold.params, teacher.params, cls, data.train,
                                data.test, split, relearn);

    const std::vector<Method> methods = {Method::Dfkd, Method::BlockF, Method::Gkt, Method::Is,
                                         Method::Pf,   Method::Ispf,   Method::PdIs};
    const std::size_t rt_gold =
        relearn_steps(gold.params, cls, data.train, data.test, split, out.teacher_af, relearn);

    for (Method m : methods) {
        TrainConfig cfg;
        cfg.epochs = 60;
        cfg.loops = 5;
        cfg.n_g = 2;
        cfg.n_s = 10;
        cfg.batch_size = 128;
        cfg.lr_g = 5e-3;
        cfg.lr_s = 0.05;
        cfg.decay.milestones = {45};
        cfg.decay.gamma = 0.1;
        cfg.seed = seed;
        cfg.method = m;
        cfg.delta = default_delta(5);
        cfg.balance_weight = 0.5;

        UnlearnResult r = run_unlearning(teacher.params, cls, gen, cfg, split);
        RunOutcome ro;
        ro.a_f = accuracy(r.student, cls, data.test, split.forget());
        ro.a_r = accuracy(r.student, cls, data.test, split.retain());
        ro.nf_tail = tail_mean(r.steps, [](const StepLog& s) {
            return static_cast<double>(s.n_forget_synth);
        });
        ro.filt_tail = tail_mean(r.steps, [](const StepLog& s) {
            return static_cast<double>(s.n_filtered);
        });
        double hb = 0.0;
        for (const auto& s : r.steps) hb += s.h_b;
        ro.h_b_mean = hb / static_cast<double>(r.steps.size());
        out.runs[m] = ro;

        if (m == Method::Dfkd || m == Method::Ispf) {
            const std::size_t rt = relearn_steps(r.student, cls, data.train, data.test, split,
                                                 out.teacher_af, relearn);
            const double ain_value = static_cast<double>(rt) / static_cast<double>(rt_gold);
            if (m == Method::Dfkd) out.ain_dfkd = ain_value;
            if (m == Method::Ispf) out.ain_ispf = ain_value;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Criteria 1-3: property gates.

void criterion_gradients() {
    Rng rng(101);
    ClassifierSpec cls{2, {6}, 4};     // two weight layers
    GeneratorSpec gen_spec{3, {6}, 2, -2.0, 2.0};
    ParameterSet teacher = init_classifier(cls, rng);
    ParameterSet student = init_classifier(cls, rng);
    ParameterSet generator = init_generator(gen_spec, rng);
    for (auto& e : teacher) {
        for (std::size_t i = 0; i < e.value.size(); ++i) e.value[i] *= 2.0;
    }
    Tensor z = sample_noise(rng, 5, 3);
    Tensor x({5, 2});
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = rng.next_normal();
    Tensor t_logits({5, 4});
    for (std::size_t i = 0; i < t_logits.size(); ++i) t_logits[i] = 2.0 * rng.next_normal();
    const Tensor t_probs = softmax(t_logits);
    LabelSplit split(4, {1});

    double worst = 0.0;
    std::string worst_name;
    auto check = [&](const char* name, ParameterSet& params,
                     const std::function<LossValue(Graph&)>& build) {
        const auto r = test::gradcheck(params, build, 1e-5, 1e-6);
        if (r.max_rel_err > worst) {
            worst = r.max_rel_err;
            worst_name = name;
        }
    };

    check("kd", student, [&](Graph& g) {
        NodeId log_s = g.log_softmax(classifier_logits(g, student, cls, g.constant(x), true));
        return kd_loss(g, t_probs, log_s);
    });
    check("postfilter", student, [&](Graph& g) {
        NodeId log_s = g.log_softmax(classifier_logits(g, student, cls, g.constant(x), true));
        return postfilter_kd_loss(g, t_logits, log_s, split);
    });
    auto gen_build = [&](int which) {
        return [&, which](Graph& g) -> LossValue {
            NodeId xg = generate(g, generator, gen_spec, g.constant(z), true);
            NodeId log_t = g.log_softmax(classifier_logits(g, std::as_const(teacher), cls, xg));
            NodeId log_s = g.log_softmax(classifier_logits(g, std::as_const(student), cls, xg));
            if (which == 0) return adv_loss(g, log_t, log_s);
            if (which == 1) return is_loss(g, log_t, log_s, split);
            return balance_loss(g, log_t);
        };
    };
    check("adv", generator, gen_build(0));
    check("is", generator, gen_build(1));
    check("balance", generator, gen_build(2));

    record(1, "gradient soundness for every loss", worst < 1e-4,
           "max rel err " + fmt(worst) + " (" + worst_name + ")");
}

void criterion_redistribution() {
    Rng rng(103);
    const std::size_t k = 6;
    std::size_t checked = 0;
    bool pass = true;
    std::string detail = "all rows ok";
    for (int rep = 0; rep < 10000 && pass; ++rep) {
        Tensor t({1, k});
        for (std::size_t i = 0; i < k; ++i) t[i] = rng.next_uniform(-6.0, 6.0);
        std::vector<std::size_t> forget;
        for (std::size_t c = 0; c < k; ++c) {
            if (rng.next_unit() < 0.4 && forget.size() + 1 < k) forget.push_back(c);
        }
        LabelSplit split(k, forget);
        Tensor out = redistribute_logits(t, split);

        if (std::abs(sum(out) - sum(t)) > 1e-9) {
            pass = false;
            detail = "row sum drift at rep " + std::to_string(rep);
            break;
        }
        double mn = t[0];
        for (std::size_t i = 1; i < k; ++i) mn = std::min(mn, t[i]);
        for (std::size_t f : split.forget()) {
            if (out[f] != mn) {
                pass = false;
                detail = "forgetting logit not at row min";
            }
        }
        const Tensor probs = softmax(out);
        for (std::size_t f : split.forget()) {
            for (std::size_t r : split.retain()) {
                if (probs[f] > probs[r] + 1e-15) {
                    pass = false;
                    detail = "forgetting probability above a retaining one";
                }
            }
        }
        ++checked;
    }
    record(2, "logit redistribution identities", pass,
           detail + " (" + std::to_string(checked) + " rows)");
}

void criterion_loss_identities() {
    Rng rng(107);
    const std::size_t k = 5;
    LabelSplit empty_forget(k, {});
    bool pass = true;
    std::string detail = "all rows ok";
    for (int rep = 0; rep < 10000 && pass; ++rep) {
        Tensor t({1, k}), s({1, k});
        double ts = 0.0, ss = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            t[i] = 0.01 + rng.next_unit();
            s[i] = 0.01 + rng.next_unit();
            ts += t[i];
            ss += s[i];
        }
        for (std::size_t i = 0; i < k; ++i) {
            t[i] /= ts;
            s[i] /= ss;
        }
        Graph g;
        NodeId slog = g.constant(log(s));
        const double kd = kd_loss(g, t, slog).value;
        const double adv = adv_loss(g, t, slog).value;
        const double is_empty = is_loss(g, t, slog, empty_forget).value;
        if (adv != -kd) {
            pass = false;
            detail = "adv != -kd at rep " + std::to_string(rep);
        }
        if (is_empty != adv) {
            pass = false;
            detail = "is(empty) != adv at rep " + std::to_string(rep);
        }
        Graph g2;
        const double self = kd_loss(g2, t, g2.constant(log(t))).value;
        if (std::abs(self) > 1e-12) {
            pass = false;
            detail = "kd(T,T) = " + fmt(self);
        }
    }
    record(3, "loss identities (adv = -kd, is(empty) = adv, kd(T,T) = 0)", pass, detail);
}

// ---------------------------------------------------------------------------
// Criteria 11-12: formats and CLI determinism.

void criterion_formats(const fs::path& scratch) {
    bool pass = true;
    std::string detail = "round-trips ok";
    const fs::path dir = scratch / "formats";
    fs::create_directories(dir);

    Rng rng(109);
    ParameterSet ps = init_classifier(ClassifierSpec{3, {4}, 3}, rng);
    const fs::path a = dir / "a.ulrn";
    const fs::path b = dir / "b.ulrn";
    save_checkpoint(a, ps);
    save_checkpoint(b, load_checkpoint(a));
    auto slurp = [](const fs::path& p) {
        std::ifstream f(p, std::ios::binary);
        return std::string((std::istreambuf_iterator<char>(f)),
                           std::istreambuf_iterator<char>());
    };
    if (slurp(a) != slurp(b)) {
        pass = false;
        detail = "checkpoint resave differs";
    }

    // two-image IDX fixture
    std::string images, labels;
    auto be = [](std::string& s, std::uint32_t v) {
        s.push_back(static_cast<char>((v >> 24) & 0xFF));
        s.push_back(static_cast<char>((v >> 16) & 0xFF));
        s.push_back(static_cast<char>((v >> 8) & 0xFF));
        s.push_back(static_cast<char>(v & 0xFF));
    };
    be(images, 0x00000803);
    be(images, 2);
    be(images, 2);
    be(images, 2);
    const unsigned char pix[8] = {0, 255, 128, 64, 32, 16, 8, 200};
    for (unsigned char p : pix) images.push_back(static_cast<char>(p));
    be(labels, 0x00000801);
    be(labels, 2);
    labels.push_back(4);
    labels.push_back(0);
    {
        std::ofstream fi(dir / "img.idx", std::ios::binary);
        fi << images;
        std::ofstream fl(dir / "lab.idx", std::ios::binary);
        fl << labels;
    }
    Dataset d = load_idx(dir / "img.idx", dir / "lab.idx");
    for (std::size_t i = 0; i < 8; ++i) {
        if (d.x[i] != static_cast<double>(pix[i]) / 255.0) {
            pass = false;
            detail = "idx pixel mismatch";
        }
    }
    if (d.y[0] != 4 || d.y[1] != 0) {
        pass = false;
        detail = "idx label mismatch";
    }

    std::string bad = images;
    bad[3] = 0x02; // magic becomes 0x00000802
    {
        std::ofstream f(dir / "bad.idx", std::ios::binary);
        f << bad;
    }
    bool rejected = false;
    try {
        load_idx(dir / "bad.idx", dir / "lab.idx");
    } catch (const FormatError&) {
        rejected = true;
    }
    if (!rejected) {
        pass = false;
        detail = "bad idx magic accepted";
    }

    std::string corrupt = slurp(a);
    corrupt[corrupt.size() / 2] = static_cast<char>(corrupt[corrupt.size() / 2] ^ 0x10);
    {
        std::ofstream f(dir / "corrupt.ulrn", std::ios::binary);
        f << corrupt;
    }
    rejected = false;
    try {
        load_checkpoint(dir / "corrupt.ulrn");
    } catch (const FormatError&) {
        rejected = true;
    }
    if (!rejected) {
        pass = false;
        detail = "corrupt checkpoint accepted";
    }

    record(11, "format round-trips and rejection", pass, detail);
}

int run_cli(const std::string& command) {
    const int status = std::system(command.c_str());
    if (status == -1) return -1;
    return WEXITSTATUS(status);
}

void criterion_sweep_determinism(const std::string& cli, const fs::path& scratch) {
    bool pass = true;
    std::string detail;

    const fs::path dir = scratch / "sweep";
    fs::create_directories(dir);
    const fs::path cfg_path = dir / "sweep.cfg";
    {
        std::ofstream cfg(cfg_path);
        cfg << "data.kind = blobs\n"
               "data.classes = 5\n"
               "data.dim = 2\n"
               "data.sigma = 1.0\n"
               "data.radius = 3.0\n"
               "data.train_per_class = 30\n"
               "data.test_per_class = 15\n"
               "data.seed = 5\n"
               "teacher.hidden = 16\n"
               "teacher.epochs = 20\n"
               "teacher.batch_size = 16\n"
               "teacher.lr = 0.05\n"
               "gen.noise_dim = 4\n"
               "gen.hidden = 16\n"
               "unlearn.epochs = 4\n"
               "unlearn.loops = 2\n"
               "unlearn.n_g = 1\n"
               "unlearn.n_s = 5\n"
               "unlearn.batch_size = 64\n"
               "unlearn.lr_g = 0.002\n"
               "unlearn.lr_s = 0.05\n"
               "unlearn.forget = 3\n"
               "eval.relearn_max_steps = 40\n"
               "eval.relearn_every = 2\n"
               "eval.relearn_lr = 0.02\n"
               "eval.mia_shadows = 2\n"
               "eval.shadow_epochs = 3\n"
               "sweep.methods = GKT,ISPF\n"
               "seeds = 1,2\n";
    }

    const int missing = run_cli("'" + cli + "' train-teacher --config " +
                                (dir / "missing.cfg").string() + " >/dev/null 2>&1");
    if (missing != 2) {
        pass = false;
        detail = "missing config exit code " + std::to_string(missing) + " != 2; ";
    }

    auto sweep_into = [&](const fs::path& out) {
        fs::create_directories(out);
        return run_cli("ULRN_OUT='" + out.string() + "' '" + cli + "' sweep --config " +
                       cfg_path.string() + " >" + (out / "stdout.txt").string() + " 2>&1");
    };
    const fs::path out_a = dir / "run_a";
    const fs::path out_b = dir / "run_b";
    const int code_a = sweep_into(out_a);
    const int code_b = sweep_into(out_b);
    if (code_a != 0 || code_b != 0) {
        pass = false;
        detail += "sweep exit codes " + std::to_string(code_a) + "/" + std::to_string(code_b);
    } else {
        auto slurp = [](const fs::path& p) {
            std::ifstream f(p, std::ios::binary);
            return std::string((std::istreambuf_iterator<char>(f)),
                               std::istreambuf_iterator<char>());
        };
        const std::string report_a = slurp(out_a / "report.csv");
        const std::string report_b = slurp(out_b / "report.csv");
        if (report_a.empty()) {
            pass = false;
            detail += "empty report.csv";
        } else if (report_a != report_b) {
            pass = false;
            detail += "report.csv differs between runs";
        } else if (slurp(out_a / "teacher_s1.ulrn") != slurp(out_b / "teacher_s1.ulrn")) {
            pass = false;
            detail += "teacher checkpoints differ between runs";
        } else {
            // idempotent rerun: cached checkpoints are reused, report identical
            const int code_c = sweep_into(out_a);
            if (code_c != 0 || slurp(out_a / "report.csv") != report_b) {
                pass = false;
                detail += "cached rerun diverged";
            } else {
                detail += "identical report.csv (" + std::to_string(report_a.size()) +
                          " bytes), cached rerun identical";
            }
        }
    }
    record(12, "sweep determinism and CLI exit codes", pass, detail);
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 3) {
        std::fprintf(stderr, "usage: acceptance <ulrn-cli> <scratch-dir>\n");
        return 2;
    }
    const std::string cli = argv[1];
    const fs::path scratch = argv[2];
    fs::create_directories(scratch);

    criterion_gradients();
    criterion_redistribution();
    criterion_loss_identities();

    // shared toy runs for criteria 4-10
    std::map<std::uint64_t, SeedOutcome> seeds;
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        std::printf("... running toy experiment, seed %llu\n",
                    static_cast<unsigned long long>(seed));
        std::fflush(stdout);
        seeds[seed] = run_seed(seed);
    }

    auto seed_mean = [&](auto field) {
        double s = 0.0;
        for (const auto& [k, v] : seeds) s += field(v);
        return s / static_cast<double>(seeds.size());
    };

    { // criterion 4: forgetting drift
        int ok = 0;
        std::string detail;
        for (const auto& [k, v] : seeds) {
            const double dfkd = v.runs.at(Method::Dfkd).nf_tail;
            const double gkt = v.runs.at(Method::Gkt).nf_tail;
            const double is = v.runs.at(Method::Is).nf_tail;
            const bool seed_ok = gkt >= 1.5 * dfkd && is <= gkt / 1.5;
            ok += seed_ok ? 1 : 0;
            detail += "s" + std::to_string(k) + ":" + fmt(dfkd) + "/" + fmt(gkt) + "/" +
                      fmt(is) + " ";
        }
        record(4, "forgetting drift: GKT > 1.5x DFKD and IS < GKT / 1.5", ok >= 2,
               "DFKD/GKT/IS tail counts " + detail + "(" + std::to_string(ok) + "/3 seeds)");
    }

    { // criterion 5: over-filtering
        int ok = 0;
        std::string detail;
        for (const auto& [k, v] : seeds) {
            const double nf = v.runs.at(Method::Gkt).nf_tail;
            const double filt = v.runs.at(Method::Gkt).filt_tail;
            ok += filt >= nf ? 1 : 0;
            detail += "s" + std::to_string(k) + ":" + fmt(filt) + ">=" + fmt(nf) + " ";
        }
        record(5, "over-filtering: GKT filtered >= forgetting synthesized", ok >= 2,
               detail + "(" + std::to_string(ok) + "/3 seeds)");
    }

    { // criterion 6: batch entropy
        const double pf = seed_mean([](const SeedOutcome& v) {
            return v.runs.at(Method::Pf).h_b_mean;
        });
        const double gkt = seed_mean([](const SeedOutcome& v) {
            return v.runs.at(Method::Gkt).h_b_mean;
        });
        record(6, "batch retaining entropy: PF exceeds GKT by 20%", pf >= 1.2 * gkt,
               "PF " + fmt(pf) + " vs GKT " + fmt(gkt));
    }

    { // criterion 7: end-to-end unlearning
        int ok = 0;
        std::string detail;
        for (const auto& [k, v] : seeds) {
            const auto& ispf = v.runs.at(Method::Ispf);
            const auto& gkt = v.runs.at(Method::Gkt);
            const bool seed_ok = ispf.a_f <= 2.0 && ispf.a_r >= v.gold_ar - 5.0 &&
                                 gkt.a_r <= ispf.a_r - 3.0;
            ok += seed_ok ? 1 : 0;
            detail += "s" + std::to_string(k) + ":af=" + fmt(ispf.a_f) + ",ar=" +
                      fmt(ispf.a_r) + ",gold=" + fmt(v.gold_ar) + ",gkt=" + fmt(gkt.a_r) + " ";
        }
        record(7, "ISPF forgets with near-gold retention, GKT trails by 3 points", ok >= 2,
               detail + "(" + std::to_string(ok) + "/3 seeds)");
    }

    { // criterion 8: BlockF insufficiency
        const double af = seed_mean([](const SeedOutcome& v) {
            return v.runs.at(Method::BlockF).a_f;
        });
        record(8, "BlockF leaves forgetting accuracy at 20% or more", af >= 20.0,
               "BlockF A_f " + fmt(af));
    }

    { // criterion 9: metric sanity
        const double mia_gold = seed_mean([](const SeedOutcome& v) { return v.mia_gold; });
        const double mia_teacher = seed_mean([](const SeedOutcome& v) { return v.mia_teacher; });
        bool identity = true;
        for (const auto& [k, v] : seeds) identity = identity && v.ain_gold_identity == 1.0;
        const double ain_dfkd = seed_mean([](const SeedOutcome& v) { return v.ain_dfkd; });
        const double ain_ispf = seed_mean([](const SeedOutcome& v) { return v.ain_ispf; });
        const bool pass =
            mia_gold >= 95.0 && mia_teacher <= 20.0 && identity && ain_dfkd < ain_ispf;
        record(9, "metric sanity: MIA-I extremes and AIN ordering", pass,
               "MIA_I gold " + fmt(mia_gold) + ", teacher " + fmt(mia_teacher) +
                   ", AIN identity " + (identity ? "1.0" : "broken") + ", AIN DFKD " +
                   fmt(ain_dfkd) + " < ISPF " + fmt(ain_ispf));
    }

    { // criterion 10: PD ablation
        const double ispf = seed_mean([](const SeedOutcome& v) {
            return v.runs.at(Method::Ispf).a_r;
        });
        const double pd_is = seed_mean([](const SeedOutcome& v) {
            return v.runs.at(Method::PdIs).a_r;
        });
        const double ispf_af = seed_mean([](const SeedOutcome& v) {
            return v.runs.at(Method::Ispf).a_f;
        });
        const double pd_af = seed_mean([](const SeedOutcome& v) {
            return v.runs.at(Method::PdIs).a_f;
        });
        std::ofstream ab(scratch / "ablation.csv");
        ab << "method,A_f_mean,A_r_mean\n";
        ab << "ISPF," << csv_num(ispf_af) << ',' << csv_num(ispf) << "\n";
        ab << "PD_IS," << csv_num(pd_af) << ',' << csv_num(pd_is) << "\n";
        record(10, "redistribution beats plain renormalization (PD ablation)",
               ispf >= pd_is - 1.0,
               "ISPF A_r " + fmt(ispf) + " vs PD_IS A_r " + fmt(pd_is) + ", rows in " +
                   (scratch / "ablation.csv").string());
    }

    criterion_formats(scratch);
    criterion_sweep_determinism(cli, scratch);

    int failures = 0;
    for (const auto& o : outcomes) failures += o.pass ? 0 : 1;
    std::printf("%d/%zu criteria passed\n", static_cast<int>(outcomes.size()) - failures,
                outcomes.size());
    return failures == 0 ? 0 : 1;
}
