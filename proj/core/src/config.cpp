// Copyright (c) 2026 the ulrn authors
// SPDX-License-Identifier: Apache-2.0

#include "ulrn/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "ulrn/checkpoint.hpp"

namespace ulrn {

namespace {

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        // data
        "data.kind", "data.classes", "data.dim", "data.sigma", "data.radius",
        "data.train_per_class", "data.test_per_class", "data.seed", "data.normalize",
        "data.train_images", "data.train_labels", "data.test_images", "data.test_labels",
        // teacher / retrain
        "teacher.hidden", "teacher.epochs", "teacher.batch_size", "teacher.lr",
        "teacher.momentum", "teacher.milestones", "teacher.gamma",
        // generator
        "gen.noise_dim", "gen.hidden", "gen.lo", "gen.hi",
        // unlearning
        "unlearn.method", "unlearn.forget", "unlearn.epochs", "unlearn.loops", "unlearn.n_g",
        "unlearn.n_s", "unlearn.batch_size", "unlearn.lr_g", "unlearn.lr_s",
        "unlearn.milestones", "unlearn.gamma", "unlearn.delta", "unlearn.balance_weight",
        // eval
        "eval.relearn_lr", "eval.relearn_max_steps", "eval.relearn_alpha", "eval.relearn_every",
        "eval.relearn_batch_size", "eval.mia_shadows", "eval.shadow_epochs",
        // sweep
        "sweep.methods", "sweep.forget",
        // general
        "output_dir", "seeds",
    };
    return keys;
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            parts.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(trim(cur));
    if (parts.size() == 1 && parts[0].empty()) parts.clear();
    return parts;
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const unsigned long long x = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': expected an integer, got '" + v + "'");
    }
}

double parse_f64(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': expected a number, got '" + v + "'");
    }
}

} // namespace

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file: " + path.string());
    std::stringstream ss;
    ss << f.rdbuf();
    return from_string(ss.str(), path.string());
}

ExperimentConfig ExperimentConfig::from_string(const std::string& text,
                                               const std::string& origin) {
    ExperimentConfig cfg;
    cfg.origin_ = origin;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(origin + ":" + std::to_string(line_no) +
                              ": expected 'key = value', got '" + line + "'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (cfg.values_.count(key)) {
            throw ConfigError(origin + ":" + std::to_string(line_no) + ": duplicate key '" + key +
                              "'");
        }
        cfg.values_[key] = value;
    }
    cfg.validate_keys();
    cfg.validate_paths();
    return cfg;
}

void ExperimentConfig::validate_keys() const {
    for (const auto& [key, value] : values_) {
        if (!known_keys().count(key)) {
            throw ConfigError(origin_ + ": unknown config key '" + key + "'");
        }
    }
}

void ExperimentConfig::validate_paths() const {
    for (const char* key :
         {"data.train_images", "data.train_labels", "data.test_images", "data.test_labels"}) {
        auto it = values_.find(key);
        if (it != values_.end() && !std::filesystem::exists(it->second)) {
            throw ConfigError(origin_ + ": " + key + " references a missing path: " + it->second);
        }
    }
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
    if (!known_keys().count(key)) throw ConfigError("unknown config key '" + key + "'");
    values_[key] = value;
}

std::uint64_t ExperimentConfig::hash() const {
    std::string canon;
    for (const auto& [key, value] : values_) { // std::map iterates sorted
        canon += key;
        canon += '=';
        canon += value;
        canon += '\n';
    }
    return fnv1a64(canon);
}

const std::string& ExperimentConfig::raw(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("config key '" + key + "' is not set");
    return it->second;
}

std::string ExperimentConfig::get(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

std::uint64_t ExperimentConfig::get_u64(const std::string& key, std::uint64_t fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : parse_u64(key, it->second);
}

double ExperimentConfig::get_f64(const std::string& key, double fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : parse_f64(key, it->second);
}

bool ExperimentConfig::get_bool(const std::string& key, bool fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    if (it->second == "true" || it->second == "1") return true;
    if (it->second == "false" || it->second == "0") return false;
    throw ConfigError("config key '" + key + "': expected true/false, got '" + it->second + "'");
}

std::vector<std::size_t> ExperimentConfig::get_size_list(
    const std::string& key, const std::vector<std::size_t>& fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    std::vector<std::size_t> out;
    for (const auto& part : split(it->second, ',')) out.push_back(parse_u64(key, part));
    return out;
}

std::string ExperimentConfig::data_kind() const { return get("data.kind", "blobs"); }

DatasetPair ExperimentConfig::load_data() const {
    const std::string kind = data_kind();
    DatasetPair pair;
    if (kind == "blobs") {
        BlobSpec spec;
        spec.num_classes = get_u64("data.classes", 5);
        spec.dim = get_u64("data.dim", 2);
        spec.sigma = get_f64("data.sigma", 0.5);
        spec.radius = get_f64("data.radius", 3.0);
        spec.train_per_class = get_u64("data.train_per_class", 400);
        spec.test_per_class = get_u64("data.test_per_class", 200);
        spec.seed = get_u64("data.seed", 1);
        pair = make_blobs(spec);
    } else if (kind == "idx") {
        pair.train = load_idx(raw("data.train_images"), raw("data.train_labels"), SplitTag::Train);
        pair.test = load_idx(raw("data.test_images"), raw("data.test_labels"), SplitTag::Test);
    } else {
        throw ConfigError("data.kind must be 'blobs' or 'idx', got '" + kind + "'");
    }
    if (get_bool("data.normalize", false)) normalize_pair(pair.train, pair.test);
    return pair;
}

ClassifierSpec ExperimentConfig::classifier_spec(std::size_t input_dim,
                                                 std::size_t num_classes) const {
    ClassifierSpec spec;
    spec.input_dim = input_dim;
    spec.hidden = get_size_list("teacher.hidden", {32, 32});
    spec.num_classes = num_classes;
    spec.validate();
    return spec;
}

GeneratorSpec ExperimentConfig::generator_spec(std::size_t output_dim, double data_lo,
                                               double data_hi) const {
    GeneratorSpec spec;
    spec.noise_dim = get_u64("gen.noise_dim", 8);
    spec.hidden = get_size_list("gen.hidden", {32, 32});
    spec.output_dim = output_dim;
    spec.lo = get_f64("gen.lo", data_lo);
    spec.hi = get_f64("gen.hi", data_hi);
    spec.validate();
    return spec;
}

SupConfig ExperimentConfig::teacher_config(std::uint64_t seed) const {
    SupConfig cfg;
    cfg.epochs = get_u64("teacher.epochs", 30);
    cfg.batch_size = get_u64("teacher.batch_size", 64);
    cfg.lr = get_f64("teacher.lr", 0.05);
    cfg.momentum = get_f64("teacher.momentum", 0.9);
    cfg.decay.milestones = get_size_list("teacher.milestones", {});
    cfg.decay.gamma = get_f64("teacher.gamma", 0.1);
    cfg.seed = seed;
    return cfg;
}

TrainConfig ExperimentConfig::unlearn_config(std::uint64_t seed, std::size_t num_classes) const {
    TrainConfig cfg;
    cfg.epochs = get_u64("unlearn.epochs", 60);
    cfg.loops = get_u64("unlearn.loops", 1);
    cfg.n_g = get_u64("unlearn.n_g", 1);
    cfg.n_s = get_u64("unlearn.n_s", 10);
    cfg.batch_size = get_u64("unlearn.batch_size", 128);
    cfg.lr_g = get_f64("unlearn.lr_g", 1e-3);
    cfg.lr_s = get_f64("unlearn.lr_s", 0.05);
    cfg.decay.milestones = get_size_list("unlearn.milestones", {});
    cfg.decay.gamma = get_f64("unlearn.gamma", 0.1);
    cfg.seed = seed;
    cfg.method = parse_method(get("unlearn.method", "ISPF"));
    const std::string delta = get("unlearn.delta", "auto");
    cfg.delta = delta == "auto" ? default_delta(num_classes) : parse_f64("unlearn.delta", delta);
    cfg.balance_weight = get_f64("unlearn.balance_weight", 0.0);
    cfg.validate();
    return cfg;
}

RelearnConfig ExperimentConfig::relearn_config() const {
    RelearnConfig cfg;
    cfg.lr = get_f64("eval.relearn_lr", 0.01);
    cfg.max_steps = get_u64("eval.relearn_max_steps", 500);
    cfg.alpha = get_f64("eval.relearn_alpha", 0.05);
    cfg.eval_every = get_u64("eval.relearn_every", 1);
    cfg.batch_size = get_u64("eval.relearn_batch_size", 64);
    cfg.validate();
    return cfg;
}

MiaIIConfig ExperimentConfig::mia_config(std::uint64_t seed) const {
    MiaIIConfig cfg;
    cfg.n_shadow = get_u64("eval.mia_shadows", 4);
    cfg.seed = seed;
    cfg.shadow_train = teacher_config(seed);
    cfg.shadow_train.epochs = get_u64("eval.shadow_epochs", 10);
    return cfg;
}

std::vector<std::size_t> ExperimentConfig::forget_classes() const {
    auto classes = get_size_list("unlearn.forget", {3});
    if (classes.empty()) throw ConfigError("unlearn.forget must list at least one class");
    return classes;
}

std::vector<std::uint64_t> ExperimentConfig::seeds() const {
    std::vector<std::uint64_t> out;
    for (const auto& part : split(get("seeds", "1"), ',')) out.push_back(parse_u64("seeds", part));
    if (out.empty()) throw ConfigError("seeds must list at least one seed");
    return out;
}

std::filesystem::path ExperimentConfig::output_dir() const {
    if (const char* env = std::getenv("ULRN_OUT")) return env;
    return get("output_dir", "out");
}

std::vector<std::string> ExperimentConfig::sweep_methods() const {
    auto names = split(get("sweep.methods", "DFKD,BlockF,GKT,IS,PF,ISPF"), ',');
    for (const auto& n : names) parse_method(n); // validate early
    return names;
}

std::vector<std::vector<std::size_t>> ExperimentConfig::sweep_forget_groups() const {
    std::vector<std::vector<std::size_t>> groups;
    auto it = values_.find("sweep.forget");
    if (it == values_.end()) {
        groups.push_back(forget_classes());
        return groups;
    }
    for (const auto& group : split(it->second, ';')) {
        std::vector<std::size_t> classes;
        for (const auto& part : split(group, ',')) classes.push_back(parse_u64("sweep.forget", part));
        if (!classes.empty()) groups.push_back(std::move(classes));
    }
    if (groups.empty()) throw ConfigError("sweep.forget lists no class groups");
    return groups;
}

} // namespace ulrn
