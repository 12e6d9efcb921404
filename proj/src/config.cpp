#include "fnd/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "fnd/errors.hpp"

namespace fnd {
namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw config_error("config key '" + key + "' expects a boolean, got '" + v + "'");
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        std::uint64_t x = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw config_error("config key '" + key + "' expects an integer, got '" + v + "'");
    }
}

double parse_f64(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw config_error("config key '" + key + "' expects a number, got '" + v + "'");
    }
}

} // namespace

void apply_config_value(ExperimentConfig& cfg, const std::string& dotted_key,
                        const std::string& value) {
    const std::string& k = dotted_key;
    const std::string v = trim(value);

    if (k == "data.datasets") {
        cfg.datasets = split_list(v);
        for (const auto& d : cfg.datasets)
            if (d != "fixture" && d != "liar" && d != "kaggle")
                throw config_error("config key 'data.datasets': unknown dataset '" + d + "'");
    } else if (k == "data.fixture_path") cfg.fixture_path = v;
    else if (k == "data.liar_dir") cfg.liar_dir = v;
    else if (k == "data.liar_include_valid") cfg.liar_include_valid = parse_bool(k, v);
    else if (k == "data.kaggle_csv") cfg.kaggle_csv = v;
    else if (k == "data.stoplist") cfg.stoplist_path = v;
    else if (k == "data.liar_label_col") cfg.liar_cols.label_col = parse_u64(k, v);
    else if (k == "data.liar_statement_col") cfg.liar_cols.statement_col = parse_u64(k, v);
    else if (k == "data.split_ratio") cfg.split_ratio = parse_f64(k, v);
    else if (k == "run.representations") {
        cfg.representations.clear();
        for (const auto& r : split_list(v)) cfg.representations.push_back(parse_rep(r));
    } else if (k == "run.architectures") {
        cfg.architectures.clear();
        for (const auto& a : split_list(v)) cfg.architectures.push_back(parse_arch(a));
    } else if (k == "run.seed") cfg.seed = parse_u64(k, v);
    else if (k == "run.threads") cfg.threads = static_cast<int>(parse_u64(k, v));
    else if (k == "run.output_dir") cfg.output_dir = v;
    else if (k == "run.record_timing") cfg.record_timing = parse_bool(k, v);
    else if (k == "train.epochs") cfg.train.epochs = parse_u64(k, v);
    else if (k == "train.batch") cfg.train.batch = parse_u64(k, v);
    else if (k == "train.lr") cfg.train.lr = parse_f64(k, v);
    else if (k == "desk.enabled") cfg.desk.enabled = parse_bool(k, v);
    else if (k == "desk.max_train") cfg.desk.max_train = parse_u64(k, v);
    else if (k == "desk.max_test") cfg.desk.max_test = parse_u64(k, v);
    else if (k == "desk.tfidf_max_features") cfg.desk.tfidf_max_features = parse_u64(k, v);
    else if (k == "onehot.vocab_size") cfg.onehot_vocab = parse_u64(k, v);
    else if (k == "onehot.seq_len") cfg.onehot_len = parse_u64(k, v);
    else if (k == "onehot.embed_dim") cfg.onehot_embed_dim = parse_u64(k, v);
    else if (k == "tfidf.max_features") cfg.tfidf_max_features = parse_u64(k, v);
    else if (k == "w2v.dim") cfg.w2v.dim = parse_u64(k, v);
    else if (k == "w2v.window") cfg.w2v.window = parse_u64(k, v);
    else if (k == "w2v.negative") cfg.w2v.negative_k = parse_u64(k, v);
    else if (k == "w2v.epochs") cfg.w2v.epochs = parse_u64(k, v);
    else if (k == "w2v.min_count") cfg.w2v.min_count = parse_u64(k, v);
    else if (k == "w2v.lr_start") cfg.w2v.lr_start = parse_f64(k, v);
    else if (k == "w2v.lr_end") cfg.w2v.lr_end = parse_f64(k, v);
    else if (k == "d2v.dim") cfg.d2v.dim = parse_u64(k, v);
    else if (k == "d2v.window") cfg.d2v.window = parse_u64(k, v);
    else if (k == "d2v.negative") cfg.d2v.negative_k = parse_u64(k, v);
    else if (k == "d2v.epochs") cfg.d2v.epochs = parse_u64(k, v);
    else if (k == "d2v.min_count") cfg.d2v.min_count = parse_u64(k, v);
    else if (k == "d2v.lr_start") cfg.d2v.lr_start = parse_f64(k, v);
    else if (k == "d2v.lr_end") cfg.d2v.lr_end = parse_f64(k, v);
    else if (k == "d2v.infer_epochs") cfg.infer_epochs = parse_u64(k, v);
    else if (k == "rnn.frame_size") cfg.frame_size = parse_u64(k, v);
    else throw config_error("unknown config key '" + k + "'");
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    ExperimentConfig cfg;
    std::string line, section;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw config_error(path + ":" + std::to_string(lineno) +
                                   ": malformed section header '" + line + "'");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error(path + ":" + std::to_string(lineno) +
                               ": expected 'key = value', got '" + line + "'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (section.empty())
            throw config_error(path + ":" + std::to_string(lineno) + ": key '" + key +
                               "' appears before any [section]");
        apply_config_value(cfg, section + "." + key, value);
    }
    return cfg;
}

std::string ExperimentConfig::echo() const {
    std::ostringstream out;
    auto list = [](const auto& xs, auto fmt) {
        std::string s;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (i) s += ",";
            s += fmt(xs[i]);
        }
        return s;
    };
    out << "data.datasets=" << list(datasets, [](const std::string& s) { return s; });
    out << " data.split_ratio=" << split_ratio;
    out << " run.representations="
        << list(representations, [](Rep r) { return to_string(r); });
    out << " run.architectures="
        << list(architectures, [](Arch a) { return to_string(a); });
    out << " run.seed=" << seed << " run.threads=" << threads;
    out << " train.epochs=" << train.epochs << " train.batch=" << train.batch
        << " train.lr=" << train.lr;
    out << " desk.enabled=" << (desk.enabled ? "true" : "false");
    if (desk.enabled)
        out << " desk.max_train=" << desk.max_train << " desk.max_test=" << desk.max_test
            << " desk.tfidf_max_features=" << desk.tfidf_max_features;
    out << " onehot.vocab_size=" << onehot_vocab << " onehot.seq_len=" << onehot_len
        << " onehot.embed_dim=" << onehot_embed_dim;
    out << " tfidf.max_features=" << tfidf_max_features;
    out << " w2v.dim=" << w2v.dim << " d2v.dim=" << d2v.dim
        << " d2v.infer_epochs=" << infer_epochs;
    out << " rnn.frame_size=" << frame_size;
    return out.str();
}

} // namespace fnd
