#ifndef FND_CONFIG_HPP
#define FND_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "fnd/corpus.hpp"
#include "fnd/embeddings.hpp"
#include "fnd/models.hpp"

namespace fnd {

struct TrainParams {
    std::size_t epochs = 5;
    std::size_t batch = 32;
    double lr = 1e-3;
};

struct DeskScale {
    bool enabled = false;
    std::size_t max_train = 4000;
    std::size_t max_test = 1000;
    std::size_t tfidf_max_features = 5000;
};

// The full experiment configuration. Defaults reproduce the desk-scale
// fixture run; every key can be set from an INI-style config file
// ([section] + key = value lines), documented in the README.
struct ExperimentConfig {
    // [data]
    std::vector<std::string> datasets = {"fixture"};
    std::string fixture_path = "data/fixture_corpus.jsonl";
    std::string liar_dir = "data/liar";
    bool liar_include_valid = false;
    std::string kaggle_csv = "data/kaggle/train.csv";
    std::string stoplist_path = "data/stopwords_en.txt";
    LiarColumnMap liar_cols;
    double split_ratio = 0.8; // kaggle and fixture; liar ships its own split

    // [run]
    std::vector<Rep> representations = {Rep::onehot, Rep::tfidf, Rep::w2v_avg, Rep::d2v};
    std::vector<Arch> architectures = {Arch::ann, Arch::cnn, Arch::rnn};
    std::uint64_t seed = 42;
    int threads = 1;
    std::string output_dir = "out";
    bool record_timing = true;

    // [train]
    TrainParams train;

    // [desk]
    DeskScale desk;

    // [onehot]
    std::size_t onehot_vocab = 5000;
    std::size_t onehot_len = 20;
    std::size_t onehot_embed_dim = 64;

    // [tfidf]
    std::size_t tfidf_max_features = 0; // 0 = unlimited (desk profile caps it)

    // [w2v]
    TrainConfig w2v; // dim 100 etc.

    // [d2v]
    TrainConfig d2v;           // dim 300
    std::size_t infer_epochs = 20;

    // [rnn]
    std::size_t frame_size = 10;

    ExperimentConfig() {
        d2v.dim = 300;
    }

    std::size_t effective_tfidf_max_features() const {
        return desk.enabled ? desk.tfidf_max_features : tfidf_max_features;
    }

    // canonical key=value echo embedded in every report
    std::string echo() const;
};

// Parses an INI-style config file; unknown sections or keys are errors that
// name the offending key.
ExperimentConfig load_config(const std::string& path);

// Applies one "section.key=value" assignment (CLI overrides).
void apply_config_value(ExperimentConfig& cfg, const std::string& dotted_key,
                        const std::string& value);

} // namespace fnd

#endif
