#ifndef FND_MODELS_HPP
#define FND_MODELS_HPP

#include <string>
#include <vector>

#include "fnd/layers.hpp"
#include "fnd/vectorizers.hpp"

namespace fnd {

enum class Arch { ann, cnn, rnn, baseline };
enum class Rep { onehot, tfidf, w2v_avg, d2v };

std::string to_string(Arch a);
std::string to_string(Rep r);
Arch parse_arch(const std::string& s);
Rep parse_rep(const std::string& s);

// Hidden widths for the feed-forward net: half the input (capped at 1024),
// then keep halving, keeping only widths >= 16.
std::vector<std::size_t> ann_widths(std::size_t input_dim);

// How one representation's output feeds one architecture. Every pair maps
// to exactly one input form.
struct Adapter {
    Rep rep = Rep::tfidf;
    Arch arch = Arch::ann;
    bool id_input = false;     // onehot -> cnn/rnn: ids through a lookup
    std::size_t flat_dim = 0;  // ann input width
    std::size_t seq_len = 0;   // cnn/rnn timesteps
    std::size_t channels = 0;  // cnn/rnn channels per timestep
    std::size_t frame_size = 10;

    // per-document tensor shape handed to the model
    std::vector<std::size_t> doc_shape() const;
    std::size_t doc_numel() const;
};

// rep_dim: vocabulary size for ONEHOT, vector dimension otherwise.
// onehot_len: fixed id-sequence length (the ONEHOT sequence models use it).
Adapter make_adapter(Rep rep, Arch arch, std::size_t rep_dim, std::size_t onehot_len,
                     std::size_t frame_size = 10, std::size_t embed_dim = 64);

// A document encoded by one representation.
struct EncodedDoc {
    FeatureVector fv;
    IdSequence ids;
    bool is_ids = false;
    int label = 0;
};

// Writes one document into dst (doc_numel() floats) per the adapter's form.
void write_doc_input(const Adapter& adapter, const EncodedDoc& doc, float* dst);

// Everything needed to rebuild a model with identical parameter shapes.
struct ModelSpec {
    Arch arch = Arch::ann;
    LossKind loss = LossKind::bce;
    bool embedding = false;
    std::size_t vocab_size = 0;
    std::size_t embed_dim = 64;
    std::size_t seq_len = 0;
    std::size_t channels = 0;
    std::size_t input_dim = 0;
    std::vector<std::size_t> widths;
    std::size_t conv1_filters = 128;
    std::size_t conv2_filters = 64;
    std::size_t kernel = 5;
    double cnn_dropout = 0.5;
    double rnn_dropout = 0.3;
    std::size_t lstm_hidden = 100;

    std::string serialize() const; // single json line, embedded in checkpoints
    static ModelSpec deserialize(const std::string& text);

    template <typename T>
    Model<T> build(Rng& rng) const;
};

// dense(relu) stack per ann_widths, then dense(1) + sigmoid; bce loss
ModelSpec build_ann(std::size_t input_dim);

// conv(128,k5) relu dropout(.5) conv(64,k5) relu dropout(.5) maxpool
// dense(2) softmax; needs seq_len >= 9 for the two window-5 convolutions
ModelSpec build_cnn(std::size_t seq_len, std::size_t in_channels);

// bilstm(100) dropout(.3) dense(1) sigmoid; bce loss
ModelSpec build_rnn(std::size_t seq_len, std::size_t in_channels);

// spec for an adapter, wiring in the embedding front-end for id inputs
ModelSpec spec_for(const Adapter& adapter, std::size_t embed_dim = 64);

template <typename T>
Model<T> ModelSpec::build(Rng& rng) const {
    Model<T> m;
    m.loss = loss;
    if (embedding)
        m.layers.push_back(std::make_unique<EmbeddingLookup<T>>(vocab_size, embed_dim, rng));
    switch (arch) {
        case Arch::ann: {
            std::size_t prev = input_dim;
            for (std::size_t w : widths) {
                m.layers.push_back(std::make_unique<Dense<T>>(prev, w, rng));
                m.layers.push_back(std::make_unique<Relu<T>>());
                prev = w;
            }
            m.layers.push_back(std::make_unique<Dense<T>>(prev, 1, rng));
            m.layers.push_back(std::make_unique<Sigmoid<T>>());
            break;
        }
        case Arch::cnn: {
            m.layers.push_back(std::make_unique<Conv1D<T>>(channels, conv1_filters, kernel, rng));
            m.layers.push_back(std::make_unique<Relu<T>>());
            m.layers.push_back(std::make_unique<Dropout<T>>(cnn_dropout));
            m.layers.push_back(
                std::make_unique<Conv1D<T>>(conv1_filters, conv2_filters, kernel, rng));
            m.layers.push_back(std::make_unique<Relu<T>>());
            m.layers.push_back(std::make_unique<Dropout<T>>(cnn_dropout));
            m.layers.push_back(std::make_unique<GlobalMaxPool<T>>());
            m.layers.push_back(std::make_unique<Dense<T>>(conv2_filters, 2, rng));
            break;
        }
        case Arch::rnn: {
            m.layers.push_back(std::make_unique<BiLstm<T>>(channels, lstm_hidden, rng));
            m.layers.push_back(std::make_unique<Dropout<T>>(rnn_dropout));
            m.layers.push_back(std::make_unique<Dense<T>>(2 * lstm_hidden, 1, rng));
            m.layers.push_back(std::make_unique<Sigmoid<T>>());
            break;
        }
        case Arch::baseline:
            throw config_error("the majority baseline has no trainable model");
    }
    return m;
}

} // namespace fnd

#endif
