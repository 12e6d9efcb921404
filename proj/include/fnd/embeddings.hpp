#ifndef FND_EMBEDDINGS_HPP
#define FND_EMBEDDINGS_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "fnd/rng.hpp"
#include "fnd/textprep.hpp"
#include "fnd/vectorizers.hpp"

namespace fnd {

struct TrainConfig {
    std::size_t dim = 100;
    std::size_t window = 5;
    std::size_t negative_k = 5;
    std::size_t epochs = 5;
    double lr_start = 0.025;
    double lr_end = 0.0001;
    std::size_t min_count = 1;
    std::uint64_t seed = 1;

    void validate() const;
};

// Draws token ids proportionally to freq^0.75.
class UnigramTable {
public:
    UnigramTable() = default;
    // freq indexed by id; id 0 is the reserved slot and never sampled
    explicit UnigramTable(const std::vector<std::uint64_t>& freq,
                          std::size_t table_size = 1u << 20);
    std::uint32_t sample(Rng& rng) const { return table_[rng.below(table_.size())]; }
    bool empty() const { return table_.empty(); }

private:
    std::vector<std::uint32_t> table_;
};

struct TrainStats {
    std::vector<double> epoch_loss; // mean per-position loss, one entry per epoch
    std::size_t positions = 0;      // training positions per epoch
};

// Word vectors learned by CBOW with negative sampling.
struct EmbeddingTable {
    Vocabulary vocab;
    std::size_t dim = 0;
    std::vector<float> w_in;  // |V| x dim, the "word vectors"
    std::vector<float> w_out; // |V| x dim, output (context) parameters
    UnigramTable sampler;
    TrainStats stats;

    const float* vec(std::uint32_t id) const { return w_in.data() + id * dim; }

    // text vectors format: "count dim" header then "token v1 .. vd" lines
    void save_vectors(const std::string& path) const;
};

EmbeddingTable train_word2vec(const std::vector<TokenList>& docs, const TrainConfig& cfg);

// Arithmetic mean of the word vectors of in-vocabulary tokens; zero vector
// when nothing is in vocabulary.
FeatureVector doc_vector_avg(const TokenList& tokens, const EmbeddingTable& table);

// PV-DM paragraph vectors: the document vector joins the averaged context.
struct DocEmbeddingModel {
    EmbeddingTable words;
    std::vector<float> doc_vecs; // n_docs x dim, aligned with training corpus order
    std::size_t n_docs = 0;
    TrainConfig cfg;

    const float* doc_vec(std::size_t i) const { return doc_vecs.data() + i * words.dim; }

    void save_doc_vectors(const std::string& path,
                          const std::vector<std::string>& doc_ids) const;
};

DocEmbeddingModel train_doc2vec(const std::vector<TokenList>& docs, const TrainConfig& cfg);

// Embeds an unseen document: a fresh doc vector is trained with word and
// output parameters frozen.
std::vector<float> infer_docvec(const DocEmbeddingModel& model, const TokenList& tokens,
                                std::size_t infer_epochs, std::uint64_t seed);

namespace detail {

template <typename T>
T sigmoid(T x) {
    return T(1) / (T(1) + std::exp(-x));
}

// ln sigmoid(x), computed without overflow for large |x|
template <typename T>
T log_sigmoid(T x) {
    if (x >= T(0)) return -std::log1p(std::exp(-x));
    return x - std::log1p(std::exp(x));
}

// Negative-sampling objective at a fused context vector h:
//   loss = -ln s(pos . h) - sum_n ln s(-neg_n . h)
// Gradients (of the loss) are accumulated into d_h, d_pos and d_negs; any
// of them may be null. The caller distributes d_h over the vectors h was
// averaged from.
template <typename T>
T ns_objective(const T* h, std::size_t dim, const T* pos, const std::vector<const T*>& negs,
               T* d_h, T* d_pos, const std::vector<T*>* d_negs) {
    auto dot = [dim](const T* a, const T* b) {
        T s = 0;
        for (std::size_t i = 0; i < dim; ++i) s += a[i] * b[i];
        return s;
    };
    T loss = T(0);
    {
        T x = dot(pos, h);
        loss -= log_sigmoid(x);
        T g = sigmoid(x) - T(1); // dL/dx
        if (d_pos)
            for (std::size_t i = 0; i < dim; ++i) d_pos[i] += g * h[i];
        if (d_h)
            for (std::size_t i = 0; i < dim; ++i) d_h[i] += g * pos[i];
    }
    for (std::size_t n = 0; n < negs.size(); ++n) {
        T x = dot(negs[n], h);
        loss -= log_sigmoid(-x);
        T g = sigmoid(x); // dL/dx for label 0
        if (d_negs && (*d_negs)[n])
            for (std::size_t i = 0; i < dim; ++i) (*d_negs)[n][i] += g * h[i];
        if (d_h)
            for (std::size_t i = 0; i < dim; ++i) d_h[i] += g * negs[n][i];
    }
    return loss;
}

} // namespace detail

} // namespace fnd

#endif
