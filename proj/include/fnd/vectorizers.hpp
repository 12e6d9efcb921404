#ifndef FND_VECTORIZERS_HPP
#define FND_VECTORIZERS_HPP

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "fnd/textprep.hpp"

namespace fnd {

// Token ids dense in [0, size). Id 0 is reserved: it is both the padding id
// and the out-of-vocabulary id. Real tokens are ranked by descending corpus
// frequency, ties broken lexicographically.
class Vocabulary {
public:
    static constexpr std::uint32_t oov_id = 0;

    std::uint32_t id_of(std::string_view token) const;        // 0 when unknown
    const std::string& token_of(std::uint32_t id) const;      // "" for id 0
    std::size_t size() const { return id_to_token_.size(); }  // includes slot 0

    std::uint32_t doc_freq(std::uint32_t id) const { return df_[id]; }
    std::uint64_t term_freq(std::uint32_t id) const { return freq_[id]; }

    void save(const std::string& path) const;
    static Vocabulary load(const std::string& path);

private:
    std::unordered_map<std::string, std::uint32_t> token_to_id_;
    std::vector<std::string> id_to_token_; // [0] = ""
    std::vector<std::uint64_t> freq_;      // corpus term frequency per id
    std::vector<std::uint32_t> df_;        // document frequency per id

    friend Vocabulary build_vocab(const std::vector<TokenList>&, std::size_t);
    friend struct TfidfModel;
};

// Top (max_size - 1) tokens by corpus frequency get ids 1..max_size-1.
// max_size 0 means unlimited (every distinct token gets an id).
Vocabulary build_vocab(const std::vector<TokenList>& train_docs, std::size_t max_size);

struct IdSequence {
    std::vector<std::uint32_t> ids; // length L; zeros only as a prefix
};

// Fixed-length id sequence: unknown tokens are dropped, the last L ids are
// kept, shorter sequences are padded with zeros at the beginning.
IdSequence encode_onehot(const TokenList& tokens, const Vocabulary& vocab, std::size_t len = 20);

// Dense or sparse real vector; sparse storage kicks in below 25% density.
// Values are doubles so tf-idf keeps full precision; they are narrowed to
// float only when written into model input batches.
class FeatureVector {
public:
    FeatureVector() = default;

    static FeatureVector from_dense(std::vector<double> values);
    static FeatureVector from_pairs(std::size_t dim,
                                    std::vector<std::pair<std::uint32_t, double>> nz);

    std::size_t dim() const { return dim_; }
    bool is_sparse() const { return sparse_; }
    double at(std::size_t i) const;
    double l2_norm() const;
    std::size_t nnz() const;

    // writes all dim() values into out, narrowing to float
    void write_dense(float* out) const;

    // element-wise equality, independent of storage form
    bool operator==(const FeatureVector& o) const;

private:
    std::size_t dim_ = 0;
    bool sparse_ = false;
    std::vector<double> dense_;
    std::vector<std::pair<std::uint32_t, double>> nz_; // sorted by index
};

struct TfidfModel {
    Vocabulary vocab;
    std::vector<double> idf; // indexed by token id; idf = ln((1+N)/(1+df)) + 1
    std::size_t n_train_docs = 0;

    std::size_t dim() const { return vocab.size(); }

    void save(const std::string& path) const;
    static TfidfModel load(const std::string& path);
};

// Vocabulary and idf from the training split only. max_features 0 = keep
// every token.
TfidfModel fit_tfidf(const std::vector<TokenList>& train_docs, std::size_t max_features = 0);

// Raw term count times idf, then L2 normalization. Unknown tokens are
// ignored; an all-unknown document transforms to the zero vector.
FeatureVector transform_tfidf(const TfidfModel& model, const TokenList& tokens);

// Binary bag over the vocabulary: component t is 1 iff token id t occurs.
// Position 0 (padding/OOV) is always 0.
FeatureVector khot_bag(const TokenList& tokens, const Vocabulary& vocab);

} // namespace fnd

#endif
