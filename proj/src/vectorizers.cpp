#include "fnd/vectorizers.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fnd/errors.hpp"

namespace fnd {

std::uint32_t Vocabulary::id_of(std::string_view token) const {
    auto it = token_to_id_.find(std::string(token));
    return it == token_to_id_.end() ? oov_id : it->second;
}

const std::string& Vocabulary::token_of(std::uint32_t id) const { return id_to_token_[id]; }

Vocabulary build_vocab(const std::vector<TokenList>& train_docs, std::size_t max_size) {
    if (max_size == 1) throw config_error("vocabulary max_size must be >= 2 (or 0 = unlimited)");
    if (train_docs.empty()) throw data_error("cannot build a vocabulary from an empty corpus");

    struct Stat {
        std::uint64_t freq = 0;
        std::uint32_t df = 0;
    };
    std::unordered_map<std::string, Stat> stats;
    std::vector<std::string> uniq;
    for (const TokenList& doc : train_docs) {
        for (const std::string& tok : doc) stats[tok].freq++;
        uniq.assign(doc.begin(), doc.end());
        std::sort(uniq.begin(), uniq.end());
        uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
        for (const auto& tok : uniq) stats[tok].df++;
    }

    std::vector<std::pair<std::string, Stat>> ranked(stats.begin(), stats.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second.freq != b.second.freq) return a.second.freq > b.second.freq;
        return a.first < b.first;
    });
    std::size_t keep = ranked.size();
    if (max_size > 0) keep = std::min(keep, max_size - 1);

    Vocabulary vocab;
    vocab.id_to_token_.resize(keep + 1);
    vocab.freq_.resize(keep + 1, 0);
    vocab.df_.resize(keep + 1, 0);
    vocab.id_to_token_[0] = "";
    for (std::size_t i = 0; i < keep; ++i) {
        std::uint32_t id = static_cast<std::uint32_t>(i + 1);
        vocab.id_to_token_[id] = ranked[i].first;
        vocab.freq_[id] = ranked[i].second.freq;
        vocab.df_[id] = ranked[i].second.df;
        vocab.token_to_id_.emplace(ranked[i].first, id);
    }
    return vocab;
}

IdSequence encode_onehot(const TokenList& tokens, const Vocabulary& vocab, std::size_t len) {
    if (len < 1) throw config_error("one-hot sequence length must be >= 1");
    std::vector<std::uint32_t> mapped;
    mapped.reserve(tokens.size());
    for (const auto& tok : tokens) {
        std::uint32_t id = vocab.id_of(tok);
        if (id != Vocabulary::oov_id) mapped.push_back(id);
    }
    IdSequence seq;
    seq.ids.assign(len, 0);
    const std::size_t n = std::min(mapped.size(), len);
    // keep the last n ids, right-aligned (padding forms a prefix)
    for (std::size_t i = 0; i < n; ++i)
        seq.ids[len - n + i] = mapped[mapped.size() - n + i];
    return seq;
}

FeatureVector FeatureVector::from_dense(std::vector<double> values) {
    std::size_t nnz = 0;
    for (double v : values)
        if (v != 0.0) ++nnz;
    FeatureVector fv;
    fv.dim_ = values.size();
    if (values.size() >= 4 && nnz * 4 < values.size()) {
        fv.sparse_ = true;
        fv.nz_.reserve(nnz);
        for (std::size_t i = 0; i < values.size(); ++i)
            if (values[i] != 0.0) fv.nz_.emplace_back(static_cast<std::uint32_t>(i), values[i]);
    } else {
        fv.dense_ = std::move(values);
    }
    return fv;
}

FeatureVector FeatureVector::from_pairs(std::size_t dim,
                                        std::vector<std::pair<std::uint32_t, double>> nz) {
    std::sort(nz.begin(), nz.end());
    if (dim >= 4 && nz.size() * 4 < dim) {
        FeatureVector fv;
        fv.dim_ = dim;
        fv.sparse_ = true;
        fv.nz_ = std::move(nz);
        return fv;
    }
    std::vector<double> dense(dim, 0.0);
    for (auto& [i, v] : nz) dense[i] = v;
    FeatureVector fv;
    fv.dim_ = dim;
    fv.dense_ = std::move(dense);
    return fv;
}

double FeatureVector::at(std::size_t i) const {
    if (!sparse_) return dense_[i];
    auto it = std::lower_bound(nz_.begin(), nz_.end(),
                               std::make_pair(static_cast<std::uint32_t>(i), -1e300));
    if (it != nz_.end() && it->first == i) return it->second;
    return 0.0;
}

double FeatureVector::l2_norm() const {
    double s = 0.0;
    if (sparse_)
        for (auto& [i, v] : nz_) s += v * v;
    else
        for (double v : dense_) s += v * v;
    return std::sqrt(s);
}

std::size_t FeatureVector::nnz() const {
    if (sparse_) return nz_.size();
    std::size_t n = 0;
    for (double v : dense_)
        if (v != 0.0) ++n;
    return n;
}

void FeatureVector::write_dense(float* out) const {
    if (sparse_) {
        for (std::size_t i = 0; i < dim_; ++i) out[i] = 0.0f;
        for (auto& [i, v] : nz_) out[i] = static_cast<float>(v);
    } else {
        for (std::size_t i = 0; i < dim_; ++i) out[i] = static_cast<float>(dense_[i]);
    }
}

bool FeatureVector::operator==(const FeatureVector& o) const {
    if (dim_ != o.dim_) return false;
    for (std::size_t i = 0; i < dim_; ++i)
        if (at(i) != o.at(i)) return false;
    return true;
}

TfidfModel fit_tfidf(const std::vector<TokenList>& train_docs, std::size_t max_features) {
    if (train_docs.empty()) throw data_error("cannot fit tf-idf on an empty corpus");
    TfidfModel model;
    model.vocab = build_vocab(train_docs, max_features == 0 ? 0 : max_features);
    model.n_train_docs = train_docs.size();
    const double n = static_cast<double>(train_docs.size());
    model.idf.resize(model.vocab.size());
    for (std::size_t id = 0; id < model.vocab.size(); ++id) {
        double df = static_cast<double>(model.vocab.doc_freq(static_cast<std::uint32_t>(id)));
        model.idf[id] = std::log((1.0 + n) / (1.0 + df)) + 1.0;
    }
    return model;
}

FeatureVector transform_tfidf(const TfidfModel& model, const TokenList& tokens) {
    std::unordered_map<std::uint32_t, std::uint32_t> counts;
    for (const auto& tok : tokens) {
        std::uint32_t id = model.vocab.id_of(tok);
        if (id != Vocabulary::oov_id) counts[id]++;
    }
    std::vector<std::pair<std::uint32_t, double>> nz;
    nz.reserve(counts.size());
    double sumsq = 0.0;
    for (auto& [id, cnt] : counts) {
        double w = static_cast<double>(cnt) * model.idf[id];
        sumsq += w * w;
        nz.emplace_back(id, w);
    }
    if (sumsq > 0.0) {
        const double inv = 1.0 / std::sqrt(sumsq);
        for (auto& [id, w] : nz) w *= inv;
    }
    return FeatureVector::from_pairs(model.vocab.size(), std::move(nz));
}

FeatureVector khot_bag(const TokenList& tokens, const Vocabulary& vocab) {
    std::vector<std::pair<std::uint32_t, double>> nz;
    std::vector<bool> seen(vocab.size(), false);
    for (const auto& tok : tokens) {
        std::uint32_t id = vocab.id_of(tok);
        if (id != Vocabulary::oov_id && !seen[id]) {
            seen[id] = true;
            nz.emplace_back(id, 1.0);
        }
    }
    return FeatureVector::from_pairs(vocab.size(), std::move(nz));
}

// --- serialization: line text, "token<TAB>id<TAB>df<TAB>freq" -------------

namespace {
constexpr const char* kVocabMagic = "fnd-vocab v1";
constexpr const char* kTfidfMagic = "fnd-tfidf v1";
} // namespace

void Vocabulary::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw data_error("cannot write vocabulary file: " + path);
    out << kVocabMagic << " size=" << size() << "\n";
    for (std::size_t id = 1; id < size(); ++id)
        out << id_to_token_[id] << "\t" << id << "\t" << df_[id] << "\t" << freq_[id] << "\n";
}

Vocabulary Vocabulary::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open vocabulary file: " + path);
    std::string header;
    std::getline(in, header);
    if (header.rfind(kVocabMagic, 0) != 0)
        throw data_error("not a vocabulary file: " + path);
    Vocabulary v;
    v.id_to_token_.push_back("");
    v.freq_.push_back(0);
    v.df_.push_back(0);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string tok;
        std::uint32_t id, df;
        std::uint64_t freq;
        if (!std::getline(ss, tok, '\t') || !(ss >> id >> df >> freq))
            throw data_error("malformed vocabulary line: " + line);
        if (id != v.id_to_token_.size())
            throw data_error("vocabulary ids out of order in " + path);
        v.id_to_token_.push_back(tok);
        v.df_.push_back(df);
        v.freq_.push_back(freq);
        v.token_to_id_.emplace(tok, id);
    }
    return v;
}

void TfidfModel::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw data_error("cannot write tf-idf model: " + path);
    out << kTfidfMagic << " size=" << vocab.size() << " n_docs=" << n_train_docs << "\n";
    out.precision(17);
    for (std::size_t id = 1; id < vocab.size(); ++id)
        out << vocab.token_of(static_cast<std::uint32_t>(id)) << "\t" << id << "\t"
            << vocab.doc_freq(static_cast<std::uint32_t>(id)) << "\t" << idf[id] << "\n";
}

TfidfModel TfidfModel::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open tf-idf model: " + path);
    std::string header;
    std::getline(in, header);
    if (header.rfind(kTfidfMagic, 0) != 0) throw data_error("not a tf-idf model file: " + path);
    TfidfModel m;
    std::size_t ndocs = 0;
    {
        auto pos = header.find("n_docs=");
        if (pos != std::string::npos) ndocs = std::stoull(header.substr(pos + 7));
    }
    m.n_train_docs = ndocs;
    m.vocab.id_to_token_.push_back("");
    m.vocab.freq_.push_back(0);
    m.vocab.df_.push_back(0);
    m.idf.push_back(std::log((1.0 + static_cast<double>(ndocs)) / 1.0) + 1.0);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string tok;
        std::uint32_t id, df;
        double idf;
        if (!std::getline(ss, tok, '\t') || !(ss >> id >> df >> idf))
            throw data_error("malformed tf-idf line: " + line);
        if (id != m.vocab.id_to_token_.size())
            throw data_error("tf-idf model ids out of order in " + path);
        m.vocab.id_to_token_.push_back(tok);
        m.vocab.df_.push_back(df);
        m.vocab.freq_.push_back(0);
        m.vocab.token_to_id_.emplace(tok, id);
        m.idf.push_back(idf);
    }
    return m;
}

} // namespace fnd
