#include "fnd/embeddings.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "fnd/errors.hpp"

namespace fnd {

void TrainConfig::validate() const {
    if (dim < 1) throw config_error("embedding dim must be >= 1");
    if (window < 1) throw config_error("window must be >= 1");
    if (epochs < 1) throw config_error("epochs must be >= 1");
    if (min_count < 1) throw config_error("min_count must be >= 1");
    if (!(lr_end < lr_start)) throw config_error("lr_end must be smaller than lr_start");
    if (lr_end <= 0) throw config_error("learning rates must be positive");
}

UnigramTable::UnigramTable(const std::vector<std::uint64_t>& freq, std::size_t table_size) {
    double total = 0.0;
    for (std::size_t id = 1; id < freq.size(); ++id)
        total += std::pow(static_cast<double>(freq[id]), 0.75);
    if (total <= 0.0 || freq.size() < 2) return;
    table_.resize(table_size);
    std::size_t id = 1;
    double cum = std::pow(static_cast<double>(freq[id]), 0.75) / total;
    for (std::size_t a = 0; a < table_size; ++a) {
        table_[a] = static_cast<std::uint32_t>(id);
        if (static_cast<double>(a + 1) / static_cast<double>(table_size) > cum &&
            id + 1 < freq.size()) {
            ++id;
            cum += std::pow(static_cast<double>(freq[id]), 0.75) / total;
        }
    }
}

namespace {

struct PreppedCorpus {
    Vocabulary vocab;
    std::vector<std::vector<std::uint32_t>> seqs; // per doc, min_count filtered
    std::size_t total_positions = 0;
};

PreppedCorpus prep_corpus(const std::vector<TokenList>& docs, std::size_t min_count) {
    if (docs.empty()) throw data_error("cannot train embeddings on an empty corpus");
    PreppedCorpus pc;
    pc.vocab = build_vocab(docs, 0);
    pc.seqs.resize(docs.size());
    for (std::size_t d = 0; d < docs.size(); ++d) {
        auto& seq = pc.seqs[d];
        seq.reserve(docs[d].size());
        for (const auto& tok : docs[d]) {
            std::uint32_t id = pc.vocab.id_of(tok);
            if (id != Vocabulary::oov_id && pc.vocab.term_freq(id) >= min_count)
                seq.push_back(id);
        }
        pc.total_positions += seq.size();
    }
    return pc;
}

// One fused CBOW / PV-DM update at a single position. parts are the vectors
// h is averaged from (context word input vectors, plus the doc vector in
// PV-DM); the gradient of the mean sends dh / n_parts to every part. Output
// rows are read before they are written, so dh is the exact gradient at the
// pre-update parameters.
float apply_ns_update(float* const* parts, std::size_t n_parts, std::size_t dim,
                      float* pos_row, float* const* neg_rows, std::size_t n_negs, float lr,
                      float* h, float* dh) {
    const float inv = 1.0f / static_cast<float>(n_parts);
    for (std::size_t i = 0; i < dim; ++i) {
        float s = 0.0f;
        for (std::size_t p = 0; p < n_parts; ++p) s += parts[p][i];
        h[i] = s * inv;
        dh[i] = 0.0f;
    }
    float loss = 0.0f;
    auto one_target = [&](float* row, bool positive) {
        float x = 0.0f;
        for (std::size_t i = 0; i < dim; ++i) x += row[i] * h[i];
        loss -= detail::log_sigmoid(positive ? x : -x);
        const float g = detail::sigmoid(x) - (positive ? 1.0f : 0.0f); // dL/dx
        for (std::size_t i = 0; i < dim; ++i) dh[i] += g * row[i];
        for (std::size_t i = 0; i < dim; ++i) row[i] -= lr * g * h[i];
    };
    one_target(pos_row, true);
    for (std::size_t n = 0; n < n_negs; ++n) one_target(neg_rows[n], false);
    const float scale = lr * inv;
    for (std::size_t p = 0; p < n_parts; ++p)
        for (std::size_t i = 0; i < dim; ++i) parts[p][i] -= scale * dh[i];
    return loss;
}

// Single-threaded deterministic sweep shared by Word2Vec and Doc2Vec.
// doc_vecs == nullptr selects plain CBOW: positions with no context words
// are skipped. With doc vectors the paragraph vector always joins the
// context, so every position trains.
void train_sweep(const PreppedCorpus& pc, const TrainConfig& cfg, EmbeddingTable& table,
                 std::vector<float>* doc_vecs, Rng& rng) {
    const std::size_t dim = cfg.dim;
    const std::size_t total_steps = cfg.epochs * pc.total_positions;
    std::size_t global_step = 0;
    std::vector<float> h(dim), dh(dim);
    std::vector<float*> parts, negs;
    table.stats.positions = pc.total_positions;
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        double loss_sum = 0.0;
        std::size_t positions = 0;
        for (std::size_t d = 0; d < pc.seqs.size(); ++d) {
            const auto& seq = pc.seqs[d];
            for (std::size_t t = 0; t < seq.size(); ++t) {
                const double progress =
                    total_steps == 0 ? 0.0
                                     : static_cast<double>(global_step) /
                                           static_cast<double>(total_steps);
                ++global_step;
                const float lr = static_cast<float>(
                    cfg.lr_start + (cfg.lr_end - cfg.lr_start) * std::min(1.0, progress));

                const std::size_t lo = t >= cfg.window ? t - cfg.window : 0;
                const std::size_t hi = std::min(seq.size() - 1, t + cfg.window);
                parts.clear();
                for (std::size_t j = lo; j <= hi; ++j)
                    if (j != t) parts.push_back(table.w_in.data() + seq[j] * dim);
                if (doc_vecs) parts.push_back(doc_vecs->data() + d * dim);
                if (parts.empty()) continue;

                const std::uint32_t center = seq[t];
                negs.clear();
                for (std::size_t n = 0; n < cfg.negative_k; ++n) {
                    std::uint32_t cand = table.sampler.sample(rng);
                    if (cand == center) continue;
                    negs.push_back(table.w_out.data() + cand * dim);
                }
                loss_sum += apply_ns_update(parts.data(), parts.size(), dim,
                                            table.w_out.data() + center * dim, negs.data(),
                                            negs.size(), lr, h.data(), dh.data());
                ++positions;
            }
        }
        table.stats.epoch_loss.push_back(positions ? loss_sum / positions : 0.0);
    }
}

void init_table(EmbeddingTable& table, const PreppedCorpus& pc, const TrainConfig& cfg,
                Rng& rng) {
    table.dim = cfg.dim;
    const std::size_t vsize = pc.vocab.size();
    const double span = 0.5 / static_cast<double>(cfg.dim);
    table.w_in.resize(vsize * cfg.dim);
    for (auto& x : table.w_in) x = static_cast<float>(rng.uniform(-span, span));
    table.w_out.assign(vsize * cfg.dim, 0.0f);

    std::vector<std::uint64_t> freq(vsize);
    for (std::size_t id = 0; id < vsize; ++id)
        freq[id] = pc.vocab.term_freq(static_cast<std::uint32_t>(id));
    table.sampler = UnigramTable(freq);
}

} // namespace

EmbeddingTable train_word2vec(const std::vector<TokenList>& docs, const TrainConfig& cfg) {
    cfg.validate();
    PreppedCorpus pc = prep_corpus(docs, cfg.min_count);
    EmbeddingTable table;
    Rng rng(cfg.seed);
    init_table(table, pc, cfg, rng);
    train_sweep(pc, cfg, table, nullptr, rng);
    table.vocab = std::move(pc.vocab);
    return table;
}

DocEmbeddingModel train_doc2vec(const std::vector<TokenList>& docs, const TrainConfig& cfg) {
    cfg.validate();
    PreppedCorpus pc = prep_corpus(docs, cfg.min_count);
    DocEmbeddingModel model;
    model.cfg = cfg;
    model.n_docs = docs.size();
    Rng rng(cfg.seed);
    init_table(model.words, pc, cfg, rng);
    const double span = 0.5 / static_cast<double>(cfg.dim);
    model.doc_vecs.resize(docs.size() * cfg.dim);
    for (auto& x : model.doc_vecs) x = static_cast<float>(rng.uniform(-span, span));
    train_sweep(pc, cfg, model.words, &model.doc_vecs, rng);
    model.words.vocab = std::move(pc.vocab);
    return model;
}

FeatureVector doc_vector_avg(const TokenList& tokens, const EmbeddingTable& table) {
    std::vector<double> acc(table.dim, 0.0);
    std::size_t n = 0;
    for (const auto& tok : tokens) {
        std::uint32_t id = table.vocab.id_of(tok);
        if (id == Vocabulary::oov_id) continue;
        const float* v = table.vec(id);
        for (std::size_t i = 0; i < table.dim; ++i) acc[i] += v[i];
        ++n;
    }
    if (n > 0) {
        const double inv = 1.0 / static_cast<double>(n);
        for (auto& x : acc) x *= inv;
    }
    return FeatureVector::from_dense(std::move(acc));
}

std::vector<float> infer_docvec(const DocEmbeddingModel& model, const TokenList& tokens,
                                std::size_t infer_epochs, std::uint64_t seed) {
    const std::size_t dim = model.words.dim;
    Rng rng(seed);
    const double span = 0.5 / static_cast<double>(dim);
    std::vector<float> dvec(dim);
    for (auto& x : dvec) x = static_cast<float>(rng.uniform(-span, span));

    std::vector<std::uint32_t> seq;
    for (const auto& tok : tokens) {
        std::uint32_t id = model.words.vocab.id_of(tok);
        if (id != Vocabulary::oov_id) seq.push_back(id);
    }
    if (seq.empty() || infer_epochs == 0) return dvec;

    const TrainConfig& cfg = model.cfg;
    const std::size_t total_steps = infer_epochs * seq.size();
    std::size_t step = 0;
    std::vector<float> h(dim), dh(dim);
    std::vector<const float*> negs, ctx;
    for (std::size_t epoch = 0; epoch < infer_epochs; ++epoch) {
        for (std::size_t t = 0; t < seq.size(); ++t) {
            const double progress =
                static_cast<double>(step++) / static_cast<double>(total_steps);
            const float lr = static_cast<float>(
                cfg.lr_start + (cfg.lr_end - cfg.lr_start) * std::min(1.0, progress));

            const std::size_t lo = t >= cfg.window ? t - cfg.window : 0;
            const std::size_t hi = std::min(seq.size() - 1, t + cfg.window);
            ctx.clear();
            for (std::size_t j = lo; j <= hi; ++j)
                if (j != t) ctx.push_back(model.words.vec(seq[j]));

            const std::size_t n_parts = ctx.size() + 1;
            const float inv = 1.0f / static_cast<float>(n_parts);
            for (std::size_t i = 0; i < dim; ++i) {
                float s = dvec[i];
                for (const float* c : ctx) s += c[i];
                h[i] = s * inv;
            }

            const std::uint32_t center = seq[t];
            negs.clear();
            for (std::size_t n = 0; n < cfg.negative_k; ++n) {
                std::uint32_t cand = model.words.sampler.sample(rng);
                if (cand == center) continue;
                negs.push_back(model.words.w_out.data() + cand * dim);
            }
            std::fill(dh.begin(), dh.end(), 0.0f);
            detail::ns_objective<float>(h.data(), dim, model.words.w_out.data() + center * dim,
                                        negs, dh.data(), nullptr, nullptr);
            const float scale = lr * inv;
            for (std::size_t i = 0; i < dim; ++i) dvec[i] -= scale * dh[i];
        }
    }
    return dvec;
}

void EmbeddingTable::save_vectors(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw data_error("cannot write vectors file: " + path);
    out.precision(9);
    out << (vocab.size() - 1) << " " << dim << "\n";
    for (std::size_t id = 1; id < vocab.size(); ++id) {
        out << vocab.token_of(static_cast<std::uint32_t>(id));
        const float* v = vec(static_cast<std::uint32_t>(id));
        for (std::size_t i = 0; i < dim; ++i) out << " " << v[i];
        out << "\n";
    }
}

void DocEmbeddingModel::save_doc_vectors(const std::string& path,
                                         const std::vector<std::string>& doc_ids) const {
    std::ofstream out(path);
    if (!out) throw data_error("cannot write doc vectors file: " + path);
    out.precision(9);
    out << n_docs << " " << words.dim << "\n";
    for (std::size_t i = 0; i < n_docs; ++i) {
        out << (i < doc_ids.size() ? doc_ids[i] : std::to_string(i));
        const float* v = doc_vec(i);
        for (std::size_t j = 0; j < words.dim; ++j) out << " " << v[j];
        out << "\n";
    }
}

} // namespace fnd
