#include "fnd/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <sstream>

#include "fnd/checkpoint.hpp"
#include "fnd/embeddings.hpp"
#include "fnd/errors.hpp"
#include "fnd/losses.hpp"
#include "fnd/optim.hpp"
#include "fnd/version.hpp"

namespace fnd {
namespace {

// keep a seeded subset, preserving the original document order
template <typename T>
void subset_in_order(std::vector<T>& xs, std::size_t keep, Rng& rng) {
    if (xs.size() <= keep) return;
    std::vector<std::size_t> idx(xs.size());
    std::iota(idx.begin(), idx.end(), 0);
    shuffle(idx, rng);
    idx.resize(keep);
    std::sort(idx.begin(), idx.end());
    std::vector<T> out;
    out.reserve(keep);
    for (std::size_t i : idx) out.push_back(std::move(xs[i]));
    xs = std::move(out);
}

struct EncodedCell {
    Adapter adapter;
    std::vector<EncodedDoc> train;
    std::vector<EncodedDoc> test;
    std::size_t embed_vocab = 0; // vocabulary size for the lookup front-end
};

EncodedCell encode_cell(const DatasetBundle& ds, Rep rep, Arch arch,
                        const ExperimentConfig& cfg, std::uint64_t cell_seed) {
    EncodedCell cell;
    auto label_only = [&](std::vector<EncodedDoc>& dst, const std::vector<int>& labels) {
        dst.resize(labels.size());
        for (std::size_t i = 0; i < labels.size(); ++i) dst[i].label = labels[i];
    };
    label_only(cell.train, ds.train_labels);
    label_only(cell.test, ds.test_labels);
    if (arch == Arch::baseline) {
        cell.adapter = make_adapter(rep, arch, 0, cfg.onehot_len, cfg.frame_size,
                                    cfg.onehot_embed_dim);
        return cell;
    }

    switch (rep) {
        case Rep::onehot: {
            Vocabulary vocab = build_vocab(ds.train_tokens, cfg.onehot_vocab);
            cell.adapter = make_adapter(rep, arch, vocab.size(), cfg.onehot_len,
                                        cfg.frame_size, cfg.onehot_embed_dim);
            cell.embed_vocab = vocab.size();
            auto encode = [&](std::vector<EncodedDoc>& dst, const std::vector<TokenList>& docs) {
                for (std::size_t i = 0; i < docs.size(); ++i) {
                    if (arch == Arch::ann) {
                        dst[i].fv = khot_bag(docs[i], vocab);
                    } else {
                        dst[i].ids = encode_onehot(docs[i], vocab, cfg.onehot_len);
                        dst[i].is_ids = true;
                    }
                }
            };
            encode(cell.train, ds.train_tokens);
            encode(cell.test, ds.test_tokens);
            break;
        }
        case Rep::tfidf: {
            TfidfModel model = fit_tfidf(ds.train_tokens, cfg.effective_tfidf_max_features());
            cell.adapter = make_adapter(rep, arch, model.dim(), cfg.onehot_len,
                                        cfg.frame_size, cfg.onehot_embed_dim);
            for (std::size_t i = 0; i < ds.train_tokens.size(); ++i)
                cell.train[i].fv = transform_tfidf(model, ds.train_tokens[i]);
            for (std::size_t i = 0; i < ds.test_tokens.size(); ++i)
                cell.test[i].fv = transform_tfidf(model, ds.test_tokens[i]);
            break;
        }
        case Rep::w2v_avg: {
            TrainConfig wcfg = cfg.w2v;
            wcfg.seed = derive_seed(cell_seed, "w2v");
            EmbeddingTable table = train_word2vec(ds.train_tokens, wcfg);
            cell.adapter = make_adapter(rep, arch, table.dim, cfg.onehot_len, cfg.frame_size,
                                        cfg.onehot_embed_dim);
            for (std::size_t i = 0; i < ds.train_tokens.size(); ++i)
                cell.train[i].fv = doc_vector_avg(ds.train_tokens[i], table);
            for (std::size_t i = 0; i < ds.test_tokens.size(); ++i)
                cell.test[i].fv = doc_vector_avg(ds.test_tokens[i], table);
            break;
        }
        case Rep::d2v: {
            TrainConfig dcfg = cfg.d2v;
            dcfg.seed = derive_seed(cell_seed, "d2v");
            DocEmbeddingModel model = train_doc2vec(ds.train_tokens, dcfg);
            cell.adapter = make_adapter(rep, arch, model.words.dim, cfg.onehot_len,
                                        cfg.frame_size, cfg.onehot_embed_dim);
            const std::size_t dim = model.words.dim;
            for (std::size_t i = 0; i < ds.train_tokens.size(); ++i) {
                std::vector<double> v(model.doc_vec(i), model.doc_vec(i) + dim);
                cell.train[i].fv = FeatureVector::from_dense(std::move(v));
            }
            for (std::size_t i = 0; i < ds.test_tokens.size(); ++i) {
                std::vector<float> v = infer_docvec(
                    model, ds.test_tokens[i], cfg.infer_epochs,
                    derive_seed(cell_seed, "infer/" + std::to_string(i)));
                cell.test[i].fv =
                    FeatureVector::from_dense(std::vector<double>(v.begin(), v.end()));
            }
            break;
        }
    }
    return cell;
}

Tensor<float> assemble_batch(const Adapter& adapter, const std::vector<EncodedDoc>& docs,
                             const std::vector<std::size_t>& order, std::size_t begin,
                             std::size_t end, std::vector<int>& labels_out) {
    const std::size_t batch = end - begin;
    std::vector<std::size_t> shape{batch};
    for (std::size_t d : adapter.doc_shape()) shape.push_back(d);
    Tensor<float> x(shape);
    const std::size_t per_doc = adapter.doc_numel();
    labels_out.resize(batch);
    for (std::size_t i = 0; i < batch; ++i) {
        const EncodedDoc& doc = docs[order[begin + i]];
        write_doc_input(adapter, doc, x.data() + i * per_doc);
        labels_out[i] = doc.label;
    }
    return x;
}

std::vector<int> predict(Model<float>& model, const Tensor<float>& out) {
    std::vector<int> preds(out.dim(0));
    if (model.loss == LossKind::bce) {
        for (std::size_t b = 0; b < preds.size(); ++b) preds[b] = out[b] > 0.5f ? 1 : 0;
    } else {
        const std::size_t classes = out.dim(1);
        for (std::size_t b = 0; b < preds.size(); ++b) {
            std::size_t best = 0;
            for (std::size_t c = 1; c < classes; ++c)
                if (out.at(b, c) > out.at(b, best)) best = c;
            preds[b] = static_cast<int>(best);
        }
    }
    return preds;
}

struct TrainOutcome {
    Metrics test_metrics;
    bool divergent = false;
};

TrainOutcome train_and_eval(const EncodedCell& cell, const ModelSpec& spec,
                            const ExperimentConfig& cfg, std::uint64_t cell_seed,
                            const std::string& ckpt_path) {
    Rng rng_init(derive_seed(cell_seed, "init"));
    Rng rng_dropout(derive_seed(cell_seed, "dropout"));
    Rng rng_shuffle(derive_seed(cell_seed, "shuffle"));

    Model<float> model = spec.build<float>(rng_init);
    auto params = model.params();
    Adam<float> adam(params, static_cast<float>(cfg.train.lr));

    // last finite parameter state, for divergence recovery
    std::vector<Tensor<float>> snapshot;
    auto take_snapshot = [&] {
        snapshot.clear();
        for (auto& p : params) snapshot.push_back(*p.value);
    };
    auto restore_snapshot = [&] {
        for (std::size_t i = 0; i < params.size(); ++i) *params[i].value = snapshot[i];
    };
    take_snapshot();

    std::vector<std::size_t> order(cell.train.size());
    std::iota(order.begin(), order.end(), 0);
    const std::size_t batch = std::max<std::size_t>(1, cfg.train.batch);

    bool divergent = false;
    std::vector<int> ybatch;
    for (std::size_t epoch = 0; epoch < cfg.train.epochs && !divergent; ++epoch) {
        shuffle(order, rng_shuffle);
        for (std::size_t begin = 0; begin < order.size(); begin += batch) {
            const std::size_t end = std::min(order.size(), begin + batch);
            Tensor<float> x = assemble_batch(cell.adapter, cell.train, order, begin, end, ybatch);
            Ctx<float> ctx{Mode::train, &rng_dropout};
            Tensor<float> out = model.forward(x, ctx);
            Tensor<float> dout;
            const float loss = model.loss == LossKind::bce
                                   ? bce_loss<float>(out, ybatch, &dout)
                                   : softmax_ce_loss<float>(out, ybatch, &dout);
            if (!std::isfinite(loss) || !out.all_finite()) {
                divergent = true;
                restore_snapshot();
                break;
            }
            adam.zero_grads();
            model.backward(dout);
            adam.step();
        }
        if (!divergent) take_snapshot();
    }

    // evaluate on the test split (eval mode: dropout is the identity)
    std::vector<std::size_t> test_order(cell.test.size());
    std::iota(test_order.begin(), test_order.end(), 0);
    std::vector<int> preds, labels;
    preds.reserve(cell.test.size());
    labels.reserve(cell.test.size());
    for (std::size_t begin = 0; begin < test_order.size(); begin += batch) {
        const std::size_t end = std::min(test_order.size(), begin + batch);
        Tensor<float> x = assemble_batch(cell.adapter, cell.test, test_order, begin, end, ybatch);
        Ctx<float> ctx{Mode::eval, nullptr};
        Tensor<float> out = model.forward(x, ctx);
        std::vector<int> p = predict(model, out);
        preds.insert(preds.end(), p.begin(), p.end());
        labels.insert(labels.end(), ybatch.begin(), ybatch.end());
    }

    if (!ckpt_path.empty()) save_checkpoint(ckpt_path, spec, model);

    TrainOutcome outcome;
    outcome.test_metrics = metrics(preds, labels);
    outcome.divergent = divergent;
    return outcome;
}

} // namespace

Harness::Harness(ExperimentConfig cfg) : cfg_(std::move(cfg)) {
    stop_ = StopList::load(cfg_.stoplist_path);
    kernels::set_threads(cfg_.threads);
}

std::uint64_t Harness::cell_seed(const std::string& dataset, Rep rep, Arch arch) const {
    return derive_seed(cfg_.seed, "cell/" + dataset + "/" + to_string(rep) + "/" +
                                      to_string(arch));
}

DatasetBundle Harness::build_bundle(const std::string& name) {
    LabeledCorpus train, test;
    std::size_t drop_count = 0;
    if (name == "fixture" || name == "kaggle") {
        LabeledCorpus corpus = name == "fixture" ? load_fixture(cfg_.fixture_path)
                                                 : load_kaggle(cfg_.kaggle_csv);
        drop_count = corpus.drop_count;
        SplitPair pair = split(corpus, cfg_.split_ratio, derive_seed(cfg_.seed, "split/" + name));
        train = std::move(pair.train);
        test = std::move(pair.test);
    } else if (name == "liar") {
        std::vector<std::string> train_files = {cfg_.liar_dir + "/train.tsv"};
        if (cfg_.liar_include_valid) train_files.push_back(cfg_.liar_dir + "/valid.tsv");
        train = load_liar_files(train_files, cfg_.liar_cols);
        test = load_liar(cfg_.liar_dir + "/test.tsv", cfg_.liar_cols);
        drop_count = train.drop_count + test.drop_count;
    } else {
        throw config_error("unknown dataset '" + name + "'");
    }

    if (cfg_.desk.enabled) {
        Rng rng(derive_seed(cfg_.seed, "desk/" + name));
        subset_in_order(train.docs, cfg_.desk.max_train, rng);
        subset_in_order(test.docs, cfg_.desk.max_test, rng);
    }

    DatasetBundle ds;
    ds.name = name;
    ds.drop_count = drop_count;
    ds.train_tokens.reserve(train.size());
    for (const auto& d : train.docs) {
        ds.train_tokens.push_back(preprocess(d.content, stop_));
        ds.train_labels.push_back(d.label);
        ds.train_ids.push_back(d.id);
    }
    ds.test_tokens.reserve(test.size());
    for (const auto& d : test.docs) {
        ds.test_tokens.push_back(preprocess(d.content, stop_));
        ds.test_labels.push_back(d.label);
        ds.test_ids.push_back(d.id);
    }
    if (ds.train_tokens.empty() || ds.test_tokens.empty())
        throw data_error("dataset '" + name + "' has an empty train or test split");
    return ds;
}

const DatasetBundle& Harness::dataset(const std::string& name) {
    auto it = cache_.find(name);
    if (it == cache_.end()) it = cache_.emplace(name, build_bundle(name)).first;
    return it->second;
}

ResultRow Harness::run_cell(const std::string& dataset_name, Rep rep, Arch arch) {
    const auto start = std::chrono::steady_clock::now();
    const DatasetBundle& ds = dataset(dataset_name);
    const std::uint64_t seed = cell_seed(dataset_name, rep, arch);

    ResultRow row;
    row.dataset = dataset_name;
    row.rep = rep;
    row.arch = arch;
    row.n_train = ds.train_tokens.size();
    row.n_test = ds.test_tokens.size();
    row.epochs = cfg_.train.epochs;
    row.seed = seed;
    row.drop_count = ds.drop_count;

    if (arch == Arch::baseline) {
        std::size_t ones = 0;
        for (int y : ds.train_labels) ones += static_cast<std::size_t>(y);
        const int majority = 2 * ones >= ds.train_labels.size() ? 1 : 0;
        std::vector<int> preds(ds.test_labels.size(), majority);
        row.confusion = metrics(preds, ds.test_labels);
        row.accuracy = row.confusion.accuracy;
        row.epochs = 0;
    } else {
        EncodedCell cell = encode_cell(ds, rep, arch, cfg_, seed);
        ModelSpec spec = spec_for(cell.adapter, cfg_.onehot_embed_dim);
        if (spec.embedding) spec.vocab_size = cell.embed_vocab;

        std::string ckpt_path;
        if (!cfg_.output_dir.empty()) {
            std::filesystem::create_directories(cfg_.output_dir);
            ckpt_path = cfg_.output_dir + "/" + dataset_name + "_" + to_string(rep) + "_" +
                        to_string(arch) + ".ckpt";
        }
        TrainOutcome outcome = train_and_eval(cell, spec, cfg_, seed, ckpt_path);
        row.confusion = outcome.test_metrics;
        row.accuracy = outcome.test_metrics.accuracy;
        row.divergent = outcome.divergent;
    }

    row.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return row;
}

ResultsMatrix Harness::run_grid() {
    ResultsMatrix matrix;
    matrix.config_echo = cfg_.echo();
    {
        std::ostringstream h;
        h << std::hex << stop_.hash();
        matrix.stoplist_hash = h.str();
    }
    matrix.version = kVersion;
    for (const auto& ds : cfg_.datasets)
        for (Rep rep : cfg_.representations)
            for (Arch arch : cfg_.architectures) {
                try {
                    matrix.upsert(run_cell(ds, rep, arch));
                } catch (const std::exception& e) {
                    ResultRow row;
                    row.dataset = ds;
                    row.rep = rep;
                    row.arch = arch;
                    row.absent = true;
                    row.absent_reason = e.what();
                    matrix.upsert(std::move(row));
                }
            }
    return matrix;
}

} // namespace fnd
