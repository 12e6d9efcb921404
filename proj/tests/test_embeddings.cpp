#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <vector>

#include "fnd/embeddings.hpp"
#include "fnd/errors.hpp"

using namespace fnd;

namespace {

double cosine(const float* a, const float* b, std::size_t dim) {
    double ab = 0, aa = 0, bb = 0;
    for (std::size_t i = 0; i < dim; ++i) {
        ab += static_cast<double>(a[i]) * b[i];
        aa += static_cast<double>(a[i]) * a[i];
        bb += static_cast<double>(b[i]) * b[i];
    }
    return ab / (std::sqrt(aa) * std::sqrt(bb) + 1e-12);
}

double cosine(const std::vector<float>& a, const std::vector<float>& b) {
    return cosine(a.data(), b.data(), a.size());
}

// templated sentences: "<animal> eats <food>" / "<vehicle> drives <road>"
std::vector<TokenList> toy_template_corpus(std::uint64_t seed, std::size_t n_sentences) {
    static const std::vector<std::string> animals = {"cat",  "dog",  "horse", "cow",
                                                     "fox",  "wolf", "sheep", "goat",
                                                     "lion", "tiger"};
    static const std::vector<std::string> foods = {"grass", "meat", "corn", "fish",
                                                   "oats",  "bread", "apples", "hay"};
    static const std::vector<std::string> vehicles = {"car",  "truck", "bus",  "van",
                                                      "tram", "jeep",  "taxi", "sled"};
    static const std::vector<std::string> roads = {"highway", "street", "road",   "lane",
                                                   "bridge",  "tunnel", "avenue", "track"};
    Rng rng(seed);
    std::vector<TokenList> docs;
    for (std::size_t i = 0; i < n_sentences; ++i) {
        if (i % 2 == 0)
            docs.push_back({animals[rng.below(animals.size())], "eats",
                            foods[rng.below(foods.size())]});
        else
            docs.push_back({vehicles[rng.below(vehicles.size())], "drives",
                            roads[rng.below(roads.size())]});
    }
    return docs;
}

std::vector<std::string> toy_animals() {
    return {"cat", "dog", "horse", "cow", "fox", "wolf", "sheep", "goat", "lion", "tiger"};
}
std::vector<std::string> toy_vehicles() {
    return {"car", "truck", "bus", "van", "tram", "jeep", "taxi", "sled"};
}

// mean cosine between two groups of word vectors (skipping missing words)
double group_cosine(const EmbeddingTable& t, const std::vector<std::string>& xs,
                    const std::vector<std::string>& ys, bool same_group) {
    double sum = 0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = same_group ? i + 1 : 0; j < ys.size(); ++j) {
            std::uint32_t a = t.vocab.id_of(xs[i]), b = t.vocab.id_of(ys[j]);
            if (a == Vocabulary::oov_id || b == Vocabulary::oov_id) continue;
            sum += cosine(t.vec(a), t.vec(b), t.dim);
            ++count;
        }
    return count ? sum / static_cast<double>(count) : 0.0;
}

} // namespace

TEST_CASE("TrainConfig validation catches bad values") {
    TrainConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.dim = 0;
    CHECK_THROWS_AS(cfg.validate(), config_error);
    cfg = TrainConfig{};
    cfg.lr_end = cfg.lr_start;
    CHECK_THROWS_AS(cfg.validate(), config_error);
    cfg = TrainConfig{};
    cfg.min_count = 0;
    CHECK_THROWS_AS(cfg.validate(), config_error);
}

TEST_CASE("unigram table draws follow freq^0.75 within 2%") {
    // ids 1..3 with frequencies 8, 4, 1
    std::vector<std::uint64_t> freq = {0, 8, 4, 1};
    UnigramTable table(freq);
    double total = std::pow(8.0, 0.75) + std::pow(4.0, 0.75) + std::pow(1.0, 0.75);
    std::vector<double> expected = {0.0, std::pow(8.0, 0.75) / total,
                                    std::pow(4.0, 0.75) / total, std::pow(1.0, 0.75) / total};
    Rng rng(77);
    std::vector<std::size_t> counts(4, 0);
    const std::size_t draws = 1000000;
    for (std::size_t i = 0; i < draws; ++i) counts[table.sample(rng)]++;
    CHECK(counts[0] == 0);
    for (std::size_t id = 1; id <= 3; ++id) {
        double got = static_cast<double>(counts[id]) / draws;
        CHECK(std::abs(got - expected[id]) / expected[id] < 0.02);
    }
}

TEST_CASE("word2vec training is deterministic for a fixed seed") {
    auto docs = toy_template_corpus(3, 40);
    TrainConfig cfg;
    cfg.dim = 16;
    cfg.epochs = 2;
    cfg.seed = 99;
    EmbeddingTable a = train_word2vec(docs, cfg);
    EmbeddingTable b = train_word2vec(docs, cfg);
    CHECK(a.w_in == b.w_in);
    CHECK(a.w_out == b.w_out);

    cfg.seed = 100;
    EmbeddingTable c = train_word2vec(docs, cfg);
    CHECK(a.w_in != c.w_in);
}

TEST_CASE("single-word corpus yields no training pairs") {
    std::vector<TokenList> docs = {{"solo"}};
    TrainConfig cfg;
    cfg.dim = 8;
    EmbeddingTable t = train_word2vec(docs, cfg);
    CHECK(t.vocab.size() == 2);
    // no update ever runs: output vectors stay at their zero initialization
    for (float x : t.w_out) CHECK(x == 0.0f);
    for (double l : t.stats.epoch_loss) CHECK(l == 0.0);
}

TEST_CASE("min_count 1 gives hapax words a vector") {
    std::vector<TokenList> docs = {{"common", "common", "rare"}, {"common", "other"}};
    TrainConfig cfg;
    cfg.dim = 8;
    cfg.epochs = 1;
    EmbeddingTable t = train_word2vec(docs, cfg);
    std::uint32_t id = t.vocab.id_of("rare");
    CHECK(id != Vocabulary::oov_id);
    double norm = 0;
    for (std::size_t i = 0; i < t.dim; ++i) norm += std::abs(t.vec(id)[i]);
    CHECK(norm > 0.0);
}

TEST_CASE("training loss decreases over epochs on the toy corpus") {
    int wins = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        auto docs = toy_template_corpus(seed * 17, 200);
        TrainConfig cfg;
        cfg.dim = 32;
        cfg.epochs = 5;
        cfg.seed = seed;
        EmbeddingTable t = train_word2vec(docs, cfg);
        REQUIRE(t.stats.epoch_loss.size() == 5);
        if (t.stats.epoch_loss[4] < t.stats.epoch_loss[0]) ++wins;
    }
    CHECK(wins >= 4);
}

TEST_CASE("toy corpus: within-category cosine beats cross-category") {
    int wins = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        auto docs = toy_template_corpus(seed * 31 + 7, 200);
        TrainConfig cfg;
        cfg.dim = 32;
        cfg.epochs = 20;
        cfg.seed = seed;
        EmbeddingTable t = train_word2vec(docs, cfg);
        double within = group_cosine(t, toy_animals(), toy_animals(), true);
        double cross = group_cosine(t, toy_animals(), toy_vehicles(), false);
        if (within > cross) ++wins;
    }
    CHECK(wins >= 4);
}

TEST_CASE("doc_vector_avg identities") {
    std::vector<TokenList> docs = {{"aa", "bb", "aa", "cc"}, {"bb", "cc"}};
    TrainConfig cfg;
    cfg.dim = 8;
    cfg.epochs = 1;
    EmbeddingTable t = train_word2vec(docs, cfg);

    // single in-vocab word: exactly that word's vector
    FeatureVector one = doc_vector_avg({"aa"}, t);
    for (std::size_t i = 0; i < t.dim; ++i)
        CHECK(one.at(i) == doctest::Approx(t.vec(t.vocab.id_of("aa"))[i]));

    // two words: component-wise midpoint
    FeatureVector two = doc_vector_avg({"aa", "bb"}, t);
    for (std::size_t i = 0; i < t.dim; ++i)
        CHECK(two.at(i) == doctest::Approx(0.5 * (t.vec(t.vocab.id_of("aa"))[i] +
                                                  t.vec(t.vocab.id_of("bb"))[i])));

    // permutation invariance
    FeatureVector fwd = doc_vector_avg({"aa", "bb", "cc"}, t);
    FeatureVector rev = doc_vector_avg({"cc", "bb", "aa"}, t);
    for (std::size_t i = 0; i < t.dim; ++i) CHECK(fwd.at(i) == doctest::Approx(rev.at(i)));

    // all-OOV: zero vector
    FeatureVector zero = doc_vector_avg({"zz", "qq"}, t);
    CHECK(zero.l2_norm() == 0.0);
    CHECK(doc_vector_avg({}, t).l2_norm() == 0.0);
}

namespace {

// 50 docs over a small shared vocabulary, with docs 7 and 23 identical
std::vector<TokenList> duplicate_doc_corpus(std::uint64_t seed) {
    static const char* pool[] = {"market", "rain",  "engine", "valley", "paper",  "stone",
                                 "window", "river", "candle", "forest", "copper", "wheat",
                                 "harbor", "cloud", "signal", "meadow", "lantern", "barrel",
                                 "ribbon", "timber"};
    Rng rng(seed);
    std::vector<TokenList> docs;
    for (int d = 0; d < 50; ++d) {
        TokenList doc;
        const std::size_t len = 15 + rng.below(10);
        for (std::size_t i = 0; i < len; ++i) doc.push_back(pool[rng.below(20)]);
        docs.push_back(doc);
    }
    docs[23] = docs[7];
    return docs;
}

} // namespace

TEST_CASE("doc2vec: duplicated documents end up nearest neighbours") {
    int wins = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        auto docs = duplicate_doc_corpus(1000 + seed);
        TrainConfig cfg;
        cfg.dim = 32;
        cfg.epochs = 20;
        cfg.seed = seed;
        DocEmbeddingModel m = train_doc2vec(docs, cfg);
        REQUIRE(m.n_docs == 50);

        const float* v7 = m.doc_vec(7);
        double dup_cos = cosine(v7, m.doc_vec(23), cfg.dim);
        std::vector<double> others;
        for (std::size_t d = 0; d < 50; ++d)
            if (d != 7 && d != 23) others.push_back(cosine(v7, m.doc_vec(d), cfg.dim));
        std::sort(others.begin(), others.end());
        double median = others[others.size() / 2];
        if (dup_cos > median) ++wins;
    }
    CHECK(wins >= 4);
}

TEST_CASE("doc2vec single-document corpus trains one vector of cfg dim") {
    std::vector<TokenList> docs = {{"only", "one", "doc", "here"}};
    TrainConfig cfg;
    cfg.dim = 300;
    cfg.epochs = 1;
    DocEmbeddingModel m = train_doc2vec(docs, cfg);
    CHECK(m.n_docs == 1);
    CHECK(m.doc_vecs.size() == 300);
    CHECK(m.words.dim == 300);
}

TEST_CASE("infer_docvec: deterministic, and inert on empty input") {
    auto docs = duplicate_doc_corpus(555);
    TrainConfig cfg;
    cfg.dim = 16;
    cfg.epochs = 3;
    cfg.seed = 5;
    DocEmbeddingModel m = train_doc2vec(docs, cfg);

    std::vector<float> a = infer_docvec(m, docs[3], 10, 42);
    std::vector<float> b = infer_docvec(m, docs[3], 10, 42);
    CHECK(a == b);
    std::vector<float> c = infer_docvec(m, docs[3], 10, 43);
    CHECK(a != c);

    // empty document: the seeded initialization comes back untouched
    std::vector<float> e1 = infer_docvec(m, {}, 10, 9);
    std::vector<float> e2 = infer_docvec(m, {}, 0, 9);
    CHECK(e1 == e2);
    CHECK(e1.size() == 16);
}

TEST_CASE("infer_docvec recovers a training document's neighbourhood") {
    int wins = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        auto docs = duplicate_doc_corpus(2000 + seed);
        TrainConfig cfg;
        cfg.dim = 32;
        cfg.epochs = 20;
        cfg.seed = seed;
        DocEmbeddingModel m = train_doc2vec(docs, cfg);

        std::vector<float> inferred = infer_docvec(m, docs[11], 40, seed * 3 + 1);
        double stored_cos = cosine(inferred.data(), m.doc_vec(11), cfg.dim);
        std::vector<double> others;
        for (std::size_t d = 0; d < 50; ++d)
            if (d != 11) others.push_back(cosine(inferred.data(), m.doc_vec(d), cfg.dim));
        std::sort(others.begin(), others.end());
        if (stored_cos > others[others.size() / 2]) ++wins;
    }
    CHECK(wins >= 4);
}

TEST_CASE("embedding vectors serialize in the text format") {
    std::vector<TokenList> docs = {{"apple", "pear"}, {"pear", "plum"}};
    TrainConfig cfg;
    cfg.dim = 4;
    cfg.epochs = 1;
    EmbeddingTable t = train_word2vec(docs, cfg);
    t.save_vectors("tmp_vectors.txt");
    std::ifstream in("tmp_vectors.txt");
    std::string header;
    std::getline(in, header);
    CHECK(header == "3 4");
    std::size_t lines = 0;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) ++lines;
    CHECK(lines == 3);
    std::remove("tmp_vectors.txt");
}
