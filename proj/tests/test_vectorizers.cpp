#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include "fnd/errors.hpp"
#include "fnd/rng.hpp"
#include "fnd/vectorizers.hpp"

using namespace fnd;

namespace {

// Brute-force tf-idf oracle: recomputes df, idf and weights per token with
// plain double loops, independent of the Vocabulary/TfidfModel machinery.
std::map<std::string, double> oracle_tfidf(const std::vector<TokenList>& train,
                                           const TokenList& doc,
                                           const std::set<std::string>& vocab_tokens) {
    const double n = static_cast<double>(train.size());
    std::map<std::string, double> weights;
    for (const auto& tok : doc) {
        if (!vocab_tokens.count(tok) || weights.count(tok)) continue;
        double tf = 0.0;
        for (const auto& t : doc)
            if (t == tok) tf += 1.0;
        double df = 0.0;
        for (const auto& d : train) {
            bool found = false;
            for (const auto& t : d)
                if (t == tok) {
                    found = true;
                    break;
                }
            if (found) df += 1.0;
        }
        weights[tok] = tf * (std::log((1.0 + n) / (1.0 + df)) + 1.0);
    }
    double sumsq = 0.0;
    for (auto& [tok, w] : weights) sumsq += w * w;
    if (sumsq > 0.0)
        for (auto& [tok, w] : weights) w /= std::sqrt(sumsq);
    return weights;
}

TokenList random_doc(Rng& rng, std::size_t max_len, std::size_t vocab_span) {
    static const char* pool[] = {"alpha", "bravo", "charlie", "delta", "echo",  "foxtrot",
                                 "golf",  "hotel", "india",   "juliet", "kilo", "lima",
                                 "mike",  "nov",   "oscar",   "papa",  "quebec", "romeo",
                                 "sierra", "tango", "uniform", "victor", "whiskey", "xray"};
    TokenList doc;
    const std::size_t len = rng.below(max_len + 1);
    for (std::size_t i = 0; i < len; ++i)
        doc.push_back(pool[rng.below(std::min<std::size_t>(vocab_span, 24))]);
    return doc;
}

} // namespace

TEST_CASE("build_vocab ranks by frequency with lexicographic ties") {
    std::vector<TokenList> docs = {{"a", "b", "a"}, {"b", "c"}};
    Vocabulary v = build_vocab(docs, 3);
    CHECK(v.size() == 3);
    CHECK(v.id_of("a") == 1); // freq 2, tie with b broken lexicographically
    CHECK(v.id_of("b") == 2);
    CHECK(v.id_of("c") == Vocabulary::oov_id);
    CHECK(v.id_of("zzz") == Vocabulary::oov_id);
    CHECK(v.term_freq(1) == 2);
    CHECK(v.doc_freq(2) == 2);
}

TEST_CASE("build_vocab rejects max_size 1 and empty corpora") {
    std::vector<TokenList> docs = {{"a"}};
    CHECK_THROWS_AS(build_vocab(docs, 1), config_error);
    CHECK_THROWS_AS(build_vocab({}, 10), data_error);
}

TEST_CASE("build_vocab is deterministic") {
    Rng rng(5);
    std::vector<TokenList> docs;
    for (int i = 0; i < 30; ++i) docs.push_back(random_doc(rng, 40, 24));
    Vocabulary a = build_vocab(docs, 10);
    Vocabulary b = build_vocab(docs, 10);
    REQUIRE(a.size() == b.size());
    for (std::uint32_t id = 1; id < a.size(); ++id) CHECK(a.token_of(id) == b.token_of(id));
}

TEST_CASE("encode_onehot pre-pads and keeps the sequence tail") {
    std::vector<TokenList> docs = {{"a", "b", "a"}, {"b", "c"}};
    Vocabulary v = build_vocab(docs, 3); // a:1 b:2, c oov
    IdSequence s = encode_onehot({"a", "b"}, v, 4);
    CHECK(s.ids == std::vector<std::uint32_t>{0, 0, 1, 2});

    // longer than L: the last L survive
    TokenList long_doc;
    for (int i = 0; i < 25; ++i) long_doc.push_back(i % 2 ? "a" : "b");
    IdSequence t = encode_onehot(long_doc, v, 20);
    CHECK(t.ids.size() == 20);
    for (std::size_t i = 0; i < 20; ++i)
        CHECK(t.ids[i] == (long_doc[5 + i] == "a" ? 1u : 2u));

    CHECK(encode_onehot({}, v, 4).ids == std::vector<std::uint32_t>{0, 0, 0, 0});
    // unknown tokens are dropped, never emitted as interior zeros
    CHECK(encode_onehot({"c", "a", "c", "b"}, v, 4).ids ==
          std::vector<std::uint32_t>{0, 0, 1, 2});
}

TEST_CASE("encode_onehot output length and padding prefix invariants") {
    Rng rng(17);
    std::vector<TokenList> docs;
    for (int i = 0; i < 10; ++i) docs.push_back(random_doc(rng, 30, 10));
    Vocabulary v = build_vocab(docs, 8);
    for (int iter = 0; iter < 100; ++iter) {
        const std::size_t len = 1 + rng.below(30);
        IdSequence s = encode_onehot(random_doc(rng, 40, 24), v, len);
        REQUIRE(s.ids.size() == len);
        bool content_started = false;
        for (std::uint32_t id : s.ids) {
            if (id != 0) content_started = true;
            else CHECK_FALSE(content_started); // zeros only before content
        }
    }
}

TEST_CASE("fit_tfidf computes the documented idf values") {
    std::vector<TokenList> docs = {{"a", "b"}, {"b", "c"}};
    TfidfModel m = fit_tfidf(docs);
    // N=2; df(a)=1, df(b)=2, df(c)=1
    CHECK(m.idf[m.vocab.id_of("a")] == doctest::Approx(std::log(3.0 / 2.0) + 1.0));
    CHECK(m.idf[m.vocab.id_of("b")] == doctest::Approx(1.0));
    CHECK(m.idf[m.vocab.id_of("c")] == doctest::Approx(std::log(3.0 / 2.0) + 1.0));

    FeatureVector fv = transform_tfidf(m, {"a", "b"});
    CHECK(fv.at(m.vocab.id_of("a")) == doctest::Approx(0.814802).epsilon(1e-4));
    CHECK(fv.at(m.vocab.id_of("b")) == doctest::Approx(0.579739).epsilon(1e-4));
    CHECK(fv.l2_norm() == doctest::Approx(1.0));
}

TEST_CASE("single-document corpus gives idf 1 everywhere") {
    std::vector<TokenList> docs = {{"x", "y", "z"}};
    TfidfModel m = fit_tfidf(docs);
    for (const char* t : {"x", "y", "z"})
        CHECK(m.idf[m.vocab.id_of(t)] == doctest::Approx(1.0));
}

TEST_CASE("transform_tfidf edge cases") {
    std::vector<TokenList> docs = {{"a", "b"}, {"b", "c"}};
    TfidfModel m = fit_tfidf(docs);

    FeatureVector zero = transform_tfidf(m, {"unseen", "tokens"});
    CHECK(zero.l2_norm() == doctest::Approx(0.0));
    CHECK(zero.nnz() == 0);

    FeatureVector single = transform_tfidf(m, {"b", "b"});
    CHECK(single.at(m.vocab.id_of("b")) == doctest::Approx(1.0));
    CHECK(single.nnz() == 1);
}

TEST_CASE("tf-idf equals the brute-force oracle to 1e-9 on random corpora") {
    Rng rng(2024);
    for (int corpus_iter = 0; corpus_iter < 12; ++corpus_iter) {
        const std::size_t n_docs = 2 + rng.below(49);
        std::vector<TokenList> train;
        for (std::size_t i = 0; i < n_docs; ++i) train.push_back(random_doc(rng, 200, 24));
        bool any = false;
        for (const auto& d : train) any = any || !d.empty();
        if (!any) train[0] = {"alpha"};

        TfidfModel m = fit_tfidf(train);
        std::set<std::string> vocab_tokens;
        for (std::uint32_t id = 1; id < m.vocab.size(); ++id)
            vocab_tokens.insert(m.vocab.token_of(id));

        for (int doc_iter = 0; doc_iter < 6; ++doc_iter) {
            TokenList doc = random_doc(rng, 200, 24);
            FeatureVector fv = transform_tfidf(m, doc);
            auto oracle = oracle_tfidf(train, doc, vocab_tokens);

            double norm = fv.l2_norm();
            if (!oracle.empty()) CHECK(std::abs(norm - 1.0) < 1e-9);

            for (const auto& [tok, expect] : oracle)
                CHECK(std::abs(fv.at(m.vocab.id_of(tok)) - expect) < 1e-9);
            CHECK(fv.nnz() == oracle.size());
        }
    }
}

TEST_CASE("fit/transform isolation: unseen test docs never grow the model") {
    std::vector<TokenList> train = {{"a", "b"}, {"c"}};
    TfidfModel m = fit_tfidf(train);
    const std::size_t d_before = m.dim();
    FeatureVector fv = transform_tfidf(m, {"totally", "new", "words", "a"});
    CHECK(m.dim() == d_before);
    CHECK(fv.dim() == d_before);
    CHECK(fv.nnz() == 1);
}

TEST_CASE("khot_bag marks present ids, oov position stays zero") {
    std::vector<TokenList> docs = {{"a", "b", "a"}, {"b", "c", "d"}};
    Vocabulary v = build_vocab(docs, 4); // a:1 b:2 (freq 2), c:3? ties
    FeatureVector fv = khot_bag({"a", "a", "b"}, v);
    CHECK(fv.dim() == 4);
    CHECK(fv.at(0) == 0.0);
    CHECK(fv.at(v.id_of("a")) == 1.0);
    CHECK(fv.at(v.id_of("b")) == 1.0);
    CHECK(khot_bag({}, v).nnz() == 0);
    CHECK(khot_bag({"zz", "qq"}, v).nnz() == 0);
}

TEST_CASE("sparse and dense feature vectors compare equal element-wise") {
    Rng rng(7);
    for (int iter = 0; iter < 50; ++iter) {
        const std::size_t dim = 4 + rng.below(64);
        std::map<std::uint32_t, double> entries;
        const std::size_t k = rng.below(dim / 2 + 1);
        for (std::size_t i = 0; i < k; ++i)
            entries[static_cast<std::uint32_t>(rng.below(dim))] = rng.uniform(0.1, 2.0);

        std::vector<double> dense(dim, 0.0);
        std::vector<std::pair<std::uint32_t, double>> nz;
        for (auto& [i, v] : entries) {
            dense[i] = v;
            nz.emplace_back(i, v);
        }
        FeatureVector a = FeatureVector::from_dense(dense);
        FeatureVector b = FeatureVector::from_pairs(dim, nz);
        CHECK(a == b);
        CHECK(a.l2_norm() == doctest::Approx(b.l2_norm()));
    }
}

TEST_CASE("vocabulary and tf-idf model serialization round-trips") {
    std::vector<TokenList> docs = {{"apple", "pear", "apple"}, {"pear", "plum", "fig"}};
    Vocabulary v = build_vocab(docs, 0);
    v.save("tmp_vocab.txt");
    Vocabulary v2 = Vocabulary::load("tmp_vocab.txt");
    REQUIRE(v2.size() == v.size());
    for (std::uint32_t id = 1; id < v.size(); ++id) {
        CHECK(v2.token_of(id) == v.token_of(id));
        CHECK(v2.doc_freq(id) == v.doc_freq(id));
        CHECK(v2.term_freq(id) == v.term_freq(id));
    }
    std::remove("tmp_vocab.txt");

    TfidfModel m = fit_tfidf(docs);
    m.save("tmp_tfidf.txt");
    TfidfModel m2 = TfidfModel::load("tmp_tfidf.txt");
    REQUIRE(m2.dim() == m.dim());
    CHECK(m2.n_train_docs == m.n_train_docs);
    for (std::uint32_t id = 1; id < m.vocab.size(); ++id) {
        CHECK(m2.vocab.token_of(id) == m.vocab.token_of(id));
        CHECK(m2.idf[id] == m.idf[id]); // float-exact via round-trip precision
    }
    std::remove("tmp_tfidf.txt");
}
