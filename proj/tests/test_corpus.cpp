#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <set>

#include "fnd/corpus.hpp"
#include "fnd/errors.hpp"
#include "fnd/rng.hpp"

using namespace fnd;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name, const std::string& content)
        : path("tmp_" + name) {
        std::ofstream out(path, std::ios::binary);
        out << content;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

} // namespace

TEST_CASE("map_liar_label merges six categories to binary") {
    CHECK(map_liar_label("true") == 1);
    CHECK(map_liar_label("mostly-true") == 1);
    CHECK(map_liar_label("half-true") == 1);
    CHECK(map_liar_label("false") == 0);
    CHECK(map_liar_label("barely-true") == 0);
    CHECK(map_liar_label("pants-fire") == 0);
    CHECK(map_liar_label("TRUE") == 1);
    CHECK(map_liar_label("Pants-Fire") == 0);
    CHECK_FALSE(map_liar_label("mostly true").has_value());
    CHECK_FALSE(map_liar_label("").has_value());
    CHECK_FALSE(map_liar_label("unknown").has_value());
}

TEST_CASE("load_liar extracts the statement and label columns") {
    TempFile f("liar.tsv",
               "123.json\thalf-true\tSays the economy grew.\textra\tcols\n"
               "124.json\tfalse\tMoon is cheese.\tx\ty\n"
               "tooshort\ttrue\n"                              // fewer columns than needed
               "125.json\tnot-a-label\tSome statement.\ta\tb\n" // unmappable label
               "126.json\ttrue\t\ta\tb\n");                    // empty statement
    LabeledCorpus c = load_liar(f.path);
    REQUIRE(c.size() == 2);
    CHECK(c.docs[0].id == "123.json");
    CHECK(c.docs[0].content == "Says the economy grew.");
    CHECK(c.docs[0].label == 1);
    CHECK(c.docs[1].label == 0);
    CHECK(c.drop_count == 3);
    CHECK(c.source == CorpusSource::liar);
}

TEST_CASE("load_liar supports a configurable column map") {
    TempFile f("liar2.tsv", "id1\tignored\ttrue\tThe claim text\n");
    LiarColumnMap cols;
    cols.label_col = 2;
    cols.statement_col = 3;
    LabeledCorpus c = load_liar(f.path, cols);
    REQUIRE(c.size() == 1);
    CHECK(c.docs[0].content == "The claim text");
    CHECK(c.docs[0].label == 1);
}

TEST_CASE("load_liar on an empty file yields an empty corpus") {
    TempFile f("liar3.tsv", "");
    LabeledCorpus c = load_liar(f.path);
    CHECK(c.empty());
    CHECK(c.drop_count == 0);
}

TEST_CASE("load_liar missing file is fatal") {
    CHECK_THROWS_AS(load_liar("no_such_file.tsv"), data_error);
}

TEST_CASE("load_kaggle joins title and text and flips the label convention") {
    TempFile f("kaggle.csv",
               "id,title,author,text,label\n"
               "0,A,auth,B C,0\n"                             // reliable -> label 1
               "1,\"Quoted, title\",x,\"line one\nline two\",1\n" // fake -> label 0
               "2,,auth,,0\n"                                 // empty content -> dropped
               "3,T,auth,body,weird\n");                      // unparsable label -> dropped
    LabeledCorpus c = load_kaggle(f.path);
    REQUIRE(c.size() == 2);
    CHECK(c.docs[0].content == "A B C");
    CHECK(c.docs[0].label == 1);
    CHECK(c.docs[1].content == "Quoted, title line one\nline two");
    CHECK(c.docs[1].label == 0);
    CHECK(c.drop_count == 2);
    CHECK(c.source == CorpusSource::kaggle);
}

TEST_CASE("load_kaggle requires the header columns") {
    TempFile f("kaggle2.csv", "id,author,stuff\n1,2,3\n");
    CHECK_THROWS_AS(load_kaggle(f.path), data_error);
}

TEST_CASE("fixture format round-trips a corpus exactly") {
    LabeledCorpus c;
    c.source = CorpusSource::fixture;
    c.docs = {{"a1", "Some text, with \"quotes\" and\nnewlines", 1},
              {"a2", "plain", 0},
              {"a3", "unicode: caf\xc3\xa9", 1}};
    TempFile f("fixture.jsonl", "");
    save_fixture(c, f.path);
    LabeledCorpus back = load_fixture(f.path);
    REQUIRE(back.size() == c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        CHECK(back.docs[i].id == c.docs[i].id);
        CHECK(back.docs[i].content == c.docs[i].content);
        CHECK(back.docs[i].label == c.docs[i].label);
    }
}

TEST_CASE("split produces a deterministic disjoint partition") {
    LabeledCorpus c;
    for (int i = 0; i < 10; ++i)
        c.docs.push_back({"d" + std::to_string(i), "text " + std::to_string(i), i % 2});

    SplitPair p = split(c, 0.8, 7);
    CHECK(p.train.size() == 8);
    CHECK(p.test.size() == 2);

    SplitPair p2 = split(c, 0.8, 7);
    for (std::size_t i = 0; i < p.train.size(); ++i)
        CHECK(p.train.docs[i].id == p2.train.docs[i].id);
    for (std::size_t i = 0; i < p.test.size(); ++i)
        CHECK(p.test.docs[i].id == p2.test.docs[i].id);
}

TEST_CASE("split is a partition for random corpora, seeds and ratios") {
    Rng rng(99);
    for (int iter = 0; iter < 40; ++iter) {
        LabeledCorpus c;
        const std::size_t n = 1 + rng.below(60);
        for (std::size_t i = 0; i < n; ++i)
            c.docs.push_back({"id" + std::to_string(i), "x", static_cast<int>(rng.below(2))});
        const double ratio = 0.05 + 0.9 * rng.uniform();
        SplitPair p = split(c, ratio, rng.next());

        CHECK(p.train.size() + p.test.size() == n);
        std::set<std::string> seen;
        for (const auto& d : p.train.docs) seen.insert(d.id);
        for (const auto& d : p.test.docs) {
            CHECK(seen.find(d.id) == seen.end());
            seen.insert(d.id);
        }
        CHECK(seen.size() == n);
    }
}

TEST_CASE("split rejects out-of-range ratios and empty corpora") {
    LabeledCorpus c;
    c.docs.push_back({"a", "x", 1});
    CHECK_THROWS_AS(split(c, 1.0, 1), config_error);
    CHECK_THROWS_AS(split(c, 0.0, 1), config_error);
    LabeledCorpus empty;
    CHECK_THROWS_AS(split(empty, 0.5, 1), data_error);
}

TEST_CASE("class_balance is the majority share") {
    LabeledCorpus c;
    c.docs = {{"a", "x", 1}, {"b", "x", 1}, {"c", "x", 0}, {"d", "x", 0}};
    CHECK(class_balance(c) == doctest::Approx(0.5));
    c.docs[2].label = 1;
    CHECK(class_balance(c) == doctest::Approx(0.75));
    LabeledCorpus empty;
    CHECK_THROWS_AS(class_balance(empty), data_error);
}

TEST_CASE("bundled fixture corpus is well balanced") {
    LabeledCorpus c = load_fixture(std::string(FND_REPO_DIR) + "/data/fixture_corpus.jsonl");
    CHECK(c.size() == 200);
    CHECK(class_balance(c) < 0.6);
    CHECK(c.drop_count == 0);
}
