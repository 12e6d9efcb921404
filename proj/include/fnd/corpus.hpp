#ifndef FND_CORPUS_HPP
#define FND_CORPUS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fnd {

struct Document {
    std::string id;
    std::string content; // raw text, non-empty
    int label = 0;       // 1 = true/reliable, 0 = false/unreliable
};

enum class CorpusSource { liar, kaggle, fixture };

std::string to_string(CorpusSource s);

// Documents in exact file order; immutable once loaded.
struct LabeledCorpus {
    std::vector<Document> docs;
    CorpusSource source = CorpusSource::fixture;
    std::size_t drop_count = 0; // malformed or empty rows discarded on load

    std::size_t size() const { return docs.size(); }
    bool empty() const { return docs.empty(); }
};

struct SplitPair {
    LabeledCorpus train;
    LabeledCorpus test;
    std::uint64_t seed = 0;
    double ratio = 0.0;
};

struct LiarColumnMap {
    std::size_t label_col = 1;
    std::size_t statement_col = 2;
};

// The six-way LIAR scale merged to binary: half-true / mostly-true / true
// count as true, the rest as false. Unknown strings are rejected.
std::optional<int> map_liar_label(std::string_view raw);

// Tab-separated, no header. Rows with too few columns, unmappable labels or
// empty statements are dropped and counted.
LabeledCorpus load_liar(const std::string& path, LiarColumnMap cols = {});

// Several LIAR files concatenated in argument order.
LabeledCorpus load_liar_files(const std::vector<std::string>& paths, LiarColumnMap cols = {});

// Kaggle fake-news CSV: header id,title,author,text,label; quoted fields and
// embedded newlines per standard CSV rules. content = title + " " + text.
// Source labels use 1 = unreliable; they are flipped so 1 always means
// true/reliable here.
LabeledCorpus load_kaggle(const std::string& path);

// Fixture corpus: one JSON record per line with keys id, content, label.
LabeledCorpus load_fixture(const std::string& path);
void save_fixture(const LabeledCorpus& corpus, const std::string& path);

// Seeded uniform shuffle then prefix/suffix cut; |train| = round(ratio * N).
SplitPair split(const LabeledCorpus& corpus, double ratio, std::uint64_t seed);

// Share of the majority class.
double class_balance(const LabeledCorpus& corpus);

} // namespace fnd

#endif
