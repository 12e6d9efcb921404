#ifndef FND_TEXTPREP_HPP
#define FND_TEXTPREP_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace fnd {

using TokenList = std::vector<std::string>;

// Lowercase ASCII-alphabetic tokens, source order preserved.
// Runs of alphanumeric characters form candidate tokens; anything containing
// a digit is dropped whole. Accented letters fold to plain ASCII when a
// one-letter mapping exists, otherwise the character is skipped.
TokenList tokenize(std::string_view text);

class StopList {
public:
    StopList() = default;
    explicit StopList(std::vector<std::string> words);

    // One word per line, UTF-8, '#' lines are comments.
    static StopList load(const std::string& path);

    bool contains(std::string_view w) const;
    std::size_t size() const { return words_.size(); }

    // Stable content hash, reported alongside results so a run pins down
    // exactly which list it used.
    std::uint64_t hash() const { return hash_; }

private:
    std::unordered_set<std::string> words_;
    std::uint64_t hash_ = 0;
};

TokenList remove_stopwords(const TokenList& tokens, const StopList& stop);

// tokenize, drop stop-words, stem. The one entry point every vectorizer uses.
TokenList preprocess(std::string_view text, const StopList& stop);

} // namespace fnd

#endif
