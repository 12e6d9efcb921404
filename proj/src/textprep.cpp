#include "fnd/textprep.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "fnd/errors.hpp"
#include "fnd/porter.hpp"
#include "fnd/rng.hpp"

namespace fnd {
namespace {

// Fold a non-ASCII codepoint to a single ASCII letter, or 0 when no
// one-letter mapping exists (folds like ae/ss expand and are dropped).
char fold_codepoint(char32_t cp) {
    struct Range {
        char32_t lo, hi;
        char out;
    };
    // Latin-1 supplement
    static constexpr Range latin1[] = {
        {0xC0, 0xC5, 'a'}, {0xC7, 0xC7, 'c'}, {0xC8, 0xCB, 'e'}, {0xCC, 0xCF, 'i'},
        {0xD1, 0xD1, 'n'}, {0xD2, 0xD6, 'o'}, {0xD8, 0xD8, 'o'}, {0xD9, 0xDC, 'u'},
        {0xDD, 0xDD, 'y'}, {0xE0, 0xE5, 'a'}, {0xE7, 0xE7, 'c'}, {0xE8, 0xEB, 'e'},
        {0xEC, 0xEF, 'i'}, {0xF1, 0xF1, 'n'}, {0xF2, 0xF6, 'o'}, {0xF8, 0xF8, 'o'},
        {0xF9, 0xFC, 'u'}, {0xFD, 0xFD, 'y'}, {0xFF, 0xFF, 'y'},
    };
    for (const Range& r : latin1)
        if (cp >= r.lo && cp <= r.hi) return r.out;
    if (cp >= 0x100 && cp <= 0x17F) {
        // Latin Extended-A: letters with diacritics in alphabetical blocks
        static constexpr struct {
            char32_t lo, hi;
            char out;
        } exta[] = {
            {0x100, 0x105, 'a'}, {0x106, 0x10D, 'c'}, {0x10E, 0x111, 'd'}, {0x112, 0x11B, 'e'},
            {0x11C, 0x123, 'g'}, {0x124, 0x127, 'h'}, {0x128, 0x131, 'i'}, {0x134, 0x135, 'j'},
            {0x136, 0x138, 'k'}, {0x139, 0x142, 'l'}, {0x143, 0x149, 'n'}, {0x14C, 0x151, 'o'},
            {0x154, 0x159, 'r'}, {0x15A, 0x161, 's'}, {0x162, 0x167, 't'}, {0x168, 0x173, 'u'},
            {0x174, 0x175, 'w'}, {0x176, 0x178, 'y'}, {0x179, 0x17E, 'z'},
        };
        for (const auto& r : exta)
            if (cp >= r.lo && cp <= r.hi) return r.out;
    }
    return 0;
}

// Minimal UTF-8 decoder; malformed bytes decode as U+FFFD and are dropped.
char32_t decode_utf8(std::string_view s, std::size_t& i) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    if (c < 0x80) {
        ++i;
        return c;
    }
    int extra = 0;
    char32_t cp = 0;
    if ((c & 0xE0) == 0xC0) {
        extra = 1;
        cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
        extra = 2;
        cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
        extra = 3;
        cp = c & 0x07;
    } else {
        ++i;
        return 0xFFFD;
    }
    if (i + extra >= s.size()) {
        ++i;
        return 0xFFFD;
    }
    for (int k = 1; k <= extra; ++k) {
        unsigned char cc = static_cast<unsigned char>(s[i + k]);
        if ((cc & 0xC0) != 0x80) {
            ++i;
            return 0xFFFD;
        }
        cp = (cp << 6) | (cc & 0x3F);
    }
    i += 1 + extra;
    return cp;
}

} // namespace

TokenList tokenize(std::string_view text) {
    TokenList out;
    std::string cur;
    bool has_digit = false;
    auto flush = [&] {
        if (!cur.empty() && !has_digit) out.push_back(cur);
        cur.clear();
        has_digit = false;
    };
    std::size_t i = 0;
    while (i < text.size()) {
        char32_t cp = decode_utf8(text, i);
        if (cp < 0x80) {
            char c = static_cast<char>(cp);
            if (c >= 'A' && c <= 'Z') {
                cur += static_cast<char>(c - 'A' + 'a');
            } else if (c >= 'a' && c <= 'z') {
                cur += c;
            } else if (c >= '0' && c <= '9') {
                cur += c; // keeps the token alive so the whole run is dropped
                has_digit = true;
            } else {
                flush();
            }
        } else {
            char folded = fold_codepoint(cp);
            if (folded) cur += folded;
            // unmapped codepoints are dropped in place, the token continues
        }
    }
    flush();
    return out;
}

StopList::StopList(std::vector<std::string> words) {
    std::string joined;
    for (const auto& w : words) {
        joined += w;
        joined += '\n';
        words_.insert(w);
    }
    hash_ = fnv1a64(joined);
}

StopList StopList::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open stop-list file: " + path);
    std::vector<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::transform(line.begin(), line.end(), line.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        words.push_back(line);
    }
    return StopList(std::move(words));
}

bool StopList::contains(std::string_view w) const {
    return words_.find(std::string(w)) != words_.end();
}

TokenList remove_stopwords(const TokenList& tokens, const StopList& stop) {
    TokenList out;
    out.reserve(tokens.size());
    for (const auto& t : tokens)
        if (!stop.contains(t)) out.push_back(t);
    return out;
}

TokenList preprocess(std::string_view text, const StopList& stop) {
    TokenList kept = remove_stopwords(tokenize(text), stop);
    TokenList out;
    out.reserve(kept.size());
    for (const auto& t : kept) {
        std::string s = porter_stem(t);
        if (!s.empty()) out.push_back(std::move(s));
    }
    return out;
}

} // namespace fnd
