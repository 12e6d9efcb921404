#include "fnd/porter.hpp"

#include <array>
#include <cstddef>

namespace fnd {
namespace {

// One stemming pass over a single word. The word is held in a mutable
// buffer; conditions (measure, *v*, *d, *o) are evaluated on prefixes.
class Stemmer {
public:
    explicit Stemmer(std::string_view w) : b_(w) {}

    std::string run() {
        step1a();
        step1b();
        step1c();
        step2();
        step3();
        step4();
        step5a();
        step5b();
        return b_;
    }

private:
    std::string b_;

    bool is_cons(std::size_t i) const {
        switch (b_[i]) {
            case 'a':
            case 'e':
            case 'i':
            case 'o':
            case 'u':
                return false;
            case 'y':
                return i == 0 ? true : !is_cons(i - 1);
            default:
                return true;
        }
    }

    // Number of vowel-consonant sequences in b_[0,end): [C](VC)^m[V]
    int measure(std::size_t end) const {
        int m = 0;
        std::size_t i = 0;
        while (i < end && is_cons(i)) ++i;
        while (i < end) {
            while (i < end && !is_cons(i)) ++i;
            if (i >= end) break;
            ++m;
            while (i < end && is_cons(i)) ++i;
        }
        return m;
    }

    bool has_vowel(std::size_t end) const {
        for (std::size_t i = 0; i < end; ++i)
            if (!is_cons(i)) return true;
        return false;
    }

    bool double_cons(std::size_t end) const {
        return end >= 2 && b_[end - 1] == b_[end - 2] && is_cons(end - 1);
    }

    // stem ends consonant-vowel-consonant and the final consonant is not w,x,y
    bool cvc(std::size_t end) const {
        if (end < 3) return false;
        if (!is_cons(end - 3) || is_cons(end - 2) || !is_cons(end - 1)) return false;
        char c = b_[end - 1];
        return c != 'w' && c != 'x' && c != 'y';
    }

    bool ends(std::string_view s) const {
        return b_.size() >= s.size() && std::string_view(b_).substr(b_.size() - s.size()) == s;
    }

    void chop(std::size_t n) { b_.resize(b_.size() - n); }

    void step1a() {
        if (ends("sses"))
            chop(2);
        else if (ends("ies"))
            chop(2);
        else if (ends("ss"))
            ;
        else if (ends("s"))
            chop(1);
    }

    void step1b() {
        if (ends("eed")) {
            if (measure(b_.size() - 3) > 0) chop(1);
            return;
        }
        bool fired = false;
        if (ends("ed") && has_vowel(b_.size() - 2)) {
            chop(2);
            fired = true;
        } else if (ends("ing") && has_vowel(b_.size() - 3)) {
            chop(3);
            fired = true;
        }
        if (!fired) return;
        if (ends("at") || ends("bl") || ends("iz")) {
            b_ += 'e';
        } else if (double_cons(b_.size()) && !ends("l") && !ends("s") && !ends("z")) {
            chop(1);
        } else if (measure(b_.size()) == 1 && cvc(b_.size())) {
            b_ += 'e';
        }
    }

    void step1c() {
        if (ends("y") && has_vowel(b_.size() - 1)) b_[b_.size() - 1] = 'i';
    }

    struct Rule {
        std::string_view suffix;
        std::string_view replacement;
    };

    // Longest matching suffix wins; if its measure condition fails, no
    // shorter suffix is tried. Rules are listed longest first.
    void apply_rules(const Rule* rules, std::size_t count, int min_measure) {
        for (std::size_t r = 0; r < count; ++r) {
            if (!ends(rules[r].suffix)) continue;
            std::size_t stem = b_.size() - rules[r].suffix.size();
            if (measure(stem) > min_measure) {
                b_.resize(stem);
                b_ += rules[r].replacement;
            }
            return;
        }
    }

    void step2() {
        static constexpr std::array<Rule, 20> rules{{
            {"ational", "ate"}, {"ization", "ize"}, {"iveness", "ive"}, {"fulness", "ful"},
            {"ousness", "ous"}, {"tional", "tion"}, {"biliti", "ble"},  {"entli", "ent"},
            {"ousli", "ous"},   {"ation", "ate"},   {"alism", "al"},    {"aliti", "al"},
            {"iviti", "ive"},   {"enci", "ence"},   {"anci", "ance"},   {"izer", "ize"},
            {"abli", "able"},   {"alli", "al"},     {"ator", "ate"},    {"eli", "e"},
        }};
        apply_rules(rules.data(), rules.size(), 0);
    }

    void step3() {
        static constexpr std::array<Rule, 7> rules{{
            {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
            {"ical", "ic"},  {"ness", ""},  {"ful", ""},
        }};
        apply_rules(rules.data(), rules.size(), 0);
    }

    void step4() {
        static constexpr std::array<Rule, 19> rules{{
            {"ement", ""}, {"ance", ""}, {"ence", ""}, {"able", ""}, {"ible", ""},
            {"ment", ""},  {"ant", ""},  {"ent", ""},  {"ion", ""},  {"ism", ""},
            {"ate", ""},   {"iti", ""},  {"ous", ""},  {"ive", ""},  {"ize", ""},
            {"al", ""},    {"er", ""},   {"ic", ""},   {"ou", ""},
        }};
        for (const Rule& r : rules) {
            if (!ends(r.suffix)) continue;
            std::size_t stem = b_.size() - r.suffix.size();
            bool ok = measure(stem) > 1;
            if (r.suffix == "ion")
                ok = ok && stem >= 1 && (b_[stem - 1] == 's' || b_[stem - 1] == 't');
            if (ok) b_.resize(stem);
            return;
        }
    }

    void step5a() {
        if (!ends("e")) return;
        std::size_t stem = b_.size() - 1;
        int m = measure(stem);
        if (m > 1 || (m == 1 && !cvc(stem))) chop(1);
    }

    void step5b() {
        if (ends("l") && double_cons(b_.size()) && measure(b_.size()) > 1) chop(1);
    }
};

} // namespace

std::string porter_stem(std::string_view word) {
    if (word.empty()) return std::string();
    return Stemmer(word).run();
}

} // namespace fnd
