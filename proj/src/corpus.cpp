#include "fnd/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fnd/errors.hpp"
#include "fnd/rng.hpp"

namespace fnd {
namespace {

std::string lowercased(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> cols;
    std::size_t start = 0;
    while (true) {
        std::size_t tab = line.find('\t', start);
        if (tab == std::string::npos) {
            cols.push_back(line.substr(start));
            break;
        }
        cols.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
    return cols;
}

// Standard CSV: fields separated by commas, optionally quoted with '"';
// quoted fields may contain commas, newlines and doubled quotes.
// Returns one record (possibly spanning several physical lines), or
// nullopt at end of stream.
std::optional<std::vector<std::string>> read_csv_record(std::istream& in) {
    std::vector<std::string> fields;
    std::string field;
    bool in_quotes = false;
    bool any = false;
    int c;
    while ((c = in.get()) != EOF) {
        any = true;
        char ch = static_cast<char>(c);
        if (in_quotes) {
            if (ch == '"') {
                if (in.peek() == '"') {
                    in.get();
                    field += '"';
                } else {
                    in_quotes = false;
                }
            } else {
                field += ch;
            }
        } else if (ch == '"') {
            in_quotes = true;
        } else if (ch == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (ch == '\n') {
            if (!field.empty() && field.back() == '\r') field.pop_back();
            fields.push_back(std::move(field));
            return fields;
        } else {
            field += ch;
        }
    }
    if (!any) return std::nullopt;
    if (!field.empty() && field.back() == '\r') field.pop_back();
    fields.push_back(std::move(field));
    return fields;
}

bool is_blank(const std::string& s) {
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

} // namespace

std::string to_string(CorpusSource s) {
    switch (s) {
        case CorpusSource::liar: return "liar";
        case CorpusSource::kaggle: return "kaggle";
        case CorpusSource::fixture: return "fixture";
    }
    return "?";
}

std::optional<int> map_liar_label(std::string_view raw) {
    std::string s = lowercased(raw);
    if (s == "true" || s == "mostly-true" || s == "half-true") return 1;
    if (s == "false" || s == "barely-true" || s == "pants-fire") return 0;
    return std::nullopt;
}

LabeledCorpus load_liar(const std::string& path, LiarColumnMap cols) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open LIAR file: " + path);
    LabeledCorpus corpus;
    corpus.source = CorpusSource::liar;
    const std::size_t need = std::max(cols.label_col, cols.statement_col) + 1;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields = split_tabs(line);
        if (fields.size() < need) {
            ++corpus.drop_count;
            continue;
        }
        auto label = map_liar_label(fields[cols.label_col]);
        const std::string& statement = fields[cols.statement_col];
        if (!label || is_blank(statement)) {
            ++corpus.drop_count;
            continue;
        }
        Document doc;
        doc.id = !fields[0].empty() ? fields[0] : path + ":" + std::to_string(lineno);
        doc.content = statement;
        doc.label = *label;
        corpus.docs.push_back(std::move(doc));
    }
    return corpus;
}

LabeledCorpus load_liar_files(const std::vector<std::string>& paths, LiarColumnMap cols) {
    LabeledCorpus corpus;
    corpus.source = CorpusSource::liar;
    for (const auto& p : paths) {
        LabeledCorpus part = load_liar(p, cols);
        corpus.drop_count += part.drop_count;
        for (auto& d : part.docs) corpus.docs.push_back(std::move(d));
    }
    return corpus;
}

LabeledCorpus load_kaggle(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open Kaggle file: " + path);
    auto header = read_csv_record(in);
    if (!header) throw data_error("Kaggle CSV has no header row: " + path);
    std::size_t id_col = static_cast<std::size_t>(-1), title_col = id_col, text_col = id_col,
                label_col = id_col;
    for (std::size_t i = 0; i < header->size(); ++i) {
        std::string name = lowercased((*header)[i]);
        if (name == "id") id_col = i;
        else if (name == "title") title_col = i;
        else if (name == "text") text_col = i;
        else if (name == "label") label_col = i;
    }
    if (text_col == static_cast<std::size_t>(-1) || label_col == static_cast<std::size_t>(-1))
        throw data_error("Kaggle CSV header is missing text/label columns: " + path);

    LabeledCorpus corpus;
    corpus.source = CorpusSource::kaggle;
    std::size_t recno = 0;
    while (auto rec = read_csv_record(in)) {
        ++recno;
        if (rec->size() == 1 && is_blank((*rec)[0])) continue;
        auto get = [&](std::size_t col) -> std::string {
            return col < rec->size() ? (*rec)[col] : std::string();
        };
        std::string raw_label = get(label_col);
        int source_label;
        if (raw_label == "0")
            source_label = 0;
        else if (raw_label == "1")
            source_label = 1;
        else {
            ++corpus.drop_count;
            continue;
        }
        std::string title = get(title_col);
        std::string text = get(text_col);
        std::string content = title.empty() ? text : title + " " + text;
        if (is_blank(content)) {
            ++corpus.drop_count;
            continue;
        }
        Document doc;
        std::string id = get(id_col);
        doc.id = !id.empty() ? id : path + ":" + std::to_string(recno);
        doc.content = std::move(content);
        // source: 1 = unreliable/fake, 0 = reliable; flip so 1 means true
        doc.label = source_label == 0 ? 1 : 0;
        corpus.docs.push_back(std::move(doc));
    }
    return corpus;
}

LabeledCorpus load_fixture(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open fixture file: " + path);
    LabeledCorpus corpus;
    corpus.source = CorpusSource::fixture;
    std::string line;
    while (std::getline(in, line)) {
        if (is_blank(line)) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.contains("id") || !j.contains("content") ||
            !j.contains("label")) {
            ++corpus.drop_count;
            continue;
        }
        Document doc;
        doc.id = j["id"].is_string() ? j["id"].get<std::string>() : j["id"].dump();
        doc.content = j["content"].get<std::string>();
        int label = j["label"].get<int>();
        if ((label != 0 && label != 1) || is_blank(doc.content)) {
            ++corpus.drop_count;
            continue;
        }
        doc.label = label;
        corpus.docs.push_back(std::move(doc));
    }
    return corpus;
}

void save_fixture(const LabeledCorpus& corpus, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw data_error("cannot write fixture file: " + path);
    for (const auto& d : corpus.docs) {
        nlohmann::json j;
        j["id"] = d.id;
        j["content"] = d.content;
        j["label"] = d.label;
        out << j.dump() << "\n";
    }
}

SplitPair split(const LabeledCorpus& corpus, double ratio, std::uint64_t seed) {
    if (!(ratio > 0.0 && ratio < 1.0))
        throw config_error("split ratio must lie strictly between 0 and 1");
    if (corpus.empty()) throw data_error("cannot split an empty corpus");

    std::vector<std::size_t> order(corpus.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng rng(seed);
    shuffle(order, rng);

    const std::size_t n_train =
        static_cast<std::size_t>(std::llround(ratio * static_cast<double>(corpus.size())));

    SplitPair pair;
    pair.seed = seed;
    pair.ratio = ratio;
    pair.train.source = corpus.source;
    pair.test.source = corpus.source;
    for (std::size_t i = 0; i < order.size(); ++i) {
        const Document& d = corpus.docs[order[i]];
        (i < n_train ? pair.train : pair.test).docs.push_back(d);
    }
    return pair;
}

double class_balance(const LabeledCorpus& corpus) {
    if (corpus.empty()) throw data_error("class_balance of an empty corpus");
    std::size_t ones = 0;
    for (const auto& d : corpus.docs) ones += static_cast<std::size_t>(d.label);
    std::size_t zeros = corpus.size() - ones;
    return static_cast<double>(std::max(ones, zeros)) / static_cast<double>(corpus.size());
}

} // namespace fnd
