#ifndef FND_REPORT_HPP
#define FND_REPORT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fnd/models.hpp"

namespace fnd {

struct Metrics {
    double accuracy = 0.0;
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
};

// label 1 is the positive class
Metrics metrics(const std::vector<int>& predictions, const std::vector<int>& labels);

struct ResultRow {
    std::string dataset;
    Rep rep = Rep::tfidf;
    Arch arch = Arch::ann;
    double accuracy = 0.0;
    std::size_t n_train = 0;
    std::size_t n_test = 0;
    std::size_t epochs = 0;
    std::uint64_t seed = 0;
    double wall_time_s = 0.0;
    std::size_t drop_count = 0;
    bool divergent = false;
    Metrics confusion;
    // cells that failed fatally stay in the matrix with a reason
    bool absent = false;
    std::string absent_reason;

    std::string key() const { return dataset + "/" + to_string(rep) + "/" + to_string(arch); }
};

struct ResultsMatrix {
    std::vector<ResultRow> rows;
    std::string config_echo;
    std::string stoplist_hash;
    std::string version;

    void upsert(ResultRow row); // at most one row per (dataset, rep, arch)
    const ResultRow* find(const std::string& dataset, Rep rep, Arch arch) const;
};

// CSV: '#' metadata lines (config echo, stop-list hash, version, absent
// cells), a header row, then one data row per present cell in the fixed
// column order dataset, representation, architecture, accuracy, n_train,
// n_test, epochs, seed, wall_time_s, drop_count, divergent.
// with_timing=false writes 0.000 wall times so reports are byte-stable.
void emit_csv(const ResultsMatrix& m, const std::string& path, bool with_timing = true);
ResultsMatrix parse_csv(const std::string& path);

// One table per architecture: rows = datasets, columns = representations,
// cells = percentages with 2 decimals.
void emit_markdown(const ResultsMatrix& m, const std::string& path);

} // namespace fnd

#endif
