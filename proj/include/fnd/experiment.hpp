#ifndef FND_EXPERIMENT_HPP
#define FND_EXPERIMENT_HPP

#include <map>
#include <string>
#include <vector>

#include "fnd/config.hpp"
#include "fnd/corpus.hpp"
#include "fnd/report.hpp"
#include "fnd/textprep.hpp"

namespace fnd {

// One dataset, loaded, split, desk-subsetted and preprocessed.
struct DatasetBundle {
    std::string name;
    std::vector<TokenList> train_tokens;
    std::vector<TokenList> test_tokens;
    std::vector<int> train_labels;
    std::vector<int> test_labels;
    std::vector<std::string> train_ids;
    std::vector<std::string> test_ids;
    std::size_t drop_count = 0;
};

// Orchestrates load -> preprocess -> fit-on-train -> adapt -> train ->
// evaluate for each (dataset, representation, architecture) cell.
//
// Seeding: per-dataset splits/subsets derive from the master seed alone, so
// every cell of one dataset sees identical documents; everything stochastic
// inside a cell derives from hash(master seed, cell key).
class Harness {
public:
    explicit Harness(ExperimentConfig cfg);

    const ExperimentConfig& config() const { return cfg_; }
    const StopList& stoplist() const { return stop_; }

    const DatasetBundle& dataset(const std::string& name);

    std::uint64_t cell_seed(const std::string& dataset, Rep rep, Arch arch) const;

    ResultRow run_cell(const std::string& dataset, Rep rep, Arch arch);
    ResultsMatrix run_grid();

private:
    DatasetBundle build_bundle(const std::string& name);

    ExperimentConfig cfg_;
    StopList stop_;
    std::map<std::string, DatasetBundle> cache_;
};

} // namespace fnd

#endif
