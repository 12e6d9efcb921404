#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "fnd/config.hpp"
#include "fnd/errors.hpp"
#include "fnd/experiment.hpp"
#include "fnd/gradcheck.hpp"
#include "fnd/porter.hpp"
#include "fnd/report.hpp"
#include "fnd/textprep.hpp"
#include "fnd/vectorizers.hpp"
#include "fnd/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitVerify = 3;

void print_row(const fnd::ResultRow& row) {
    if (row.absent) {
        std::printf("%-8s %-7s %-8s absent: %s\n", row.dataset.c_str(),
                    fnd::to_string(row.rep).c_str(), fnd::to_string(row.arch).c_str(),
                    row.absent_reason.c_str());
        return;
    }
    std::printf("%-8s %-7s %-8s acc=%.4f n_train=%zu n_test=%zu%s (%.1fs)\n",
                row.dataset.c_str(), fnd::to_string(row.rep).c_str(),
                fnd::to_string(row.arch).c_str(), row.accuracy, row.n_train, row.n_test,
                row.divergent ? " DIVERGENT" : "", row.wall_time_s);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"fndbench: vector-space text classification benchmark"};
    app.set_version_flag("--version", std::string(fnd::kVersion));
    app.require_subcommand(1);

    std::string config_path;
    std::uint64_t seed_override = 0;
    int threads_override = 0;
    bool desk_scale = false;
    app.add_option("--config", config_path, "config file (INI sections, see README)");
    auto* seed_opt = app.add_option("--seed", seed_override, "master seed override");
    auto* threads_opt = app.add_option("--threads", threads_override, "kernel thread count");
    app.add_flag("--desk-scale", desk_scale, "enable the desk-scale profile");

    // stem
    auto* cmd_stem = app.add_subcommand("stem", "stem one word with the Porter algorithm");
    std::string stem_word;
    cmd_stem->add_option("word", stem_word)->required();

    // prep
    auto* cmd_prep = app.add_subcommand("prep", "preprocess a text file, one line at a time");
    std::string prep_input;
    cmd_prep->add_option("--input", prep_input, "text file; - for stdin")->required();

    // vocab
    auto* cmd_vocab = app.add_subcommand("vocab", "build a vocabulary from a train split");
    std::string vocab_dataset = "fixture", vocab_out;
    std::size_t vocab_max = 5000;
    cmd_vocab->add_option("--dataset", vocab_dataset, "fixture, liar or kaggle");
    cmd_vocab->add_option("--max-size", vocab_max, "vocabulary cap (0 = unlimited)");
    cmd_vocab->add_option("--out", vocab_out, "write the vocabulary to this path");

    // train
    auto* cmd_train = app.add_subcommand("train", "run one (dataset, representation, "
                                                  "architecture) cell");
    std::string tr_dataset = "fixture", tr_rep = "tfidf", tr_arch = "ann";
    cmd_train->add_option("--dataset", tr_dataset);
    cmd_train->add_option("--rep", tr_rep, "onehot, tfidf, w2v, d2v");
    cmd_train->add_option("--arch", tr_arch, "ann, cnn, rnn, baseline");

    // grid
    auto* cmd_grid = app.add_subcommand("grid", "run the full dataset x representation x "
                                                "architecture grid and write reports");

    // report
    auto* cmd_report = app.add_subcommand("report", "re-emit a report from a results CSV");
    std::string rep_input, rep_format = "markdown", rep_out;
    cmd_report->add_option("--input", rep_input, "results CSV")->required();
    cmd_report->add_option("--format", rep_format, "csv or markdown");
    cmd_report->add_option("--out", rep_out, "output path")->required();

    // gradcheck
    auto* cmd_gradcheck =
        app.add_subcommand("gradcheck", "finite-difference verification of every layer");
    std::size_t gc_shapes = 20;
    cmd_gradcheck->add_option("--shapes", gc_shapes, "random shapes per layer");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        fnd::ExperimentConfig cfg;
        if (!config_path.empty()) cfg = fnd::load_config(config_path);
        if (*seed_opt) cfg.seed = seed_override;
        if (*threads_opt) cfg.threads = threads_override;
        if (desk_scale) cfg.desk.enabled = true;

        if (*cmd_stem) {
            std::string w = stem_word;
            for (auto& c : w) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
            for (char c : w)
                if (c < 'a' || c > 'z')
                    throw fnd::config_error("stem expects a lowercase alphabetic word, got '" +
                                            stem_word + "'");
            std::cout << fnd::porter_stem(w) << "\n";
            return kExitOk;
        }

        if (*cmd_prep) {
            fnd::StopList stop = fnd::StopList::load(cfg.stoplist_path);
            std::ifstream file;
            std::istream* in = &std::cin;
            if (prep_input != "-") {
                file.open(prep_input);
                if (!file) throw fnd::data_error("cannot open input file: " + prep_input);
                in = &file;
            }
            std::string line;
            while (std::getline(*in, line)) {
                fnd::TokenList toks = fnd::preprocess(line, stop);
                for (std::size_t i = 0; i < toks.size(); ++i)
                    std::cout << (i ? " " : "") << toks[i];
                std::cout << "\n";
            }
            return kExitOk;
        }

        if (*cmd_vocab) {
            fnd::Harness harness(cfg);
            const fnd::DatasetBundle& ds = harness.dataset(vocab_dataset);
            fnd::Vocabulary vocab = fnd::build_vocab(ds.train_tokens, vocab_max);
            std::cout << "vocabulary size " << vocab.size() << " (train docs "
                      << ds.train_tokens.size() << ")\n";
            for (std::uint32_t id = 1; id < std::min<std::size_t>(vocab.size(), 11); ++id)
                std::cout << "  " << id << " " << vocab.token_of(id) << " df="
                          << vocab.doc_freq(id) << "\n";
            if (!vocab_out.empty()) {
                vocab.save(vocab_out);
                std::cout << "saved to " << vocab_out << "\n";
            }
            return kExitOk;
        }

        if (*cmd_train) {
            fnd::Harness harness(cfg);
            fnd::ResultRow row =
                harness.run_cell(tr_dataset, fnd::parse_rep(tr_rep), fnd::parse_arch(tr_arch));
            print_row(row);
            return kExitOk;
        }

        if (*cmd_grid) {
            fnd::Harness harness(cfg);
            fnd::ResultsMatrix matrix = harness.run_grid();
            for (const auto& row : matrix.rows) print_row(row);
            std::filesystem::create_directories(cfg.output_dir);
            const std::string csv = cfg.output_dir + "/results.csv";
            const std::string md = cfg.output_dir + "/results.md";
            fnd::emit_csv(matrix, csv, cfg.record_timing);
            fnd::emit_markdown(matrix, md);
            std::cout << "reports: " << csv << " " << md << "\n";
            return kExitOk;
        }

        if (*cmd_report) {
            fnd::ResultsMatrix matrix = fnd::parse_csv(rep_input);
            if (rep_format == "markdown") fnd::emit_markdown(matrix, rep_out);
            else if (rep_format == "csv") fnd::emit_csv(matrix, rep_out);
            else throw fnd::config_error("unknown report format '" + rep_format + "'");
            std::cout << "wrote " << rep_out << "\n";
            return kExitOk;
        }

        if (*cmd_gradcheck) {
            fnd::GradCheckReport report = fnd::run_gradcheck_suite(gc_shapes);
            for (const auto& line : report.lines)
                std::printf("%-18s max_rel_err=%.3e  %s\n", line.target.c_str(), line.max_err,
                            line.pass ? "PASS" : "FAIL");
            if (!report.all_pass()) {
                std::cerr << "gradcheck: FAILED (tolerance " << report.tolerance << ")\n";
                return kExitVerify;
            }
            std::cout << "gradcheck: all targets within " << report.tolerance << "\n";
            return kExitOk;
        }
    } catch (const fnd::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const fnd::verify_error& e) {
        std::cerr << "verification error: " << e.what() << "\n";
        return kExitVerify;
    } catch (const fnd::data_error& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitUsage;
}
