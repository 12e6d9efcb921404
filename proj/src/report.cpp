#include "fnd/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "fnd/errors.hpp"

namespace fnd {

Metrics metrics(const std::vector<int>& predictions, const std::vector<int>& labels) {
    if (predictions.size() != labels.size())
        throw config_error("metrics: predictions and labels differ in length");
    if (predictions.empty()) throw config_error("metrics: empty input");
    Metrics m;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const bool p = predictions[i] == 1, y = labels[i] == 1;
        if (p && y) ++m.tp;
        else if (p && !y) ++m.fp;
        else if (!p && !y) ++m.tn;
        else ++m.fn;
    }
    m.accuracy = static_cast<double>(m.tp + m.tn) / static_cast<double>(predictions.size());
    return m;
}

void ResultsMatrix::upsert(ResultRow row) {
    for (auto& r : rows)
        if (r.key() == row.key()) {
            r = std::move(row);
            return;
        }
    rows.push_back(std::move(row));
}

const ResultRow* ResultsMatrix::find(const std::string& dataset, Rep rep, Arch arch) const {
    for (const auto& r : rows)
        if (r.dataset == dataset && r.rep == rep && r.arch == arch) return &r;
    return nullptr;
}

namespace {

std::string fmt(double v, const char* spec) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

} // namespace

void emit_csv(const ResultsMatrix& m, const std::string& path, bool with_timing) {
    std::ofstream out(path);
    if (!out) throw data_error("cannot write report: " + path);
    out << "# version: " << m.version << "\n";
    out << "# stoplist_hash: " << m.stoplist_hash << "\n";
    out << "# config: " << m.config_echo << "\n";
    for (const auto& r : m.rows)
        if (r.absent)
            out << "# absent: " << r.dataset << "," << to_string(r.rep) << ","
                << to_string(r.arch) << "," << r.absent_reason << "\n";
    out << "dataset,representation,architecture,accuracy,n_train,n_test,epochs,seed,"
           "wall_time_s,drop_count,divergent\n";
    for (const auto& r : m.rows) {
        if (r.absent) continue;
        out << r.dataset << "," << to_string(r.rep) << "," << to_string(r.arch) << ","
            << fmt(r.accuracy, "%.6f") << "," << r.n_train << "," << r.n_test << ","
            << r.epochs << "," << r.seed << ","
            << fmt(with_timing ? r.wall_time_s : 0.0, "%.3f") << "," << r.drop_count << ","
            << (r.divergent ? 1 : 0) << "\n";
    }
}

ResultsMatrix parse_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open report: " + path);
    ResultsMatrix m;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            auto grab = [&](const char* prefix) -> std::optional<std::string> {
                std::string p = std::string("# ") + prefix + ": ";
                if (line.rfind(p, 0) == 0) return line.substr(p.size());
                return std::nullopt;
            };
            if (auto v = grab("version")) m.version = *v;
            else if (auto s = grab("stoplist_hash")) m.stoplist_hash = *s;
            else if (auto c = grab("config")) m.config_echo = *c;
            else if (auto a = grab("absent")) {
                std::stringstream ss(*a);
                ResultRow r;
                std::string repname, archname;
                std::getline(ss, r.dataset, ',');
                std::getline(ss, repname, ',');
                std::getline(ss, archname, ',');
                std::getline(ss, r.absent_reason);
                r.rep = parse_rep(repname);
                r.arch = parse_arch(archname);
                r.absent = true;
                m.rows.push_back(std::move(r));
            }
            continue;
        }
        if (!header_seen) { // column header row
            header_seen = true;
            continue;
        }
        std::stringstream ss(line);
        std::string f[11];
        for (int i = 0; i < 11; ++i)
            if (!std::getline(ss, f[i], ',')) throw data_error("malformed report row: " + line);
        ResultRow r;
        r.dataset = f[0];
        r.rep = parse_rep(f[1]);
        r.arch = parse_arch(f[2]);
        r.accuracy = std::stod(f[3]);
        r.n_train = std::stoull(f[4]);
        r.n_test = std::stoull(f[5]);
        r.epochs = std::stoull(f[6]);
        r.seed = std::stoull(f[7]);
        r.wall_time_s = std::stod(f[8]);
        r.drop_count = std::stoull(f[9]);
        r.divergent = f[10] == "1";
        m.rows.push_back(std::move(r));
    }
    return m;
}

void emit_markdown(const ResultsMatrix& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw data_error("cannot write report: " + path);
    out << "# Results\n\n";
    out << "version: " << m.version << "  \n";
    out << "stoplist_hash: " << m.stoplist_hash << "  \n";
    out << "config: `" << m.config_echo << "`\n";

    std::vector<std::string> datasets;
    std::set<Arch> archs;
    std::vector<Rep> reps = {Rep::onehot, Rep::tfidf, Rep::w2v_avg, Rep::d2v};
    for (const auto& r : m.rows) {
        if (std::find(datasets.begin(), datasets.end(), r.dataset) == datasets.end())
            datasets.push_back(r.dataset);
        archs.insert(r.arch);
    }
    for (Arch a : archs) {
        out << "\n## " << to_string(a) << "\n\n";
        out << "| Dataset |";
        for (Rep rp : reps) out << " " << to_string(rp) << " |";
        out << "\n|---|";
        for (std::size_t i = 0; i < reps.size(); ++i) out << "---|";
        out << "\n";
        for (const auto& d : datasets) {
            out << "| " << d << " |";
            for (Rep rp : reps) {
                const ResultRow* r = m.find(d, rp, a);
                if (!r) out << " - |";
                else if (r->absent) out << " absent (" << r->absent_reason << ") |";
                else out << " " << fmt(r->accuracy * 100.0, "%.2f") << "% |";
            }
            out << "\n";
        }
    }
}

} // namespace fnd
