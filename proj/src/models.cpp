#include "fnd/models.hpp"

#include <algorithm>
#include <cstring>

#include <json.hpp>

#include "fnd/errors.hpp"

namespace fnd {

std::string to_string(Arch a) {
    switch (a) {
        case Arch::ann: return "ann";
        case Arch::cnn: return "cnn";
        case Arch::rnn: return "rnn";
        case Arch::baseline: return "baseline";
    }
    return "?";
}

std::string to_string(Rep r) {
    switch (r) {
        case Rep::onehot: return "onehot";
        case Rep::tfidf: return "tfidf";
        case Rep::w2v_avg: return "w2v";
        case Rep::d2v: return "d2v";
    }
    return "?";
}

Arch parse_arch(const std::string& s) {
    if (s == "ann") return Arch::ann;
    if (s == "cnn") return Arch::cnn;
    if (s == "rnn") return Arch::rnn;
    if (s == "baseline") return Arch::baseline;
    throw config_error("unknown architecture '" + s + "' (ann, cnn, rnn, baseline)");
}

Rep parse_rep(const std::string& s) {
    if (s == "onehot") return Rep::onehot;
    if (s == "tfidf") return Rep::tfidf;
    if (s == "w2v" || s == "w2v_avg") return Rep::w2v_avg;
    if (s == "d2v") return Rep::d2v;
    throw config_error("unknown representation '" + s + "' (onehot, tfidf, w2v, d2v)");
}

std::vector<std::size_t> ann_widths(std::size_t input_dim) {
    if (input_dim < 1) throw config_error("ann input dimension must be >= 1");
    std::vector<std::size_t> widths;
    std::size_t w = std::min<std::size_t>(1024, (input_dim + 1) / 2);
    while (w >= 16) {
        widths.push_back(w);
        w = (w + 1) / 2;
    }
    return widths;
}

std::vector<std::size_t> Adapter::doc_shape() const {
    if (arch == Arch::ann) return {flat_dim};
    if (id_input) return {seq_len};
    return {seq_len, channels};
}

std::size_t Adapter::doc_numel() const {
    std::size_t n = 1;
    for (std::size_t d : doc_shape()) n *= d;
    return n;
}

Adapter make_adapter(Rep rep, Arch arch, std::size_t rep_dim, std::size_t onehot_len,
                     std::size_t frame_size, std::size_t embed_dim) {
    Adapter a;
    a.rep = rep;
    a.arch = arch;
    a.frame_size = frame_size;
    if (arch == Arch::baseline) return a; // baseline ignores features
    if (rep == Rep::onehot) {
        if (arch == Arch::ann) {
            a.flat_dim = rep_dim; // k-hot bag over the vocabulary
        } else {
            a.id_input = true;
            a.seq_len = onehot_len;
            a.channels = embed_dim;
        }
        return a;
    }
    switch (arch) {
        case Arch::ann:
            a.flat_dim = rep_dim;
            break;
        case Arch::cnn:
            a.seq_len = rep_dim;
            a.channels = 1;
            break;
        case Arch::rnn:
            a.seq_len = (rep_dim + frame_size - 1) / frame_size;
            a.channels = frame_size;
            break;
        case Arch::baseline:
            break;
    }
    return a;
}

void write_doc_input(const Adapter& adapter, const EncodedDoc& doc, float* dst) {
    if (adapter.id_input) {
        for (std::size_t i = 0; i < adapter.seq_len; ++i)
            dst[i] = static_cast<float>(doc.ids.ids[i]);
        return;
    }
    const std::size_t total = adapter.doc_numel();
    const std::size_t d = doc.fv.dim();
    doc.fv.write_dense(dst);
    for (std::size_t i = d; i < total; ++i) dst[i] = 0.0f; // zero-pad frame tail
}

ModelSpec build_ann(std::size_t input_dim) {
    ModelSpec s;
    s.arch = Arch::ann;
    s.loss = LossKind::bce;
    s.input_dim = input_dim;
    s.widths = ann_widths(input_dim);
    return s;
}

ModelSpec build_cnn(std::size_t seq_len, std::size_t in_channels) {
    ModelSpec s;
    s.arch = Arch::cnn;
    s.loss = LossKind::softmax_ce;
    s.seq_len = seq_len;
    s.channels = in_channels;
    const std::size_t min_len = 2 * (s.kernel - 1) + 1;
    if (seq_len < min_len)
        throw config_error("cnn needs sequence length >= " + std::to_string(min_len) +
                           " for two window-" + std::to_string(s.kernel) +
                           " convolutions; got " + std::to_string(seq_len));
    return s;
}

ModelSpec build_rnn(std::size_t seq_len, std::size_t in_channels) {
    ModelSpec s;
    s.arch = Arch::rnn;
    s.loss = LossKind::bce;
    s.seq_len = seq_len;
    s.channels = in_channels;
    return s;
}

ModelSpec spec_for(const Adapter& adapter, std::size_t embed_dim) {
    ModelSpec s;
    switch (adapter.arch) {
        case Arch::ann:
            s = build_ann(adapter.flat_dim);
            break;
        case Arch::cnn:
            s = build_cnn(adapter.seq_len, adapter.id_input ? embed_dim : adapter.channels);
            break;
        case Arch::rnn:
            s = build_rnn(adapter.seq_len, adapter.id_input ? embed_dim : adapter.channels);
            break;
        case Arch::baseline:
            s.arch = Arch::baseline;
            return s;
    }
    if (adapter.id_input) {
        s.embedding = true;
        s.embed_dim = embed_dim;
        s.vocab_size = 0; // caller fills in the fitted vocabulary size
    }
    return s;
}

std::string ModelSpec::serialize() const {
    nlohmann::json j;
    j["arch"] = to_string(arch);
    j["loss"] = to_string(loss);
    j["embedding"] = embedding;
    j["vocab_size"] = vocab_size;
    j["embed_dim"] = embed_dim;
    j["seq_len"] = seq_len;
    j["channels"] = channels;
    j["input_dim"] = input_dim;
    j["widths"] = widths;
    j["conv1_filters"] = conv1_filters;
    j["conv2_filters"] = conv2_filters;
    j["kernel"] = kernel;
    j["cnn_dropout"] = cnn_dropout;
    j["rnn_dropout"] = rnn_dropout;
    j["lstm_hidden"] = lstm_hidden;
    return j.dump();
}

ModelSpec ModelSpec::deserialize(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded()) throw data_error("malformed model spec: " + text);
    ModelSpec s;
    s.arch = parse_arch(j.at("arch").get<std::string>());
    s.loss = j.at("loss").get<std::string>() == "bce" ? LossKind::bce : LossKind::softmax_ce;
    s.embedding = j.at("embedding").get<bool>();
    s.vocab_size = j.at("vocab_size").get<std::size_t>();
    s.embed_dim = j.at("embed_dim").get<std::size_t>();
    s.seq_len = j.at("seq_len").get<std::size_t>();
    s.channels = j.at("channels").get<std::size_t>();
    s.input_dim = j.at("input_dim").get<std::size_t>();
    s.widths = j.at("widths").get<std::vector<std::size_t>>();
    s.conv1_filters = j.at("conv1_filters").get<std::size_t>();
    s.conv2_filters = j.at("conv2_filters").get<std::size_t>();
    s.kernel = j.at("kernel").get<std::size_t>();
    s.cnn_dropout = j.at("cnn_dropout").get<double>();
    s.rnn_dropout = j.at("rnn_dropout").get<double>();
    s.lstm_hidden = j.at("lstm_hidden").get<std::size_t>();
    return s;
}

} // namespace fnd
