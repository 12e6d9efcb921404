#include "fnd/checkpoint.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

#include "fnd/errors.hpp"

namespace fnd {
namespace {

constexpr char kMagic[8] = {'F', 'N', 'D', 'C', 'K', 'P', 'T', '\n'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& out, std::uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
    out.write(reinterpret_cast<const char*>(b), 4);
}

void put_u64(std::ostream& out, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
    out.write(reinterpret_cast<const char*>(b), 8);
}

std::uint32_t get_u32(std::istream& in) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
}

std::uint64_t get_u64(std::istream& in) {
    unsigned char b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

} // namespace

void save_checkpoint(const std::string& path, const ModelSpec& spec, Model<float>& model) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error("cannot write checkpoint: " + path);
    out.write(kMagic, sizeof(kMagic));
    put_u32(out, kVersion);
    const std::string spec_text = spec.serialize();
    put_u32(out, static_cast<std::uint32_t>(spec_text.size()));
    out.write(spec_text.data(), static_cast<std::streamsize>(spec_text.size()));
    out.put(static_cast<char>(sizeof(float)));

    auto params = model.params();
    put_u32(out, static_cast<std::uint32_t>(params.size()));
    for (const auto& p : params) {
        put_u32(out, static_cast<std::uint32_t>(p.name.size()));
        out.write(p.name.data(), static_cast<std::streamsize>(p.name.size()));
        put_u32(out, static_cast<std::uint32_t>(p.value->rank()));
        for (std::size_t d : p.value->shape()) put_u64(out, d);
        static_assert(sizeof(float) == 4);
        out.write(reinterpret_cast<const char*>(p.value->data()),
                  static_cast<std::streamsize>(p.value->numel() * sizeof(float)));
    }
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error("cannot open checkpoint: " + path);
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, kMagic, 8) != 0)
        throw data_error("not a checkpoint file: " + path);
    if (get_u32(in) != kVersion) throw data_error("unsupported checkpoint version in " + path);
    const std::uint32_t spec_len = get_u32(in);
    std::string spec_text(spec_len, '\0');
    in.read(spec_text.data(), spec_len);
    Checkpoint ckpt;
    ckpt.spec = ModelSpec::deserialize(spec_text);
    const int dtype = in.get();
    if (dtype != sizeof(float)) throw data_error("unsupported checkpoint dtype in " + path);
    const std::uint32_t n = get_u32(in);
    for (std::uint32_t i = 0; i < n; ++i) {
        const std::uint32_t name_len = get_u32(in);
        std::string name(name_len, '\0');
        in.read(name.data(), name_len);
        const std::uint32_t rank = get_u32(in);
        std::vector<std::size_t> shape(rank);
        for (auto& d : shape) d = static_cast<std::size_t>(get_u64(in));
        Tensor<float> t(shape);
        in.read(reinterpret_cast<char*>(t.data()),
                static_cast<std::streamsize>(t.numel() * sizeof(float)));
        if (!in) throw data_error("truncated checkpoint: " + path);
        ckpt.params.emplace_back(std::move(name), std::move(t));
    }
    return ckpt;
}

void restore_params(Model<float>& model, const Checkpoint& ckpt) {
    auto params = model.params();
    if (params.size() != ckpt.params.size())
        throw data_error("checkpoint parameter count does not match the model");
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (params[i].value->shape() != ckpt.params[i].second.shape())
            throw data_error("checkpoint shape mismatch at " + params[i].name);
        *params[i].value = ckpt.params[i].second;
    }
}

} // namespace fnd
