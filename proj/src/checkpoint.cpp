#include "hsd/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <fstream>

namespace hsd {
namespace {

constexpr char kMagic[8] = {'H', 'S', 'D', 'C', 'K', 'P', 'T', '1'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& out, std::uint32_t v) {
    char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(b, 4);
}

void put_u64(std::ostream& out, std::uint64_t v) {
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(b, 8);
}

void put_f64(std::ostream& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

void put_string(std::ostream& out, const std::string& s) {
    put_u32(out, static_cast<std::uint32_t>(s.size()));
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

[[noreturn]] void truncated(const std::string& path) {
    throw DataError(path + ": truncated checkpoint");
}

std::uint32_t get_u32(std::istream& in, const std::string& path) {
    unsigned char b[4];
    if (!in.read(reinterpret_cast<char*>(b), 4)) truncated(path);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
}

std::uint64_t get_u64(std::istream& in, const std::string& path) {
    unsigned char b[8];
    if (!in.read(reinterpret_cast<char*>(b), 8)) truncated(path);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

double get_f64(std::istream& in, const std::string& path) {
    return std::bit_cast<double>(get_u64(in, path));
}

std::string get_string(std::istream& in, const std::string& path) {
    const std::uint32_t len = get_u32(in, path);
    if (len > (1u << 20)) throw DataError(path + ": unreasonable string length in checkpoint");
    std::string s(len, '\0');
    if (len > 0 && !in.read(s.data(), len)) truncated(path);
    return s;
}

}  // namespace

void save_checkpoint(const std::string& path, const ModelParams& model,
                     const CharFallbackConfig& fallback) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write checkpoint: " + path);

    out.write(kMagic, sizeof kMagic);
    put_u32(out, kVersion);
    put_u32(out, static_cast<std::uint32_t>(model.embed_dim));
    put_u32(out, static_cast<std::uint32_t>(model.hidden));
    put_u32(out, static_cast<std::uint32_t>(model.layers.size()));
    put_u64(out, fallback.seed);
    put_u32(out, static_cast<std::uint32_t>(fallback.ngram_len));

    put_u32(out, static_cast<std::uint32_t>(model.heads.size()));
    for (const auto& head : model.heads) {
        put_string(out, head.task);
        put_u32(out, static_cast<std::uint32_t>(head.labels.size()));
        for (const auto& label : head.labels) put_string(out, label);
    }

    put_u64(out, scalar_count(model));
    visit_tensors(const_cast<ModelParams&>(model), [&out](auto& t) {
        const Real* data = t.data();
        for (Eigen::Index i = 0; i < t.size(); ++i) {
            put_f64(out, static_cast<double>(data[i]));
        }
    });
    if (!out) throw DataError("short write on checkpoint: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open checkpoint: " + path);

    char magic[8];
    if (!in.read(magic, sizeof magic)) truncated(path);
    if (!std::equal(magic, magic + 8, kMagic)) {
        throw DataError(path + ": not a checkpoint file");
    }
    const std::uint32_t version = get_u32(in, path);
    if (version != kVersion) {
        throw DataError(path + ": unsupported checkpoint version " + std::to_string(version));
    }

    const int embed_dim = static_cast<int>(get_u32(in, path));
    const int hidden = static_cast<int>(get_u32(in, path));
    const std::uint32_t layer_count = get_u32(in, path);
    if (layer_count != 2) {
        throw DataError(path + ": unsupported layer count " + std::to_string(layer_count));
    }

    Checkpoint ck;
    ck.fallback.seed = get_u64(in, path);
    ck.fallback.ngram_len = static_cast<int>(get_u32(in, path));

    const std::uint32_t head_count = get_u32(in, path);
    if (head_count == 0) throw DataError(path + ": checkpoint has no task heads");
    std::vector<TaskDef> tasks;
    for (std::uint32_t i = 0; i < head_count; ++i) {
        TaskDef def;
        def.name = get_string(in, path);
        const std::uint32_t label_count = get_u32(in, path);
        for (std::uint32_t k = 0; k < label_count; ++k) {
            def.labels.push_back(get_string(in, path));
        }
        tasks.push_back(std::move(def));
    }

    ck.model = init_model(embed_dim, hidden, tasks, 0);
    const std::uint64_t scalars = get_u64(in, path);
    if (scalars != scalar_count(ck.model)) {
        throw DataError(path + ": scalar count does not match the declared shape");
    }
    visit_tensors(ck.model, [&in, &path](auto& t) {
        Real* data = t.data();
        for (Eigen::Index i = 0; i < t.size(); ++i) {
            data[i] = static_cast<Real>(get_f64(in, path));
        }
    });
    return ck;
}

}  // namespace hsd
