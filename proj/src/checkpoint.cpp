#include "lf/checkpoint.hpp"

#include <bit>
#include <cstddef>
#include <fstream>
#include <utility>

#include "lf/errors.hpp"

namespace lf {

namespace {

constexpr char kMagic[4] = {'L', 'F', 'C', 'K'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::string& out, std::uint32_t v) {
    for (int k = 0; k < 4; ++k) out.push_back(static_cast<char>((v >> (8 * k)) & 0xFF));
}

void put_f64(std::string& out, double d) {
    const std::uint64_t bits = std::bit_cast<std::uint64_t>(d);
    for (int k = 0; k < 8; ++k) out.push_back(static_cast<char>((bits >> (8 * k)) & 0xFF));
}

// Bounds-checked little-endian reader over the raw bytes.
struct Cursor {
    const std::string& bytes;
    std::size_t pos = 0;

    void need(std::size_t n) const {
        if (pos + n > bytes.size())
            throw Error(ErrorKind::schema, "checkpoint is truncated");
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int k = 0; k < 4; ++k)
            v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[pos + k])) << (8 * k);
        pos += 4;
        return v;
    }
    double f64() {
        need(8);
        std::uint64_t v = 0;
        for (int k = 0; k < 8; ++k)
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[pos + k])) << (8 * k);
        pos += 8;
        return std::bit_cast<double>(v);
    }
    std::string str() {
        const std::uint32_t n = u32();
        need(n);
        std::string s = bytes.substr(pos, n);
        pos += n;
        return s;
    }
};

const CheckpointBlock& find_block(const Checkpoint& cp, const std::string& name) {
    for (const auto& b : cp.blocks)
        if (b.name == name) return b;
    throw Error(ErrorKind::schema, "checkpoint is missing block '" + name + "'");
}

Matrix block_matrix(const CheckpointBlock& b) {
    if (b.dims.size() != 2)
        throw Error(ErrorKind::shape, "block '" + b.name + "' is not a matrix");
    Matrix m(static_cast<int>(b.dims[0]), static_cast<int>(b.dims[1]));
    m.data = b.data;
    return m;
}

void expect_matrix(const CheckpointBlock& b, int rows, int cols) {
    if (b.dims.size() != 2 || static_cast<int>(b.dims[0]) != rows ||
        static_cast<int>(b.dims[1]) != cols)
        throw Error(ErrorKind::shape, "block '" + b.name + "' has unexpected shape");
}

void expect_vector(const CheckpointBlock& b, std::size_t n) {
    if (b.dims.size() != 1 || b.dims[0] != n)
        throw Error(ErrorKind::shape, "block '" + b.name + "' has unexpected length");
}

CheckpointBlock vec_block(std::string name, const std::vector<double>& v) {
    return CheckpointBlock{std::move(name), {static_cast<std::uint32_t>(v.size())}, v};
}

CheckpointBlock mat_block(std::string name, const Matrix& m) {
    return CheckpointBlock{std::move(name),
                           {static_cast<std::uint32_t>(m.rows), static_cast<std::uint32_t>(m.cols)},
                           m.data};
}

}  // namespace

std::string encode_checkpoint(const Checkpoint& cp) {
    std::string out(kMagic, 4);
    put_u32(out, kVersion);
    put_u32(out, static_cast<std::uint32_t>(cp.model_id.size()));
    out += cp.model_id;
    put_u32(out, static_cast<std::uint32_t>(cp.blocks.size()));
    for (const auto& b : cp.blocks) {
        put_u32(out, static_cast<std::uint32_t>(b.name.size()));
        out += b.name;
        put_u32(out, static_cast<std::uint32_t>(b.dims.size()));
        std::size_t expected = 1;
        for (std::uint32_t d : b.dims) {
            put_u32(out, d);
            expected *= d;
        }
        if (expected != b.data.size())
            throw Error(ErrorKind::shape,
                        "block '" + b.name + "' data does not match its dimensions");
        for (double v : b.data) put_f64(out, v);
    }
    return out;
}

Checkpoint decode_checkpoint(const std::string& bytes) {
    Cursor cur{bytes};
    cur.need(4);
    if (bytes.compare(0, 4, kMagic, 4) != 0)
        throw Error(ErrorKind::schema, "not a checkpoint file (bad magic)");
    cur.pos = 4;
    const std::uint32_t version = cur.u32();
    if (version != kVersion)
        throw Error(ErrorKind::schema,
                    "unsupported checkpoint version " + std::to_string(version));
    Checkpoint cp;
    cp.model_id = cur.str();
    const std::uint32_t n_blocks = cur.u32();
    for (std::uint32_t i = 0; i < n_blocks; ++i) {
        CheckpointBlock b;
        b.name = cur.str();
        const std::uint32_t ndims = cur.u32();
        std::size_t count = 1;
        for (std::uint32_t k = 0; k < ndims; ++k) {
            b.dims.push_back(cur.u32());
            count *= b.dims.back();
        }
        cur.need(8 * count);
        b.data.resize(count);
        for (std::size_t k = 0; k < count; ++k) b.data[k] = cur.f64();
        cp.blocks.push_back(std::move(b));
    }
    return cp;
}

void save_checkpoint(const std::string& path, const Checkpoint& cp) {
    const std::string bytes = encode_checkpoint(cp);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::io, "cannot open '" + path + "' for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorKind::io, "failed writing checkpoint to '" + path + "'");
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::io, "cannot open '" + path + "'");
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return decode_checkpoint(bytes);
}

Checkpoint to_checkpoint(const MlpParams& params) {
    Checkpoint cp;
    cp.model_id = "spnn";
    std::vector<double> sizes(params.layer_sizes.begin(), params.layer_sizes.end());
    cp.blocks.push_back(vec_block("layer_sizes", sizes));
    cp.blocks.push_back(
        vec_block("activation", {params.activation == Activation::relu ? 1.0 : 0.0}));
    for (std::size_t l = 0; l < params.weights.size(); ++l) {
        cp.blocks.push_back(mat_block("w" + std::to_string(l), params.weights[l]));
        cp.blocks.push_back(vec_block("b" + std::to_string(l), params.biases[l]));
    }
    return cp;
}

MlpParams mlp_from_checkpoint(const Checkpoint& cp) {
    MlpParams p;
    const auto& sizes = find_block(cp, "layer_sizes");
    for (double v : sizes.data) p.layer_sizes.push_back(static_cast<int>(v));
    if (p.layer_sizes.size() < 2)
        throw Error(ErrorKind::shape, "checkpoint topology has fewer than two layers");
    p.activation =
        find_block(cp, "activation").data.at(0) == 1.0 ? Activation::relu : Activation::tanh;
    for (std::size_t l = 0; l + 1 < p.layer_sizes.size(); ++l) {
        const auto& wb = find_block(cp, "w" + std::to_string(l));
        const auto& bb = find_block(cp, "b" + std::to_string(l));
        expect_matrix(wb, p.layer_sizes[l + 1], p.layer_sizes[l]);
        expect_vector(bb, static_cast<std::size_t>(p.layer_sizes[l + 1]));
        p.weights.push_back(block_matrix(wb));
        p.biases.push_back(bb.data);
    }
    return p;
}

Checkpoint to_checkpoint(const LstmParams& params) {
    Checkpoint cp;
    cp.model_id = "lstm";
    std::vector<double> hidden(params.config.hidden_sizes.begin(),
                               params.config.hidden_sizes.end());
    cp.blocks.push_back(vec_block("hidden_sizes", hidden));
    cp.blocks.push_back(
        vec_block("input_days", {static_cast<double>(params.config.input_days)}));
    cp.blocks.push_back(vec_block("norm", {params.norm_min, params.norm_max}));
    for (std::size_t l = 0; l < params.layers.size(); ++l) {
        const auto& c = params.layers[l];
        const std::string prefix = "l" + std::to_string(l) + ".";
        cp.blocks.push_back(mat_block(prefix + "w_f", c.w_f));
        cp.blocks.push_back(mat_block(prefix + "w_i", c.w_i));
        cp.blocks.push_back(mat_block(prefix + "w_c", c.w_c));
        cp.blocks.push_back(mat_block(prefix + "w_o", c.w_o));
        cp.blocks.push_back(vec_block(prefix + "b_f", c.b_f));
        cp.blocks.push_back(vec_block(prefix + "b_i", c.b_i));
        cp.blocks.push_back(vec_block(prefix + "b_c", c.b_c));
        cp.blocks.push_back(vec_block(prefix + "b_o", c.b_o));
    }
    cp.blocks.push_back(mat_block("dense_w", params.dense_w));
    cp.blocks.push_back(vec_block("dense_b", params.dense_b));
    return cp;
}

LstmParams lstm_from_checkpoint(const Checkpoint& cp) {
    LstmParams p;
    p.config.hidden_sizes.clear();
    for (double v : find_block(cp, "hidden_sizes").data)
        p.config.hidden_sizes.push_back(static_cast<int>(v));
    if (p.config.hidden_sizes.empty())
        throw Error(ErrorKind::shape, "checkpoint lists no recurrent layers");
    p.config.input_days = static_cast<int>(find_block(cp, "input_days").data.at(0));
    const auto& norm = find_block(cp, "norm");
    expect_vector(norm, 2);
    p.norm_min = norm.data[0];
    p.norm_max = norm.data[1];
    int in = kSamplesPerDay;
    for (std::size_t l = 0; l < p.config.hidden_sizes.size(); ++l) {
        const int hid = p.config.hidden_sizes[l];
        LstmCell c = make_lstm_cell(in, hid);
        const std::string prefix = "l" + std::to_string(l) + ".";
        const int cols = hid + in;
        for (auto [suffix, w] : {std::pair{"w_f", &c.w_f}, {"w_i", &c.w_i}, {"w_c", &c.w_c},
                                 {"w_o", &c.w_o}}) {
            const auto& b = find_block(cp, prefix + suffix);
            expect_matrix(b, hid, cols);
            *w = block_matrix(b);
        }
        for (auto [suffix, v] : {std::pair{"b_f", &c.b_f}, {"b_i", &c.b_i}, {"b_c", &c.b_c},
                                 {"b_o", &c.b_o}}) {
            const auto& b = find_block(cp, prefix + suffix);
            expect_vector(b, static_cast<std::size_t>(hid));
            *v = b.data;
        }
        p.layers.push_back(std::move(c));
        in = hid;
    }
    const auto& dw = find_block(cp, "dense_w");
    expect_matrix(dw, kSamplesPerDay, in);
    p.dense_w = block_matrix(dw);
    const auto& db = find_block(cp, "dense_b");
    expect_vector(db, static_cast<std::size_t>(kSamplesPerDay));
    p.dense_b = db.data;
    return p;
}

}  // namespace lf
