#include "itts/encoder.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>

#include "itts/error.hpp"
#include "itts/kernels.hpp"
#include "itts/rng.hpp"

namespace itts {

std::string EncoderConfig::printable_ascii() {
    std::string v;
    for (char c = 0x20; c <= 0x7e; ++c) v.push_back(c);
    return v;
}

void EncoderConfig::validate() const {
    if (char_vocab.empty()) throw ConfigError("empty character vocabulary");
    if (embed_dim < 1) throw ConfigError("embed_dim must be >= 1");
    if (hidden_dim < 1) throw ConfigError("hidden_dim must be >= 1");
    for (const auto& layer : conv) {
        if (layer.kernel_width < 1 || layer.kernel_width % 2 == 0)
            throw ConfigError("conv kernel widths must be odd");
        if (layer.channels < 1) throw ConfigError("conv channels must be >= 1");
    }
    std::string sorted = char_vocab;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw ConfigError("duplicate character in vocabulary");
}

int EncoderConfig::vocab_index(char c) const {
    const auto pos = char_vocab.find(c);
    return pos == std::string::npos ? -1 : static_cast<int>(pos);
}

int EncoderConfig::conv_right_receptive_field() const {
    int rf = 0;
    for (const auto& layer : conv) rf += (layer.kernel_width - 1) / 2;
    return rf;
}

namespace {

void fill_uniform(std::vector<float>& v, std::size_t n, Rng& rng) {
    v.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = static_cast<float>(-0.1 + 0.2 * rng.uniform());
}

int conv_input_dim(const EncoderConfig& config, int layer) {
    return layer == 0 ? config.embed_dim : config.conv[static_cast<std::size_t>(layer - 1)].channels;
}

inline float sigmoid(float x) { return 1.0f / (1.0f + std::exp(-x)); }

// One LSTM direction over input[t0..t1) in the given step order; h and
// optionally c histories are written per position.
void lstm_run(const float* input, int input_dim, std::size_t t_begin, std::size_t t_end, int step,
              const LstmDirectionWeights& w, int hidden, float* h_init, float* c_init,
              float* h_out, float* c_out) {
    const int gates_dim = 4 * hidden;
    std::vector<float> gates(static_cast<std::size_t>(gates_dim));
    std::vector<float> h(h_init, h_init + hidden);
    std::vector<float> c(c_init, c_init + hidden);

    std::size_t t = t_begin;
    while (t != t_end) {
        std::memcpy(gates.data(), w.bias.data(), sizeof(float) * static_cast<std::size_t>(gates_dim));
        kernels::matvec_acc(gates.data(), w.w_input.data(), input + t * static_cast<std::size_t>(input_dim),
                            static_cast<std::size_t>(input_dim), static_cast<std::size_t>(gates_dim));
        kernels::matvec_acc(gates.data(), w.w_hidden.data(), h.data(), static_cast<std::size_t>(hidden),
                            static_cast<std::size_t>(gates_dim));
        for (int j = 0; j < hidden; ++j) {
            const float gi = sigmoid(gates[static_cast<std::size_t>(j)]);
            const float gf = sigmoid(gates[static_cast<std::size_t>(hidden + j)]);
            const float gg = std::tanh(gates[static_cast<std::size_t>(2 * hidden + j)]);
            const float go = sigmoid(gates[static_cast<std::size_t>(3 * hidden + j)]);
            c[static_cast<std::size_t>(j)] = gf * c[static_cast<std::size_t>(j)] + gi * gg;
            h[static_cast<std::size_t>(j)] = go * std::tanh(c[static_cast<std::size_t>(j)]);
        }
        std::memcpy(h_out + t * static_cast<std::size_t>(hidden), h.data(),
                    sizeof(float) * static_cast<std::size_t>(hidden));
        if (c_out)
            std::memcpy(c_out + t * static_cast<std::size_t>(hidden), c.data(),
                        sizeof(float) * static_cast<std::size_t>(hidden));
        t = static_cast<std::size_t>(static_cast<long long>(t) + step);
    }
}

void embed_range(const std::string& text, const EncoderWeights& weights,
                 const EncoderConfig& config, std::vector<float>& out, std::size_t from_t) {
    const std::size_t e = static_cast<std::size_t>(config.embed_dim);
    out.resize(text.size() * e);
    for (std::size_t t = from_t; t < text.size(); ++t) {
        const int idx = config.vocab_index(text[t]);
        if (idx < 0) throw UnsupportedChar(t);
        std::memcpy(out.data() + t * e, weights.embedding.data() + static_cast<std::size_t>(idx) * e,
                    sizeof(float) * e);
    }
}

// Positions [from_t, T) of one conv layer; ReLU applied to the same range.
// Zero padding contributes nothing and is skipped.
void conv_layer_range(const std::vector<float>& in, std::size_t t_total, int c_in, int c_out,
                      int kernel_width, const ConvLayerWeights& w, std::vector<float>& out,
                      std::size_t from_t) {
    const int half = (kernel_width - 1) / 2;
    out.resize(t_total * static_cast<std::size_t>(c_out));
    for (std::size_t t = from_t; t < t_total; ++t) {
        float* row = out.data() + t * static_cast<std::size_t>(c_out);
        std::memcpy(row, w.bias.data(), sizeof(float) * static_cast<std::size_t>(c_out));
        for (int dk = 0; dk < kernel_width; ++dk) {
            const long long src = static_cast<long long>(t) + dk - half;
            if (src < 0 || src >= static_cast<long long>(t_total)) continue;
            kernels::matvec_acc(row,
                                w.kernel.data() + static_cast<std::size_t>(dk) *
                                                      static_cast<std::size_t>(c_in) *
                                                      static_cast<std::size_t>(c_out),
                                in.data() + static_cast<std::size_t>(src) * static_cast<std::size_t>(c_in),
                                static_cast<std::size_t>(c_in), static_cast<std::size_t>(c_out));
        }
    }
    kernels::relu(out.data() + from_t * static_cast<std::size_t>(c_out),
                  (t_total - from_t) * static_cast<std::size_t>(c_out));
}

}  // namespace

EncoderWeights init_weights(const EncoderConfig& config) {
    config.validate();
    Rng rng(config.seed);
    EncoderWeights w;
    const std::size_t vocab = config.char_vocab.size();
    const std::size_t e = static_cast<std::size_t>(config.embed_dim);
    fill_uniform(w.embedding, vocab * e, rng);
    for (int layer = 0; layer < 3; ++layer) {
        const auto& lc = config.conv[static_cast<std::size_t>(layer)];
        const std::size_t c_in = static_cast<std::size_t>(conv_input_dim(config, layer));
        const std::size_t c_out = static_cast<std::size_t>(lc.channels);
        fill_uniform(w.conv[static_cast<std::size_t>(layer)].kernel,
                     static_cast<std::size_t>(lc.kernel_width) * c_in * c_out, rng);
        fill_uniform(w.conv[static_cast<std::size_t>(layer)].bias, c_out, rng);
    }
    const std::size_t lstm_in = static_cast<std::size_t>(config.conv[2].channels);
    const std::size_t h = static_cast<std::size_t>(config.hidden_dim);
    for (LstmDirectionWeights* dir : {&w.forward_cell, &w.backward_cell}) {
        fill_uniform(dir->w_input, lstm_in * 4 * h, rng);
        fill_uniform(dir->w_hidden, h * 4 * h, rng);
        fill_uniform(dir->bias, 4 * h, rng);
    }
    return w;
}

namespace {

constexpr char kWeightMagic[4] = {'I', 'T', 'W', '1'};

void put_u32(std::ostream& out, std::uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    out.write(reinterpret_cast<const char*>(b), 4);
}

void put_u64(std::ostream& out, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    out.write(reinterpret_cast<const char*>(b), 8);
}

void put_f32_array(std::ostream& out, const std::vector<float>& v) {
    for (float f : v) {
        std::uint32_t bits;
        std::memcpy(&bits, &f, 4);
        put_u32(out, bits);
    }
}

std::uint32_t get_u32(std::istream& in) {
    unsigned char b[4];
    if (!in.read(reinterpret_cast<char*>(b), 4)) throw ParseError("truncated weight file");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
}

std::uint64_t get_u64(std::istream& in) {
    unsigned char b[8];
    if (!in.read(reinterpret_cast<char*>(b), 8)) throw ParseError("truncated weight file");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

struct NamedTensor {
    std::vector<std::uint64_t> shape;
    std::vector<float> data;
};

void write_tensor(std::ostream& out, const std::string& name, std::vector<std::uint64_t> shape,
                  const std::vector<float>& data) {
    put_u32(out, static_cast<std::uint32_t>(name.size()));
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
    put_u32(out, static_cast<std::uint32_t>(shape.size()));
    for (auto d : shape) put_u64(out, d);
    put_f32_array(out, data);
}

}  // namespace

void save_weights(const EncoderWeights& weights, const EncoderConfig& config,
                  const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write weight file: " + path);
    out.write(kWeightMagic, 4);
    put_u32(out, 14);  // tensor count
    const auto u = [](int v) { return static_cast<std::uint64_t>(v); };
    write_tensor(out, "embedding", {config.char_vocab.size(), u(config.embed_dim)},
                 weights.embedding);
    for (int layer = 0; layer < 3; ++layer) {
        const auto& lc = config.conv[static_cast<std::size_t>(layer)];
        const std::string prefix = "conv" + std::to_string(layer + 1);
        write_tensor(out, prefix + ".kernel",
                     {u(lc.kernel_width), u(conv_input_dim(config, layer)), u(lc.channels)},
                     weights.conv[static_cast<std::size_t>(layer)].kernel);
        write_tensor(out, prefix + ".bias", {u(lc.channels)},
                     weights.conv[static_cast<std::size_t>(layer)].bias);
    }
    const auto write_dir = [&](const std::string& prefix, const LstmDirectionWeights& dir) {
        write_tensor(out, prefix + ".w_input", {u(config.conv[2].channels), u(4 * config.hidden_dim)},
                     dir.w_input);
        write_tensor(out, prefix + ".w_hidden", {u(config.hidden_dim), u(4 * config.hidden_dim)},
                     dir.w_hidden);
        write_tensor(out, prefix + ".bias", {u(4 * config.hidden_dim)}, dir.bias);
    };
    write_dir("lstm.fw", weights.forward_cell);
    write_dir("lstm.bw", weights.backward_cell);
    if (!out) throw DataError("write failed: " + path);
}

EncoderWeights load_weights(const std::string& path, const EncoderConfig& config) {
    config.validate();
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open weight file: " + path);
    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, kWeightMagic, 4) != 0)
        throw ParseError("bad weight file magic");
    const std::uint32_t count = get_u32(in);

    std::map<std::string, NamedTensor> tensors;
    for (std::uint32_t i = 0; i < count; ++i) {
        const std::uint32_t name_len = get_u32(in);
        if (name_len > 4096) throw ParseError("implausible tensor name length");
        std::string name(name_len, '\0');
        if (!in.read(name.data(), name_len)) throw ParseError("truncated weight file");
        NamedTensor t;
        const std::uint32_t ndim = get_u32(in);
        if (ndim > 8) throw ParseError("implausible tensor rank");
        std::uint64_t total = 1;
        for (std::uint32_t d = 0; d < ndim; ++d) {
            t.shape.push_back(get_u64(in));
            total *= t.shape.back();
        }
        if (total > (std::uint64_t(1) << 32)) throw ParseError("implausible tensor size");
        t.data.resize(static_cast<std::size_t>(total));
        for (auto& f : t.data) {
            const std::uint32_t bits = get_u32(in);
            std::memcpy(&f, &bits, 4);
        }
        if (!tensors.emplace(name, std::move(t)).second)
            throw ParseError("duplicate tensor '" + name + "'");
    }

    const auto take = [&](const std::string& name,
                          std::vector<std::uint64_t> expected) -> std::vector<float> {
        auto it = tensors.find(name);
        if (it == tensors.end()) throw ShapeError(name, "missing tensor");
        if (it->second.shape != expected) throw ShapeError(name, "shape mismatch");
        std::vector<float> data = std::move(it->second.data);
        for (float f : data)
            if (!std::isfinite(f)) throw ShapeError(name, "non-finite value");
        tensors.erase(it);
        return data;
    };

    EncoderWeights w;
    const auto u = [](int v) { return static_cast<std::uint64_t>(v); };
    w.embedding = take("embedding", {config.char_vocab.size(), u(config.embed_dim)});
    for (int layer = 0; layer < 3; ++layer) {
        const auto& lc = config.conv[static_cast<std::size_t>(layer)];
        const std::string prefix = "conv" + std::to_string(layer + 1);
        w.conv[static_cast<std::size_t>(layer)].kernel =
            take(prefix + ".kernel", {u(lc.kernel_width), u(conv_input_dim(config, layer)), u(lc.channels)});
        w.conv[static_cast<std::size_t>(layer)].bias = take(prefix + ".bias", {u(lc.channels)});
    }
    for (auto [prefix, dir] : {std::pair{"lstm.fw", &w.forward_cell}, {"lstm.bw", &w.backward_cell}}) {
        const std::string p(prefix);
        dir->w_input = take(p + ".w_input", {u(config.conv[2].channels), u(4 * config.hidden_dim)});
        dir->w_hidden = take(p + ".w_hidden", {u(config.hidden_dim), u(4 * config.hidden_dim)});
        dir->bias = take(p + ".bias", {u(4 * config.hidden_dim)});
    }
    if (!tensors.empty())
        throw ParseError("unexpected tensor '" + tensors.begin()->first + "'");
    return w;
}

CharStates encode_chars(const std::string& prefix_text, const EncoderWeights& weights,
                        const EncoderConfig& config) {
    CharStates states;
    states.hidden_dim = config.hidden_dim;
    const std::size_t t_total = prefix_text.size();
    if (t_total == 0) return states;

    std::vector<float> buf;
    embed_range(prefix_text, weights, config, buf, 0);
    std::vector<float> next;
    for (int layer = 0; layer < 3; ++layer) {
        const auto& lc = config.conv[static_cast<std::size_t>(layer)];
        conv_layer_range(buf, t_total, conv_input_dim(config, layer), lc.channels, lc.kernel_width,
                         weights.conv[static_cast<std::size_t>(layer)], next, 0);
        buf.swap(next);
    }

    const int h = config.hidden_dim;
    const int c3 = config.conv[2].channels;
    states.forward.resize(t_total * static_cast<std::size_t>(h));
    states.backward.resize(t_total * static_cast<std::size_t>(h));
    std::vector<float> zeros(static_cast<std::size_t>(h), 0.0f);
    std::vector<float> zeros2(static_cast<std::size_t>(h), 0.0f);
    lstm_run(buf.data(), c3, 0, t_total, +1, weights.forward_cell, h, zeros.data(), zeros2.data(),
             states.forward.data(), nullptr);
    std::fill(zeros.begin(), zeros.end(), 0.0f);
    std::fill(zeros2.begin(), zeros2.end(), 0.0f);
    lstm_run(buf.data(), c3, t_total - 1, static_cast<std::size_t>(-1), -1, weights.backward_cell,
             h, zeros.data(), zeros2.data(), states.backward.data(), nullptr);
    return states;
}

TokenVector extract_token_vector(const CharStates& states, const Sentence& sentence, int n) {
    const Token& tok = sentence.token(n);
    if (tok.char_end > states.length()) throw OutOfPrefix(n);
    const int h = states.hidden_dim;
    TokenVector tv;
    tv.token_index = n;
    tv.z.resize(static_cast<std::size_t>(2 * h));
    std::memcpy(tv.z.data(), states.forward_at(tok.char_end - 1), sizeof(float) * static_cast<std::size_t>(h));
    std::memcpy(tv.z.data() + h, states.backward_at(tok.char_begin), sizeof(float) * static_cast<std::size_t>(h));
    return tv;
}

IncrementalEncoder::IncrementalEncoder(const EncoderWeights& weights, const EncoderConfig& config)
    : weights_(weights), config_(config) {}

void IncrementalEncoder::reset() {
    text_.clear();
    embedded_.clear();
    for (auto& c : conv_out_) c.clear();
    fwd_h_.clear();
    fwd_c_.clear();
}

CharStates IncrementalEncoder::encode(const std::string& prefix_text) {
    if (prefix_text.size() < text_.size() || prefix_text.compare(0, text_.size(), text_) != 0)
        reset();

    CharStates states;
    states.hidden_dim = config_.hidden_dim;
    const std::size_t t_total = prefix_text.size();
    if (t_total == 0) return states;

    const std::size_t t_old = text_.size();
    embed_range(prefix_text, weights_, config_, embedded_, t_old);

    // Conv outputs whose right receptive field crossed the old boundary are
    // stale; each layer restarts that much earlier than the one before.
    const std::vector<float>* in = &embedded_;
    int rf = 0;
    std::size_t fwd_from = 0;
    for (int layer = 0; layer < 3; ++layer) {
        const auto& lc = config_.conv[static_cast<std::size_t>(layer)];
        rf += (lc.kernel_width - 1) / 2;
        const std::size_t from =
            t_old > static_cast<std::size_t>(rf) ? t_old - static_cast<std::size_t>(rf) : 0;
        conv_layer_range(*in, t_total, conv_input_dim(config_, layer), lc.channels, lc.kernel_width,
                         weights_.conv[static_cast<std::size_t>(layer)],
                         conv_out_[static_cast<std::size_t>(layer)], from);
        in = &conv_out_[static_cast<std::size_t>(layer)];
        fwd_from = from;
    }

    const int h = config_.hidden_dim;
    const int c3 = config_.conv[2].channels;
    const std::size_t hs = static_cast<std::size_t>(h);
    fwd_h_.resize(t_total * hs);
    fwd_c_.resize(t_total * hs);
    std::vector<float> h0(hs, 0.0f), c0(hs, 0.0f);
    if (fwd_from > 0) {
        std::memcpy(h0.data(), fwd_h_.data() + (fwd_from - 1) * hs, sizeof(float) * hs);
        std::memcpy(c0.data(), fwd_c_.data() + (fwd_from - 1) * hs, sizeof(float) * hs);
    }
    lstm_run(in->data(), c3, fwd_from, t_total, +1, weights_.forward_cell, h, h0.data(), c0.data(),
             fwd_h_.data(), fwd_c_.data());

    states.forward.assign(fwd_h_.begin(), fwd_h_.begin() + static_cast<long>(t_total * hs));
    states.backward.resize(t_total * hs);
    std::vector<float> hb(hs, 0.0f), cb(hs, 0.0f);
    lstm_run(in->data(), c3, t_total - 1, static_cast<std::size_t>(-1), -1, weights_.backward_cell,
             h, hb.data(), cb.data(), states.backward.data(), nullptr);

    text_ = prefix_text;
    return states;
}

}  // namespace itts
