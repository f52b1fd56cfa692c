#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "itts/corpus.hpp"

namespace itts {

struct ConvLayerConfig {
    int kernel_width = 5;  // odd, symmetric same-padding
    int channels = 32;
};

// Character encoder: embedding, three 1-D convolutions with ReLU, then a
// bidirectional LSTM. Desk-scale defaults keep exact tests fast; hidden_dim
// 256 gives the full-scale 512-dim token vectors.
struct EncoderConfig {
    std::string char_vocab = printable_ascii();
    int embed_dim = 32;
    std::array<ConvLayerConfig, 3> conv{{{5, 32}, {5, 32}, {5, 32}}};
    int hidden_dim = 32;
    std::uint64_t seed = 0;

    static std::string printable_ascii();
    void validate() const;  // throws ConfigError
    int vocab_index(char c) const;  // -1 when absent

    // Characters to the right of a position that can influence its conv
    // output: sum of (kernel_width-1)/2 over the layers.
    int conv_right_receptive_field() const;
};

struct ConvLayerWeights {
    std::vector<float> kernel;  // [dk][c_in][c_out], c_out fastest
    std::vector<float> bias;    // [c_out]
};

struct LstmDirectionWeights {
    // Gate order along the 4H axis: input, forget, cell, output.
    std::vector<float> w_input;   // [input_dim][4H], input-major
    std::vector<float> w_hidden;  // [H][4H]
    std::vector<float> bias;      // [4H]
};

struct EncoderWeights {
    std::vector<float> embedding;  // [vocab][E]
    std::array<ConvLayerWeights, 3> conv;
    LstmDirectionWeights forward_cell;
    LstmDirectionWeights backward_cell;
};

// One forward/backward hidden-state pair per input character.
struct CharStates {
    int hidden_dim = 0;
    std::vector<float> forward;   // [T][H]
    std::vector<float> backward;  // [T][H]

    std::size_t length() const {
        return hidden_dim == 0 ? 0 : forward.size() / static_cast<std::size_t>(hidden_dim);
    }
    const float* forward_at(std::size_t t) const { return forward.data() + t * hidden_dim; }
    const float* backward_at(std::size_t t) const { return backward.data() + t * hidden_dim; }
};

struct TokenVector {
    std::vector<float> z;  // 2H: forward state of last char, backward state of first char
    int token_index = 0;
    int context_tokens = 0;
    bool full_context = false;
};

// All weights i.i.d. uniform on [-0.1, 0.1] from a generator seeded by
// config.seed; same seed gives bit-identical tensors.
EncoderWeights init_weights(const EncoderConfig& config);

void save_weights(const EncoderWeights& weights, const EncoderConfig& config,
                  const std::string& path);
EncoderWeights load_weights(const std::string& path, const EncoderConfig& config);

CharStates encode_chars(const std::string& prefix_text, const EncoderWeights& weights,
                        const EncoderConfig& config);

TokenVector extract_token_vector(const CharStates& states, const Sentence& sentence, int n);

// Incremental re-encode support: extends the previous prefix's buffers,
// recomputing only the conv tail whose receptive field crossed the old
// boundary plus the forward recurrence from there; the backward recurrence
// always reruns. Bit-identical to encode_chars on the extended text.
class IncrementalEncoder {
public:
    IncrementalEncoder(const EncoderWeights& weights, const EncoderConfig& config);
    // prefix_text must extend the previously encoded text.
    CharStates encode(const std::string& prefix_text);
    void reset();

private:
    const EncoderWeights& weights_;
    const EncoderConfig& config_;
    std::string text_;
    std::vector<float> embedded_;
    std::array<std::vector<float>, 3> conv_out_;
    std::vector<float> fwd_h_;  // [T][H]
    std::vector<float> fwd_c_;  // [T][H]
};

}  // namespace itts
