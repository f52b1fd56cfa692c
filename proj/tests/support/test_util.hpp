#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "itts/encoder.hpp"

namespace itts::testing {

// Hand-computable setup: vocab {a,b}, 1-dim embedding, three width-1
// single-channel convs, one LSTM unit per direction.
inline EncoderConfig tiny_config() {
    EncoderConfig config;
    config.char_vocab = "ab";
    config.embed_dim = 1;
    config.conv = {{{1, 1}, {1, 1}, {1, 1}}};
    config.hidden_dim = 1;
    config.seed = 0;
    return config;
}

// Weights for the hand-executed recurrence oracle in test_encoder.cpp.
inline EncoderWeights tiny_hand_weights() {
    EncoderWeights w;
    w.embedding = {0.5f, 0.25f};  // a, b
    w.conv[0] = {{1.2f}, {0.05f}};
    w.conv[1] = {{0.9f}, {0.1f}};
    w.conv[2] = {{1.1f}, {-0.02f}};
    w.forward_cell.w_input = {0.6f, 0.4f, 0.8f, 0.5f};    // gate order i,f,g,o
    w.forward_cell.w_hidden = {0.3f, 0.2f, -0.4f, 0.25f};
    w.forward_cell.bias = {0.05f, -0.05f, 0.1f, 0.0f};
    w.backward_cell.w_input = {0.45f, 0.55f, 0.7f, 0.35f};
    w.backward_cell.w_hidden = {-0.2f, 0.15f, 0.3f, 0.1f};
    w.backward_cell.bias = {0.0f, 0.05f, -0.1f, 0.02f};
    return w;
}

inline EncoderWeights zero_weights(const EncoderConfig& config) {
    EncoderWeights w = init_weights(config);
    auto clear = [](std::vector<float>& v) { std::fill(v.begin(), v.end(), 0.0f); };
    clear(w.embedding);
    for (auto& layer : w.conv) {
        clear(layer.kernel);
        clear(layer.bias);
    }
    for (auto* dir : {&w.forward_cell, &w.backward_cell}) {
        clear(dir->w_input);
        clear(dir->w_hidden);
        clear(dir->bias);
    }
    return w;
}

// Small but nontrivial encoder for property tests.
inline EncoderConfig small_config(std::uint64_t seed) {
    EncoderConfig config;
    config.embed_dim = 4;
    config.conv = {{{3, 4}, {3, 4}, {3, 4}}};
    config.hidden_dim = 4;
    config.seed = seed;
    return config;
}

class TempDir {
public:
    TempDir() {
        const auto base = std::filesystem::temp_directory_path();
        std::random_device rd;
        for (int attempt = 0; attempt < 100; ++attempt) {
            path_ = base / ("itts_test_" + std::to_string(rd()));
            std::error_code ec;
            if (std::filesystem::create_directory(path_, ec)) return;
        }
        throw std::runtime_error("cannot create temp dir");
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    std::filesystem::path path_;
};

}  // namespace itts::testing
