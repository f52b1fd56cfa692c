#include <doctest.h>

#include <cmath>
#include <fstream>
#include <iterator>

#include "itts/corpus.hpp"
#include "itts/encoder.hpp"
#include "itts/error.hpp"
#include "support/test_util.hpp"

using namespace itts;
using namespace itts::testing;

TEST_CASE("init_weights is seed-deterministic and bounded") {
    EncoderConfig config = small_config(7);
    const EncoderWeights a = init_weights(config);
    const EncoderWeights b = init_weights(config);
    CHECK(a.embedding == b.embedding);
    CHECK(a.conv[0].kernel == b.conv[0].kernel);
    CHECK(a.forward_cell.w_input == b.forward_cell.w_input);
    CHECK(a.backward_cell.bias == b.backward_cell.bias);

    config.seed = 8;
    const EncoderWeights c = init_weights(config);
    CHECK(a.embedding != c.embedding);

    for (float v : a.embedding) {
        CHECK(v >= -0.1f);
        CHECK(v <= 0.1f);
    }
}

TEST_CASE("init_weights shapes follow the config") {
    EncoderConfig config;
    config.char_vocab = "a";
    config.embed_dim = 1;
    config.conv = {{{1, 1}, {1, 1}, {1, 1}}};
    config.hidden_dim = 1;
    const EncoderWeights w = init_weights(config);
    CHECK(w.embedding.size() == 1);
    CHECK(w.conv[0].kernel.size() == 1);
    CHECK(w.forward_cell.w_input.size() == 4);
    CHECK(w.forward_cell.w_hidden.size() == 4);
}

TEST_CASE("weight files round-trip and reject mismatches") {
    TempDir tmp;
    const EncoderConfig config = small_config(21);
    const EncoderWeights w = init_weights(config);
    save_weights(w, config, tmp.file("w.itw"));

    const EncoderWeights loaded = load_weights(tmp.file("w.itw"), config);
    CHECK(loaded.embedding == w.embedding);
    CHECK(loaded.conv[1].kernel == w.conv[1].kernel);
    CHECK(loaded.conv[2].bias == w.conv[2].bias);
    CHECK(loaded.forward_cell.w_input == w.forward_cell.w_input);
    CHECK(loaded.backward_cell.w_hidden == w.backward_cell.w_hidden);

    EncoderConfig wrong = config;
    wrong.hidden_dim = config.hidden_dim + 1;
    CHECK_THROWS_AS(load_weights(tmp.file("w.itw"), wrong), ShapeError);

    // truncate the file
    {
        std::ifstream in(tmp.file("w.itw"), std::ios::binary);
        std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        std::ofstream out(tmp.file("cut.itw"), std::ios::binary);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size() / 2));
    }
    CHECK_THROWS_AS(load_weights(tmp.file("cut.itw"), config), ParseError);
}

TEST_CASE("encode_chars of the empty string yields empty states") {
    const EncoderConfig config = tiny_config();
    const CharStates states = encode_chars("", tiny_hand_weights(), config);
    CHECK(states.length() == 0);
}

TEST_CASE("all-zero weights fix every state at zero") {
    const EncoderConfig config = small_config(3);
    const EncoderWeights zeros = zero_weights(config);
    const CharStates states = encode_chars("abc xyz.", zeros, config);
    for (float v : states.forward) CHECK(v == 0.0f);
    for (float v : states.backward) CHECK(v == 0.0f);
}

TEST_CASE("hand-executed recurrence oracle for a 2-char input") {
    // Frozen from an independent straight-line evaluation of the embedding ->
    // three width-1 convs -> per-direction LSTM chain on input "ab".
    const CharStates states = encode_chars("ab", tiny_hand_weights(), tiny_config());
    REQUIRE(states.length() == 2);
    CHECK(states.forward_at(0)[0] == doctest::Approx(0.20886060966087053).epsilon(1e-6));
    CHECK(states.forward_at(1)[0] == doctest::Approx(0.21919532745103001).epsilon(1e-6));
    CHECK(states.backward_at(0)[0] == doctest::Approx(0.16800063338288518).epsilon(1e-6));
    CHECK(states.backward_at(1)[0] == doctest::Approx(0.06018308221479172).epsilon(1e-6));
}

TEST_CASE("extract_token_vector concatenates the directional states") {
    const Sentence s = tokenize("ab");
    const CharStates states = encode_chars("ab", tiny_hand_weights(), tiny_config());
    const TokenVector tv = extract_token_vector(states, s, 1);
    REQUIRE(tv.z.size() == 2);
    CHECK(tv.z[0] == states.forward_at(1)[0]);   // last char of the token
    CHECK(tv.z[1] == states.backward_at(0)[0]);  // first char of the token
    CHECK(tv.token_index == 1);
}

TEST_CASE("extraction picks the right characters inside a prefix") {
    // For "The dog", token 3 is "dog": forward at 'g' (position 6), backward
    // at 'd' (position 4).
    EncoderConfig config = small_config(17);
    const EncoderWeights w = init_weights(config);
    const Sentence s = tokenize("The dog is in the yard.");
    const std::string prefix = "The dog";
    const CharStates states = encode_chars(prefix, w, config);
    const TokenVector tv = extract_token_vector(states, s, 3);
    const int h = config.hidden_dim;
    for (int j = 0; j < h; ++j) {
        CHECK(tv.z[static_cast<std::size_t>(j)] == states.forward_at(6)[j]);
        CHECK(tv.z[static_cast<std::size_t>(h + j)] == states.backward_at(4)[j]);
    }
    CHECK_THROWS_AS(extract_token_vector(states, s, 4), OutOfPrefix);
    CHECK_THROWS_AS(extract_token_vector(states, s, 13), IndexError);
}

TEST_CASE("out-of-vocabulary characters are a hard error") {
    CHECK_THROWS_AS(encode_chars("ax", tiny_hand_weights(), tiny_config()), UnsupportedChar);
}

TEST_CASE("determinism: identical inputs give bit-identical states") {
    const EncoderConfig config = small_config(5);
    const EncoderWeights w = init_weights(config);
    const CharStates a = encode_chars("Some text here.", w, config);
    const CharStates b = encode_chars("Some text here.", w, config);
    CHECK(a.forward == b.forward);
    CHECK(a.backward == b.backward);
}

TEST_CASE("forward states match across prefixes outside the conv lookahead") {
    const EncoderConfig config = small_config(29);
    const EncoderWeights w = init_weights(config);
    const std::string p1 = "The dog is in";
    const std::string p2 = "The dog is in the yard.";
    const CharStates s1 = encode_chars(p1, w, config);
    const CharStates s2 = encode_chars(p2, w, config);

    const int rf = config.conv_right_receptive_field();
    REQUIRE(rf == 3);
    const std::size_t stable = p1.size() - static_cast<std::size_t>(rf);
    for (std::size_t t = 0; t < stable; ++t)
        for (int j = 0; j < config.hidden_dim; ++j)
            CHECK(s1.forward_at(t)[j] == s2.forward_at(t)[j]);

    // the tail inside the receptive field genuinely changes for this config
    bool tail_differs = false;
    for (std::size_t t = stable; t < p1.size(); ++t)
        for (int j = 0; j < config.hidden_dim; ++j)
            if (s1.forward_at(t)[j] != s2.forward_at(t)[j]) tail_differs = true;
    CHECK(tail_differs);

    // backward states differ on the shared characters
    bool backward_differs = false;
    for (std::size_t t = 0; t < p1.size(); ++t)
        for (int j = 0; j < config.hidden_dim; ++j)
            if (s1.backward_at(t)[j] != s2.backward_at(t)[j]) backward_differs = true;
    CHECK(backward_differs);
}

TEST_CASE("incremental encoder is bit-identical to from-scratch encoding") {
    const EncoderConfig config = small_config(31);
    const EncoderWeights w = init_weights(config);
    IncrementalEncoder inc(w, config);
    const std::string full = "A quiet river wanders through the ancient village.";
    for (std::size_t len = 1; len <= full.size(); ++len) {
        const std::string prefix = full.substr(0, len);
        const CharStates fast = inc.encode(prefix);
        const CharStates slow = encode_chars(prefix, w, config);
        REQUIRE(fast.forward == slow.forward);
        REQUIRE(fast.backward == slow.backward);
    }
}

TEST_CASE("config validation rejects bad setups") {
    EncoderConfig config = small_config(1);
    config.conv[1].kernel_width = 4;
    CHECK_THROWS_AS(config.validate(), ConfigError);
    config = small_config(1);
    config.embed_dim = 0;
    CHECK_THROWS_AS(config.validate(), ConfigError);
    config = small_config(1);
    config.char_vocab = "aa";
    CHECK_THROWS_AS(config.validate(), ConfigError);
}
