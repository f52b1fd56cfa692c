#pragma once

#include <cstdint>
#include <vector>

#include "itts/corpus.hpp"

namespace itts {

struct SyntheticCorpusParams {
    std::size_t num_sentences = 200;
    std::uint64_t seed = 0;
    int min_words = 5;
    int max_words = 42;
    double comma_probability = 0.08;
    double phrase_boundary_probability = 0.25;
};

// Seeded random sentences over a small tagged vocabulary, with POS, training
// frequency and pseudo parse-distance annotations. Self-contained input for
// drift and RF experiments.
std::vector<AnnotatedSentence> generate_corpus(const SyntheticCorpusParams& params);

}  // namespace itts
