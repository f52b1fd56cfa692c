#include "itts/synthetic.hpp"

#include <cctype>
#include <cstdio>

#include "itts/error.hpp"
#include "itts/rng.hpp"

namespace itts {

namespace {

struct LexEntry {
    const char* text;
    const char* pos;
};

// Small tagged vocabulary with varied word lengths; closed-class tags are
// DET/ADP/PRON/AUX/CCONJ/SCONJ/PART/NUM.
constexpr LexEntry kLexicon[] = {
    {"the", "DET"},        {"a", "DET"},          {"an", "DET"},         {"this", "DET"},
    {"every", "DET"},      {"some", "DET"},       {"of", "ADP"},         {"in", "ADP"},
    {"on", "ADP"},         {"under", "ADP"},      {"through", "ADP"},    {"between", "ADP"},
    {"at", "ADP"},         {"near", "ADP"},       {"it", "PRON"},        {"she", "PRON"},
    {"he", "PRON"},        {"they", "PRON"},      {"we", "PRON"},        {"you", "PRON"},
    {"is", "AUX"},         {"was", "AUX"},        {"has", "AUX"},        {"will", "AUX"},
    {"can", "AUX"},        {"and", "CCONJ"},      {"but", "CCONJ"},      {"or", "CCONJ"},
    {"because", "SCONJ"},  {"while", "SCONJ"},    {"if", "SCONJ"},       {"to", "PART"},
    {"not", "PART"},       {"two", "NUM"},        {"seven", "NUM"},      {"forty", "NUM"},
    {"dog", "NOUN"},       {"yard", "NOUN"},      {"house", "NOUN"},     {"river", "NOUN"},
    {"garden", "NOUN"},    {"window", "NOUN"},    {"mountain", "NOUN"},  {"story", "NOUN"},
    {"evening", "NOUN"},   {"harbor", "NOUN"},    {"teacher", "NOUN"},   {"lantern", "NOUN"},
    {"village", "NOUN"},   {"procession", "NOUN"},{"thunderstorm", "NOUN"},
    {"runs", "VERB"},      {"sleeps", "VERB"},    {"wanders", "VERB"},   {"carries", "VERB"},
    {"whispers", "VERB"},  {"remembers", "VERB"}, {"waits", "VERB"},     {"sings", "VERB"},
    {"follows", "VERB"},   {"gathers", "VERB"},   {"vanishes", "VERB"},  {"celebrates", "VERB"},
    {"red", "ADJ"},        {"quiet", "ADJ"},      {"narrow", "ADJ"},     {"gentle", "ADJ"},
    {"ancient", "ADJ"},    {"luminous", "ADJ"},   {"crooked", "ADJ"},    {"restless", "ADJ"},
    {"slowly", "ADV"},     {"often", "ADV"},      {"nearly", "ADV"},     {"tomorrow", "ADV"},
    {"everywhere", "ADV"}, {"don't", "AUX"},      {"well-known", "ADJ"}, {"o'clock", "ADV"},
};

constexpr std::size_t kLexiconSize = sizeof(kLexicon) / sizeof(kLexicon[0]);

constexpr const char* kFinalPunct[] = {".", ".", ".", "!", "?"};

}  // namespace

std::vector<AnnotatedSentence> generate_corpus(const SyntheticCorpusParams& params) {
    if (params.min_words < 1 || params.max_words < params.min_words)
        throw ConfigError("bad synthetic corpus word-length range");

    std::vector<AnnotatedSentence> corpus;
    corpus.reserve(params.num_sentences);
    for (std::size_t s = 0; s < params.num_sentences; ++s) {
        Rng rng(derive_seed(params.seed, "sentence", s));
        const int n_words =
            params.min_words + static_cast<int>(rng.below(
                                   static_cast<std::size_t>(params.max_words - params.min_words + 1)));

        std::vector<std::size_t> word_ids(static_cast<std::size_t>(n_words));
        for (auto& id : word_ids) id = rng.below(kLexiconSize);

        std::string raw;
        std::vector<int> word_token_index(static_cast<std::size_t>(n_words));
        // Track where word tokens land so annotations bind positionally.
        int token_counter = 0;
        for (int w = 0; w < n_words; ++w) {
            std::string text = kLexicon[word_ids[static_cast<std::size_t>(w)]].text;
            if (w == 0) text[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
            raw += text;
            word_token_index[static_cast<std::size_t>(w)] = ++token_counter;
            const bool last = (w == n_words - 1);
            if (last) {
                raw += kFinalPunct[rng.below(sizeof(kFinalPunct) / sizeof(kFinalPunct[0]))];
                ++token_counter;
            } else if (rng.uniform() < params.comma_probability) {
                raw += ", ";
                token_counter += 2;
            } else {
                raw += ' ';
                ++token_counter;
            }
        }

        char id_buf[16];
        std::snprintf(id_buf, sizeof(id_buf), "s%04zu", s);
        AnnotatedSentence as;
        as.sentence = tokenize(raw, id_buf);

        // Pseudo constituent ends: each word is a phrase boundary with fixed
        // probability; the last word always is.
        std::vector<bool> boundary(static_cast<std::size_t>(n_words), false);
        for (int w = 0; w < n_words; ++w)
            boundary[static_cast<std::size_t>(w)] =
                (w == n_words - 1) || rng.uniform() < params.phrase_boundary_probability;

        int word_cursor = 0;
        for (const Token& tok : as.sentence.tokens) {
            AnnotatedToken at;
            at.token = tok;
            if (tok.kind == TokenKind::Word) {
                const std::size_t lex = word_ids[static_cast<std::size_t>(word_cursor)];
                at.pos = kLexicon[lex].pos;
                at.training_frequency = static_cast<long long>(50000 / (lex + 1));
                int boundary_word = -1;
                for (int w = word_cursor; w < n_words; ++w) {
                    if (boundary[static_cast<std::size_t>(w)]) {
                        boundary_word = w;
                        break;
                    }
                }
                at.tokens_to_parent_phrase_end =
                    word_token_index[static_cast<std::size_t>(boundary_word)] - tok.index;
                ++word_cursor;
            }
            as.tokens.push_back(std::move(at));
        }
        corpus.push_back(std::move(as));
    }
    return corpus;
}

}  // namespace itts
