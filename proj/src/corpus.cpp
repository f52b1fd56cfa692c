#include "itts/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "itts/error.hpp"

namespace itts {

namespace {

bool is_ascii_letter(unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

bool is_word_core(unsigned char c) { return is_ascii_letter(c) || (c >= '0' && c <= '9'); }

std::string lowercase(const std::string& s) {
    std::string out = s;
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string uppercase(const std::string& s) {
    std::string out = s;
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return out;
}

// Fallback for untagged words; closed-class English words, lowercased.
const std::unordered_set<std::string>& stopword_set() {
    static const std::unordered_set<std::string> words = {
        "a", "an", "the",
        "about", "above", "across", "after", "against", "along", "amid", "among", "around", "as",
        "at", "atop", "before", "behind", "below", "beneath", "beside", "besides", "between",
        "beyond", "by", "despite", "down", "during", "except", "for", "from", "in", "inside",
        "into", "near", "of", "off", "on", "onto", "out", "outside", "over", "past", "per",
        "since", "through", "throughout", "till", "to", "toward", "towards", "under",
        "underneath", "until", "unto", "up", "upon", "via", "with", "within", "without",
        "and", "but", "or", "nor", "so", "yet", "although", "because", "if", "lest", "once",
        "than", "that", "though", "unless", "when", "whenever", "where", "whereas", "wherever",
        "whether", "while",
        "i", "me", "my", "mine", "myself", "you", "your", "yours", "yourself", "yourselves",
        "he", "him", "his", "himself", "she", "her", "hers", "herself", "it", "its", "itself",
        "we", "us", "our", "ours", "ourselves", "they", "them", "their", "theirs", "themselves",
        "this", "these", "those", "who", "whom", "whose", "which", "what", "whatever", "whoever",
        "anybody", "anyone", "anything", "everybody", "everyone", "everything", "nobody",
        "none", "nothing", "somebody", "someone", "something", "one", "oneself",
        "am", "is", "are", "was", "were", "be", "been", "being", "have", "has", "had", "having",
        "do", "does", "did", "doing", "will", "would", "shall", "should", "may", "might", "must",
        "can", "could", "ought", "need", "dare",
        "not", "no", "nor", "n't", "never", "neither", "either", "both", "each", "every", "all",
        "any", "some", "few", "many", "much", "more", "most", "other", "another", "such", "own",
        "same", "several", "enough",
        "zero", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten",
        "eleven", "twelve", "hundred", "thousand", "million", "first", "second", "third",
        "there", "here", "then", "now", "also", "too", "very", "just", "only", "even", "again",
        "further", "once", "how", "why", "whither", "thence", "hence",
    };
    return words;
}

const std::unordered_set<std::string>& closed_class_tags() {
    static const std::unordered_set<std::string> tags = {"DET",   "ADP",   "PRON", "AUX",
                                                         "CCONJ", "SCONJ", "PART", "NUM"};
    return tags;
}

}  // namespace

const char* to_string(TokenKind k) {
    switch (k) {
        case TokenKind::Word: return "word";
        case TokenKind::Space: return "space";
        case TokenKind::Punct: return "punct";
    }
    return "?";
}

const char* to_string(TokenCategory c) {
    switch (c) {
        case TokenCategory::Punctuation: return "punctuation";
        case TokenCategory::Space: return "space";
        case TokenCategory::FunctionWord: return "function_word";
        case TokenCategory::ContentWord: return "content_word";
    }
    return "?";
}

TokenKind token_kind_from_string(const std::string& s) {
    if (s == "word") return TokenKind::Word;
    if (s == "space") return TokenKind::Space;
    if (s == "punct") return TokenKind::Punct;
    throw ParseError("unknown token kind '" + s + "'");
}

const Token& Sentence::token(int n) const {
    if (n < 1 || n > length()) throw IndexError("token index " + std::to_string(n));
    return tokens[static_cast<std::size_t>(n - 1)];
}

bool is_supported_char(unsigned char c) { return c >= 0x20 && c <= 0x7e; }

bool is_closed_class_tag(const std::string& pos) { return closed_class_tags().count(uppercase(pos)) > 0; }

bool is_stopword(const std::string& word) { return stopword_set().count(lowercase(word)) > 0; }

Sentence tokenize(const std::string& raw, const std::string& id) {
    if (raw.empty()) throw EmptyInput();

    const std::size_t len = raw.size();
    for (std::size_t i = 0; i < len; ++i)
        if (!is_supported_char(static_cast<unsigned char>(raw[i]))) throw UnsupportedChar(i);

    // ' and - join a word only when flanked by letters on both sides.
    auto is_word_char_at = [&](std::size_t i) {
        const unsigned char c = static_cast<unsigned char>(raw[i]);
        if (is_word_core(c)) return true;
        if (c == '\'' || c == '-') {
            return i > 0 && i + 1 < len && is_ascii_letter(static_cast<unsigned char>(raw[i - 1])) &&
                   is_ascii_letter(static_cast<unsigned char>(raw[i + 1]));
        }
        return false;
    };

    Sentence sent;
    sent.id = id;
    sent.raw = raw;
    std::size_t i = 0;
    while (i < len) {
        Token tok;
        tok.char_begin = i;
        const unsigned char c = static_cast<unsigned char>(raw[i]);
        if (is_word_char_at(i)) {
            std::size_t j = i;
            while (j < len && is_word_char_at(j)) ++j;
            tok.kind = TokenKind::Word;
            tok.char_end = j;
        } else if (c == ' ') {
            tok.kind = TokenKind::Space;
            tok.char_end = i + 1;
        } else {
            tok.kind = TokenKind::Punct;
            tok.char_end = i + 1;
        }
        tok.text = raw.substr(tok.char_begin, tok.char_end - tok.char_begin);
        tok.index = static_cast<int>(sent.tokens.size()) + 1;
        sent.tokens.push_back(std::move(tok));
        i = sent.tokens.back().char_end;
    }
    return sent;
}

TokenCategory categorize(const AnnotatedToken& annotated) {
    switch (annotated.token.kind) {
        case TokenKind::Punct: return TokenCategory::Punctuation;
        case TokenKind::Space: return TokenCategory::Space;
        case TokenKind::Word: break;
    }
    if (annotated.pos) {
        return is_closed_class_tag(*annotated.pos) ? TokenCategory::FunctionWord
                                                   : TokenCategory::ContentWord;
    }
    return is_stopword(annotated.token.text) ? TokenCategory::FunctionWord
                                             : TokenCategory::ContentWord;
}

namespace {

AnnotatedSentence parse_record(const nlohmann::json& rec, std::size_t line_no) {
    if (!rec.is_object() || !rec.contains("id") || !rec.contains("raw") || !rec.contains("tokens"))
        throw ParseError(line_no, "record must have id, raw and tokens");
    if (!rec["id"].is_string() || !rec["raw"].is_string() || !rec["tokens"].is_array())
        throw ParseError(line_no, "bad field types");

    AnnotatedSentence out;
    out.sentence = tokenize(rec["raw"].get<std::string>(), rec["id"].get<std::string>());

    const auto& toks = rec["tokens"];
    const std::size_t expected = out.sentence.tokens.size();
    if (toks.size() != expected)
        throw AnnotationMismatch(line_no, std::min(toks.size(), expected) + 1,
                                 "record has " + std::to_string(toks.size()) + " tokens, tokenize gives " +
                                     std::to_string(expected));

    for (std::size_t t = 0; t < toks.size(); ++t) {
        const auto& jt = toks[t];
        if (!jt.is_object() || !jt.contains("text") || !jt.contains("kind"))
            throw ParseError(line_no, "token " + std::to_string(t + 1) + " must have text and kind");
        AnnotatedToken at;
        at.token = out.sentence.tokens[t];
        const std::string text = jt["text"].get<std::string>();
        const TokenKind kind = token_kind_from_string(jt["kind"].get<std::string>());
        if (text != at.token.text || kind != at.token.kind)
            throw AnnotationMismatch(line_no, t + 1,
                                     "'" + text + "' does not match tokenize output '" + at.token.text + "'");
        if (jt.contains("pos")) {
            if (at.token.kind == TokenKind::Space)
                throw ParseError(line_no, "pos annotation on space token " + std::to_string(t + 1));
            at.pos = jt["pos"].get<std::string>();
        }
        if (jt.contains("tokens_to_parent_phrase_end")) {
            if (at.token.kind != TokenKind::Word)
                throw ParseError(line_no, "parse annotation on non-word token " + std::to_string(t + 1));
            const int v = jt["tokens_to_parent_phrase_end"].get<int>();
            if (v < 0) throw ParseError(line_no, "negative tokens_to_parent_phrase_end");
            at.tokens_to_parent_phrase_end = v;
        }
        if (jt.contains("training_frequency")) {
            if (at.token.kind != TokenKind::Word)
                throw ParseError(line_no, "frequency annotation on non-word token " + std::to_string(t + 1));
            const long long v = jt["training_frequency"].get<long long>();
            if (v < 0) throw ParseError(line_no, "negative training_frequency");
            at.training_frequency = v;
        }
        out.tokens.push_back(std::move(at));
    }
    return out;
}

}  // namespace

std::vector<AnnotatedSentence> parse_annotated_corpus(std::istream& in) {
    std::vector<AnnotatedSentence> corpus;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::json rec;
        try {
            rec = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(line_no, e.what());
        }
        try {
            corpus.push_back(parse_record(rec, line_no));
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(line_no, e.what());
        }
    }
    return corpus;
}

std::vector<AnnotatedSentence> load_annotated_corpus(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open corpus file: " + path);
    return parse_annotated_corpus(in);
}

void save_annotated_corpus(const std::vector<AnnotatedSentence>& corpus, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write corpus file: " + path);
    for (const auto& as : corpus) {
        nlohmann::ordered_json rec;
        rec["id"] = as.sentence.id;
        rec["raw"] = as.sentence.raw;
        auto& toks = rec["tokens"] = nlohmann::ordered_json::array();
        for (const auto& at : as.tokens) {
            nlohmann::ordered_json jt;
            jt["text"] = at.token.text;
            jt["kind"] = to_string(at.token.kind);
            if (at.pos) jt["pos"] = *at.pos;
            if (at.tokens_to_parent_phrase_end)
                jt["tokens_to_parent_phrase_end"] = *at.tokens_to_parent_phrase_end;
            if (at.training_frequency) jt["training_frequency"] = *at.training_frequency;
            toks.push_back(std::move(jt));
        }
        out << rec.dump() << '\n';
    }
}

AnnotatedSentence annotate_plain(Sentence sentence) {
    AnnotatedSentence out;
    out.sentence = std::move(sentence);
    out.tokens.reserve(out.sentence.tokens.size());
    for (const auto& tok : out.sentence.tokens) {
        AnnotatedToken at;
        at.token = tok;
        out.tokens.push_back(std::move(at));
    }
    return out;
}

}  // namespace itts
