#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace itts {

enum class TokenKind { Word, Space, Punct };

enum class TokenCategory { Punctuation, Space, FunctionWord, ContentWord };

const char* to_string(TokenKind k);
const char* to_string(TokenCategory c);
TokenKind token_kind_from_string(const std::string& s);

struct Token {
    std::string text;
    TokenKind kind;
    int index = 0;             // 1-based position n
    std::size_t char_begin = 0;  // half-open [char_begin, char_end) into raw
    std::size_t char_end = 0;
};

struct Sentence {
    std::string id;
    std::string raw;
    std::vector<Token> tokens;

    int length() const { return static_cast<int>(tokens.size()); }
    const Token& token(int n) const;  // 1-based
};

struct AnnotatedToken {
    Token token;
    std::optional<std::string> pos;
    std::optional<int> tokens_to_parent_phrase_end;
    std::optional<long long> training_frequency;
};

struct AnnotatedSentence {
    Sentence sentence;
    std::vector<AnnotatedToken> tokens;
};

// Splits raw text into maximal word-character runs, single spaces and single
// punctuation marks. Word characters are ASCII letters and digits, plus '
// and - when flanked by letters on both sides ("don't", "well-known").
// Supported input is printable ASCII; anything else raises UnsupportedChar.
Sentence tokenize(const std::string& raw, const std::string& id = "");

bool is_supported_char(unsigned char c);

// Word-kind classification helpers used by tokenize and the corpus loader.
bool is_closed_class_tag(const std::string& pos);
bool is_stopword(const std::string& word);

TokenCategory categorize(const AnnotatedToken& token);

// Line-delimited JSON records: {id, raw, tokens:[{text, kind, pos?,
// tokens_to_parent_phrase_end?, training_frequency?}]}. Token order must
// match tokenize(raw), checked per record.
std::vector<AnnotatedSentence> load_annotated_corpus(const std::string& path);
std::vector<AnnotatedSentence> parse_annotated_corpus(std::istream& in);

void save_annotated_corpus(const std::vector<AnnotatedSentence>& corpus, const std::string& path);

// Plain sentence (no annotations) wrapped for APIs that want one.
AnnotatedSentence annotate_plain(Sentence sentence);

}  // namespace itts
