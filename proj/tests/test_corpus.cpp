#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "itts/corpus.hpp"
#include "itts/error.hpp"
#include "itts/rng.hpp"
#include "itts/synthetic.hpp"

using namespace itts;

TEST_CASE("tokenize splits the reference sentence into 12 tokens") {
    const Sentence s = tokenize("The dog is in the yard.");
    REQUIRE(s.length() == 12);
    const char* expected[] = {"The", " ", "dog", " ", "is", " ", "in", " ", "the", " ", "yard", "."};
    for (int n = 1; n <= 12; ++n) CHECK(s.token(n).text == expected[n - 1]);
    CHECK(s.token(1).kind == TokenKind::Word);
    CHECK(s.token(2).kind == TokenKind::Space);
    CHECK(s.token(12).kind == TokenKind::Punct);
    for (int n = 1; n <= 12; ++n) CHECK(s.token(n).index == n);
}

TEST_CASE("tokenize handles single words and mixed separators") {
    CHECK(tokenize("Hi").length() == 1);
    const Sentence s = tokenize("A, b");
    REQUIRE(s.length() == 4);
    CHECK(s.token(1).text == "A");
    CHECK(s.token(2).text == ",");
    CHECK(s.token(2).kind == TokenKind::Punct);
    CHECK(s.token(3).kind == TokenKind::Space);
    CHECK(s.token(4).text == "b");
}

TEST_CASE("tokenize errors") {
    CHECK_THROWS_AS(tokenize(""), EmptyInput);
    try {
        tokenize("ab\tcd");
        FAIL("expected UnsupportedChar");
    } catch (const UnsupportedChar& e) {
        CHECK(e.position == 2);
    }
    CHECK_THROWS_AS(tokenize("caf\xc3\xa9"), UnsupportedChar);
}

TEST_CASE("apostrophes and hyphens join words only when flanked by letters") {
    const Sentence s1 = tokenize("don't stop");
    CHECK(s1.token(1).text == "don't");
    const Sentence s2 = tokenize("a well-known fact");
    CHECK(s2.token(3).text == "well-known");
    const Sentence s3 = tokenize("'quoted'");
    REQUIRE(s3.length() == 3);
    CHECK(s3.token(1).kind == TokenKind::Punct);
    CHECK(s3.token(2).text == "quoted");
    const Sentence s4 = tokenize("x - y");
    REQUIRE(s4.length() == 5);
    CHECK(s4.token(3).kind == TokenKind::Punct);
}

TEST_CASE("consecutive spaces each form their own token") {
    const Sentence s = tokenize("a  b");
    REQUIRE(s.length() == 4);
    CHECK(s.token(2).kind == TokenKind::Space);
    CHECK(s.token(3).kind == TokenKind::Space);
}

TEST_CASE("round-trip: concatenating token texts reproduces the raw text") {
    Rng rng(99);
    const std::string alphabet = "abcXYZ019'- .,!?;()";
    for (int trial = 0; trial < 200; ++trial) {
        std::string raw;
        const std::size_t len = 1 + rng.below(60);
        for (std::size_t i = 0; i < len; ++i) raw.push_back(alphabet[rng.below(alphabet.size())]);
        const Sentence s = tokenize(raw);
        std::string rebuilt;
        std::size_t expected_begin = 0;
        for (const auto& tok : s.tokens) {
            CHECK(tok.char_begin == expected_begin);
            CHECK(!tok.text.empty());
            rebuilt += tok.text;
            expected_begin = tok.char_end;
        }
        CHECK(rebuilt == raw);
    }
}

TEST_CASE("categorize covers all four classes") {
    const auto word = [](const std::string& text, const char* pos) {
        AnnotatedToken at;
        at.token = Token{text, TokenKind::Word, 1, 0, text.size()};
        if (pos) at.pos = pos;
        return at;
    };
    AnnotatedToken punct;
    punct.token = Token{".", TokenKind::Punct, 1, 0, 1};
    AnnotatedToken space;
    space.token = Token{" ", TokenKind::Space, 1, 0, 1};

    CHECK(categorize(punct) == TokenCategory::Punctuation);
    CHECK(categorize(space) == TokenCategory::Space);
    CHECK(categorize(word("the", "DET")) == TokenCategory::FunctionWord);
    CHECK(categorize(word("dog", "NOUN")) == TokenCategory::ContentWord);
    // pos absent: stopword list fallback
    CHECK(categorize(word("the", nullptr)) == TokenCategory::FunctionWord);
    CHECK(categorize(word("Between", nullptr)) == TokenCategory::FunctionWord);
    CHECK(categorize(word("zyzzyva", nullptr)) == TokenCategory::ContentWord);
    // unknown tag falls through to content
    CHECK(categorize(word("qux", "XYZ")) == TokenCategory::ContentWord);
}

TEST_CASE("annotated corpus loads and validates") {
    std::istringstream in(
        R"({"id":"s1","raw":"Hi","tokens":[{"text":"Hi","kind":"word","pos":"INTJ"}]})"
        "\n");
    const auto corpus = parse_annotated_corpus(in);
    REQUIRE(corpus.size() == 1);
    CHECK(corpus[0].sentence.id == "s1");
    REQUIRE(corpus[0].tokens.size() == 1);
    CHECK(corpus[0].tokens[0].pos == "INTJ");
}

TEST_CASE("annotated corpus rejects token count mismatches") {
    std::istringstream in(
        R"({"id":"s1","raw":"The dog is in the yard.","tokens":[{"text":"The","kind":"word"},{"text":" ","kind":"space"},{"text":"dog","kind":"word"}]})"
        "\n");
    CHECK_THROWS_AS(parse_annotated_corpus(in), AnnotationMismatch);
}

TEST_CASE("annotated corpus rejects schema violations with the line number") {
    std::istringstream in("{\"id\":\"s1\",\"raw\":\"Hi\"}\n");
    try {
        parse_annotated_corpus(in);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 1);
    }
    std::istringstream in2("not json\n");
    CHECK_THROWS_AS(parse_annotated_corpus(in2), ParseError);
    // numeric annotations are word-only
    std::istringstream in3(
        R"({"id":"s1","raw":"a b","tokens":[{"text":"a","kind":"word"},{"text":" ","kind":"space","training_frequency":3},{"text":"b","kind":"word"}]})"
        "\n");
    CHECK_THROWS_AS(parse_annotated_corpus(in3), ParseError);
}

TEST_CASE("annotated corpus accepts a fully annotated reference sentence") {
    std::istringstream in(
        R"({"id":"t1","raw":"The dog is in the yard.","tokens":[)"
        R"({"text":"The","kind":"word","pos":"DET"},{"text":" ","kind":"space"},)"
        R"({"text":"dog","kind":"word","pos":"NOUN","training_frequency":120},{"text":" ","kind":"space"},)"
        R"({"text":"is","kind":"word","pos":"AUX"},{"text":" ","kind":"space"},)"
        R"({"text":"in","kind":"word","pos":"ADP"},{"text":" ","kind":"space"},)"
        R"({"text":"the","kind":"word","pos":"DET"},{"text":" ","kind":"space"},)"
        R"({"text":"yard","kind":"word","pos":"NOUN","tokens_to_parent_phrase_end":1},)"
        R"({"text":".","kind":"punct"}]})"
        "\n");
    const auto corpus = parse_annotated_corpus(in);
    REQUIRE(corpus.size() == 1);
    REQUIRE(corpus[0].tokens.size() == 12);
    CHECK(categorize(corpus[0].tokens[0]) == TokenCategory::FunctionWord);
    CHECK(categorize(corpus[0].tokens[2]) == TokenCategory::ContentWord);
    CHECK(categorize(corpus[0].tokens[11]) == TokenCategory::Punctuation);
    CHECK(corpus[0].tokens[10].tokens_to_parent_phrase_end == 1);
}

TEST_CASE("synthetic corpus round-trips through the JSONL format") {
    SyntheticCorpusParams params;
    params.num_sentences = 12;
    params.seed = 5;
    const auto corpus = generate_corpus(params);
    REQUIRE(corpus.size() == 12);
    for (const auto& as : corpus) {
        const int words = static_cast<int>(std::count_if(
            as.tokens.begin(), as.tokens.end(),
            [](const AnnotatedToken& t) { return t.token.kind == TokenKind::Word; }));
        CHECK(words >= params.min_words);
        CHECK(words <= params.max_words);
        for (const auto& at : as.tokens)
            if (at.token.kind == TokenKind::Word) {
                CHECK(at.pos.has_value());
                CHECK(at.training_frequency.has_value());
                CHECK(at.tokens_to_parent_phrase_end.has_value());
                CHECK(*at.tokens_to_parent_phrase_end >= 0);
            }
    }

    std::ostringstream buffer;
    {
        // write to a string via the stream-based parser's inverse
        std::string path = std::filesystem::temp_directory_path() / "itts_corpus_rt.jsonl";
        save_annotated_corpus(corpus, path);
        std::ifstream in(path);
        buffer << in.rdbuf();
        std::filesystem::remove(path);
    }
    std::istringstream in(buffer.str());
    const auto reloaded = parse_annotated_corpus(in);
    REQUIRE(reloaded.size() == corpus.size());
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        CHECK(reloaded[i].sentence.raw == corpus[i].sentence.raw);
        CHECK(reloaded[i].tokens.size() == corpus[i].tokens.size());
    }

    // determinism
    const auto again = generate_corpus(params);
    for (std::size_t i = 0; i < corpus.size(); ++i)
        CHECK(again[i].sentence.raw == corpus[i].sentence.raw);
}
