#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "itts/stats.hpp"

namespace itts {

// Conditions of the listening test; "ref" is the hidden reference / hidden
// high-range anchor (offline synthesis).
enum class MushraCondition { K1, K2, K4, K6, HiddenReference };

const char* to_string(MushraCondition c);
MushraCondition mushra_condition_from_string(const std::string& s);

struct RatingSet {
    std::vector<std::string> participants;
    std::vector<std::pair<std::string, MushraCondition>> items;  // (sentence_id, condition)
    // (participant, sentence, condition) -> score in [0, 100]
    std::map<std::tuple<std::string, std::string, MushraCondition>, double> scores;
    std::vector<std::string> warnings;  // missing cells of the full design

    bool has(const std::string& participant, const std::string& sentence,
             MushraCondition condition) const;
    double score(const std::string& participant, const std::string& sentence,
                 MushraCondition condition) const;
};

// CSV with header participant_id,sentence_id,condition,score; condition
// tokens k1,k2,k4,k6,ref.
RatingSet load_ratings(const std::string& path);
RatingSet parse_ratings(std::istream& in);

struct Exclusion {
    std::string participant;
    double reference_mean = 0.0;
};

// Drops every participant whose mean hidden-reference score is strictly
// below the threshold (default 90).
std::pair<RatingSet, std::vector<Exclusion>> apply_exclusion(const RatingSet& ratings,
                                                             double threshold = 90.0);

struct ConditionSummary {
    MushraCondition condition{};
    double mean = 0.0;
    double stddev = 0.0;  // population form
    std::size_t count = 0;
};

struct PairTest {
    MushraCondition a{};
    MushraCondition b{};
    TTestResult result;
};

struct MushraSummary {
    std::vector<ConditionSummary> conditions;
    // Consecutive lookahead pairs plus (k6, ref); paired on per-participant
    // means over the sentences present in both conditions.
    std::vector<PairTest> tests;
};

MushraSummary summarize_mushra(const RatingSet& ratings);

void write_mushra_summary_csv(const MushraSummary& summary, const std::string& path);
void write_mushra_tests_csv(const MushraSummary& summary, double alpha, const std::string& path);
void write_exclusions_csv(const std::vector<Exclusion>& exclusions, double threshold,
                          const std::string& path);

}  // namespace itts
