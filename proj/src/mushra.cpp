#include "itts/mushra.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "itts/csv.hpp"
#include "itts/error.hpp"

namespace itts {

const char* to_string(MushraCondition c) {
    switch (c) {
        case MushraCondition::K1: return "k1";
        case MushraCondition::K2: return "k2";
        case MushraCondition::K4: return "k4";
        case MushraCondition::K6: return "k6";
        case MushraCondition::HiddenReference: return "ref";
    }
    return "?";
}

MushraCondition mushra_condition_from_string(const std::string& s) {
    if (s == "k1") return MushraCondition::K1;
    if (s == "k2") return MushraCondition::K2;
    if (s == "k4") return MushraCondition::K4;
    if (s == "k6") return MushraCondition::K6;
    if (s == "ref") return MushraCondition::HiddenReference;
    throw ParseError("unknown condition '" + s + "'");
}

bool RatingSet::has(const std::string& participant, const std::string& sentence,
                    MushraCondition condition) const {
    return scores.count({participant, sentence, condition}) > 0;
}

double RatingSet::score(const std::string& participant, const std::string& sentence,
                        MushraCondition condition) const {
    return scores.at({participant, sentence, condition});
}

RatingSet parse_ratings(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "participant_id,sentence_id,condition,score")
        throw ParseError(1, "bad ratings header");

    RatingSet ratings;
    std::set<std::string> participants;
    std::set<std::pair<std::string, MushraCondition>> items;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = csv::split(line);
        if (fields.size() != 4) throw ParseError(line_no, "expected 4 fields");
        const std::string& participant = fields[0];
        const std::string& sentence = fields[1];
        MushraCondition condition;
        try {
            condition = mushra_condition_from_string(fields[2]);
        } catch (const ParseError&) {
            throw ParseError(line_no, "unknown condition '" + fields[2] + "'");
        }
        const double score = csv::parse_double(fields[3], line_no);
        if (score < 0.0 || score > 100.0)
            throw RangeError(line_no, "score " + fields[3] + " outside [0,100]");
        const auto key = std::make_tuple(participant, sentence, condition);
        if (!ratings.scores.emplace(key, score).second)
            throw DuplicateError(participant + "/" + sentence + "/" + fields[2]);
        participants.insert(participant);
        items.insert({sentence, condition});
    }
    ratings.participants.assign(participants.begin(), participants.end());
    ratings.items.assign(items.begin(), items.end());

    for (const auto& participant : ratings.participants)
        for (const auto& [sentence, condition] : ratings.items)
            if (!ratings.has(participant, sentence, condition))
                ratings.warnings.push_back("missing cell: " + participant + "/" + sentence + "/" +
                                           to_string(condition));
    return ratings;
}

RatingSet load_ratings(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open ratings file: " + path);
    return parse_ratings(in);
}

std::pair<RatingSet, std::vector<Exclusion>> apply_exclusion(const RatingSet& ratings,
                                                             double threshold) {
    bool any_reference = false;
    for (const auto& [sentence, condition] : ratings.items)
        if (condition == MushraCondition::HiddenReference) any_reference = true;
    if (!any_reference) throw MissingReference();

    std::vector<Exclusion> excluded;
    std::set<std::string> keep;
    for (const auto& participant : ratings.participants) {
        std::vector<double> ref_scores;
        for (const auto& [sentence, condition] : ratings.items) {
            if (condition != MushraCondition::HiddenReference) continue;
            if (ratings.has(participant, sentence, condition))
                ref_scores.push_back(ratings.score(participant, sentence, condition));
        }
        const double ref_mean = ref_scores.empty() ? 0.0 : mean(ref_scores);
        if (ref_mean < threshold)
            excluded.push_back({participant, ref_mean});
        else
            keep.insert(participant);
    }

    RatingSet retained;
    retained.participants.assign(keep.begin(), keep.end());
    retained.items = ratings.items;
    for (const auto& [key, score] : ratings.scores)
        if (keep.count(std::get<0>(key))) retained.scores.emplace(key, score);
    for (const auto& participant : retained.participants)
        for (const auto& [sentence, condition] : retained.items)
            if (!retained.has(participant, sentence, condition))
                retained.warnings.push_back("missing cell: " + participant + "/" + sentence + "/" +
                                            to_string(condition));
    return {std::move(retained), std::move(excluded)};
}

namespace {

constexpr MushraCondition kConditions[] = {MushraCondition::K1, MushraCondition::K2,
                                           MushraCondition::K4, MushraCondition::K6,
                                           MushraCondition::HiddenReference};

// Per-participant mean over the sentences rated in both conditions of a pair.
bool paired_means(const RatingSet& ratings, const std::string& participant, MushraCondition a,
                  MushraCondition b, double& mean_a, double& mean_b) {
    std::vector<double> xs, ys;
    for (const auto& [sentence, condition] : ratings.items) {
        if (condition != a) continue;
        if (ratings.has(participant, sentence, a) && ratings.has(participant, sentence, b)) {
            xs.push_back(ratings.score(participant, sentence, a));
            ys.push_back(ratings.score(participant, sentence, b));
        }
    }
    if (xs.empty()) return false;
    mean_a = mean(xs);
    mean_b = mean(ys);
    return true;
}

}  // namespace

MushraSummary summarize_mushra(const RatingSet& ratings) {
    if (ratings.participants.size() < 2)
        throw InsufficientData("fewer than 2 retained participants");

    MushraSummary summary;
    for (MushraCondition condition : kConditions) {
        std::vector<double> scores;
        for (const auto& [key, score] : ratings.scores)
            if (std::get<2>(key) == condition) scores.push_back(score);
        ConditionSummary cs;
        cs.condition = condition;
        cs.count = scores.size();
        if (!scores.empty()) {
            cs.mean = mean(scores);
            cs.stddev = population_stddev(scores);
        }
        summary.conditions.push_back(cs);
    }

    const std::pair<MushraCondition, MushraCondition> pairs[] = {
        {MushraCondition::K1, MushraCondition::K2},
        {MushraCondition::K2, MushraCondition::K4},
        {MushraCondition::K4, MushraCondition::K6},
        {MushraCondition::K6, MushraCondition::HiddenReference},
    };
    for (const auto& [a, b] : pairs) {
        std::vector<double> xs, ys;
        for (const auto& participant : ratings.participants) {
            double ma = 0.0, mb = 0.0;
            if (paired_means(ratings, participant, a, b, ma, mb)) {
                xs.push_back(ma);
                ys.push_back(mb);
            }
        }
        if (xs.size() < 2)
            throw InsufficientData(std::string("pair ") + to_string(a) + "/" + to_string(b) +
                                   " has fewer than 2 paired participants");
        PairTest test;
        test.a = a;
        test.b = b;
        test.result = paired_ttest(xs, ys);
        summary.tests.push_back(test);
    }
    return summary;
}

void write_mushra_summary_csv(const MushraSummary& summary, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);
    out << "condition,mean,std,count\n";
    for (const auto& cs : summary.conditions)
        out << to_string(cs.condition) << ',' << csv::format(cs.mean) << ','
            << csv::format(cs.stddev) << ',' << cs.count << '\n';
}

void write_mushra_tests_csv(const MushraSummary& summary, double alpha, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);
    out << "cond_a,cond_b,t,df,p,degenerate,alpha,significant\n";
    for (const auto& test : summary.tests)
        out << to_string(test.a) << ',' << to_string(test.b) << ',' << csv::format(test.result.t)
            << ',' << csv::format(test.result.df) << ',' << csv::format(test.result.p) << ','
            << (test.result.degenerate ? 1 : 0) << ',' << csv::format(alpha) << ','
            << (test.result.p < alpha ? 1 : 0) << '\n';
}

void write_exclusions_csv(const std::vector<Exclusion>& exclusions, double threshold,
                          const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);
    out << "participant_id,reference_mean,threshold\n";
    for (const auto& e : exclusions)
        out << e.participant << ',' << csv::format(e.reference_mean) << ','
            << csv::format(threshold) << '\n';
}

}  // namespace itts
