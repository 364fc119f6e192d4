#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "onematch/blocking.hpp"
#include "onematch/model.hpp"

namespace onematch {

struct FeatureParams {
    double title_discount = 0.9;      // scale on partial title overlap
    double year_cap = 30.0;           // years
    double runtime_cap = 60.0;        // minutes
    double cast_cap = 5.0;            // credits
    double partial_name_credit = 0.5; // surname-only match
};

// Feature order is fixed everywhere (files, model vectors, reports).
inline constexpr std::array<const char*, 5> kFeatureNames = {"cast", "title", "year",
                                                             "directors", "runtime"};
inline constexpr std::size_t kFeatureCount = 5;

// Year and runtime distances are absent when either side lacks the
// attribute; the other three features always have a value.
struct FeatureVector {
    double cast = 0.0;
    double title = 0.0;
    std::optional<double> year;
    double directors = 0.0;
    std::optional<double> runtime;

    bool operator==(const FeatureVector&) const = default;
};

std::optional<double> feature_value(const FeatureVector& f, std::size_t i);
void set_feature(FeatureVector& f, std::size_t i, std::optional<double> v);

// Entity with its titles and names pre-tokenized, so pairwise scoring
// doesn't re-run normalization.
struct PreparedEntity {
    std::vector<std::vector<std::string>> title_tokens;
    std::vector<std::vector<std::string>> cast_tokens;
    std::vector<std::vector<std::string>> director_tokens;
    std::optional<int> year;
    std::optional<int> runtime;
};

PreparedEntity prepare_entity(const Entity& e, const Tokenizer& tok);

// Similarity of two token sequences: 1 when identical, otherwise the
// shared fraction of distinct tokens discounted by title_discount.
double token_sequence_score(const std::vector<std::string>& a, const std::vector<std::string>& b,
                            const FeatureParams& p);

// Best score over all title pairs of the two entities.
double score_title(const PreparedEntity& a, const PreparedEntity& b, const FeatureParams& p);

std::optional<double> score_year(std::optional<int> a, std::optional<int> b,
                                 const FeatureParams& p);
std::optional<double> score_runtime(std::optional<int> a, std::optional<int> b,
                                    const FeatureParams& p);

// Greedy one-to-one name alignment over tokenized name lists: full
// matches first (whole token sequence equal, credit 1), then surname
// matches (last token equal, credit partial_name_credit), each name
// consumed at most once. Returns the total credit, uncapped.
double align_names(const std::vector<std::vector<std::string>>& a,
                   const std::vector<std::vector<std::string>>& b, const FeatureParams& p);

double score_cast(const PreparedEntity& a, const PreparedEntity& b, const FeatureParams& p);
double score_directors(const PreparedEntity& a, const PreparedEntity& b, const FeatureParams& p);

FeatureVector feature_vector(const PreparedEntity& a, const PreparedEntity& b,
                             const FeatureParams& p);
FeatureVector feature_vector(const Entity& a, const Entity& b, const Tokenizer& tok,
                             const FeatureParams& p);

// One scored candidate: ids, the feature vector, and the combined
// score once a model has been applied.
struct ScoresRow {
    std::string left;
    std::string right;
    FeatureVector features;
    std::optional<double> score;
};

// CSV with header id1,id2,cast,title,year,directors,runtime,score;
// absent values serialize as empty fields.
std::vector<ScoresRow> read_scores_csv(std::istream& in);
void write_scores_csv(std::ostream& out, const std::vector<ScoresRow>& rows);

}  // namespace onematch
