#pragma once

#include <vector>

#include "onematch/blocking.hpp"
#include "onematch/combiner.hpp"
#include "onematch/eval.hpp"
#include "onematch/features.hpp"
#include "onematch/matchers.hpp"
#include "onematch/model.hpp"

namespace onematch {

// Feature-scores candidate handle pairs, optionally applying a trained
// model for the combined score. Row order follows the input pair order.
// With threads > 1 the work is chunked, but each result lands at its
// input index, so output is identical for every thread count.
std::vector<ScoresRow> score_pairs(const Dataset& left, const Dataset& right,
                                   const std::vector<CandidatePair>& pairs, const Tokenizer& tok,
                                   const FeatureParams& params,
                                   const LogisticModel* model = nullptr, int threads = 1);

// Id-pair variant (for pairs read back from a blocking file). Unknown
// ids raise model:DanglingReference.
std::vector<ScoresRow> score_id_pairs(const Dataset& left, const Dataset& right,
                                      const std::vector<IdPair>& pairs, const Tokenizer& tok,
                                      const FeatureParams& params,
                                      const LogisticModel* model = nullptr, int threads = 1);

// Feature vectors for explicitly labeled truth pairs (positives and
// negatives). Unknown ids raise model:DanglingReference.
std::vector<LabeledExample> make_labeled_examples(const TruthSet& truth, const Dataset& left,
                                                  const Dataset& right, const Tokenizer& tok,
                                                  const FeatureParams& params);

// Scored rows -> matched pairs for graph construction. Rows must carry
// a combined score (features:MissingScore otherwise).
std::vector<MatchedPair> rows_to_matched_pairs(const std::vector<ScoresRow>& rows);

// Convenience: block, score, and build the graph in one call.
ScoredGraph build_scored_graph(const Dataset& left, const Dataset& right, const Tokenizer& tok,
                               const FeatureParams& params, const LogisticModel& model,
                               const BlockingOptions& blocking = {}, int threads = 1);

}  // namespace onematch
