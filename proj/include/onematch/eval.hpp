#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "onematch/combiner.hpp"
#include "onematch/matchers.hpp"
#include "onematch/model.hpp"

namespace onematch {

enum class FpMode {
    Literal,       // the three-term sum; one pair may count several times
    Deduplicated,  // each predicted pair counts at most one false positive
};

struct OutcomeCounts {
    long long tp = 0;
    long long fn = 0;
    long long fp = 0;
    // fp by kind; under Literal these sum to fp
    long long fp_truth_negative = 0;
    long long fp_left_inferred = 0;
    long long fp_right_inferred = 0;
};

// tp = |m ∩ T+|, fn = |T+ \ m|, and fp as the three-term sum: pairs in
// T-, pairs whose left endpoint is matched elsewhere in T+, pairs whose
// right endpoint is matched elsewhere in T+.
OutcomeCounts count_outcomes(const Matching& m, const TruthSet& t, FpMode mode = FpMode::Literal);

// Same, but every id in m and t must resolve in its dataset
// (model:DanglingReference otherwise).
OutcomeCounts count_outcomes(const Matching& m, const TruthSet& t, const Dataset& left,
                             const Dataset& right, FpMode mode = FpMode::Literal);

double precision(const OutcomeCounts& c);  // 0/0 -> 1
double recall(const OutcomeCounts& c);     // 0/0 -> 1

struct PRPoint {
    double theta = 0.0;
    OutcomeCounts counts;
    double precision = 1.0;
    double recall = 1.0;
    double weight = 0.0;    // total matching weight at this threshold
    std::size_t size = 0;   // matching size at this threshold
};

Matching run_matcher(const ScoredGraph& g, Algorithm algorithm, double theta,
                     Direction direction = Direction::LeftToRight,
                     const MaxWeightOptions& options = {});

// One point per threshold, matcher re-run per threshold, ordered by
// ascending theta. Grid values must lie in [0,1].
std::vector<PRPoint> pr_curve(const ScoredGraph& g, Algorithm algorithm,
                              const TruthSet& t, std::vector<double> thresholds,
                              Direction direction = Direction::LeftToRight,
                              FpMode mode = FpMode::Literal,
                              const MaxWeightOptions& options = {});

// Inclusive lo..hi grid in steps of `step`.
std::vector<double> threshold_grid(double lo, double hi, double step);
// Every distinct edge score, ascending.
std::vector<double> thresholds_at_scores(const ScoredGraph& g);

struct DedupeScanSpec {
    std::size_t head = 100;    // report every pair among the top `head`
    std::size_t stride = 100;  // then every stride-th pair
};

struct DedupeSample {
    std::size_t rank = 0;  // 1-based position in the descending order
    std::string id1;
    std::string id2;
    double score = 0.0;
};

// Blocks and scores a dataset against itself (excluding self-pairs;
// each unordered pair once), sorts descending, and samples ranks for
// hand inspection.
std::vector<DedupeSample> self_duplicate_scan(const Dataset& d, const LogisticModel& model,
                                              const Tokenizer& tok, const FeatureParams& params,
                                              const DedupeScanSpec& spec = {},
                                              const BlockingOptions& blocking = {});

}  // namespace onematch
