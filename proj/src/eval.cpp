#include "onematch/eval.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "onematch/errors.hpp"
#include "onematch/features.hpp"

namespace onematch {

namespace {

using PairsByEndpoint = std::unordered_map<std::string, std::vector<std::string>>;

}  // namespace

OutcomeCounts count_outcomes(const Matching& m, const TruthSet& t, FpMode mode) {
    PairsByEndpoint pos_by_left, pos_by_right;
    for (const auto& p : t.positives) {
        pos_by_left[p.left].push_back(p.right);
        pos_by_right[p.right].push_back(p.left);
    }

    IdPairSet predicted;
    for (const auto& p : m.pairs) predicted.insert({p.left, p.right});

    OutcomeCounts c;
    for (const auto& p : t.positives)
        if (predicted.count(p)) ++c.tp;
    c.fn = static_cast<long long>(t.positives.size()) - c.tp;

    for (const auto& mp : m.pairs) {
        IdPair p{mp.left, mp.right};
        bool neg = t.is_negative(p);
        bool left_inferred = false;
        if (auto it = pos_by_left.find(p.left); it != pos_by_left.end())
            for (const auto& z : it->second)
                if (z != p.right) {
                    left_inferred = true;
                    break;
                }
        bool right_inferred = false;
        if (auto it = pos_by_right.find(p.right); it != pos_by_right.end())
            for (const auto& z : it->second)
                if (z != p.left) {
                    right_inferred = true;
                    break;
                }
        if (neg) ++c.fp_truth_negative;
        if (left_inferred) ++c.fp_left_inferred;
        if (right_inferred) ++c.fp_right_inferred;
        if (mode == FpMode::Literal)
            c.fp += (neg ? 1 : 0) + (left_inferred ? 1 : 0) + (right_inferred ? 1 : 0);
        else
            c.fp += (neg || left_inferred || right_inferred) ? 1 : 0;
    }
    return c;
}

OutcomeCounts count_outcomes(const Matching& m, const TruthSet& t, const Dataset& left,
                             const Dataset& right, FpMode mode) {
    auto check = [&](const std::string& l, const std::string& r) {
        if (!left.handle_of(l)) throw Error("model", "DanglingReference", l);
        if (!right.handle_of(r)) throw Error("model", "DanglingReference", r);
    };
    for (const auto& p : m.pairs) check(p.left, p.right);
    for (const auto& p : t.positives) check(p.left, p.right);
    for (const auto& p : t.negatives) check(p.left, p.right);
    return count_outcomes(m, t, mode);
}

double precision(const OutcomeCounts& c) {
    long long denom = c.tp + c.fp;
    if (denom == 0) return 1.0;
    return static_cast<double>(c.tp) / static_cast<double>(denom);
}

double recall(const OutcomeCounts& c) {
    long long denom = c.tp + c.fn;
    if (denom == 0) return 1.0;
    return static_cast<double>(c.tp) / static_cast<double>(denom);
}

Matching run_matcher(const ScoredGraph& g, Algorithm algorithm, double theta,
                     Direction direction, const MaxWeightOptions& options) {
    switch (algorithm) {
        case Algorithm::ManyMany: return many_many(g, theta);
        case Algorithm::FirstChoice: return first_choice(g, theta, direction);
        case Algorithm::MutualFirstChoice: return mutual_first_choice(g, theta);
        case Algorithm::Greedy: return greedy(g, theta);
        case Algorithm::MaxWeight: return max_weight(g, theta, options);
    }
    throw Error("eval", "BadAlgorithm", std::to_string(static_cast<int>(algorithm)));
}

std::vector<PRPoint> pr_curve(const ScoredGraph& g, Algorithm algorithm, const TruthSet& t,
                              std::vector<double> thresholds, Direction direction, FpMode mode,
                              const MaxWeightOptions& options) {
    if (thresholds.empty()) throw Error("eval", "EmptyGrid", "threshold grid is empty");
    for (double th : thresholds)
        if (!(th >= 0.0 && th <= 1.0))
            throw Error("eval", "BadThreshold", "thresholds must lie in [0,1]");
    std::sort(thresholds.begin(), thresholds.end());
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

    std::vector<PRPoint> points;
    points.reserve(thresholds.size());
    for (double th : thresholds) {
        Matching m = run_matcher(g, algorithm, th, direction, options);
        PRPoint pt;
        pt.theta = th;
        pt.counts = count_outcomes(m, t, mode);
        pt.precision = precision(pt.counts);
        pt.recall = recall(pt.counts);
        pt.weight = m.total_weight();
        pt.size = m.pairs.size();
        points.push_back(pt);
    }
    return points;
}

std::vector<double> threshold_grid(double lo, double hi, double step) {
    if (!(step > 0.0)) throw Error("eval", "BadGrid", "step must be positive");
    if (!(lo <= hi)) throw Error("eval", "BadGrid", "lo must not exceed hi");
    std::vector<double> grid;
    for (int i = 0;; ++i) {
        double t = lo + i * step;
        if (t > hi + step * 1e-9) break;
        grid.push_back(std::min(t, hi));
    }
    return grid;
}

std::vector<double> thresholds_at_scores(const ScoredGraph& g) {
    std::vector<double> out;
    out.reserve(g.edges.size());
    for (const auto& e : g.edges) out.push_back(e.score);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<DedupeSample> self_duplicate_scan(const Dataset& d, const LogisticModel& model,
                                              const Tokenizer& tok, const FeatureParams& params,
                                              const DedupeScanSpec& spec,
                                              const BlockingOptions& blocking) {
    TokenIndex index = build_index(d, tok);
    CandidatePairSet cands = candidate_pairs_within(index, blocking);

    std::vector<PreparedEntity> prepared;
    prepared.reserve(d.entities().size());
    for (const auto& e : d.entities()) prepared.push_back(prepare_entity(e, tok));

    struct Scored {
        std::uint32_t a, b;
        double score;
    };
    std::vector<Scored> scored;
    scored.reserve(cands.pairs.size());
    for (const auto& p : cands.pairs) {
        FeatureVector f = feature_vector(prepared[p.left], prepared[p.right], params);
        scored.push_back({p.left, p.right, predict(model, f)});
    }
    std::sort(scored.begin(), scored.end(), [](const Scored& x, const Scored& y) {
        if (x.score != y.score) return x.score > y.score;
        if (x.a != y.a) return x.a < y.a;
        return x.b < y.b;
    });

    std::vector<DedupeSample> out;
    for (std::size_t rank = 1; rank <= scored.size(); ++rank) {
        bool keep = rank <= spec.head ||
                    (spec.stride > 0 && (rank - spec.head) % spec.stride == 0);
        if (!keep) continue;
        const Scored& s = scored[rank - 1];
        out.push_back({rank, d.entities()[s.a].id, d.entities()[s.b].id, s.score});
    }
    return out;
}

}  // namespace onematch
