#include "onematch/pipeline.hpp"

#include <algorithm>
#include <thread>

#include "onematch/errors.hpp"

namespace onematch {

std::vector<ScoresRow> score_pairs(const Dataset& left, const Dataset& right,
                                   const std::vector<CandidatePair>& pairs, const Tokenizer& tok,
                                   const FeatureParams& params, const LogisticModel* model,
                                   int threads) {
    std::vector<PreparedEntity> pl, pr;
    pl.reserve(left.size());
    for (const auto& e : left.entities()) pl.push_back(prepare_entity(e, tok));
    pr.reserve(right.size());
    for (const auto& e : right.entities()) pr.push_back(prepare_entity(e, tok));

    std::vector<ScoresRow> rows(pairs.size());
    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const CandidatePair& p = pairs[i];
            ScoresRow& r = rows[i];
            r.left = left[p.left].id;
            r.right = right[p.right].id;
            r.features = feature_vector(pl[p.left], pr[p.right], params);
            if (model) r.score = predict(*model, r.features);
        }
    };
    if (threads <= 1 || pairs.size() < 2) {
        work(0, pairs.size());
    } else {
        std::size_t n = std::min<std::size_t>(static_cast<std::size_t>(threads), pairs.size());
        std::vector<std::thread> pool;
        std::size_t chunk = (pairs.size() + n - 1) / n;
        for (std::size_t t = 0; t < n; ++t) {
            std::size_t begin = t * chunk;
            std::size_t end = std::min(begin + chunk, pairs.size());
            if (begin >= end) break;
            pool.emplace_back(work, begin, end);
        }
        for (auto& th : pool) th.join();
    }
    return rows;
}

std::vector<ScoresRow> score_id_pairs(const Dataset& left, const Dataset& right,
                                      const std::vector<IdPair>& pairs, const Tokenizer& tok,
                                      const FeatureParams& params, const LogisticModel* model,
                                      int threads) {
    std::vector<CandidatePair> handles;
    handles.reserve(pairs.size());
    for (const auto& p : pairs) {
        auto l = left.handle_of(p.left);
        if (!l) throw Error("model", "DanglingReference", p.left);
        auto r = right.handle_of(p.right);
        if (!r) throw Error("model", "DanglingReference", p.right);
        handles.push_back(
            {static_cast<std::uint32_t>(*l), static_cast<std::uint32_t>(*r)});
    }
    return score_pairs(left, right, handles, tok, params, model, threads);
}

std::vector<LabeledExample> make_labeled_examples(const TruthSet& truth, const Dataset& left,
                                                  const Dataset& right, const Tokenizer& tok,
                                                  const FeatureParams& params) {
    // Deterministic example order: positives then negatives, id-sorted.
    auto sorted = [](const IdPairSet& s) {
        std::vector<IdPair> v(s.begin(), s.end());
        std::sort(v.begin(), v.end());
        return v;
    };
    std::vector<LabeledExample> out;
    auto add = [&](const std::vector<IdPair>& pairs, bool label) {
        for (const auto& p : pairs) {
            auto l = left.handle_of(p.left);
            if (!l) throw Error("model", "DanglingReference", p.left);
            auto r = right.handle_of(p.right);
            if (!r) throw Error("model", "DanglingReference", p.right);
            out.push_back({feature_vector(left[*l], right[*r], tok, params), label});
        }
    };
    add(sorted(truth.positives), true);
    add(sorted(truth.negatives), false);
    return out;
}

std::vector<MatchedPair> rows_to_matched_pairs(const std::vector<ScoresRow>& rows) {
    std::vector<MatchedPair> out;
    out.reserve(rows.size());
    for (const auto& r : rows) {
        if (!r.score)
            throw Error("features", "MissingScore", "(" + r.left + "," + r.right + ")");
        out.push_back({r.left, r.right, *r.score});
    }
    return out;
}

ScoredGraph build_scored_graph(const Dataset& left, const Dataset& right, const Tokenizer& tok,
                               const FeatureParams& params, const LogisticModel& model,
                               const BlockingOptions& blocking, int threads) {
    TokenIndex li = build_index(left, tok);
    TokenIndex ri = build_index(right, tok);
    CandidatePairSet cands = candidate_pairs(li, ri, blocking);
    auto rows = score_pairs(left, right, cands.pairs, tok, params, &model, threads);
    return graph_from_scores(rows_to_matched_pairs(rows));
}

}  // namespace onematch
