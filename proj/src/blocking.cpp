#include "onematch/blocking.hpp"

#include <algorithm>
#include <unordered_set>

#include "onematch/errors.hpp"
#include "onematch/text.hpp"

namespace onematch {

std::vector<std::string> Tokenizer::default_stopwords() {
    return {"a", "an", "and", "at", "for", "in", "of", "on", "the", "to", "&"};
}

Tokenizer::Tokenizer(const std::vector<std::string>& stopwords) {
    for (const auto& w : stopwords) stopwords_.insert(ascii_lower(w));
}

std::vector<std::string> Tokenizer::normalize_tokens(std::string_view title) const {
    std::vector<std::string> out;
    bool dropped_stopword = false;
    for (const auto& word : split_whitespace(title)) {
        if (stopwords_.count(ascii_lower(word))) {
            dropped_stopword = true;
            continue;
        }
        std::string folded = fold_word(word);
        if (folded.empty()) continue;
        if (stopwords_.count(folded)) {
            dropped_stopword = true;
            continue;
        }
        out.push_back(std::move(folded));
    }
    if (out.empty())
        out.push_back(std::string(dropped_stopword ? kStopwordsOnly : kEmptyNormalizedTitle));
    return out;
}

std::vector<std::string> Tokenizer::name_tokens(std::string_view name) {
    std::vector<std::string> out;
    for (const auto& word : split_whitespace(name)) {
        std::string folded = fold_word(word);
        if (!folded.empty()) out.push_back(std::move(folded));
    }
    return out;
}

TokenIndex build_index(const Dataset& d, const Tokenizer& tok) {
    if (d.entities().empty()) throw Error("blocking", "EmptyDataset", d.name());
    TokenIndex idx;
    idx.side_ = d.side();
    idx.entity_count_ = d.entities().size();
    for (std::uint32_t h = 0; h < d.entities().size(); ++h) {
        for (const auto& title : d.entities()[h].titles) {
            for (auto& t : tok.normalize_tokens(title)) idx.postings_[std::move(t)].push_back(h);
        }
    }
    for (auto& [token, handles] : idx.postings_) {
        std::sort(handles.begin(), handles.end());
        handles.erase(std::unique(handles.begin(), handles.end()), handles.end());
    }
    return idx;
}

namespace {

// Packs a pair for hash-set dedup while the per-token loops run.
inline std::uint64_t pack(std::uint32_t a, std::uint32_t b) {
    return (static_cast<std::uint64_t>(a) << 32) | b;
}

CandidatePairSet collect_pairs(const TokenIndex& left, const TokenIndex& right, bool within,
                               const BlockingOptions& options) {
    CandidatePairSet out;
    std::unordered_set<std::uint64_t> seen;
    auto rit = right.postings().begin();
    for (const auto& [token, lpost] : left.postings()) {
        const std::vector<std::uint32_t>* rpost = nullptr;
        if (within) {
            rpost = &lpost;
        } else {
            // Both maps are sorted, so one cursor suffices on the right.
            while (rit != right.postings().end() && rit->first < token) ++rit;
            if (rit == right.postings().end()) break;
            if (rit->first != token) continue;
            rpost = &rit->second;
        }

        std::size_t cross = lpost.size() * rpost->size();
        if (options.max_pairs_per_token > 0 && cross > options.max_pairs_per_token) {
            out.skipped_tokens.push_back(token);
            continue;
        }
        for (std::uint32_t a : lpost) {
            for (std::uint32_t b : *rpost) {
                if (within && b <= a) continue;
                if (seen.insert(pack(a, b)).second)
                    out.pairs.push_back({a, b});
                if (options.collect_provenance) {
                    auto& toks = out.provenance[{a, b}];
                    if (toks.empty() || toks.back() != token) toks.push_back(token);
                }
            }
        }
    }
    std::sort(out.pairs.begin(), out.pairs.end());
    return out;
}

}  // namespace

CandidatePairSet candidate_pairs(const TokenIndex& left, const TokenIndex& right,
                                 const BlockingOptions& options) {
    if (left.side() != Side::Left || right.side() != Side::Right)
        throw Error("blocking", "SideMismatch",
                    "candidate_pairs expects a left index and a right index");
    return collect_pairs(left, right, false, options);
}

CandidatePairSet candidate_pairs_within(const TokenIndex& index, const BlockingOptions& options) {
    return collect_pairs(index, index, true, options);
}

}  // namespace onematch
