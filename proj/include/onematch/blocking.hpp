#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "onematch/model.hpp"

namespace onematch {

// Tokens standing in for titles that normalize to nothing, or to
// stopwords only. They participate in blocking like ordinary tokens, so
// two such titles still end up in a common block.
inline constexpr std::string_view kEmptyNormalizedTitle = "EMPTY_NORMALIZED_TITLE";
inline constexpr std::string_view kStopwordsOnly = "STOPWORDS_ONLY";

// Title tokenizer: lowercase, fold diacritics, strip punctuation, split
// on whitespace, drop stopwords. A word counts as a stopword if either
// its raw lowercase form or its normalized form is in the list (the raw
// check lets symbol stopwords like "&" fire before punctuation
// stripping erases them).
class Tokenizer {
public:
    Tokenizer() : Tokenizer(default_stopwords()) {}
    explicit Tokenizer(const std::vector<std::string>& stopwords);

    // Normalized non-stopword tokens of a title, in order, duplicates
    // preserved. Never empty: titles with no normalizable words yield
    // [EMPTY_NORMALIZED_TITLE]; titles whose words are all stopwords
    // yield [STOPWORDS_ONLY] (which wins when both conditions hold).
    std::vector<std::string> normalize_tokens(std::string_view title) const;

    // Normalized tokens of a person name: no stopword removal, no
    // special tokens. May be empty.
    static std::vector<std::string> name_tokens(std::string_view name);

    static std::vector<std::string> default_stopwords();

private:
    std::unordered_set<std::string> stopwords_;
};

// Inverted index from normalized title token to the sorted handles of
// the entities posted under it. Immutable after build.
class TokenIndex {
public:
    using Postings = std::map<std::string, std::vector<std::uint32_t>>;

    const Postings& postings() const { return postings_; }
    Side side() const { return side_; }
    std::size_t entity_count() const { return entity_count_; }

    friend TokenIndex build_index(const Dataset& d, const Tokenizer& tok);

private:
    Postings postings_;
    Side side_ = Side::Left;
    std::size_t entity_count_ = 0;
};

// Posts every entity under every token of every one of its titles.
// Requires a non-empty dataset.
TokenIndex build_index(const Dataset& d, const Tokenizer& tok);

struct BlockingOptions {
    // Skip tokens whose posting lists would cross this many pairs;
    // 0 means no cap.
    std::size_t max_pairs_per_token = 0;
    bool collect_provenance = false;
};

struct CandidatePair {
    std::uint32_t left;
    std::uint32_t right;

    bool operator==(const CandidatePair&) const = default;
    auto operator<=>(const CandidatePair&) const = default;
};

struct CandidatePairSet {
    std::vector<CandidatePair> pairs;  // sorted by (left, right), unique
    // token(s) that caused each pair; filled only when requested
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::vector<std::string>> provenance;
    std::vector<std::string> skipped_tokens;  // tokens dropped by the cap
};

// Exactly the cross pairs sharing at least one index token. Pairs not
// returned are implicitly scored zero downstream.
CandidatePairSet candidate_pairs(const TokenIndex& left, const TokenIndex& right,
                                 const BlockingOptions& options = {});

// Within-dataset variant for duplicate scanning: pairs (a, b) with
// a < b sharing a token.
CandidatePairSet candidate_pairs_within(const TokenIndex& index,
                                        const BlockingOptions& options = {});

}  // namespace onematch
