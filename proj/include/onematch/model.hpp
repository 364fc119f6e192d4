#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace onematch {

enum class Side { Left, Right };

inline const char* side_name(Side s) { return s == Side::Left ? "left" : "right"; }

// One row of a dataset. Optional attributes are represented as absent,
// never as sentinel values.
struct Entity {
    std::string id;
    std::vector<std::string> titles;  // at least one
    std::optional<int> year;
    std::optional<int> runtime;  // minutes, >= 0
    std::vector<std::string> cast;
    std::vector<std::string> directors;

    bool operator==(const Entity&) const = default;
};

// Immutable after construction. Entities are addressed by dense handles
// (indices); string ids only matter at the I/O boundary.
class Dataset {
public:
    Dataset() = default;
    Dataset(std::string name, Side side, std::vector<Entity> entities);

    const std::string& name() const { return name_; }
    Side side() const { return side_; }
    const std::vector<Entity>& entities() const { return entities_; }
    std::size_t size() const { return entities_.size(); }
    const Entity& operator[](std::size_t handle) const { return entities_[handle]; }

    // Handle for an id, or nullopt if unknown.
    std::optional<std::size_t> handle_of(const std::string& id) const;

    bool operator==(const Dataset& other) const {
        return name_ == other.name_ && side_ == other.side_ && entities_ == other.entities_;
    }

private:
    std::string name_;
    Side side_ = Side::Left;
    std::vector<Entity> entities_;
    std::unordered_map<std::string, std::size_t> by_id_;
};

struct IdPair {
    std::string left;
    std::string right;

    bool operator==(const IdPair&) const = default;
    auto operator<=>(const IdPair&) const = default;
};

struct IdPairHash {
    std::size_t operator()(const IdPair& p) const {
        std::size_t h = std::hash<std::string>{}(p.left);
        h ^= std::hash<std::string>{}(p.right) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }
};

using IdPairSet = std::unordered_set<IdPair, IdPairHash>;

// Labeled pairs for training and evaluation. When `complete` is set the
// truth is closed-world: every cross pair not in `positives` counts as a
// negative, and the `negatives` set is left empty.
struct TruthSet {
    IdPairSet positives;
    IdPairSet negatives;
    bool complete = false;

    bool is_positive(const IdPair& p) const { return positives.count(p) > 0; }
    bool is_negative(const IdPair& p) const {
        return complete ? positives.count(p) == 0 : negatives.count(p) > 0;
    }
};

struct MatchedPair {
    std::string left;
    std::string right;
    double score = 0.0;

    bool operator==(const MatchedPair&) const = default;
};

// A retrieved resolution. `constrained` records the producing algorithm's
// one-to-one promise; validate_matching checks it.
struct Matching {
    std::vector<MatchedPair> pairs;
    bool constrained = false;

    double total_weight() const {
        double w = 0.0;
        for (const auto& p : pairs) w += p.score;
        return w;
    }
};

struct MatchingViolation {
    Side side;                          // which side's id is shared
    std::string id;                     // the id matched more than once
    std::vector<std::string> partners;  // its counterpart ids
};

// Empty iff `m` satisfies the one-to-one invariant when constrained.
// Unconstrained matchings never produce violations.
std::vector<MatchingViolation> validate_matching(const Matching& m);

}  // namespace onematch
