#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "onematch/model.hpp"

namespace onematch {

struct GraphEdge {
    std::uint32_t left;
    std::uint32_t right;
    double score;  // in (0, 1); unscored pairs simply have no edge

    bool operator==(const GraphEdge&) const = default;
};

// Bipartite candidate graph with scores. Edges are kept sorted by
// (left, right); node handles index the id tables.
struct ScoredGraph {
    std::vector<std::string> left_ids;
    std::vector<std::string> right_ids;
    std::vector<GraphEdge> edges;

    std::size_t left_size() const { return left_ids.size(); }
    std::size_t right_size() const { return right_ids.size(); }
};

// Builds a graph over anonymous handles (ids L0.., R0..). Validates
// bounds, score range, and duplicate edges.
ScoredGraph make_graph(std::size_t left_size, std::size_t right_size,
                       std::vector<GraphEdge> edges);

// Builds a graph from scored id pairs. Handles are assigned by
// lexicographic id order, so the graph is independent of row order.
// Zero scores mean "not a candidate" and are dropped.
ScoredGraph graph_from_scores(const std::vector<MatchedPair>& scored);

enum class Algorithm { ManyMany, FirstChoice, MutualFirstChoice, Greedy, MaxWeight };
enum class Direction { LeftToRight, RightToLeft };

// All matchers keep exactly the edges with score >= theta in play and
// break score ties toward the smaller handle. Outputs are sorted by
// (left, right) handle.

// Every qualifying edge; the only unconstrained matcher.
Matching many_many(const ScoredGraph& g, double theta);

// Each node on the scanning side keeps its single best qualifying edge.
// One-to-one is not guaranteed: several nodes may pick the same partner.
Matching first_choice(const ScoredGraph& g, double theta,
                      Direction direction = Direction::LeftToRight);

// Edges that are the first choice of both endpoints; always one-to-one.
Matching mutual_first_choice(const ScoredGraph& g, double theta);

// Scan qualifying edges by descending score, keep those whose endpoints
// are still free.
Matching greedy(const ScoredGraph& g, double theta);

struct MaxWeightOptions {
    // Refuse connected components with more nodes than this.
    std::size_t component_node_cap = 1000000;
};

// Maximum-weight bipartite matching over qualifying edges (successive
// shortest augmenting paths with dual potentials, per connected
// component). Deterministic; among equal-weight optima the particular
// matching depends on edge order, unlike the brute-force oracle.
Matching max_weight(const ScoredGraph& g, double theta, const MaxWeightOptions& options = {});

// Same matching plus the dual potentials that certify optimality:
//   u[l] + v[r] >= score(l, r) for every qualifying edge, u, v >= 0,
//   matched edges tight, unmatched nodes at zero potential.
struct MaxWeightCertificate {
    Matching matching;
    std::vector<double> left_potential;
    std::vector<double> right_potential;
};

MaxWeightCertificate max_weight_with_certificate(const ScoredGraph& g, double theta,
                                                 const MaxWeightOptions& options = {});

// Exhaustive maximum-weight matching for small instances; ties resolve
// to the lexicographically smallest sorted pair list. Requires the
// smaller side (nodes incident to qualifying edges) to have at most
// side_cap nodes, else matchers:InstanceTooLarge.
Matching brute_force_max_weight(const ScoredGraph& g, double theta, std::size_t side_cap = 10);

}  // namespace onematch
