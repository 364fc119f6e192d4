#include "onematch/matchers.hpp"

#include <algorithm>
#include <limits>
#include <unordered_map>

#include "onematch/errors.hpp"

namespace onematch {

namespace {

void check_edges(const std::vector<GraphEdge>& edges, std::size_t nl, std::size_t nr) {
    for (const auto& e : edges) {
        if (e.left >= nl || e.right >= nr)
            throw Error("matchers", "InvalidEdge",
                        "(" + std::to_string(e.left) + "," + std::to_string(e.right) +
                            ") out of range");
        if (!(e.score > 0.0 && e.score < 1.0))
            throw Error("matchers", "InvalidScore",
                        "edge (" + std::to_string(e.left) + "," + std::to_string(e.right) +
                            ") score must lie in (0,1)");
    }
    for (std::size_t i = 1; i < edges.size(); ++i) {
        if (edges[i - 1].left == edges[i].left && edges[i - 1].right == edges[i].right)
            throw Error("matchers", "DuplicateEdge",
                        "(" + std::to_string(edges[i].left) + "," + std::to_string(edges[i].right) +
                            ")");
    }
}

bool edge_key_less(const GraphEdge& a, const GraphEdge& b) {
    return a.left != b.left ? a.left < b.left : a.right < b.right;
}

MatchedPair to_pair(const ScoredGraph& g, const GraphEdge& e) {
    return {g.left_ids[e.left], g.right_ids[e.right], e.score};
}

}  // namespace

ScoredGraph make_graph(std::size_t left_size, std::size_t right_size,
                       std::vector<GraphEdge> edges) {
    ScoredGraph g;
    g.left_ids.reserve(left_size);
    for (std::size_t i = 0; i < left_size; ++i) g.left_ids.push_back("L" + std::to_string(i));
    g.right_ids.reserve(right_size);
    for (std::size_t i = 0; i < right_size; ++i) g.right_ids.push_back("R" + std::to_string(i));
    std::sort(edges.begin(), edges.end(), edge_key_less);
    check_edges(edges, left_size, right_size);
    g.edges = std::move(edges);
    return g;
}

ScoredGraph graph_from_scores(const std::vector<MatchedPair>& scored) {
    ScoredGraph g;
    for (const auto& p : scored) {
        if (p.score == 0.0) continue;  // unblocked pair, not an edge
        g.left_ids.push_back(p.left);
        g.right_ids.push_back(p.right);
    }
    auto dedup = [](std::vector<std::string>& v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    };
    dedup(g.left_ids);
    dedup(g.right_ids);
    std::unordered_map<std::string, std::uint32_t> lh, rh;
    for (std::uint32_t i = 0; i < g.left_ids.size(); ++i) lh[g.left_ids[i]] = i;
    for (std::uint32_t i = 0; i < g.right_ids.size(); ++i) rh[g.right_ids[i]] = i;
    for (const auto& p : scored) {
        if (p.score == 0.0) continue;
        g.edges.push_back({lh[p.left], rh[p.right], p.score});
    }
    std::sort(g.edges.begin(), g.edges.end(), edge_key_less);
    check_edges(g.edges, g.left_size(), g.right_size());
    return g;
}

Matching many_many(const ScoredGraph& g, double theta) {
    Matching m;
    m.constrained = false;
    for (const auto& e : g.edges)
        if (e.score >= theta) m.pairs.push_back(to_pair(g, e));
    return m;
}

Matching first_choice(const ScoredGraph& g, double theta, Direction direction) {
    // Edges are sorted by (left, right), so keeping the first strict
    // maximum realizes the smaller-counterpart tie-break on both sides.
    std::size_t n = direction == Direction::LeftToRight ? g.left_size() : g.right_size();
    std::vector<std::int64_t> best(n, -1);
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        const auto& e = g.edges[i];
        if (e.score < theta) continue;
        std::uint32_t node = direction == Direction::LeftToRight ? e.left : e.right;
        if (best[node] < 0 || e.score > g.edges[best[node]].score) best[node] = i;
    }
    std::vector<std::int64_t> chosen;
    for (auto i : best)
        if (i >= 0) chosen.push_back(i);
    std::sort(chosen.begin(), chosen.end());  // = (left, right) order

    Matching m;
    m.constrained = false;
    for (auto i : chosen) m.pairs.push_back(to_pair(g, g.edges[i]));
    return m;
}

Matching mutual_first_choice(const ScoredGraph& g, double theta) {
    std::vector<std::int64_t> best_l(g.left_size(), -1), best_r(g.right_size(), -1);
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        const auto& e = g.edges[i];
        if (e.score < theta) continue;
        if (best_l[e.left] < 0 || e.score > g.edges[best_l[e.left]].score)
            best_l[e.left] = i;
        if (best_r[e.right] < 0 || e.score > g.edges[best_r[e.right]].score)
            best_r[e.right] = i;
    }
    Matching m;
    m.constrained = true;
    for (std::uint32_t l = 0; l < g.left_size(); ++l) {
        auto i = best_l[l];
        if (i >= 0 && best_r[g.edges[i].right] == i) m.pairs.push_back(to_pair(g, g.edges[i]));
    }
    return m;
}

Matching greedy(const ScoredGraph& g, double theta) {
    std::vector<std::uint32_t> order;
    for (std::uint32_t i = 0; i < g.edges.size(); ++i)
        if (g.edges[i].score >= theta) order.push_back(i);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (g.edges[a].score != g.edges[b].score) return g.edges[a].score > g.edges[b].score;
        return a < b;  // edge indices are already in (left, right) order
    });
    std::vector<char> used_l(g.left_size(), 0), used_r(g.right_size(), 0);
    std::vector<std::uint32_t> taken;
    for (auto i : order) {
        const auto& e = g.edges[i];
        if (used_l[e.left] || used_r[e.right]) continue;
        used_l[e.left] = used_r[e.right] = 1;
        taken.push_back(i);
    }
    std::sort(taken.begin(), taken.end());
    Matching m;
    m.constrained = true;
    for (auto i : taken) m.pairs.push_back(to_pair(g, g.edges[i]));
    return m;
}

namespace {

struct Component {
    std::vector<std::uint32_t> lefts;   // global handles, ascending
    std::vector<std::uint32_t> rights;
    std::vector<std::vector<std::pair<std::uint32_t, double>>> adj;  // local left -> (local right, w)
};

struct DisjointSet {
    std::vector<std::uint32_t> parent;
    explicit DisjointSet(std::size_t n) : parent(n) {
        for (std::size_t i = 0; i < n; ++i) parent[i] = static_cast<std::uint32_t>(i);
    }
    std::uint32_t find(std::uint32_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(std::uint32_t a, std::uint32_t b) { parent[find(a)] = find(b); }
};

std::vector<Component> split_components(const ScoredGraph& g, double theta,
                                        const MaxWeightOptions& options) {
    DisjointSet ds(g.left_size() + g.right_size());
    for (const auto& e : g.edges)
        if (e.score >= theta)
            ds.unite(e.left, static_cast<std::uint32_t>(g.left_size()) + e.right);

    std::unordered_map<std::uint32_t, std::uint32_t> root_to_comp;
    std::vector<Component> comps;
    auto comp_of = [&](std::uint32_t node) -> Component& {
        std::uint32_t root = ds.find(node);
        auto [it, fresh] = root_to_comp.try_emplace(root, static_cast<std::uint32_t>(comps.size()));
        if (fresh) comps.emplace_back();
        return comps[it->second];
    };
    // First pass assigns nodes in handle order so each component's node
    // lists come out ascending.
    for (const auto& e : g.edges)
        if (e.score >= theta) {
            Component& c = comp_of(e.left);
            if (c.lefts.empty() || c.lefts.back() != e.left) c.lefts.push_back(e.left);
        }
    for (const auto& e : g.edges)
        if (e.score >= theta) {
            Component& c = comp_of(e.left);
            c.rights.push_back(e.right);
        }
    for (auto& c : comps) {
        std::sort(c.rights.begin(), c.rights.end());
        c.rights.erase(std::unique(c.rights.begin(), c.rights.end()), c.rights.end());
        if (c.lefts.size() + c.rights.size() > options.component_node_cap)
            throw Error("matchers", "InstanceTooLarge",
                        "component has " + std::to_string(c.lefts.size() + c.rights.size()) +
                            " nodes, cap " + std::to_string(options.component_node_cap));
        c.adj.resize(c.lefts.size());
    }
    for (const auto& e : g.edges) {
        if (e.score < theta) continue;
        Component& c = comp_of(e.left);
        auto lit = std::lower_bound(c.lefts.begin(), c.lefts.end(), e.left);
        auto rit = std::lower_bound(c.rights.begin(), c.rights.end(), e.right);
        c.adj[lit - c.lefts.begin()].push_back(
            {static_cast<std::uint32_t>(rit - c.rights.begin()), e.score});
    }
    return comps;
}

// Successive shortest augmenting paths with dual potentials on one
// component. Keeps u[l] + v[r] >= w feasible and matched edges tight;
// a phase ends either by augmenting into an unmatched right node or by
// letting some tree node's potential hit zero (that node then stays
// unmatched, which the duals certify as optimal).
struct ComponentSolution {
    std::vector<int> match_l;  // local right index or -1
    std::vector<double> u, v;
};

ComponentSolution solve_component(const Component& c) {
    const std::size_t nl = c.lefts.size(), nr = c.rights.size();
    const double inf = std::numeric_limits<double>::infinity();

    ComponentSolution out;
    out.u.assign(nl, 0.0);
    out.v.assign(nr, 0.0);
    out.match_l.assign(nl, -1);
    std::vector<int> match_r(nr, -1);
    auto& u = out.u;
    auto& v = out.v;
    auto& match_l = out.match_l;

    for (std::size_t l = 0; l < nl; ++l)
        for (auto [r, w] : c.adj[l]) u[l] = std::max(u[l], w);

    std::vector<char> in_tree_l(nl), in_tree_r(nr);
    std::vector<double> slack(nr);
    std::vector<int> slack_parent(nr);
    std::vector<std::uint32_t> tree_l, tree_r;

    // Re-matches along the alternating tree, giving r to its tree
    // parent and cascading until the phase root takes its new partner.
    auto rotate_from = [&](int r) {
        for (;;) {
            int l = slack_parent[r];
            int r_prev = match_l[l];
            match_l[l] = r;
            match_r[r] = l;
            if (r_prev < 0) break;
            r = r_prev;
        }
    };

    for (std::uint32_t s = 0; s < nl; ++s) {
        std::fill(in_tree_l.begin(), in_tree_l.end(), 0);
        std::fill(in_tree_r.begin(), in_tree_r.end(), 0);
        std::fill(slack.begin(), slack.end(), inf);
        std::fill(slack_parent.begin(), slack_parent.end(), -1);
        tree_l.assign(1, s);
        tree_r.clear();
        in_tree_l[s] = 1;
        for (auto [r, w] : c.adj[s]) {
            double sl = u[s] + v[r] - w;
            if (sl < slack[r]) {
                slack[r] = sl;
                slack_parent[r] = static_cast<int>(s);
            }
        }
        for (;;) {
            double delta_edge = inf;
            int r_star = -1;
            for (std::uint32_t r = 0; r < nr; ++r)
                if (!in_tree_r[r] && slack[r] < delta_edge) {
                    delta_edge = slack[r];
                    r_star = static_cast<int>(r);
                }
            double delta_skip = inf;
            int l_star = -1;
            for (auto l : tree_l)
                if (u[l] < delta_skip) {
                    delta_skip = u[l];
                    l_star = static_cast<int>(l);
                }
            // Rounding drift can push a slack a hair below zero; such an
            // edge is simply tight, so the step clamps at zero.
            double delta = std::max(std::min(delta_edge, delta_skip), 0.0);
            if (delta > 0.0) {
                for (auto l : tree_l) u[l] -= delta;
                for (auto r : tree_r) v[r] += delta;
                for (std::uint32_t r = 0; r < nr; ++r)
                    if (!in_tree_r[r] && slack[r] < inf) slack[r] -= delta;
            }
            if (delta_skip <= delta_edge) {
                // u[l_star] reached zero: leave l_star unmatched and, if
                // it held a partner, pass that partner up the tree.
                int r_give = match_l[l_star];
                match_l[l_star] = -1;
                if (r_give >= 0) rotate_from(r_give);
                break;
            }
            if (match_r[r_star] < 0) {
                rotate_from(r_star);  // augmenting path: s gains a partner
                break;
            }
            int l_new = match_r[r_star];
            in_tree_r[r_star] = 1;
            tree_r.push_back(static_cast<std::uint32_t>(r_star));
            in_tree_l[l_new] = 1;
            tree_l.push_back(static_cast<std::uint32_t>(l_new));
            for (auto [r, w] : c.adj[l_new]) {
                if (in_tree_r[r]) continue;
                double sl = u[l_new] + v[r] - w;
                if (sl < slack[r]) {
                    slack[r] = sl;
                    slack_parent[r] = l_new;
                }
            }
        }
    }
    return out;
}

}  // namespace

MaxWeightCertificate max_weight_with_certificate(const ScoredGraph& g, double theta,
                                                 const MaxWeightOptions& options) {
    MaxWeightCertificate cert;
    cert.left_potential.assign(g.left_size(), 0.0);
    cert.right_potential.assign(g.right_size(), 0.0);
    cert.matching.constrained = true;

    std::vector<GraphEdge> taken;
    for (const auto& comp : split_components(g, theta, options)) {
        ComponentSolution sol = solve_component(comp);
        for (std::size_t i = 0; i < comp.lefts.size(); ++i)
            cert.left_potential[comp.lefts[i]] = sol.u[i];
        for (std::size_t j = 0; j < comp.rights.size(); ++j)
            cert.right_potential[comp.rights[j]] = sol.v[j];
        for (std::size_t i = 0; i < comp.lefts.size(); ++i) {
            int j = sol.match_l[i];
            if (j < 0) continue;
            double w = 0.0;
            for (auto [r, score] : comp.adj[i])
                if (static_cast<int>(r) == j) w = score;
            taken.push_back({comp.lefts[i], comp.rights[j], w});
        }
    }
    std::sort(taken.begin(), taken.end(), edge_key_less);
    for (const auto& e : taken) cert.matching.pairs.push_back(to_pair(g, e));
    return cert;
}

Matching max_weight(const ScoredGraph& g, double theta, const MaxWeightOptions& options) {
    return max_weight_with_certificate(g, theta, options).matching;
}

namespace {

// Exhaustive search state for the oracle: depth-first over the nodes of
// one side in ascending handle order, each node either skipping or
// taking a free partner.
struct BruteState {
    const std::vector<std::uint32_t>* nodes;  // iterated side, ascending
    std::vector<std::vector<std::pair<std::uint32_t, double>>> adj;  // per node: partners
    std::vector<double> suffix_best;
    std::vector<char> used;  // partner side occupancy, indexed by handle
    bool transposed = false;

    std::vector<std::pair<std::uint32_t, std::uint32_t>> current;  // (l, r)
    double current_weight = 0.0;
    bool has_best = false;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> best;
    double best_weight = 0.0;
};

void brute_dfs(BruteState& st, std::size_t i) {
    if (st.current_weight + st.suffix_best[i] < st.best_weight) return;
    if (i == st.nodes->size()) {
        auto pairs = st.current;
        if (st.transposed)
            for (auto& p : pairs) std::swap(p.first, p.second);
        std::sort(pairs.begin(), pairs.end());
        if (!st.has_best || st.current_weight > st.best_weight ||
            (st.current_weight == st.best_weight && pairs < st.best)) {
            st.has_best = true;
            st.best_weight = st.current_weight;
            st.best = std::move(pairs);
        }
        return;
    }
    for (auto [partner, w] : st.adj[i]) {
        if (st.used[partner]) continue;
        st.used[partner] = 1;
        st.current.push_back({(*st.nodes)[i], partner});
        st.current_weight += w;
        brute_dfs(st, i + 1);
        st.current_weight -= w;
        st.current.pop_back();
        st.used[partner] = 0;
    }
    brute_dfs(st, i + 1);  // leave node i unmatched
}

}  // namespace

Matching brute_force_max_weight(const ScoredGraph& g, double theta, std::size_t side_cap) {
    std::vector<GraphEdge> qual;
    for (const auto& e : g.edges)
        if (e.score >= theta) qual.push_back(e);

    std::vector<std::uint32_t> lefts, rights;
    for (const auto& e : qual) {
        lefts.push_back(e.left);
        rights.push_back(e.right);
    }
    auto dedup = [](std::vector<std::uint32_t>& v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    };
    dedup(lefts);
    dedup(rights);
    if (std::min(lefts.size(), rights.size()) > side_cap)
        throw Error("matchers", "InstanceTooLarge",
                    "smaller side has " + std::to_string(std::min(lefts.size(), rights.size())) +
                        " nodes, cap " + std::to_string(side_cap));

    // Iterate the smaller side to bound the search depth.
    BruteState st;
    st.transposed = rights.size() < lefts.size();
    const auto& nodes = st.transposed ? rights : lefts;
    st.nodes = &nodes;
    st.adj.resize(nodes.size());
    std::unordered_map<std::uint32_t, std::size_t> node_pos;
    for (std::size_t i = 0; i < nodes.size(); ++i) node_pos[nodes[i]] = i;
    std::size_t partner_span = 0;
    for (const auto& e : qual) {
        std::uint32_t node = st.transposed ? e.right : e.left;
        std::uint32_t partner = st.transposed ? e.left : e.right;
        st.adj[node_pos[node]].push_back({partner, e.score});
        partner_span = std::max<std::size_t>(partner_span, partner + 1);
    }
    st.used.assign(partner_span, 0);
    st.suffix_best.assign(nodes.size() + 1, 0.0);
    for (std::size_t i = nodes.size(); i-- > 0;) {
        double best = 0.0;
        for (auto [partner, w] : st.adj[i]) best = std::max(best, w);
        st.suffix_best[i] = st.suffix_best[i + 1] + best;
    }

    brute_dfs(st, 0);

    Matching m;
    m.constrained = true;
    std::unordered_map<std::uint64_t, double> score_of;
    for (const auto& e : qual)
        score_of[(static_cast<std::uint64_t>(e.left) << 32) | e.right] = e.score;
    for (const auto& [l, r] : st.best)
        m.pairs.push_back(
            {g.left_ids[l], g.right_ids[r], score_of[(static_cast<std::uint64_t>(l) << 32) | r]});
    return m;
}

}  // namespace onematch
