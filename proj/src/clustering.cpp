#include "ncdlab/clustering.hpp"

#include <algorithm>
#include <limits>
#include <unordered_map>

#include "ncdlab/error.hpp"
#include "ncdlab/rng.hpp"

namespace ncdlab {

std::vector<std::string> numbered_labels(std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(std::to_string(i));
    return out;
}

Dendrogram neighbor_joining(const NcdMatrix& m) {
    const auto n = m.size();
    if (n < 3) throw ValidationError("neighbor joining needs at least three items");
    m.check_symmetric();

    using Node = Dendrogram::Node;
    std::vector<Node> active(n);
    std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        active[i] = static_cast<Node>(i);
        for (std::size_t j = 0; j < n; ++j) d[i][j] = i == j ? 0.0 : m.at(i, j);
    }
    std::vector<std::pair<Node, Node>> edges;
    Node next = static_cast<Node>(n);

    while (active.size() > 3) {
        const auto r = active.size();
        std::vector<double> row_sum(r, 0.0);
        for (std::size_t i = 0; i < r; ++i) {
            for (std::size_t j = 0; j < r; ++j) row_sum[i] += d[i][j];
        }
        std::size_t bi = 0, bj = 1;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < r; ++i) {
            for (std::size_t j = i + 1; j < r; ++j) {
                const double q = static_cast<double>(r - 2) * d[i][j] - row_sum[i] - row_sum[j];
                if (q < best) {
                    best = q;
                    bi = i;
                    bj = j;
                }
            }
        }
        const Node u = next++;
        edges.emplace_back(active[bi], u);
        edges.emplace_back(active[bj], u);

        // The joined node takes slot bi; slot bj is removed.
        std::vector<double> du(r);
        for (std::size_t k = 0; k < r; ++k) du[k] = 0.5 * (d[bi][k] + d[bj][k] - d[bi][bj]);
        for (std::size_t k = 0; k < r; ++k) {
            d[bi][k] = d[k][bi] = (k == bi) ? 0.0 : du[k];
        }
        active[bi] = u;
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(bj));
        d.erase(d.begin() + static_cast<std::ptrdiff_t>(bj));
        for (auto& row : d) row.erase(row.begin() + static_cast<std::ptrdiff_t>(bj));
    }

    const Node centre = next++;
    for (auto a : active) edges.emplace_back(a, centre);

    std::vector<Node> leaf_nodes(n);
    for (std::size_t i = 0; i < n; ++i) leaf_nodes[i] = static_cast<Node>(i);
    return Dendrogram::from_edges(m.labels(), leaf_nodes, edges);
}

QuartetScorer::QuartetScorer(const NcdMatrix& m) : labels_(m.labels()) {
    const auto n = m.size();
    if (n > std::numeric_limits<std::uint16_t>::max()) throw ValidationError("too many leaves for quartet scoring");
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            for (std::size_t c = b + 1; c < n; ++c) {
                for (std::size_t d = c + 1; d < n; ++d) {
                    Quartet q{static_cast<std::uint16_t>(a), static_cast<std::uint16_t>(b),
                              static_cast<std::uint16_t>(c), static_cast<std::uint16_t>(d),
                              {m.at(a, b) + m.at(c, d), m.at(a, c) + m.at(b, d), m.at(a, d) + m.at(b, c)}};
                    best_ += std::min({q.cost[0], q.cost[1], q.cost[2]});
                    worst_ += std::max({q.cost[0], q.cost[1], q.cost[2]});
                    quartets_.push_back(q);
                }
            }
        }
    }
}

TreeScore QuartetScorer::score(const Dendrogram& t) const {
    const auto n = labels_.size();
    if (t.leaf_count() != n) throw ValidationError("tree and matrix have different leaf counts");

    // to_tree[matrix index] = tree leaf
    std::vector<std::size_t> to_tree(n);
    if (t.labels() == labels_) {
        for (std::size_t i = 0; i < n; ++i) to_tree[i] = i;
    } else {
        std::unordered_map<std::string_view, std::size_t> pos;
        for (std::size_t i = 0; i < n; ++i) pos.emplace(t.labels()[i], i);
        for (std::size_t i = 0; i < n; ++i) {
            const auto it = pos.find(labels_[i]);
            if (it == pos.end()) throw ValidationError("tree has no leaf labelled '" + labels_[i] + "'");
            to_tree[i] = it->second;
        }
    }

    const auto path = t.leaf_path_lengths();
    auto len = [&](std::size_t x, std::size_t y) { return path[to_tree[x] * n + to_tree[y]]; };

    double raw = 0.0;
    for (const auto& q : quartets_) {
        const int s0 = len(q.a, q.b) + len(q.c, q.d);
        const int s1 = len(q.a, q.c) + len(q.b, q.d);
        const int s2 = len(q.a, q.d) + len(q.b, q.c);
        // In a binary tree exactly one pairing has the strictly smallest sum.
        const int k = (s0 < s1 && s0 < s2) ? 0 : (s1 < s2 ? 1 : 2);
        raw += q.cost[k];
    }
    TreeScore s;
    s.raw = raw;
    s.normalized = worst_ > best_ ? (worst_ - raw) / (worst_ - best_) : 1.0;
    return s;
}

TreeScore quartet_score(const Dendrogram& t, const NcdMatrix& m) { return QuartetScorer(m).score(t); }

namespace {

using Node = Dendrogram::Node;

// Prune the subtree hanging from `v` on the far side of its internal
// neighbour `u`, and regraft it (still attached through u) onto a random
// edge of the remaining tree. Returns false when there is nowhere else to go.
bool prune_regraft(Dendrogram& t, Rng& rng) {
    const auto total = static_cast<Node>(t.node_count());
    const auto v = static_cast<Node>(uniform_below(rng, static_cast<std::uint64_t>(total)));
    Node u;
    if (t.is_leaf(v)) {
        u = t.neighbors(v)[0];
    } else {
        const auto nb = t.neighbors(v);
        std::vector<Node> internal;
        for (auto w : nb) {
            if (!t.is_leaf(w)) internal.push_back(w);
        }
        if (internal.empty()) return false;
        u = internal[uniform_below(rng, internal.size())];
    }

    Node a = Dendrogram::kNone, b = Dendrogram::kNone;
    for (auto w : t.neighbors(u)) {
        if (w == v) continue;
        (a == Dendrogram::kNone ? a : b) = w;
    }

    // Everything reachable from v without passing u belongs to the pruned part.
    std::vector<char> pruned(static_cast<std::size_t>(total), 0);
    pruned[static_cast<std::size_t>(u)] = 1;
    std::vector<Node> stack{v};
    pruned[static_cast<std::size_t>(v)] = 1;
    while (!stack.empty()) {
        const auto x = stack.back();
        stack.pop_back();
        for (auto w : t.neighbors(x)) {
            if (!pruned[static_cast<std::size_t>(w)]) {
                pruned[static_cast<std::size_t>(w)] = 1;
                stack.push_back(w);
            }
        }
    }

    // Edges of the remainder once u is spliced out; (a, b) is where the
    // subtree already sits, so it is excluded.
    std::vector<std::pair<Node, Node>> targets;
    for (Node x = 0; x < total; ++x) {
        if (pruned[static_cast<std::size_t>(x)]) continue;
        for (auto w : t.neighbors(x)) {
            if (w == u || pruned[static_cast<std::size_t>(w)] || w < x) continue;
            targets.emplace_back(x, w);
        }
    }
    if (targets.empty()) return false;
    const auto [x, y] = targets[uniform_below(rng, targets.size())];

    t.replace_neighbor(a, u, b);
    t.replace_neighbor(b, u, a);
    t.replace_neighbor(x, y, u);
    t.replace_neighbor(y, x, u);
    t.replace_neighbor(u, a, x);
    t.replace_neighbor(u, b, y);
    return true;
}

bool swap_random_leaves(Dendrogram& t, Rng& rng) {
    const auto n = t.leaf_count();
    const auto a = static_cast<Node>(uniform_below(rng, n));
    auto b = static_cast<Node>(uniform_below(rng, n - 1));
    if (b >= a) ++b;
    if (t.neighbors(a)[0] == t.neighbors(b)[0]) return false;
    t.swap_leaves(a, b);
    return true;
}

}  // namespace

HillClimbResult hill_climb(const Dendrogram& start, const NcdMatrix& m, std::size_t budget, std::uint64_t seed) {
    start.validate();
    const QuartetScorer scorer(m);
    HillClimbResult result{start, scorer.score(start), {}, 0};
    result.trace.emplace_back(0, result.score.normalized);
    if (budget == 0 || start.leaf_count() < 4) return result;

    Rng rng(mix_seed(seed, "hill_climb"));
    Dendrogram candidate = start;
    for (std::size_t iter = 1; iter <= budget; ++iter) {
        candidate = result.tree;
        const bool moved = uniform_below(rng, 2) == 0 ? swap_random_leaves(candidate, rng)
                                                     : prune_regraft(candidate, rng);
        if (!moved) continue;
        const auto s = scorer.score(candidate);
        if (s.normalized > result.score.normalized) {
            result.tree = candidate;
            result.score = s;
            result.trace.emplace_back(iter, s.normalized);
            ++result.accepted;
        }
    }
    return result;
}

std::vector<Dendrogram> enumerate_trees(const std::vector<std::string>& labels) {
    const auto n = labels.size();
    if (n < 3 || n > 7) throw ValidationError("enumerate_trees supports 3..7 leaves, got " + std::to_string(n));
    std::vector<Dendrogram> level{Dendrogram::star({labels[0], labels[1], labels[2]})};
    for (std::size_t k = 3; k < n; ++k) {
        std::vector<Dendrogram> grown;
        grown.reserve(level.size() * (2 * k - 3));
        for (const auto& t : level) {
            for (const auto& [u, v] : t.edges()) {
                auto copy = t;
                copy.insert_leaf(u, v, labels[k]);
                grown.push_back(std::move(copy));
            }
        }
        level = std::move(grown);
    }
    return level;
}

std::vector<Dendrogram> enumerate_trees(std::size_t n) { return enumerate_trees(numbered_labels(n)); }

Dendrogram random_tree(const std::vector<std::string>& labels, std::uint64_t seed) {
    if (labels.size() < 3) throw ValidationError("random_tree needs at least three labels");
    Rng rng(mix_seed(seed, "random_tree"));
    auto t = Dendrogram::star({labels[0], labels[1], labels[2]});
    for (std::size_t k = 3; k < labels.size(); ++k) {
        const auto e = t.edges();
        const auto [u, v] = e[uniform_below(rng, e.size())];
        t.insert_leaf(u, v, labels[k]);
    }
    return t;
}

}  // namespace ncdlab
