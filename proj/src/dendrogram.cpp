#include "ncdlab/dendrogram.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "ncdlab/error.hpp"

namespace ncdlab {

Dendrogram Dendrogram::from_edges(std::vector<std::string> labels, const std::vector<Node>& leaf_nodes,
                                  const std::vector<std::pair<Node, Node>>& edges) {
    const auto n = labels.size();
    if (n < 3) throw ValidationError("a dendrogram needs at least three leaves");
    if (leaf_nodes.size() != n) throw ValidationError("one leaf node per label required");
    if (std::set<std::string>(labels.begin(), labels.end()).size() != n) {
        throw ValidationError("leaf labels must be unique");
    }

    std::map<Node, Node> remap;
    for (std::size_t i = 0; i < n; ++i) {
        if (!remap.emplace(leaf_nodes[i], static_cast<Node>(i)).second) {
            throw ValidationError("leaf node listed twice");
        }
    }
    Node next = static_cast<Node>(n);
    for (const auto& [a, b] : edges) {
        for (auto v : {a, b}) {
            if (!remap.contains(v)) remap.emplace(v, next++);
        }
    }
    if (static_cast<std::size_t>(next) != 2 * n - 2) {
        throw ValidationError("a binary tree on " + std::to_string(n) + " leaves has " + std::to_string(n - 2) +
                              " internal nodes, got " + std::to_string(static_cast<std::size_t>(next) - n));
    }
    if (edges.size() != 2 * n - 3) throw ValidationError("wrong edge count for an unrooted binary tree");

    Dendrogram t;
    t.labels_ = std::move(labels);
    t.adj_.assign(2 * n - 2, {kNone, kNone, kNone});
    std::vector<int> degree(2 * n - 2, 0);
    for (const auto& [a0, b0] : edges) {
        const auto a = remap.at(a0), b = remap.at(b0);
        if (a == b) throw ValidationError("self-loop in tree");
        for (auto [x, y] : {std::pair{a, b}, std::pair{b, a}}) {
            const auto cap = t.is_leaf(x) ? 1 : 3;
            if (degree[static_cast<std::size_t>(x)] >= cap) {
                throw ValidationError(t.is_leaf(x) ? "leaf '" + t.labels_[static_cast<std::size_t>(x)] +
                                                         "' has degree > 1"
                                                   : "internal node has degree > 3");
            }
            t.adj_[static_cast<std::size_t>(x)][static_cast<std::size_t>(degree[static_cast<std::size_t>(x)]++)] = y;
        }
    }
    t.validate();
    return t;
}

Dendrogram Dendrogram::star(std::vector<std::string> labels) {
    if (labels.size() != 3) throw ValidationError("star needs exactly three labels");
    return from_edges(std::move(labels), {0, 1, 2}, {{0, 3}, {1, 3}, {2, 3}});
}

Dendrogram::Node Dendrogram::leaf(std::string_view label) const {
    const auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) throw ValidationError("no leaf labelled '" + std::string(label) + "'");
    return static_cast<Node>(it - labels_.begin());
}

std::vector<std::pair<Dendrogram::Node, Dendrogram::Node>> Dendrogram::edges() const {
    std::vector<std::pair<Node, Node>> out;
    for (Node v = 0; v < static_cast<Node>(node_count()); ++v) {
        for (auto w : neighbors(v)) {
            if (v < w) out.emplace_back(v, w);
        }
    }
    return out;
}

std::vector<int> Dendrogram::leaf_path_lengths() const {
    const auto n = leaf_count();
    const auto total = node_count();
    std::vector<int> out(n * n, 0);
    std::vector<int> dist(total);
    std::vector<Node> queue(total);
    for (std::size_t s = 0; s < n; ++s) {
        std::fill(dist.begin(), dist.end(), -1);
        std::size_t head = 0, tail = 0;
        queue[tail++] = static_cast<Node>(s);
        dist[s] = 0;
        while (head < tail) {
            const auto v = queue[head++];
            for (auto w : neighbors(v)) {
                if (dist[static_cast<std::size_t>(w)] < 0) {
                    dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(v)] + 1;
                    queue[tail++] = w;
                }
            }
        }
        for (std::size_t t = 0; t < n; ++t) out[s * n + t] = dist[t];
    }
    return out;
}

void Dendrogram::validate() const {
    const auto n = leaf_count();
    if (n < 3) throw ValidationError("a dendrogram needs at least three leaves");
    if (adj_.size() != 2 * n - 2) throw ValidationError("wrong node count");
    std::size_t degree_sum = 0;
    for (Node v = 0; v < static_cast<Node>(node_count()); ++v) {
        const auto& a = adj_[static_cast<std::size_t>(v)];
        const std::size_t deg = is_leaf(v) ? 1 : 3;
        for (std::size_t k = 0; k < 3; ++k) {
            if (k < deg) {
                if (a[k] < 0 || static_cast<std::size_t>(a[k]) >= node_count() || a[k] == v) {
                    throw ValidationError("bad adjacency at node " + std::to_string(v));
                }
                const auto back = neighbors(a[k]);
                if (std::count(back.begin(), back.end(), v) != 1) {
                    throw ValidationError("asymmetric adjacency at node " + std::to_string(v));
                }
            } else if (a[k] != kNone) {
                throw ValidationError("leaf " + std::to_string(v) + " has degree > 1");
            }
        }
        degree_sum += deg;
        if (!is_leaf(v) && (a[0] == a[1] || a[0] == a[2] || a[1] == a[2])) {
            throw ValidationError("parallel edges at node " + std::to_string(v));
        }
    }
    if (degree_sum != 2 * (2 * n - 3)) throw ValidationError("wrong edge count");
    // Connected + (|V| - 1) edges => tree.
    std::vector<char> seen(node_count(), 0);
    std::vector<Node> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
        const auto v = stack.back();
        stack.pop_back();
        for (auto w : neighbors(v)) {
            if (!seen[static_cast<std::size_t>(w)]) {
                seen[static_cast<std::size_t>(w)] = 1;
                ++count;
                stack.push_back(w);
            }
        }
    }
    if (count != node_count()) throw ValidationError("tree is not connected");
}

void Dendrogram::replace_neighbor(Node v, Node from, Node to) {
    auto& a = adj_[static_cast<std::size_t>(v)];
    for (auto& x : a) {
        if (x == from) {
            x = to;
            return;
        }
    }
    throw ValidationError("replace_neighbor: nodes are not adjacent");
}

void Dendrogram::swap_leaves(Node a, Node b) {
    if (a == b) return;
    const auto pa = adj_[static_cast<std::size_t>(a)][0];
    const auto pb = adj_[static_cast<std::size_t>(b)][0];
    if (pa == pb) return;
    replace_neighbor(pa, a, b);
    replace_neighbor(pb, b, a);
    adj_[static_cast<std::size_t>(a)][0] = pb;
    adj_[static_cast<std::size_t>(b)][0] = pa;
}

Dendrogram::Node Dendrogram::insert_leaf(Node u, Node v, std::string label) {
    const auto n = static_cast<Node>(leaf_count());
    const auto nbrs = neighbors(u);
    if (std::find(nbrs.begin(), nbrs.end(), v) == nbrs.end()) {
        throw ValidationError("insert_leaf: nodes are not adjacent");
    }
    if (std::find(labels_.begin(), labels_.end(), label) != labels_.end()) {
        throw ValidationError("duplicate leaf label '" + label + "'");
    }
    auto shift = [n](Node x) { return x >= n ? x + 1 : x; };
    const Node leaf_id = n;
    const Node mid = static_cast<Node>(2 * (n + 1) - 3);

    std::vector<std::array<Node, 3>> adj(static_cast<std::size_t>(2 * (n + 1) - 2), {kNone, kNone, kNone});
    for (Node x = 0; x < static_cast<Node>(node_count()); ++x) {
        auto row = adj_[static_cast<std::size_t>(x)];
        for (auto& y : row) {
            if (y != kNone) y = shift(y);
        }
        adj[static_cast<std::size_t>(shift(x))] = row;
    }
    const auto su = shift(u), sv = shift(v);
    auto repl = [&](Node x, Node from, Node to) {
        for (auto& y : adj[static_cast<std::size_t>(x)]) {
            if (y == from) {
                y = to;
                return;
            }
        }
    };
    repl(su, sv, mid);
    repl(sv, su, mid);
    adj[static_cast<std::size_t>(mid)] = {su, sv, leaf_id};
    adj[static_cast<std::size_t>(leaf_id)] = {mid, kNone, kNone};
    adj_ = std::move(adj);
    labels_.push_back(std::move(label));
    return leaf_id;
}

}  // namespace ncdlab
