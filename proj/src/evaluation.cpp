#include "ncdlab/evaluation.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "ncdlab/clustering.hpp"
#include "ncdlab/error.hpp"

namespace ncdlab {

Grouping grouping_from_labels(const std::vector<std::string>& labels) {
    Grouping g;
    for (const auto& l : labels) g.emplace(l, l.substr(0, l.find('.')));
    return g;
}

Grouping grouping_from_documents(const std::vector<Document>& docs) {
    Grouping g;
    for (const auto& d : docs) g.emplace(d.id, d.group_tag);
    return g;
}

Grouping read_grouping(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open grouping " + path.string());
    Grouping g;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ss(line);
        std::string label, group, extra;
        if (!(ss >> label) || label.front() == '#') continue;
        if (!(ss >> group) || (ss >> extra)) throw ParseError("expected '<label> <group>'", lineno);
        if (!g.emplace(label, group).second) throw ParseError("label '" + label + "' listed twice", lineno);
    }
    return g;
}

int leaf_distance(const Dendrogram& t, Dendrogram::Node a, Dendrogram::Node b) {
    if (!t.is_leaf(a) || !t.is_leaf(b) || a < 0 || b < 0) throw ValidationError("leaf_distance: not a leaf");
    if (a == b) throw ValidationError("leaf_distance: leaves must differ");
    std::vector<int> dist(t.node_count(), -1);
    std::vector<Dendrogram::Node> queue{a};
    dist[static_cast<std::size_t>(a)] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const auto v = queue[head];
        if (v == b) break;
        for (auto w : t.neighbors(v)) {
            if (dist[static_cast<std::size_t>(w)] < 0) {
                dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(v)] + 1;
                queue.push_back(w);
            }
        }
    }
    return dist[static_cast<std::size_t>(b)] - 1;
}

int leaf_distance(const Dendrogram& t, std::string_view a, std::string_view b) {
    return leaf_distance(t, t.leaf(a), t.leaf(b));
}

namespace {

// Group index per tree leaf; throws for uncovered leaves.
std::vector<std::size_t> leaf_groups(const Dendrogram& t, const Grouping& g, std::vector<std::string>* names) {
    std::map<std::string, std::size_t> index;
    std::vector<std::size_t> out;
    for (const auto& l : t.labels()) {
        const auto it = g.find(l);
        if (it == g.end()) throw ValidationError("leaf '" + l + "' has no group");
        const auto [pos, inserted] = index.emplace(it->second, index.size());
        if (inserted && names) names->push_back(it->second);
        out.push_back(pos->second);
    }
    return out;
}

long error_from_paths(const std::vector<int>& paths, const std::vector<std::size_t>& group_of,
                      std::vector<long>* per_group) {
    const auto n = group_of.size();
    long total = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (group_of[i] != group_of[j]) continue;
            const long d = paths[i * n + j] - 1;
            total += d;
            if (per_group) (*per_group)[group_of[i]] += d;
        }
    }
    return total;
}

}  // namespace

long clustering_error_total(const Dendrogram& t, const Grouping& g) {
    return error_from_paths(t.leaf_path_lengths(), leaf_groups(t, g, nullptr), nullptr);
}

std::vector<std::size_t> group_sizes(const Grouping& g) {
    std::map<std::string, std::size_t> counts;
    for (const auto& [label, group] : g) ++counts[group];
    std::vector<std::size_t> out;
    for (const auto& [group, c] : counts) out.push_back(c);
    return out;
}

ErrorReport clustering_error(const Dendrogram& t, const Grouping& g) {
    std::vector<std::string> names;
    const auto group_of = leaf_groups(t, g, &names);
    std::vector<long> per(names.size(), 0);
    ErrorReport r;
    r.total = error_from_paths(t.leaf_path_lengths(), group_of, &per);
    std::vector<std::size_t> sizes(names.size(), 0);
    for (auto k : group_of) ++sizes[k];
    for (std::size_t k = 0; k < names.size(); ++k) r.per_group[names[k]] = per[k];
    const auto ideal = ideal_error(sizes, t.leaf_count());
    r.ideal = ideal.value;
    r.ideal_exact = ideal.exact;
    return r;
}

namespace {

void check_sizes(const std::vector<std::size_t>& sizes, std::size_t n_total) {
    std::size_t sum = 0;
    for (auto s : sizes) {
        if (s == 0) throw ValidationError("group sizes must be positive");
        sum += s;
    }
    if (sum > n_total) throw ValidationError("group sizes exceed the number of leaves");
}

// Labels and grouping for the given sizes, padded with singletons.
std::pair<std::vector<std::string>, Grouping> labelled_groups(const std::vector<std::size_t>& sizes,
                                                              std::size_t n_total) {
    std::vector<std::string> labels;
    Grouping g;
    for (std::size_t k = 0; k < sizes.size(); ++k) {
        for (std::size_t j = 0; j < sizes[k]; ++j) {
            labels.push_back("g" + std::to_string(k) + "." + std::to_string(j));
            g.emplace(labels.back(), "g" + std::to_string(k));
        }
    }
    for (std::size_t s = 0; labels.size() < n_total; ++s) {
        labels.push_back("s" + std::to_string(s));
        g.emplace(labels.back(), labels.back());
    }
    return {labels, g};
}

// First-improvement prune-and-regraft descent on the clustering error.
Dendrogram descend(Dendrogram t, const Grouping& g) {
    using Node = Dendrogram::Node;
    long current = clustering_error_total(t, g);
    bool improved = true;
    while (improved) {
        improved = false;
        const auto total = static_cast<Node>(t.node_count());
        for (Node v = 0; v < total && !improved; ++v) {
            for (auto u : std::vector<Node>(t.neighbors(v).begin(), t.neighbors(v).end())) {
                if (t.is_leaf(u)) continue;
                Node a = Dendrogram::kNone, b = Dendrogram::kNone;
                for (auto w : t.neighbors(u)) {
                    if (w != v) (a == Dendrogram::kNone ? a : b) = w;
                }
                std::vector<char> pruned(static_cast<std::size_t>(total), 0);
                pruned[static_cast<std::size_t>(u)] = pruned[static_cast<std::size_t>(v)] = 1;
                std::vector<Node> stack{v};
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
                std::vector<std::pair<Node, Node>> targets;
                for (Node x = 0; x < total; ++x) {
                    if (pruned[static_cast<std::size_t>(x)]) continue;
                    for (auto w : t.neighbors(x)) {
                        if (w != u && !pruned[static_cast<std::size_t>(w)] && x < w) targets.emplace_back(x, w);
                    }
                }
                for (const auto& [x, y] : targets) {
                    auto c = t;
                    c.replace_neighbor(a, u, b);
                    c.replace_neighbor(b, u, a);
                    c.replace_neighbor(x, y, u);
                    c.replace_neighbor(y, x, u);
                    c.replace_neighbor(u, a, x);
                    c.replace_neighbor(u, b, y);
                    const auto e = clustering_error_total(c, g);
                    if (e < current) {
                        current = e;
                        t = std::move(c);
                        improved = true;
                        break;
                    }
                }
                if (improved) break;
            }
        }
    }
    return t;
}

}  // namespace

Dendrogram ideal_tree(const std::vector<std::size_t>& sizes, std::size_t n_total) {
    check_sizes(sizes, n_total);
    if (n_total < 3) throw ValidationError("ideal_tree needs at least three leaves");
    auto [labels, grouping] = labelled_groups(sizes, n_total);

    using Node = Dendrogram::Node;
    std::vector<std::pair<Node, Node>> edges;
    std::vector<Node> leaf_nodes(n_total);
    for (std::size_t i = 0; i < n_total; ++i) leaf_nodes[i] = static_cast<Node>(i);
    Node next = static_cast<Node>(n_total);

    // Each component is represented by the node that links it to the rest.
    std::vector<Node> roots;
    std::size_t leaf = 0;
    for (auto k : sizes) {
        if (k == 1) {
            roots.push_back(static_cast<Node>(leaf++));
            continue;
        }
        Node top = next++;
        edges.emplace_back(top, static_cast<Node>(leaf++));
        edges.emplace_back(top, static_cast<Node>(leaf++));
        for (std::size_t j = 2; j < k; ++j) {
            const Node up = next++;
            edges.emplace_back(up, top);
            edges.emplace_back(up, static_cast<Node>(leaf++));
            top = up;
        }
        roots.push_back(top);
    }
    while (leaf < n_total) roots.push_back(static_cast<Node>(leaf++));

    if (roots.size() == 1) {
        // One group spans every leaf: its clade root has degree 2, so splice it out.
        const Node r = roots.front();
        std::vector<Node> kids;
        std::erase_if(edges, [&](const auto& e) {
            if (e.first == r) kids.push_back(e.second);
            return e.first == r;
        });
        edges.emplace_back(kids[0], kids[1]);
    } else if (roots.size() == 2) {
        edges.emplace_back(roots[0], roots[1]);
    } else {
        const auto m = roots.size();
        std::vector<Node> spine;
        for (std::size_t i = 0; i + 2 < m; ++i) spine.push_back(next++);
        edges.emplace_back(spine.front(), roots[0]);
        for (std::size_t i = 0; i < spine.size(); ++i) {
            edges.emplace_back(spine[i], roots[i + 1]);
            if (i + 1 < spine.size()) edges.emplace_back(spine[i], spine[i + 1]);
        }
        edges.emplace_back(spine.back(), roots[m - 1]);
    }

    // Renumber so the internal ids are contiguous after the leaves.
    auto t = Dendrogram::from_edges(labels, leaf_nodes, edges);
    return descend(std::move(t), grouping);
}

IdealError ideal_error(const std::vector<std::size_t>& sizes, std::size_t n_total) {
    check_sizes(sizes, n_total);
    if (n_total < 3) return {0, true};
    if (n_total <= 7) {
        auto [labels, grouping] = labelled_groups(sizes, n_total);
        long best = std::numeric_limits<long>::max();
        for (const auto& t : enumerate_trees(labels)) best = std::min(best, clustering_error_total(t, grouping));
        return {best, true};
    }
    const auto t = ideal_tree(sizes, n_total);
    auto [labels, grouping] = labelled_groups(sizes, n_total);
    return {clustering_error_total(t, grouping), false};
}

}  // namespace ncdlab
