#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ncdlab {

/// Unrooted binary tree with labelled leaves. Nodes 0..n-1 are the leaves,
/// in label order; nodes n..2n-3 are internal and have exactly three
/// neighbours. Requires n >= 3.
class Dendrogram {
public:
    using Node = int;
    static constexpr Node kNone = -1;

    Dendrogram() = default;

    /// Builds from an arbitrary edge list. `leaf_nodes[i]` is the node id that
    /// carries `labels[i]`; every other id mentioned in `edges` is internal.
    /// Ids are renumbered into the canonical layout. Throws ValidationError
    /// unless the result is a tree with leaf degree 1 and internal degree 3.
    static Dendrogram from_edges(std::vector<std::string> labels, const std::vector<Node>& leaf_nodes,
                                 const std::vector<std::pair<Node, Node>>& edges);

    /// The single topology on three leaves.
    static Dendrogram star(std::vector<std::string> labels);

    std::size_t leaf_count() const noexcept { return labels_.size(); }
    std::size_t node_count() const noexcept { return adj_.size(); }
    std::size_t internal_count() const noexcept { return node_count() - leaf_count(); }
    bool is_leaf(Node v) const noexcept { return static_cast<std::size_t>(v) < leaf_count(); }

    std::span<const Node> neighbors(Node v) const {
        return {adj_[static_cast<std::size_t>(v)].data(), is_leaf(v) ? std::size_t{1} : std::size_t{3}};
    }

    const std::vector<std::string>& labels() const noexcept { return labels_; }
    const std::string& label(Node leaf) const { return labels_.at(static_cast<std::size_t>(leaf)); }
    /// Throws ValidationError for an unknown label.
    Node leaf(std::string_view label) const;

    std::vector<std::pair<Node, Node>> edges() const;

    /// Number of edges on the path between every pair of leaves, row-major
    /// n x n.
    std::vector<int> leaf_path_lengths() const;

    /// Re-checks every structural invariant; throws ValidationError.
    void validate() const;

    // Low-level edits used by tree search. They keep degrees intact only
    // when used in the combinations the callers make.
    void replace_neighbor(Node v, Node from, Node to);
    /// Exchanges the positions of two leaves.
    void swap_leaves(Node a, Node b);
    /// Grows the tree by one leaf, attached through a fresh internal node on
    /// edge (u, v). Returns the new leaf's node id. Node ids are remapped, so
    /// any ids held by the caller are invalidated.
    Node insert_leaf(Node u, Node v, std::string label);

    friend bool operator==(const Dendrogram&, const Dendrogram&) = default;

private:
    std::vector<std::string> labels_;
    std::vector<std::array<Node, 3>> adj_;

};

/// Canonical Newick text: rooted at the internal node next to the
/// lexicographically smallest label, siblings ordered by their smallest
/// label. Two trees have equal canonical text iff they are the same
/// leaf-labelled topology. Grammar (no branch lengths are written):
///
///     tree    := subtree ';'
///     subtree := label | '(' subtree (',' subtree)* ')'
///     label   := unquoted run without ( ) [ ] ' : ; , or whitespace
///              | "'" text with '' for a literal quote "'"
///
/// The reader also accepts branch lengths (":<number>"), internal-node
/// labels and [comments], which are ignored, and a root of degree 2.
std::string to_newick(const Dendrogram& t);
Dendrogram parse_newick(std::string_view text);

}  // namespace ncdlab
