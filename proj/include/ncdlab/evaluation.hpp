#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ncdlab/corpus.hpp"
#include "ncdlab/dendrogram.hpp"

namespace ncdlab {

/// Leaf label -> group tag.
using Grouping = std::map<std::string, std::string, std::less<>>;

/// Group tag = label text before the first '.', e.g. "AP.AEoM" -> "AP".
/// Labels without a '.' form their own group.
Grouping grouping_from_labels(const std::vector<std::string>& labels);
Grouping grouping_from_documents(const std::vector<Document>& docs);

/// Reads `label<whitespace>group` lines ('#' comments).
Grouping read_grouping(const std::filesystem::path& path);

/// Number of internal nodes on the path between two distinct leaves.
int leaf_distance(const Dendrogram& t, std::string_view a, std::string_view b);
int leaf_distance(const Dendrogram& t, Dendrogram::Node a, Dendrogram::Node b);

struct IdealError {
    long value = 0;
    /// True when established by exhaustive search; false when it is the
    /// error of a constructed tree (an upper bound on the optimum).
    bool exact = false;
};

struct ErrorReport {
    long total = 0;
    std::map<std::string, long> per_group;
    long ideal = 0;
    bool ideal_exact = false;
};

/// Sum over groups of the leaf distances of every unordered same-group pair.
/// Every leaf must be covered by `g`.
ErrorReport clustering_error(const Dendrogram& t, const Grouping& g);

/// Sum of same-group leaf distances only, no ideal computation.
long clustering_error_total(const Dendrogram& t, const Grouping& g);

/// Lowest clustering error reachable on `n_total` leaves when groups of
/// the given sizes are present (remaining leaves are singletons). Exhaustive
/// for n_total <= 7, otherwise the error of ideal_tree().
IdealError ideal_error(const std::vector<std::size_t>& group_sizes, std::size_t n_total);

/// Group sizes of the grouping restricted to the tree's leaves.
std::vector<std::size_t> group_sizes(const Grouping& g);

/// A low-error tree: every group of size k >= 2 is a caterpillar clade
/// (a cherry plus one more leaf per step), clades and singletons hang off a
/// backbone caterpillar, and the result is then polished by exhaustive
/// prune-and-regraft descent on the clustering error. Leaf labels are
/// "g<group>.<member>" and "s<index>".
Dendrogram ideal_tree(const std::vector<std::size_t>& group_sizes, std::size_t n_total);

}  // namespace ncdlab
