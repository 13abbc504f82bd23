#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ncdlab/dendrogram.hpp"
#include "ncdlab/ncd.hpp"

namespace ncdlab {

/// Neighbour joining on the off-diagonal entries of `m` (n >= 3, exactly
/// symmetric). Ties in the Q criterion go to the lowest (i, j) pair.
Dendrogram neighbor_joining(const NcdMatrix& m);

struct TreeScore {
    double raw = 0.0;         // summed cost of the pairing each quartet takes in the tree
    double normalized = 1.0;  // (worst - raw) / (worst - best), 1 when worst == best
};

/// Precomputes, for every 4-subset of the matrix labels, the cost of its
/// three pairings ab|cd, ac|bd, ad|bc (sum of the two intra-pair distances).
/// Reused across the many evaluations of a tree search.
class QuartetScorer {
public:
    explicit QuartetScorer(const NcdMatrix& m);

    /// Tree leaves must carry exactly the matrix labels (any order).
    TreeScore score(const Dendrogram& t) const;

    double best() const noexcept { return best_; }
    double worst() const noexcept { return worst_; }
    std::size_t quartet_count() const noexcept { return quartets_.size(); }
    const std::vector<std::string>& labels() const noexcept { return labels_; }

private:
    struct Quartet {
        std::uint16_t a, b, c, d;
        double cost[3];
    };

    std::vector<std::string> labels_;
    std::vector<Quartet> quartets_;
    double best_ = 0.0;
    double worst_ = 0.0;
};

TreeScore quartet_score(const Dendrogram& t, const NcdMatrix& m);

struct HillClimbResult {
    Dendrogram tree;
    TreeScore score;
    /// (iteration, normalized score) at the start and at every accepted move.
    std::vector<std::pair<std::size_t, double>> trace;
    std::size_t accepted = 0;
};

/// Strict-improvement local search from `start`: each of `budget` steps
/// proposes either a leaf swap or a subtree prune-and-regraft, chosen
/// uniformly, and keeps it only if the normalized quartet score rises.
/// Deterministic for a given seed.
HillClimbResult hill_climb(const Dendrogram& start, const NcdMatrix& m, std::size_t budget, std::uint64_t seed);

/// Every unrooted binary topology on `labels` (3..7 of them), each once:
/// (2n-5)!! trees. Throws ValidationError outside that range.
std::vector<Dendrogram> enumerate_trees(const std::vector<std::string>& labels);
std::vector<Dendrogram> enumerate_trees(std::size_t n);

/// Uniformly random topology on `labels` by random stepwise addition.
Dendrogram random_tree(const std::vector<std::string>& labels, std::uint64_t seed);

/// "0", "1", ... "n-1".
std::vector<std::string> numbered_labels(std::size_t n);

}  // namespace ncdlab
