#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "ncdlab/compressor.hpp"
#include "ncdlab/corpus.hpp"
#include "ncdlab/size_cache.hpp"

namespace ncdlab {

/// max{C(xy) - C(x), C(yx) - C(y)} / max{C(x), C(y)}. Both concatenation
/// orders are compressed. Throws ValidationError on empty input.
double ncd(const Compressor& c, std::string_view x, std::string_view y);
double ncd(const Compressor& c, std::string_view x, std::string_view y, SizeCache& cache);

/// Same formula from precomputed sizes.
double ncd_from_sizes(std::size_t cx, std::size_t cy, std::size_t cxy, std::size_t cyx);

/// Symmetric matrix of pairwise distances over labelled items. Each
/// unordered pair is stored once and mirrored, so symmetry is exact.
class NcdMatrix {
public:
    NcdMatrix() = default;
    explicit NcdMatrix(std::vector<std::string> labels);

    std::size_t size() const noexcept { return labels_.size(); }
    const std::vector<std::string>& labels() const noexcept { return labels_; }

    double at(std::size_t i, std::size_t j) const { return values_[i * size() + j]; }
    /// Sets both (i, j) and (j, i).
    void set(std::size_t i, std::size_t j, double v);

    std::size_t index_of(std::string_view label) const;

    /// Findings about entries outside [0, 1 + epsilon], one per pair.
    const std::vector<std::string>& diagnostics() const noexcept { return diagnostics_; }
    void add_diagnostic(std::string msg) { diagnostics_.push_back(std::move(msg)); }

    /// Throws ValidationError unless square and exactly symmetric.
    void check_symmetric() const;

    /// Copy with rows and columns reordered: result(i, j) = this(perm[i], perm[j]).
    NcdMatrix permuted(const std::vector<std::size_t>& perm) const;

    friend bool operator==(const NcdMatrix& a, const NcdMatrix& b) {
        return a.labels_ == b.labels_ && a.values_ == b.values_;
    }

private:
    std::vector<std::string> labels_;
    std::vector<double> values_;
    std::vector<std::string> diagnostics_;
};

struct NcdMatrixOptions {
    /// Allowed overshoot above 1 before an entry is reported.
    double epsilon = 0.1;
    unsigned jobs = 1;
};

/// Pairwise NCD over `docs` (>= 2, unique ids). The diagonal holds
/// NCD(x, x); clustering ignores it. Every C(.) goes through `cache`. The
/// result does not depend on `jobs`.
NcdMatrix ncd_matrix(const Compressor& c, const std::vector<Document>& docs, SizeCache& cache,
                     const NcdMatrixOptions& options = {});

struct ComplexityStats {
    double mean = 0.0;
    std::vector<std::size_t> per_doc;
};

/// Compressed size of each document (bytes) and their mean.
ComplexityStats complexity_stats(const Compressor& c, const std::vector<Document>& docs,
                                 SizeCache* cache = nullptr);

/// Tab-separated text:
///
///     # ncdlab ncd-matrix v1
///     <TAB>label_1<TAB>...<TAB>label_n
///     label_1<TAB>v_11<TAB>...<TAB>v_1n
///     ...
///
/// Values use the shortest decimal form that round-trips.
void write_matrix(std::ostream& out, const NcdMatrix& m);
NcdMatrix read_matrix(std::istream& in);

/// Shortest round-trip decimal representation.
std::string format_double(double v);

}  // namespace ncdlab
