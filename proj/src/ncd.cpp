#include "ncdlab/ncd.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>

#include "ncdlab/error.hpp"
#include "ncdlab/parallel.hpp"

namespace ncdlab {

double ncd_from_sizes(std::size_t cx, std::size_t cy, std::size_t cxy, std::size_t cyx) {
    const auto denom = std::max(cx, cy);
    if (denom == 0) throw ValidationError("ncd: both compressed sizes are zero");
    const double a = static_cast<double>(cxy) - static_cast<double>(cx);
    const double b = static_cast<double>(cyx) - static_cast<double>(cy);
    return std::max(a, b) / static_cast<double>(denom);
}

double ncd(const Compressor& c, std::string_view x, std::string_view y) {
    if (x.empty() || y.empty()) throw ValidationError("ncd: inputs must be non-empty");
    return ncd_from_sizes(c.compressed_size(x), c.compressed_size(y), c.compressed_size(x, y),
                          c.compressed_size(y, x));
}

double ncd(const Compressor& c, std::string_view x, std::string_view y, SizeCache& cache) {
    if (x.empty() || y.empty()) throw ValidationError("ncd: inputs must be non-empty");
    return ncd_from_sizes(cache.size_of(c, x), cache.size_of(c, y), cache.size_of(c, x, y),
                          cache.size_of(c, y, x));
}

NcdMatrix::NcdMatrix(std::vector<std::string> labels)
    : labels_(std::move(labels)), values_(labels_.size() * labels_.size(), 0.0) {}

void NcdMatrix::set(std::size_t i, std::size_t j, double v) {
    values_[i * size() + j] = v;
    values_[j * size() + i] = v;
}

std::size_t NcdMatrix::index_of(std::string_view label) const {
    const auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) throw ValidationError("unknown label '" + std::string(label) + "'");
    return static_cast<std::size_t>(it - labels_.begin());
}

void NcdMatrix::check_symmetric() const {
    if (values_.size() != size() * size()) throw ValidationError("matrix is not square");
    for (std::size_t i = 0; i < size(); ++i) {
        for (std::size_t j = i + 1; j < size(); ++j) {
            if (at(i, j) != at(j, i)) {
                throw ValidationError("matrix not symmetric at (" + labels_[i] + ", " + labels_[j] + ")");
            }
        }
    }
}

NcdMatrix NcdMatrix::permuted(const std::vector<std::size_t>& perm) const {
    if (perm.size() != size()) throw ValidationError("permutation size mismatch");
    std::vector<std::string> labels;
    for (auto p : perm) labels.push_back(labels_.at(p));
    NcdMatrix out(std::move(labels));
    for (std::size_t i = 0; i < size(); ++i) {
        for (std::size_t j = 0; j < size(); ++j) out.values_[i * size() + j] = at(perm[i], perm[j]);
    }
    return out;
}

NcdMatrix ncd_matrix(const Compressor& c, const std::vector<Document>& docs, SizeCache& cache,
                     const NcdMatrixOptions& options) {
    if (docs.size() < 2) throw ValidationError("ncd_matrix needs at least two documents");
    validate_corpus(docs);
    for (const auto& d : docs) {
        if (d.text.empty()) throw ValidationError("document '" + d.id + "' is empty");
    }

    const auto n = docs.size();
    std::vector<std::string> labels;
    for (const auto& d : docs) labels.push_back(d.id);
    NcdMatrix m(std::move(labels));

    std::vector<std::size_t> single(n);
    parallel_for(n, options.jobs, [&](std::size_t i) {
        try {
            single[i] = cache.size_of(c, docs[i].text);
        } catch (const std::exception& e) {
            throw CompressorError("compressing '" + docs[i].id + "': " + e.what());
        }
    });

    // Diagonal first, then the upper triangle in row-major order.
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < n; ++i) pairs.emplace_back(i, i);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    }
    std::vector<double> values(pairs.size());
    parallel_for(pairs.size(), options.jobs, [&](std::size_t k) {
        const auto [i, j] = pairs[k];
        try {
            const auto cxy = cache.size_of(c, docs[i].text, docs[j].text);
            const auto cyx = i == j ? cxy : cache.size_of(c, docs[j].text, docs[i].text);
            values[k] = ncd_from_sizes(single[i], single[j], cxy, cyx);
        } catch (const std::exception& e) {
            throw CompressorError("pair ('" + docs[i].id + "', '" + docs[j].id + "'): " + e.what());
        }
    });

    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const auto [i, j] = pairs[k];
        const double v = values[k];
        m.set(i, j, v);
        if (v < 0.0 || v > 1.0 + options.epsilon) {
            m.add_diagnostic("NCD(" + docs[i].id + ", " + docs[j].id + ") = " + format_double(v) +
                             " outside [0, " + format_double(1.0 + options.epsilon) + "]");
        }
    }
    return m;
}

ComplexityStats complexity_stats(const Compressor& c, const std::vector<Document>& docs,
                                 SizeCache* cache) {
    if (docs.empty()) throw ValidationError("complexity_stats needs a non-empty corpus");
    ComplexityStats s;
    s.per_doc.reserve(docs.size());
    for (const auto& d : docs) {
        s.per_doc.push_back(cache ? cache->size_of(c, d.text) : c.compressed_size(d.text));
    }
    const double sum = std::accumulate(s.per_doc.begin(), s.per_doc.end(), 0.0,
                                       [](double acc, std::size_t v) { return acc + static_cast<double>(v); });
    s.mean = sum / static_cast<double>(docs.size());
    return s;
}

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    std::size_t b = 0;
    while (true) {
        const auto e = line.find('\t', b);
        out.push_back(line.substr(b, e == std::string::npos ? std::string::npos : e - b));
        if (e == std::string::npos) break;
        b = e + 1;
    }
    if (!out.empty() && !out.back().empty() && out.back().back() == '\r') out.back().pop_back();
    return out;
}

}  // namespace

void write_matrix(std::ostream& out, const NcdMatrix& m) {
    out << "# ncdlab ncd-matrix v1\n";
    for (const auto& l : m.labels()) out << '\t' << l;
    out << '\n';
    for (std::size_t i = 0; i < m.size(); ++i) {
        out << m.labels()[i];
        for (std::size_t j = 0; j < m.size(); ++j) out << '\t' << format_double(m.at(i, j));
        out << '\n';
    }
}

NcdMatrix read_matrix(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    std::vector<std::string> labels;
    bool have_header = false;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line.front() == '#') continue;
        auto fields = split_tabs(line);
        if (!have_header) {
            if (fields.size() < 2 || !fields[0].empty()) {
                throw ParseError("matrix header must start with a tab followed by labels", lineno);
            }
            labels.assign(fields.begin() + 1, fields.end());
            have_header = true;
            continue;
        }
        if (fields.size() != labels.size() + 1) throw ParseError("wrong number of matrix columns", lineno);
        if (fields[0] != labels[rows.size()]) {
            throw ParseError("row label '" + fields[0] + "' does not match header", lineno);
        }
        std::vector<double> row;
        for (std::size_t k = 1; k < fields.size(); ++k) {
            double v = 0;
            const auto& f = fields[k];
            const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
            if (ec != std::errc{} || ptr != f.data() + f.size()) {
                throw ParseError("bad matrix value '" + f + "'", lineno);
            }
            row.push_back(v);
        }
        rows.push_back(std::move(row));
        if (rows.size() > labels.size()) throw ParseError("too many matrix rows", lineno);
    }
    if (!have_header) throw ValidationError("matrix file has no header");
    if (rows.size() != labels.size()) throw ValidationError("matrix has fewer rows than labels");
    if (std::set<std::string>(labels.begin(), labels.end()).size() != labels.size()) {
        throw ValidationError("matrix labels are not unique");
    }
    NcdMatrix m(labels);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = i; j < rows.size(); ++j) {
            if (rows[i][j] != rows[j][i]) {
                throw ValidationError("matrix not symmetric at (" + labels[i] + ", " + labels[j] + ")");
            }
            m.set(i, j, rows[i][j]);
        }
    }
    return m;
}

}  // namespace ncdlab
