#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <memory>
#include <optional>
#include <sstream>

#include "ncdlab/clustering.hpp"
#include "ncdlab/compressor.hpp"
#include "ncdlab/corpus.hpp"
#include "ncdlab/dendrogram.hpp"
#include "ncdlab/distortion.hpp"
#include "ncdlab/error.hpp"
#include "ncdlab/evaluation.hpp"
#include "ncdlab/harness.hpp"
#include "ncdlab/ncd.hpp"
#include "ncdlab/size_cache.hpp"
#include "ncdlab/synthetic.hpp"

namespace py = pybind11;
using namespace ncdlab;

namespace {

SelectionOrder order_of(const std::string& name, std::uint64_t seed) { return {parse_selection_order(name), seed}; }
SubstitutionMode mode_of(const std::string& name, std::uint64_t seed) {
    return {parse_substitution_mode(name), seed};
}

// Scratch cache when the caller passes None.
template <class F>
auto with_cache(SizeCache* cache, F&& f) {
    if (cache) return f(*cache);
    SizeCache scratch;
    return f(scratch);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Compression distances, tree clustering and word-distortion sweeps";

    static py::exception<Error> base_exc(m, "Error", PyExc_RuntimeError);
    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<DecodeError>(m, "DecodeError", PyExc_ValueError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);
    py::register_exception<CompressorError>(m, "CompressorError", base_exc.ptr());

    // complexity
    py::class_<Compressor, std::shared_ptr<Compressor>>(m, "Compressor")
        .def(py::init([](const std::string& spec) { return std::shared_ptr<Compressor>(make_compressor(spec)); }),
             py::arg("spec") = "lzma")
        .def_property_readonly("name", &Compressor::name)
        .def_property_readonly("key", &Compressor::key)
        .def("compressed_size",
             [](const Compressor& c, const std::string& x) {
                 py::gil_scoped_release nogil;
                 return c.compressed_size(x);
             })
        .def("__repr__", [](const Compressor& c) { return "<Compressor " + c.key() + ">"; });

    py::class_<SizeCache>(m, "SizeCache")
        .def(py::init<>())
        .def(py::init<std::filesystem::path>(), py::arg("path"))
        .def("save", py::overload_cast<>(&SizeCache::save, py::const_))
        .def_property_readonly("entries", &SizeCache::entries)
        .def_property_readonly("hits", &SizeCache::hits)
        .def_property_readonly("misses", &SizeCache::misses);

    m.def(
        "ncd",
        [](const Compressor& c, const std::string& x, const std::string& y, SizeCache* cache) {
            py::gil_scoped_release nogil;
            return cache ? ncd(c, x, y, *cache) : ncd(c, x, y);
        },
        py::arg("compressor"), py::arg("x"), py::arg("y"), py::arg("cache") = nullptr);

    // corpus
    py::class_<Document>(m, "Document")
        .def(py::init(&Document::make), py::arg("group"), py::arg("title"), py::arg("text"))
        .def_readonly("id", &Document::id)
        .def_readonly("group", &Document::group_tag)
        .def_readonly("title", &Document::title_tag)
        .def_property_readonly("text", [](const Document& d) { return py::bytes(d.text); })
        .def("__repr__", [](const Document& d) { return "<Document " + d.id + ">"; });

    m.def(
        "tokenize",
        [](const std::string& text) {
            std::vector<std::tuple<std::size_t, std::size_t, std::string>> out;
            for (auto& w : tokenize(text)) out.emplace_back(w.start, w.end, std::move(w.normalized));
            return out;
        },
        py::arg("text"), "List of (start, end, lowercased word).");

    py::class_<FrequencyTable>(m, "FrequencyTable")
        .def(py::init([](const std::map<std::string, double>& masses) {
                 FrequencyTable t;
                 for (const auto& [w, v] : masses) t.add(w, v);
                 return t;
             }),
             py::arg("masses"))
        .def_static("load", py::overload_cast<const std::filesystem::path&>(&load_frequency_table))
        .def_property_readonly("entries",
                               [](const FrequencyTable& t) {
                                   return std::map<std::string, double>(t.entries().begin(), t.entries().end());
                               })
        .def_property_readonly("total_mass", &FrequencyTable::total_mass)
        .def("__len__", &FrequencyTable::size)
        .def("__contains__", [](const FrequencyTable& t, const std::string& w) { return t.contains(w); });

    m.def("load_corpus", py::overload_cast<const std::filesystem::path&>(&load_corpus), py::arg("manifest"));

    // distortion
    m.def(
        "select_words",
        [](const FrequencyTable& t, const std::string& order, double p, std::uint64_t seed) {
            const auto s = select_words(t, order_of(order, seed), p);
            return std::set<std::string>(s.begin(), s.end());
        },
        py::arg("table"), py::arg("order"), py::arg("p"), py::arg("seed") = 0);
    m.def(
        "distort_text",
        [](const std::string& text, const std::set<std::string>& words, const std::string& mode,
           std::uint64_t seed, const std::string& key) {
            const WordSet ws(words.begin(), words.end());
            return py::bytes(distort_text(text, ws, mode_of(mode, seed), key));
        },
        py::arg("text"), py::arg("words"), py::arg("mode") = "asterisk", py::arg("seed") = 0,
        py::arg("key") = "");
    m.def(
        "apply_spec",
        [](const std::vector<Document>& docs, const FrequencyTable& t, const std::string& order,
           const std::string& mode, double p, std::uint64_t order_seed, std::uint64_t mode_seed) {
            return apply_spec(docs, t, {order_of(order, order_seed), mode_of(mode, mode_seed), p});
        },
        py::arg("docs"), py::arg("table"), py::arg("order"), py::arg("mode"), py::arg("p"),
        py::arg("order_seed") = 0, py::arg("mode_seed") = 0);

    // matrices and trees
    py::class_<NcdMatrix>(m, "NcdMatrix")
        .def(py::init([](std::vector<std::string> labels, const std::vector<std::vector<double>>& values) {
                 NcdMatrix mat(std::move(labels));
                 if (values.size() != mat.size()) throw ValidationError("matrix needs one row per label");
                 for (std::size_t i = 0; i < mat.size(); ++i) {
                     if (values[i].size() != mat.size()) throw ValidationError("matrix rows must be square");
                     for (std::size_t j = i; j < mat.size(); ++j) mat.set(i, j, values[i][j]);
                 }
                 return mat;
             }),
             py::arg("labels"), py::arg("values"), "Takes the upper triangle of `values`.")
        .def_property_readonly("labels", &NcdMatrix::labels)
        .def_property_readonly("diagnostics", &NcdMatrix::diagnostics)
        .def("__len__", &NcdMatrix::size)
        .def("__getitem__", [](const NcdMatrix& mat, std::pair<std::size_t, std::size_t> ij) {
            if (ij.first >= mat.size() || ij.second >= mat.size()) throw py::index_error();
            return mat.at(ij.first, ij.second);
        })
        .def("tolist",
             [](const NcdMatrix& mat) {
                 std::vector<std::vector<double>> rows(mat.size(), std::vector<double>(mat.size()));
                 for (std::size_t i = 0; i < mat.size(); ++i)
                     for (std::size_t j = 0; j < mat.size(); ++j) rows[i][j] = mat.at(i, j);
                 return rows;
             })
        .def("to_text",
             [](const NcdMatrix& mat) {
                 std::ostringstream s;
                 write_matrix(s, mat);
                 return s.str();
             })
        .def_static("from_text",
                    [](const std::string& text) {
                        std::istringstream in(text);
                        return read_matrix(in);
                    })
        .def(py::self == py::self);

    m.def(
        "ncd_matrix",
        [](const Compressor& c, const std::vector<Document>& docs, SizeCache* cache, unsigned jobs, double eps) {
            py::gil_scoped_release nogil;
            return with_cache(cache, [&](SizeCache& sc) { return ncd_matrix(c, docs, sc, {eps, jobs}); });
        },
        py::arg("compressor"), py::arg("docs"), py::arg("cache") = nullptr, py::arg("jobs") = 1,
        py::arg("epsilon") = 0.1);
    m.def(
        "complexity",
        [](const Compressor& c, const std::vector<Document>& docs) {
            const auto s = complexity_stats(c, docs);
            return py::make_tuple(s.mean, s.per_doc);
        },
        py::arg("compressor"), py::arg("docs"), "(mean compressed size, per-document sizes)");

    py::class_<Dendrogram>(m, "Dendrogram")
        .def_static("from_newick", &parse_newick, py::arg("text"))
        .def_property_readonly("newick", [](const Dendrogram& t) { return to_newick(t); })
        .def_property_readonly("labels", &Dendrogram::labels)
        .def("edges", &Dendrogram::edges)
        .def("leaf_distance",
             [](const Dendrogram& t, const std::string& a, const std::string& b) { return leaf_distance(t, a, b); })
        .def("__len__", &Dendrogram::leaf_count)
        .def("__str__", [](const Dendrogram& t) { return to_newick(t); })
        .def(py::self == py::self);

    m.def("neighbor_joining", &neighbor_joining, py::arg("matrix"), py::call_guard<py::gil_scoped_release>());
    m.def(
        "quartet_score",
        [](const Dendrogram& t, const NcdMatrix& mat) {
            const auto s = quartet_score(t, mat);
            return py::make_tuple(s.raw, s.normalized);
        },
        py::arg("tree"), py::arg("matrix"), "(raw cost, normalized score)");
    m.def(
        "hill_climb",
        [](const Dendrogram& start, const NcdMatrix& mat, std::size_t budget, std::uint64_t seed) {
            HillClimbResult r;
            {
                py::gil_scoped_release nogil;
                r = hill_climb(start, mat, budget, seed);
            }
            return py::make_tuple(r.tree, r.score.normalized, r.trace);
        },
        py::arg("start"), py::arg("matrix"), py::arg("budget"), py::arg("seed") = 1,
        "(tree, normalized score, [(iteration, score)] trace)");
    m.def("random_tree", &random_tree, py::arg("labels"), py::arg("seed"));
    m.def("enumerate_trees", py::overload_cast<const std::vector<std::string>&>(&enumerate_trees),
          py::arg("labels"));

    // evaluation
    m.def(
        "clustering_error",
        [](const Dendrogram& t, std::optional<std::map<std::string, std::string>> grouping) {
            Grouping g;
            if (grouping) {
                g.insert(grouping->begin(), grouping->end());
            } else {
                g = grouping_from_labels(t.labels());
            }
            const auto r = clustering_error(t, g);
            py::dict out;
            out["total"] = r.total;
            out["per_group"] = r.per_group;
            out["ideal"] = r.ideal;
            out["ideal_exact"] = r.ideal_exact;
            return out;
        },
        py::arg("tree"), py::arg("grouping") = py::none(),
        "Grouping defaults to the label text before the first '.'.");
    m.def(
        "ideal_error",
        [](const std::vector<std::size_t>& sizes, std::size_t n) {
            const auto r = ideal_error(sizes, n);
            return py::make_tuple(r.value, r.exact);
        },
        py::arg("group_sizes"), py::arg("n"), "(value, exact)");
    m.def("ideal_tree", &ideal_tree, py::arg("group_sizes"), py::arg("n"));

    // synthetic corpora
    m.def(
        "synthetic_corpus",
        [](std::size_t sources, std::size_t docs, std::size_t bytes, std::size_t private_words, std::uint64_t seed) {
            auto c = make_synthetic_corpus({sources, docs, bytes, private_words, seed});
            return py::make_tuple(std::move(c.docs), std::move(c.table));
        },
        py::arg("sources") = 4, py::arg("docs_per_source") = 3, py::arg("doc_bytes") = 50 * 1024,
        py::arg("private_words") = 200, py::arg("seed") = 1, "(documents, frequency table)");

    // harness
    py::class_<ExperimentConfig>(m, "ExperimentConfig")
        .def(py::init<>())
        .def_readwrite("manifest", &ExperimentConfig::manifest)
        .def_readwrite("frequency_table", &ExperimentConfig::frequency_table)
        .def_readwrite("compressor", &ExperimentConfig::compressor)
        .def_property(
            "orders",
            [](const ExperimentConfig& c) {
                std::vector<std::string> v;
                for (auto o : c.orders) v.emplace_back(to_string(o));
                return v;
            },
            [](ExperimentConfig& c, const std::vector<std::string>& v) {
                c.orders.clear();
                for (const auto& s : v) c.orders.push_back(parse_selection_order(s));
            })
        .def_property(
            "modes",
            [](const ExperimentConfig& c) {
                std::vector<std::string> v;
                for (auto o : c.modes) v.emplace_back(to_string(o));
                return v;
            },
            [](ExperimentConfig& c, const std::vector<std::string>& v) {
                c.modes.clear();
                for (const auto& s : v) c.modes.push_back(parse_substitution_mode(s));
            })
        .def_readwrite("p_grid", &ExperimentConfig::p_grid)
        .def_readwrite("trials", &ExperimentConfig::trials)
        .def_readwrite("master_seed", &ExperimentConfig::master_seed)
        .def_readwrite("budget", &ExperimentConfig::budget)
        .def_readwrite("output_dir", &ExperimentConfig::output_dir)
        .def_readwrite("jobs", &ExperimentConfig::jobs)
        .def_readwrite("cache_path", &ExperimentConfig::cache_path)
        .def_readwrite("epsilon", &ExperimentConfig::epsilon)
        .def("validate", &ExperimentConfig::validate);

    py::class_<SweepRow>(m, "SweepRow")
        .def_property_readonly("order", [](const SweepRow& r) { return std::string(to_string(r.order)); })
        .def_property_readonly("mode", [](const SweepRow& r) { return std::string(to_string(r.mode)); })
        .def_readonly("p", &SweepRow::p)
        .def_readonly("trial", &SweepRow::trial)
        .def_readonly("seed", &SweepRow::seed)
        .def_readonly("clustering_error", &SweepRow::clustering_error)
        .def_readonly("ideal_error", &SweepRow::ideal_error)
        .def_readonly("mean_complexity", &SweepRow::mean_complexity)
        .def_readonly("tree_score", &SweepRow::tree_score)
        .def_readonly("ok", &SweepRow::ok)
        .def_readonly("message", &SweepRow::message)
        .def(py::self == py::self);

    py::class_<SummaryRow>(m, "SummaryRow")
        .def_property_readonly("order", [](const SummaryRow& r) { return std::string(to_string(r.order)); })
        .def_property_readonly("mode", [](const SummaryRow& r) { return std::string(to_string(r.mode)); })
        .def_readonly("p", &SummaryRow::p)
        .def_readonly("trials", &SummaryRow::trials)
        .def_readonly("failed", &SummaryRow::failed)
        .def_readonly("error_mean", &SummaryRow::error_mean)
        .def_readonly("error_std", &SummaryRow::error_std)
        .def_readonly("complexity_mean", &SummaryRow::complexity_mean)
        .def_readonly("complexity_std", &SummaryRow::complexity_std)
        .def_readonly("tree_score_mean", &SummaryRow::tree_score_mean);

    py::class_<SweepResult>(m, "SweepResult")
        .def_readonly("rows", &SweepResult::rows)
        .def_readonly("trees", &SweepResult::trees)
        .def_readonly("baseline_error", &SweepResult::baseline_error)
        .def_readonly("ideal_error", &SweepResult::ideal_error)
        .def_readonly("ideal_exact", &SweepResult::ideal_exact);

    m.def(
        "run_sweep",
        [](const ExperimentConfig& cfg) {
            py::gil_scoped_release nogil;
            return run_sweep(cfg);
        },
        py::arg("config"), "Loads manifest, table and cache from the config and runs every cell.");
    m.def(
        "run_sweep_on",
        [](const ExperimentConfig& cfg, const std::vector<Document>& docs, const FrequencyTable& table,
           const Compressor& c, SizeCache* cache) {
            py::gil_scoped_release nogil;
            return with_cache(cache, [&](SizeCache& sc) { return run_sweep(cfg, docs, table, c, sc); });
        },
        py::arg("config"), py::arg("docs"), py::arg("table"), py::arg("compressor"), py::arg("cache") = nullptr,
        "Sweep over documents already in memory.");
    m.def("aggregate", &aggregate, py::arg("rows"));
    m.def("emit", &emit, py::arg("result"), py::arg("summary"), py::arg("outdir"));
    m.def("default_p_grid", &default_p_grid);
}
