#include "ncdlab/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <cstdio>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <tuple>

#include "ncdlab/clustering.hpp"
#include "ncdlab/error.hpp"
#include "ncdlab/evaluation.hpp"
#include "ncdlab/ncd.hpp"
#include "ncdlab/parallel.hpp"
#include "ncdlab/rng.hpp"

namespace ncdlab {

std::vector<double> default_p_grid() {
    std::vector<double> g;
    for (int k = 0; k <= 10; ++k) g.push_back(k / 10.0);
    return g;
}

void ExperimentConfig::validate() const {
    if (p_grid.empty()) throw ValidationError("p grid is empty");
    for (std::size_t i = 0; i < p_grid.size(); ++i) {
        if (!(p_grid[i] >= 0.0 && p_grid[i] <= 1.0)) throw ValidationError("p grid values must lie in [0, 1]");
        if (i > 0 && !(p_grid[i] > p_grid[i - 1])) throw ValidationError("p grid must be strictly increasing");
    }
    if (trials < 1) throw ValidationError("trials must be at least 1");
    if (orders.empty()) throw ValidationError("no selection orders given");
    if (modes.empty()) throw ValidationError("no substitution modes given");
    if (std::set(orders.begin(), orders.end()).size() != orders.size()) {
        throw ValidationError("selection orders repeat");
    }
    if (std::set(modes.begin(), modes.end()).size() != modes.size()) {
        throw ValidationError("substitution modes repeat");
    }
    if (!(epsilon >= 0.0)) throw ValidationError("epsilon must be non-negative");
}

std::uint64_t permutation_seed(std::uint64_t master, std::size_t trial) {
    return mix_seed(master, "permutation/" + std::to_string(trial));
}

std::uint64_t substitution_seed(std::uint64_t master, SelectionOrder::Kind order, std::size_t trial) {
    return mix_seed(master, "substitution/" + std::string(to_string(order)) + "/" + std::to_string(trial));
}

std::uint64_t cell_seed(std::uint64_t master, SelectionOrder::Kind order, SubstitutionMode::Kind mode, double p,
                        std::size_t trial) {
    return mix_seed(master, "cell/" + std::string(to_string(order)) + "/" + std::string(to_string(mode)) + "/" +
                                format_double(p) + "/" + std::to_string(trial));
}

std::uint64_t baseline_seed(std::uint64_t master) { return mix_seed(master, "baseline"); }

namespace {

struct Cell {
    SelectionOrder::Kind order;
    SubstitutionMode::Kind mode;
    double p;
    std::size_t trial;
};

struct CellOutcome {
    long error = 0;
    double complexity = 0.0;
    double score = 0.0;
    std::string newick;
};

CellOutcome cluster_corpus(const std::vector<Document>& docs, const Grouping& grouping, const Compressor& c,
                           SizeCache& cache, std::size_t budget, std::uint64_t seed, double epsilon) {
    const auto m = ncd_matrix(c, docs, cache, {epsilon, 1});
    const auto nj = neighbor_joining(m);
    const auto hc = hill_climb(nj, m, budget, seed);
    CellOutcome out;
    out.error = clustering_error_total(hc.tree, grouping);
    out.complexity = complexity_stats(c, docs, &cache).mean;
    out.score = hc.score.normalized;
    out.newick = to_newick(hc.tree);
    return out;
}

}  // namespace

SweepResult run_sweep(const ExperimentConfig& cfg, const std::vector<Document>& corpus,
                      const FrequencyTable& table, const Compressor& compressor, SizeCache& cache,
                      const ProgressFn& progress) {
    cfg.validate();
    validate_corpus(corpus);
    if (corpus.size() < 3) throw ValidationError("a sweep needs at least three documents");
    const auto grouping = grouping_from_documents(corpus);
    const auto budget = cfg.budget.value_or(10000 * corpus.size());

    SweepResult result;
    const auto ideal = ideal_error(group_sizes(grouping), corpus.size());
    result.ideal_error = ideal.value;
    result.ideal_exact = ideal.exact;

    std::vector<Cell> cells;
    for (auto order : cfg.orders) {
        const auto trials = order == SelectionOrder::Kind::RandomPermutation ? cfg.trials : std::size_t{1};
        for (auto mode : cfg.modes) {
            for (auto p : cfg.p_grid) {
                for (std::size_t t = 0; t < trials; ++t) cells.push_back({order, mode, p, t});
            }
        }
    }

    const bool need_baseline = std::any_of(cells.begin(), cells.end(), [](const Cell& c) { return c.p == 0.0; });
    std::optional<CellOutcome> baseline;
    std::string baseline_failure;
    if (need_baseline) {
        try {
            baseline = cluster_corpus(corpus, grouping, compressor, cache, budget, baseline_seed(cfg.master_seed),
                                      cfg.epsilon);
            result.baseline_error = baseline->error;
        } catch (const std::exception& e) {
            baseline_failure = e.what();
        }
    }

    result.rows.resize(cells.size());
    result.trees.resize(cells.size());
    std::mutex progress_mutex;
    parallel_for(cells.size(), cfg.jobs, [&](std::size_t k) {
        const auto& cell = cells[k];
        SweepRow row;
        row.order = cell.order;
        row.mode = cell.mode;
        row.p = cell.p;
        row.trial = cell.trial;
        row.ideal_error = result.ideal_error;
        try {
            std::optional<CellOutcome> outcome;
            if (cell.p == 0.0) {
                row.seed = baseline_seed(cfg.master_seed);
                if (!baseline) throw Error("baseline failed: " + baseline_failure);
                outcome = baseline;
            } else {
                row.seed = cell_seed(cfg.master_seed, cell.order, cell.mode, cell.p, cell.trial);
                DistortionSpec spec;
                spec.p = cell.p;
                spec.order = {cell.order, permutation_seed(cfg.master_seed, cell.trial)};
                spec.mode = {cell.mode, substitution_seed(cfg.master_seed, cell.order, cell.trial)};
                const auto docs = apply_spec(corpus, table, spec);
                outcome = cluster_corpus(docs, grouping, compressor, cache, budget, row.seed, cfg.epsilon);
            }
            row.clustering_error = outcome->error;
            row.mean_complexity = outcome->complexity;
            row.tree_score = outcome->score;
            result.trees[k] = outcome->newick;
        } catch (const std::exception& e) {
            row.ok = false;
            row.message = e.what();
        }
        result.rows[k] = row;
        if (progress) {
            std::lock_guard lock(progress_mutex);
            progress(row);
        }
    });
    return result;
}

SweepResult run_sweep(const ExperimentConfig& cfg, const ProgressFn& progress) {
    cfg.validate();
    const auto corpus = load_corpus(cfg.manifest);
    const auto table = load_frequency_table(cfg.frequency_table);
    const auto compressor = make_compressor(cfg.compressor);
    auto cache = cfg.cache_path ? std::make_unique<SizeCache>(*cfg.cache_path) : std::make_unique<SizeCache>();
    auto result = run_sweep(cfg, corpus, table, *compressor, *cache, progress);
    cache->save();
    return result;
}

namespace {

double mean_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    double s = 0.0;
    for (auto x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double sample_std(std::vector<double> v, double mean) {
    if (v.size() < 2) return 0.0;
    std::sort(v.begin(), v.end());
    double s = 0.0;
    for (auto x : v) s += (x - mean) * (x - mean);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace

std::vector<SummaryRow> aggregate(const std::vector<SweepRow>& rows) {
    using Key = std::tuple<SelectionOrder::Kind, SubstitutionMode::Kind, double>;
    struct Acc {
        std::vector<double> errors, complexities, scores;
        std::size_t failed = 0;
    };
    std::map<Key, Acc> groups;
    for (const auto& r : rows) {
        auto& a = groups[{r.order, r.mode, r.p}];
        if (!r.ok) {
            ++a.failed;
            continue;
        }
        a.errors.push_back(static_cast<double>(r.clustering_error));
        a.complexities.push_back(r.mean_complexity);
        a.scores.push_back(r.tree_score);
    }
    std::vector<SummaryRow> out;
    for (const auto& [key, a] : groups) {
        SummaryRow s;
        std::tie(s.order, s.mode, s.p) = key;
        s.trials = a.errors.size();
        s.failed = a.failed;
        s.error_mean = mean_of(a.errors);
        s.error_std = sample_std(a.errors, s.error_mean);
        s.complexity_mean = mean_of(a.complexities);
        s.complexity_std = sample_std(a.complexities, s.complexity_mean);
        s.tree_score_mean = mean_of(a.scores);
        out.push_back(s);
    }
    return out;
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::vector<std::string> csv_split(const std::string& line, std::size_t lineno) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(std::move(cur));
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    if (quoted) throw ParseError("unterminated quoted CSV field", lineno);
    out.push_back(std::move(cur));
    return out;
}

template <class T>
T parse_number(const std::string& s, std::size_t lineno) {
    T v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) throw ParseError("bad number '" + s + "'", lineno);
    return v;
}

std::string p_tag(double p) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", p);
    return buf;
}

}  // namespace

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << kSweepCsvHeader << '\n';
    for (const auto& r : rows) {
        out << to_string(r.order) << ',' << to_string(r.mode) << ',' << format_double(r.p) << ',' << r.trial << ','
            << r.seed << ',';
        if (r.ok) {
            out << r.clustering_error << ',' << r.ideal_error << ',' << format_double(r.mean_complexity) << ','
                << format_double(r.tree_score) << ",ok,";
        } else {
            out << ',' << r.ideal_error << ",,,error," << csv_field(r.message);
        }
        out << '\n';
    }
}

std::vector<SweepRow> read_sweep_csv(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line)) throw ValidationError("sweep CSV is empty");
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kSweepCsvHeader) throw ParseError("unexpected sweep CSV header", lineno);
    std::vector<SweepRow> rows;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto f = csv_split(line, lineno);
        if (f.size() != 11) throw ParseError("expected 11 CSV fields", lineno);
        SweepRow r;
        r.order = parse_selection_order(f[0]);
        r.mode = parse_substitution_mode(f[1]);
        r.p = parse_number<double>(f[2], lineno);
        r.trial = parse_number<std::size_t>(f[3], lineno);
        r.seed = parse_number<std::uint64_t>(f[4], lineno);
        if (f[9] == "ok") {
            r.clustering_error = parse_number<long>(f[5], lineno);
            r.ideal_error = parse_number<long>(f[6], lineno);
            r.mean_complexity = parse_number<double>(f[7], lineno);
            r.tree_score = parse_number<double>(f[8], lineno);
        } else if (f[9] == "error") {
            r.ok = false;
            r.ideal_error = parse_number<long>(f[6], lineno);
            r.message = f[10];
        } else {
            throw ParseError("status must be 'ok' or 'error'", lineno);
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
    out << kSummaryCsvHeader << '\n';
    for (const auto& s : rows) {
        out << to_string(s.order) << ',' << to_string(s.mode) << ',' << format_double(s.p) << ',' << s.trials << ','
            << s.failed << ',' << format_double(s.error_mean) << ',' << format_double(s.error_std) << ','
            << format_double(s.complexity_mean) << ',' << format_double(s.complexity_std) << ','
            << format_double(s.tree_score_mean) << '\n';
    }
}

std::vector<std::filesystem::path> emit(const SweepResult& result, const std::vector<SummaryRow>& summary,
                                        const std::filesystem::path& outdir) {
    namespace fs = std::filesystem;
    std::vector<fs::path> written;
    auto put = [&](const fs::path& rel, const std::string& contents) {
        try {
            write_file(outdir / rel, contents);
        } catch (const std::exception& e) {
            throw IoError("emit: " + (outdir / rel).string() + ": " + e.what());
        }
        written.push_back(rel);
    };

    {
        std::ostringstream s;
        write_sweep_csv(s, result.rows);
        put("sweep.csv", s.str());
    }
    {
        std::ostringstream s;
        write_summary_csv(s, summary);
        put("summary.csv", s.str());
    }

    const std::string constants = "# ideal=" + std::to_string(result.ideal_error) +
                                  (result.ideal_exact ? "" : " (bound)") +
                                  "\n# baseline=" + std::to_string(result.baseline_error) + "\n";

    // Curves per (order, mode) in first-seen summary order.
    std::vector<std::pair<SelectionOrder::Kind, SubstitutionMode::Kind>> combos;
    for (const auto& s : summary) {
        const auto c = std::pair{s.order, s.mode};
        if (std::find(combos.begin(), combos.end(), c) == combos.end()) combos.push_back(c);
    }
    for (const auto& [order, mode] : combos) {
        const auto tag = std::string(to_string(order)) + "_" + std::string(to_string(mode));
        std::string err = "# clustering error, order=" + std::string(to_string(order)) +
                          " mode=" + std::string(to_string(mode)) + "\n" + constants;
        std::string cpx = "# mean compressed size (bytes), order=" + std::string(to_string(order)) +
                          " mode=" + std::string(to_string(mode)) + "\n";
        for (const auto& s : summary) {
            if (s.order != order || s.mode != mode || s.trials == 0) continue;
            err += format_double(s.p) + "\t" + format_double(s.error_mean) + "\n";
            cpx += format_double(s.p) + "\t" + format_double(s.complexity_mean) + "\n";
        }
        put(fs::path("series") / ("error_" + tag + ".tsv"), err);
        put(fs::path("series") / ("complexity_" + tag + ".tsv"), cpx);
    }

    // Asterisk curves of all orders side by side, one block per order.
    const bool has_asterisk = std::any_of(combos.begin(), combos.end(), [](const auto& c) {
        return c.second == SubstitutionMode::Kind::Asterisk;
    });
    if (has_asterisk) {
        std::string err = "# clustering error, mode=asterisk, all orders\n" + constants;
        std::string cpx = "# mean compressed size (bytes), mode=asterisk, all orders\n";
        bool first = true;
        for (const auto& [order, mode] : combos) {
            if (mode != SubstitutionMode::Kind::Asterisk) continue;
            if (!first) {
                err += "\n\n";
                cpx += "\n\n";
            }
            first = false;
            err += "# order=" + std::string(to_string(order)) + "\n";
            cpx += "# order=" + std::string(to_string(order)) + "\n";
            for (const auto& s : summary) {
                if (s.order != order || s.mode != mode || s.trials == 0) continue;
                err += format_double(s.p) + "\t" + format_double(s.error_mean) + "\n";
                cpx += format_double(s.p) + "\t" + format_double(s.complexity_mean) + "\n";
            }
        }
        put(fs::path("series") / "compare_error_asterisk.tsv", err);
        put(fs::path("series") / "compare_complexity_asterisk.tsv", cpx);
    }

    for (std::size_t k = 0; k < result.rows.size(); ++k) {
        const auto& r = result.rows[k];
        if (!r.ok || k >= result.trees.size()) continue;
        const auto name = std::string(to_string(r.order)) + "_" + std::string(to_string(r.mode)) + "_p" +
                          p_tag(r.p) + "_t" + std::to_string(r.trial) + ".nwk";
        put(fs::path("trees") / name, result.trees[k] + "\n");
    }
    return written;
}

}  // namespace ncdlab
