#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ncdlab/clustering.hpp"
#include "ncdlab/compressor.hpp"
#include "ncdlab/corpus.hpp"
#include "ncdlab/distortion.hpp"
#include "ncdlab/error.hpp"
#include "ncdlab/evaluation.hpp"
#include "ncdlab/harness.hpp"
#include "ncdlab/ncd.hpp"
#include "ncdlab/size_cache.hpp"
#include "ncdlab/synthetic.hpp"

using namespace ncdlab;
namespace fs = std::filesystem;

namespace {

std::unique_ptr<SizeCache> open_cache(const std::string& path) {
    return path.empty() ? std::make_unique<SizeCache>() : std::make_unique<SizeCache>(path);
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
    } else {
        write_file(path, text);
    }
}

std::string read_input(const std::string& path) {
    if (path.empty() || path == "-") {
        std::ostringstream s;
        s << std::cin.rdbuf();
        return s.str();
    }
    return read_file(path);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Compression-distance clustering under word distortion"};
    app.require_subcommand(1);

    // sweep
    ExperimentConfig cfg;
    std::vector<std::string> orders, modes;
    std::string sweep_cache;
    std::size_t sweep_budget = 0;
    bool quiet = false;
    auto* sweep = app.add_subcommand("sweep", "Run the distortion sweep and write CSV, series and trees");
    sweep->add_option("-m,--manifest", cfg.manifest, "Corpus manifest")->required();
    sweep->add_option("-f,--freq", cfg.frequency_table, "Word frequency table")->required();
    sweep->add_option("-c,--compressor", cfg.compressor, "lzma[:0-9[e]], xz, gzip[:1-9]")->capture_default_str();
    sweep->add_option("--orders", orders, "Selection orders: most, random, least")->delimiter(',');
    sweep->add_option("--modes", modes, "Substitution modes: asterisk, random")->delimiter(',');
    sweep->add_option("--p", cfg.p_grid, "Word selection fractions, comma separated")->delimiter(',');
    sweep->add_option("--trials", cfg.trials, "Trials for the random order")->capture_default_str();
    sweep->add_option("--seed", cfg.master_seed, "Master seed")->capture_default_str();
    sweep->add_option("--budget", sweep_budget, "Hill-climb steps per tree (default 10000 per document)");
    sweep->add_option("-o,--out", cfg.output_dir, "Output directory")->capture_default_str();
    sweep->add_option("-j,--jobs", cfg.jobs, "Worker threads")->capture_default_str();
    sweep->add_option("--cache", sweep_cache, "Size cache file");
    sweep->add_option("--epsilon", cfg.epsilon, "NCD range tolerance for diagnostics")->capture_default_str();
    sweep->add_flag("-q,--quiet", quiet, "No progress output");

    // ncd
    std::string ncd_manifest, ncd_compressor = "lzma", ncd_cache, ncd_out;
    NcdMatrixOptions ncd_opts;
    auto* ncd_cmd = app.add_subcommand("ncd", "Compute the NCD matrix of a corpus");
    ncd_cmd->add_option("-m,--manifest", ncd_manifest, "Corpus manifest")->required();
    ncd_cmd->add_option("-c,--compressor", ncd_compressor, "Compressor")->capture_default_str();
    ncd_cmd->add_option("--cache", ncd_cache, "Size cache file");
    ncd_cmd->add_option("-j,--jobs", ncd_opts.jobs, "Worker threads")->capture_default_str();
    ncd_cmd->add_option("--epsilon", ncd_opts.epsilon, "NCD range tolerance")->capture_default_str();
    ncd_cmd->add_option("-o,--out", ncd_out, "Matrix file (default stdout)");

    // tree
    std::string tree_in, tree_out;
    std::optional<std::size_t> tree_budget;
    std::uint64_t tree_seed = 1;
    bool nj_only = false;
    auto* tree_cmd = app.add_subcommand("tree", "Cluster an NCD matrix into an unrooted binary tree");
    tree_cmd->add_option("matrix", tree_in, "Matrix file (default stdin)");
    tree_cmd->add_option("--budget", tree_budget, "Hill-climb steps (default 10000 per leaf)");
    tree_cmd->add_option("--seed", tree_seed, "Search seed")->capture_default_str();
    tree_cmd->add_flag("--nj-only", nj_only, "Skip hill climbing");
    tree_cmd->add_option("-o,--out", tree_out, "Newick file (default stdout)");

    // score
    std::string score_tree, score_grouping;
    auto* score_cmd = app.add_subcommand("score", "Clustering error of a Newick tree");
    score_cmd->add_option("tree", score_tree, "Newick file (default stdin)");
    score_cmd->add_option("-g,--grouping", score_grouping,
                          "Lines of 'label group'; default is the label text before the first '.'");

    // distort
    std::string d_manifest, d_freq, d_order = "most", d_mode = "asterisk", d_out;
    double d_p = 0.0;
    std::uint64_t d_seed = 1;
    std::size_t d_trial = 0;
    auto* distort_cmd = app.add_subcommand("distort", "Write a distorted copy of a corpus");
    distort_cmd->add_option("-m,--manifest", d_manifest, "Corpus manifest")->required();
    distort_cmd->add_option("-f,--freq", d_freq, "Word frequency table")->required();
    distort_cmd->add_option("--order", d_order, "most, random or least")->capture_default_str();
    distort_cmd->add_option("--mode", d_mode, "asterisk or random")->capture_default_str();
    distort_cmd->add_option("--p", d_p, "Word selection fraction")->required()->check(CLI::Range(0.0, 1.0));
    distort_cmd->add_option("--seed", d_seed, "Master seed, as in sweep")->capture_default_str();
    distort_cmd->add_option("--trial", d_trial, "Trial index, as in sweep")->capture_default_str();
    distort_cmd->add_option("-o,--out", d_out, "Output directory")->required();

    // synth
    SyntheticCorpusOptions synth_opts;
    std::string synth_out;
    auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic corpus with manifest and frequency table");
    synth_cmd->add_option("--sources", synth_opts.sources, "Markov sources (groups)")->capture_default_str();
    synth_cmd->add_option("--docs", synth_opts.docs_per_source, "Documents per source")->capture_default_str();
    synth_cmd->add_option("--bytes", synth_opts.doc_bytes, "Approximate document length")->capture_default_str();
    synth_cmd->add_option("--private-words", synth_opts.private_words, "Source-specific vocabulary size")
        ->capture_default_str();
    synth_cmd->add_option("--seed", synth_opts.seed, "Generator seed")->capture_default_str();
    synth_cmd->add_option("-o,--out", synth_out, "Output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (sweep->parsed()) {
            if (!orders.empty()) {
                cfg.orders.clear();
                for (const auto& o : orders) cfg.orders.push_back(parse_selection_order(o));
            }
            if (!modes.empty()) {
                cfg.modes.clear();
                for (const auto& m : modes) cfg.modes.push_back(parse_substitution_mode(m));
            }
            if (sweep->count("--budget")) cfg.budget = sweep_budget;
            if (!sweep_cache.empty()) cfg.cache_path = sweep_cache;
            ProgressFn progress;
            if (!quiet) {
                progress = [](const SweepRow& r) {
                    std::cerr << to_string(r.order) << ' ' << to_string(r.mode) << " p=" << format_double(r.p)
                              << " t=" << r.trial << ": ";
                    if (r.ok) {
                        std::cerr << "error " << r.clustering_error << ", complexity "
                                  << format_double(r.mean_complexity) << '\n';
                    } else {
                        std::cerr << "FAILED " << r.message << '\n';
                    }
                };
            }
            const auto result = run_sweep(cfg, progress);
            const auto files = emit(result, aggregate(result.rows), cfg.output_dir);
            std::size_t failed = 0;
            for (const auto& r : result.rows) failed += r.ok ? 0 : 1;
            std::cerr << result.rows.size() << " cells, " << failed << " failed; ideal " << result.ideal_error
                      << (result.ideal_exact ? "" : " (bound)") << ", baseline " << result.baseline_error << "; "
                      << files.size() << " files in " << cfg.output_dir.string() << '\n';
            return failed == 0 ? 0 : 3;
        }

        if (ncd_cmd->parsed()) {
            const auto docs = load_corpus(fs::path(ncd_manifest));
            const auto c = make_compressor(ncd_compressor);
            auto cache = open_cache(ncd_cache);
            const auto m = ncd_matrix(*c, docs, *cache, ncd_opts);
            cache->save();
            for (const auto& d : m.diagnostics()) std::cerr << "warning: " << d << '\n';
            std::ostringstream s;
            write_matrix(s, m);
            write_output(ncd_out, s.str());
            return 0;
        }

        if (tree_cmd->parsed()) {
            std::istringstream in(read_input(tree_in));
            const auto m = read_matrix(in);
            auto t = neighbor_joining(m);
            auto score = quartet_score(t, m);
            if (!nj_only) {
                const auto hc = hill_climb(t, m, tree_budget.value_or(10000 * m.size()), tree_seed);
                t = hc.tree;
                score = hc.score;
            }
            write_output(tree_out, to_newick(t) + "\n");
            std::cerr << "quartet score " << format_double(score.normalized) << " (raw "
                      << format_double(score.raw) << ")\n";
            return 0;
        }

        if (score_cmd->parsed()) {
            const auto t = parse_newick(read_input(score_tree));
            const auto g = score_grouping.empty() ? grouping_from_labels(t.labels()) : read_grouping(score_grouping);
            const auto r = clustering_error(t, g);
            std::cout << "error\t" << r.total << '\n'
                      << "ideal\t" << r.ideal << (r.ideal_exact ? "" : "\t(bound)") << '\n';
            for (const auto& [group, v] : r.per_group) std::cout << "group\t" << group << '\t' << v << '\n';
            return 0;
        }

        if (distort_cmd->parsed()) {
            const auto entries = read_manifest(d_manifest);
            const auto docs = load_corpus(entries);
            const auto table = load_frequency_table(fs::path(d_freq));
            DistortionSpec spec;
            spec.p = d_p;
            const auto order = parse_selection_order(d_order);
            spec.order = {order, permutation_seed(d_seed, d_trial)};
            spec.mode = {parse_substitution_mode(d_mode), substitution_seed(d_seed, order, d_trial)};
            const auto out = apply_spec(docs, table, spec);
            std::vector<ManifestEntry> mirrored;
            for (const auto& d : out) {
                const fs::path rel = d.id + ".txt";
                write_file(fs::path(d_out) / rel, d.text);
                mirrored.push_back({rel, d.group_tag, d.title_tag});
            }
            write_manifest(fs::path(d_out) / "manifest.tsv", mirrored);
            std::cerr << out.size() << " documents written to " << d_out << '\n';
            return 0;
        }

        if (synth_cmd->parsed()) {
            write_synthetic_corpus(make_synthetic_corpus(synth_opts), synth_out);
            return 0;
        }
    } catch (const ParseError& e) {
        std::cerr << "ncdlab: parse error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "ncdlab: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
