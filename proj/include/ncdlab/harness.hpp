#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ncdlab/compressor.hpp"
#include "ncdlab/corpus.hpp"
#include "ncdlab/distortion.hpp"
#include "ncdlab/size_cache.hpp"

namespace ncdlab {

/// 0.0, 0.1, ..., 1.0
std::vector<double> default_p_grid();

struct ExperimentConfig {
    std::filesystem::path manifest;
    std::filesystem::path frequency_table;
    std::string compressor = "lzma";
    std::vector<SelectionOrder::Kind> orders = {SelectionOrder::Kind::MostFrequentFirst,
                                                SelectionOrder::Kind::RandomPermutation,
                                                SelectionOrder::Kind::LeastFrequentFirst};
    std::vector<SubstitutionMode::Kind> modes = {SubstitutionMode::Kind::Asterisk,
                                                 SubstitutionMode::Kind::RandomChars};
    std::vector<double> p_grid = default_p_grid();
    /// Trials per cell for RandomPermutation; the other orders run once.
    std::size_t trials = 10;
    std::uint64_t master_seed = 1;
    /// Hill-climb steps per tree; unset means 10^4 * (number of documents).
    std::optional<std::size_t> budget;
    std::filesystem::path output_dir = "out";
    unsigned jobs = 1;
    std::optional<std::filesystem::path> cache_path;
    double epsilon = 0.1;

    /// Throws ValidationError: p values in [0, 1] and strictly increasing,
    /// trials >= 1, non-empty order and mode lists without repeats.
    void validate() const;
};

struct SweepRow {
    SelectionOrder::Kind order = SelectionOrder::Kind::MostFrequentFirst;
    SubstitutionMode::Kind mode = SubstitutionMode::Kind::Asterisk;
    double p = 0.0;
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    long clustering_error = 0;
    long ideal_error = 0;
    double mean_complexity = 0.0;
    double tree_score = 0.0;
    bool ok = true;
    std::string message;  // failure description for error rows

    friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    /// Canonical Newick per row (empty for error rows).
    std::vector<std::string> trees;
    long baseline_error = 0;
    long ideal_error = 0;
    bool ideal_exact = false;
};

using ProgressFn = std::function<void(const SweepRow&)>;

/// Every (order, mode, p, trial) cell: distort, NCD matrix, neighbour
/// joining refined by hill climbing, clustering error and mean compressed
/// size. The p = 0 cells all reuse one undistorted baseline. A failing cell
/// becomes an error row; the sweep continues. Output order and content do
/// not depend on `cfg.jobs`.
SweepResult run_sweep(const ExperimentConfig& cfg, const std::vector<Document>& corpus,
                      const FrequencyTable& table, const Compressor& compressor, SizeCache& cache,
                      const ProgressFn& progress = {});

/// Loads the manifest, frequency table and size cache named in `cfg`, runs
/// the sweep and saves the cache back.
SweepResult run_sweep(const ExperimentConfig& cfg, const ProgressFn& progress = {});

/// Seeds derived from the master seed. Word permutations depend on the trial
/// only, random characters on (order, trial), so a trial's curve over p is
/// distorted consistently; the search seed is per cell.
std::uint64_t permutation_seed(std::uint64_t master, std::size_t trial);
std::uint64_t substitution_seed(std::uint64_t master, SelectionOrder::Kind order, std::size_t trial);
std::uint64_t cell_seed(std::uint64_t master, SelectionOrder::Kind order, SubstitutionMode::Kind mode, double p,
                        std::size_t trial);
std::uint64_t baseline_seed(std::uint64_t master);

struct SummaryRow {
    SelectionOrder::Kind order = SelectionOrder::Kind::MostFrequentFirst;
    SubstitutionMode::Kind mode = SubstitutionMode::Kind::Asterisk;
    double p = 0.0;
    std::size_t trials = 0;  // successful rows
    std::size_t failed = 0;
    double error_mean = 0.0;
    double error_std = 0.0;  // sample standard deviation, 0 for one trial
    double complexity_mean = 0.0;
    double complexity_std = 0.0;
    double tree_score_mean = 0.0;
};

/// Per (order, mode, p) statistics over the successful rows, sorted by
/// (order, mode, p). Independent of the order of `rows`.
std::vector<SummaryRow> aggregate(const std::vector<SweepRow>& rows);

/// Writes into `outdir`:
///   sweep.csv, summary.csv
///   series/error_<order>_<mode>.tsv, series/complexity_<order>_<mode>.tsv
///   series/compare_error_asterisk.tsv, series/compare_complexity_asterisk.tsv
///   trees/<order>_<mode>_p<p>_t<trial>.nwk
/// Returns the files written, relative to outdir, in write order.
std::vector<std::filesystem::path> emit(const SweepResult& result, const std::vector<SummaryRow>& summary,
                                        const std::filesystem::path& outdir);

inline constexpr const char* kSweepCsvHeader =
    "order,mode,p,trial,seed,clustering_error,ideal_error,mean_complexity,tree_score,status,message";
inline constexpr const char* kSummaryCsvHeader =
    "order,mode,p,trials,failed,error_mean,error_std,complexity_mean,complexity_std,tree_score_mean";

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);
std::vector<SweepRow> read_sweep_csv(std::istream& in);
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);

}  // namespace ncdlab
