#include <algorithm>
#include <filesystem>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "ncdlab/compressor.hpp"
#include "ncdlab/corpus.hpp"
#include "ncdlab/dendrogram.hpp"
#include "ncdlab/error.hpp"
#include "ncdlab/harness.hpp"
#include "ncdlab/size_cache.hpp"
#include "ncdlab/synthetic.hpp"

using namespace ncdlab;
namespace fs = std::filesystem;

namespace {

using Order = SelectionOrder::Kind;
using Mode = SubstitutionMode::Kind;

SweepRow row(Order o, Mode m, double p, std::size_t trial, long err, double cpx) {
    SweepRow r;
    r.order = o;
    r.mode = m;
    r.p = p;
    r.trial = trial;
    r.clustering_error = err;
    r.mean_complexity = cpx;
    return r;
}

fs::path scratch(const std::string& name) {
    auto dir = fs::temp_directory_path() / ("ncdlab_harness_" + name);
    fs::remove_all(dir);
    return dir;
}

// Four short documents from two sources; enough for every stage to run.
SyntheticCorpus small_corpus() { return make_synthetic_corpus({2, 2, 1500, 40, 3}); }

ExperimentConfig small_config() {
    ExperimentConfig cfg;
    cfg.p_grid = {0.0, 0.5, 1.0};
    cfg.trials = 2;
    cfg.budget = 50;
    return cfg;
}

// Fails on any input containing an asterisk.
class NoAsterisks final : public Compressor {
public:
    std::string name() const override { return "test"; }
    std::string key() const override { return "no-asterisks"; }
    std::size_t compressed_size(std::string_view d) const override {
        if (d.find('*') != std::string_view::npos) throw CompressorError("asterisk in input");
        return inner_->compressed_size(d);
    }

private:
    std::unique_ptr<Compressor> inner_ = make_compressor("gzip");
};

}  // namespace

TEST_CASE("aggregate: sample statistics") {
    std::vector<SweepRow> rows = {row(Order::RandomPermutation, Mode::Asterisk, 0.3, 0, 16, 100),
                                  row(Order::RandomPermutation, Mode::Asterisk, 0.3, 1, 18, 100),
                                  row(Order::RandomPermutation, Mode::Asterisk, 0.3, 2, 20, 100)};
    const auto s = aggregate(rows);
    REQUIRE(s.size() == 1);
    CHECK(s[0].trials == 3);
    CHECK(s[0].error_mean == 18.0);
    CHECK(s[0].error_std == doctest::Approx(2.0));
    CHECK(s[0].complexity_std == 0.0);
}

TEST_CASE("aggregate: single trial has zero spread") {
    const auto s = aggregate({row(Order::MostFrequentFirst, Mode::RandomChars, 0.1, 0, 21, 1234.5)});
    REQUIRE(s.size() == 1);
    CHECK(s[0].error_std == 0.0);
    CHECK(s[0].complexity_std == 0.0);
    CHECK(s[0].complexity_mean == 1234.5);
}

TEST_CASE("aggregate: row order does not matter, failed rows are counted apart") {
    std::vector<SweepRow> rows;
    std::mt19937_64 rng(7);
    for (auto o : {Order::MostFrequentFirst, Order::RandomPermutation})
        for (auto m : {Mode::Asterisk, Mode::RandomChars})
            for (double p : {0.0, 0.1, 0.2})
                for (std::size_t t = 0; t < 4; ++t)
                    rows.push_back(row(o, m, p, t, static_cast<long>(rng() % 30),
                                       1000.0 + static_cast<double>(rng() % 1000) / 7.0));
    rows[5].ok = false;
    rows[5].message = "boom";
    const auto ref = aggregate(rows);
    for (int k = 0; k < 20; ++k) {
        std::shuffle(rows.begin(), rows.end(), rng);
        const auto s = aggregate(rows);
        REQUIRE(s.size() == ref.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            CHECK(s[i].error_mean == ref[i].error_mean);
            CHECK(s[i].error_std == ref[i].error_std);
            CHECK(s[i].complexity_mean == ref[i].complexity_mean);
            CHECK(s[i].complexity_std == ref[i].complexity_std);
            CHECK(s[i].failed == ref[i].failed);
        }
    }
    std::size_t failed = 0, ok = 0;
    for (const auto& s : ref) {
        failed += s.failed;
        ok += s.trials;
    }
    CHECK(failed == 1);
    CHECK(ok == rows.size() - 1);
}

TEST_CASE("config validation") {
    ExperimentConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.p_grid = {0.0, 0.5, 0.5};
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg.p_grid = {0.2, 0.1};
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg.p_grid = {0.0, 1.5};
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg.p_grid = {};
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg = {};
    cfg.trials = 0;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg = {};
    cfg.orders = {Order::MostFrequentFirst, Order::MostFrequentFirst};
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg = {};
    cfg.modes = {};
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
}

TEST_CASE("seeds differ across cells and are stable") {
    std::set<std::uint64_t> seen;
    for (auto o : {Order::MostFrequentFirst, Order::RandomPermutation, Order::LeastFrequentFirst})
        for (auto m : {Mode::Asterisk, Mode::RandomChars})
            for (double p : default_p_grid())
                for (std::size_t t = 0; t < 10; ++t) seen.insert(cell_seed(1, o, m, p, t));
    CHECK(seen.size() == 3 * 2 * 11 * 10);
    CHECK(cell_seed(1, Order::MostFrequentFirst, Mode::Asterisk, 0.3, 0) ==
          cell_seed(1, Order::MostFrequentFirst, Mode::Asterisk, 0.3, 0));
    CHECK(cell_seed(1, Order::MostFrequentFirst, Mode::Asterisk, 0.3, 0) !=
          cell_seed(2, Order::MostFrequentFirst, Mode::Asterisk, 0.3, 0));
    CHECK(permutation_seed(1, 0) != permutation_seed(1, 1));
    CHECK(baseline_seed(1) != baseline_seed(2));
}

TEST_CASE("sweep: full default grid has one row per cell") {
    const auto corpus = small_corpus();
    const auto c = make_compressor("gzip");
    SizeCache cache;
    ExperimentConfig cfg;
    cfg.budget = 0;
    const auto res = run_sweep(cfg, corpus.docs, corpus.table, *c, cache);
    CHECK(res.rows.size() == 264);
    std::set<std::tuple<Order, Mode, double, std::size_t>> cells;
    for (const auto& r : res.rows) {
        CHECK(r.ok);
        cells.insert({r.order, r.mode, r.p, r.trial});
    }
    CHECK(cells.size() == 264);
    for (const auto& r : res.rows) {
        if (r.p == 0.0) CHECK(r.clustering_error == res.baseline_error);
        CHECK(r.ideal_error == res.ideal_error);
    }

    const auto dir = scratch("grid");
    const auto files = emit(res, aggregate(res.rows), dir);
    std::size_t err_series = 0, cpx_series = 0, compare = 0, trees = 0;
    for (const auto& f : files) {
        const auto name = f.filename().string();
        if (f.parent_path() == "trees") ++trees;
        if (name.starts_with("error_")) ++err_series;
        if (name.starts_with("complexity_")) ++cpx_series;
        if (name.starts_with("compare_")) ++compare;
    }
    CHECK(err_series == 6);
    CHECK(cpx_series == 6);
    CHECK(compare == 2);
    CHECK(trees == 264);
    fs::remove_all(dir);
}

TEST_CASE("sweep: p = 0 alone gives the undistorted baseline") {
    const auto corpus = small_corpus();
    const auto c = make_compressor("lzma");
    SizeCache cache;
    ExperimentConfig cfg = small_config();
    cfg.p_grid = {0.0};
    cfg.orders = {Order::MostFrequentFirst};
    cfg.modes = {Mode::Asterisk};
    const auto res = run_sweep(cfg, corpus.docs, corpus.table, *c, cache);
    REQUIRE(res.rows.size() == 1);
    CHECK(res.rows[0].clustering_error == res.baseline_error);
    CHECK(res.rows[0].seed == baseline_seed(cfg.master_seed));
    CHECK(res.rows[0].mean_complexity > 0.0);
    CHECK(parse_newick(res.trees[0]).leaf_count() == 4);
}

TEST_CASE("sweep: failing cells become error rows") {
    const auto corpus = small_corpus();
    NoAsterisks c;
    SizeCache cache;
    auto cfg = small_config();
    const auto res = run_sweep(cfg, corpus.docs, corpus.table, c, cache);
    // Most and least once, random order twice; 2 modes; 3 p values.
    REQUIRE(res.rows.size() == 24);
    for (std::size_t k = 0; k < res.rows.size(); ++k) {
        const auto& r = res.rows[k];
        const bool should_fail = r.mode == Mode::Asterisk && r.p > 0.0;
        CHECK(r.ok == !should_fail);
        if (should_fail) {
            CHECK(r.message.find("asterisk") != std::string::npos);
            CHECK(res.trees[k].empty());
        }
    }
    const auto summary = aggregate(res.rows);
    for (const auto& s : summary) {
        if (s.mode == Mode::Asterisk && s.p > 0.0) {
            CHECK(s.trials == 0);
            CHECK(s.failed > 0);
        }
    }
    std::ostringstream out;
    write_sweep_csv(out, res.rows);
    std::istringstream in(out.str());
    CHECK(read_sweep_csv(in) == res.rows);
}

TEST_CASE("sweep: independent of worker count and of a warm cache") {
    const auto corpus = small_corpus();
    const auto c = make_compressor("lzma");
    auto cfg = small_config();
    SizeCache cold;
    const auto a = run_sweep(cfg, corpus.docs, corpus.table, *c, cold);
    cfg.jobs = 3;
    const auto b = run_sweep(cfg, corpus.docs, corpus.table, *c, cold);
    CHECK(cold.hits() > 0);
    SizeCache fresh;
    const auto d = run_sweep(cfg, corpus.docs, corpus.table, *c, fresh);
    CHECK(a.rows == b.rows);
    CHECK(a.trees == b.trees);
    CHECK(a.rows == d.rows);
    CHECK(a.trees == d.trees);
}

TEST_CASE("csv: round trip and header-only output") {
    std::vector<SweepRow> rows = {row(Order::LeastFrequentFirst, Mode::RandomChars, 0.7, 0, 12, 1234.0625),
                                  row(Order::RandomPermutation, Mode::Asterisk, 0.1, 9, 0, 0.0),
                                  row(Order::RandomPermutation, Mode::RandomChars, 0.2, 1, 3, 1.0 / 3.0)};
    rows[0].seed = 0xffffffffffffffffULL;
    rows[0].tree_score = 0.987654321;
    rows[1].ok = false;
    rows[1].ideal_error = 14;
    rows[1].message = "bad, \"quoted\" cell";
    std::ostringstream out;
    write_sweep_csv(out, rows);
    std::istringstream in(out.str());
    CHECK(read_sweep_csv(in) == rows);

    std::ostringstream empty;
    write_sweep_csv(empty, {});
    CHECK(empty.str() == std::string(kSweepCsvHeader) + "\n");
    std::ostringstream sum;
    write_summary_csv(sum, {});
    CHECK(sum.str() == std::string(kSummaryCsvHeader) + "\n");

    const auto dir = scratch("empty");
    const auto files = emit(SweepResult{}, {}, dir);
    CHECK(files.size() == 2);
    CHECK(read_file(dir / "sweep.csv") == std::string(kSweepCsvHeader) + "\n");
    CHECK(read_file(dir / "summary.csv") == std::string(kSummaryCsvHeader) + "\n");
    fs::remove_all(dir);
}

TEST_CASE("csv: malformed input is a parse error") {
    std::istringstream bad_header("order,mode\n");
    CHECK_THROWS_AS(read_sweep_csv(bad_header), ParseError);
    std::istringstream short_row(std::string(kSweepCsvHeader) + "\nmost,asterisk,0.1\n");
    CHECK_THROWS_AS(read_sweep_csv(short_row), ParseError);
}

TEST_CASE("emit: series files carry reference lines and p columns") {
    const auto corpus = small_corpus();
    const auto c = make_compressor("gzip");
    SizeCache cache;
    auto cfg = small_config();
    cfg.orders = {Order::MostFrequentFirst, Order::LeastFrequentFirst};
    const auto res = run_sweep(cfg, corpus.docs, corpus.table, *c, cache);
    const auto dir = scratch("series");
    emit(res, aggregate(res.rows), dir);
    const auto err = read_file(dir / "series" / "error_most_asterisk.tsv");
    CHECK(err.find("# ideal=" + std::to_string(res.ideal_error)) != std::string::npos);
    CHECK(err.find("# baseline=" + std::to_string(res.baseline_error)) != std::string::npos);
    CHECK(err.find("\n0.5\t") != std::string::npos);
    const auto cmp = read_file(dir / "series" / "compare_error_asterisk.tsv");
    CHECK(cmp.find("# order=most") != std::string::npos);
    CHECK(cmp.find("# order=least") != std::string::npos);
    CHECK(fs::exists(dir / "trees" / "least_random_p0.5000_t0.nwk"));

    CHECK_THROWS_AS(emit(res, aggregate(res.rows), dir / "sweep.csv" / "sub"), IoError);
    fs::remove_all(dir);
}
