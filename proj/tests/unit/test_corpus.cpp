#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "ncdlab/corpus.hpp"
#include "ncdlab/error.hpp"
#include "ncdlab/rng.hpp"

using namespace ncdlab;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
    auto d = fs::temp_directory_path() / ("ncdlab_test_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

std::string random_ascii(Rng& rng, std::size_t n) {
    static constexpr char kAlphabet[] = "abcXYZ' \n\t.,;-'\"*0123456789";
    std::string s;
    for (std::size_t i = 0; i < n; ++i) s += kAlphabet[uniform_below(rng, sizeof kAlphabet - 1)];
    return s;
}

}  // namespace

TEST_CASE("tokenize: empty input") { CHECK(tokenize("").empty()); }

TEST_CASE("tokenize: punctuation splits words and case is folded") {
    const auto w = tokenize("The cat, the hat.");
    REQUIRE(w.size() == 4);
    CHECK(w[0] == WordOccurrence{0, 3, "the"});
    CHECK(w[1] == WordOccurrence{4, 7, "cat"});
    CHECK(w[2] == WordOccurrence{9, 12, "the"});
    CHECK(w[3] == WordOccurrence{13, 16, "hat"});
}

TEST_CASE("tokenize: internal apostrophe stays in the word") {
    const auto w = tokenize("Don Quixote's ass");
    REQUIRE(w.size() == 3);
    CHECK(w[0].normalized == "don");
    CHECK(w[1].normalized == "quixote's");
    CHECK(w[2].normalized == "ass");
    CHECK(w[1].start == 4);
    CHECK(w[1].end == 13);
}

TEST_CASE("tokenize: leading and trailing apostrophes are gaps") {
    const auto w = tokenize("'tis the dogs' ''x");
    REQUIRE(w.size() == 4);
    CHECK(w[0].normalized == "tis");
    CHECK(w[2].normalized == "dogs");
    CHECK(w[3] == WordOccurrence{17, 18, "x"});
}

TEST_CASE("tokenize: digits and hyphens separate words") {
    const auto w = tokenize("well-known 42nd");
    REQUIRE(w.size() == 3);
    CHECK(w[0].normalized == "well");
    CHECK(w[1].normalized == "known");
    CHECK(w[2].normalized == "nd");
}

TEST_CASE("tokenize: non-ASCII byte is a decode error at its offset") {
    try {
        tokenize("caf\xc3\xa9");
        FAIL("expected DecodeError");
    } catch (const DecodeError& e) {
        CHECK(e.offset() == 3);
    }
}

TEST_CASE("tokenize properties on random text") {
    Rng rng(7);
    for (int trial = 0; trial < 500; ++trial) {
        const auto text = random_ascii(rng, uniform_below(rng, 200));
        const auto words = tokenize(text);

        std::string rebuilt;
        std::size_t cursor = 0;
        for (std::size_t k = 0; k < words.size(); ++k) {
            const auto& w = words[k];
            REQUIRE(w.start < w.end);
            REQUIRE(w.end <= text.size());
            if (k > 0) REQUIRE(words[k - 1].end <= w.start);
            // Re-tokenizing a span yields exactly that span.
            const auto again = tokenize(std::string_view(text).substr(w.start, w.length()));
            REQUIRE(again.size() == 1);
            CHECK(again[0].start == 0);
            CHECK(again[0].end == w.length());
            rebuilt += text.substr(cursor, w.start - cursor);
            rebuilt += text.substr(w.start, w.length());
            cursor = w.end;
        }
        rebuilt += text.substr(cursor);
        CHECK(rebuilt == text);
    }
}

TEST_CASE("load_frequency_table: basic table") {
    std::istringstream in("a 50\nb 30\nc 20\n");
    const auto t = load_frequency_table(in);
    CHECK(t.size() == 3);
    CHECK(t.total_mass() == 100.0);
}

TEST_CASE("load_frequency_table: duplicates merge after lowercasing") {
    std::istringstream in("# comment\nThe 5\n\nthe\t10\n");
    const auto t = load_frequency_table(in);
    CHECK(t.size() == 1);
    CHECK(t.mass("the") == 15.0);
    CHECK(t.total_mass() == 15.0);
}

TEST_CASE("load_frequency_table: missing mass is a parse error on its line") {
    std::istringstream in("xyz\n");
    try {
        load_frequency_table(in);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 1);
    }
    std::istringstream bad("ok 1\nword -3\n");
    CHECK_THROWS_AS(load_frequency_table(bad), ParseError);
    std::istringstream junk("ok 1\nword 3x\n");
    CHECK_THROWS_AS(load_frequency_table(junk), ParseError);
}

TEST_CASE("load_frequency_table: empty table is rejected") {
    std::istringstream in("# nothing\n\n");
    CHECK_THROWS_AS(load_frequency_table(in), ValidationError);
    std::istringstream zeros("a 0\n");
    CHECK_THROWS_AS(load_frequency_table(zeros), ValidationError);
}

TEST_CASE("FrequencyTable: total tracks entries across adds") {
    FrequencyTable t;
    Rng rng(3);
    for (int i = 0; i < 200; ++i) {
        t.add("w" + std::to_string(uniform_below(rng, 40)), static_cast<double>(uniform_below(rng, 100)));
    }
    double sum = 0;
    for (const auto& [w, m] : t.entries()) {
        CHECK(m > 0.0);
        sum += m;
    }
    CHECK(t.total_mass() == sum);
}

TEST_CASE("load_corpus: ids follow the group.title convention") {
    const auto dir = scratch_dir("corpus_ids");
    write_file(dir / "criticism.txt", "A little learning is a dangerous thing.");
    write_file(dir / "man.txt", "Know then thyself.");
    write_file(dir / "manifest.tsv", "# path\tgroup\ttitle\ncriticism.txt\tAP\tAEoC\nman.txt\tAP\tAEoM\n");
    const auto docs = load_corpus(dir / "manifest.tsv");
    REQUIRE(docs.size() == 2);
    CHECK(docs[0].id == "AP.AEoC");
    CHECK(docs[1].id == "AP.AEoM");
    CHECK(docs[1].group_tag == "AP");
    CHECK(docs[1].text == "Know then thyself.");
}

TEST_CASE("load_corpus: single entry") {
    const auto dir = scratch_dir("corpus_single");
    write_file(dir / "x.txt", "text");
    write_file(dir / "m.tsv", "x.txt\tG\tT\n");
    CHECK(load_corpus(dir / "m.tsv").size() == 1);
}

TEST_CASE("load_corpus: duplicate id and missing file") {
    const auto dir = scratch_dir("corpus_errors");
    write_file(dir / "x.txt", "text");
    write_file(dir / "dup.tsv", "x.txt\tG\tT\nx.txt\tG\tT\n");
    CHECK_THROWS_AS(load_corpus(dir / "dup.tsv"), ValidationError);
    write_file(dir / "missing.tsv", "nope.txt\tG\tT\n");
    CHECK_THROWS_AS(load_corpus(dir / "missing.tsv"), IoError);
    write_file(dir / "short.tsv", "x.txt\tG\n");
    CHECK_THROWS_AS(load_corpus(dir / "short.tsv"), ParseError);
}

TEST_CASE("manifest round trip") {
    const auto dir = scratch_dir("manifest_rt");
    const std::vector<ManifestEntry> entries{{dir / "a b.txt", "G1", "T1"}, {dir / "c.txt", "G2", "T2"}};
    write_manifest(dir / "m.tsv", entries);
    const auto back = read_manifest(dir / "m.tsv");
    REQUIRE(back.size() == 2);
    CHECK(back[0].path == entries[0].path);
    CHECK(back[1].title_tag == "T2");
}
