#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "ncdlab/compressor.hpp"
#include "ncdlab/distortion.hpp"
#include "ncdlab/error.hpp"
#include "ncdlab/ncd.hpp"
#include "ncdlab/rng.hpp"
#include "ncdlab/size_cache.hpp"
#include "ncdlab/synthetic.hpp"

using namespace ncdlab;
namespace fs = std::filesystem;

namespace {

std::string random_bytes(std::uint64_t seed, std::size_t n) {
    Rng rng(seed);
    std::string s(n, '\0');
    for (auto& c : s) c = static_cast<char>(rng() & 0xff);
    return s;
}

}  // namespace

TEST_CASE("compressors are deterministic and report small empty sizes") {
    for (auto spec : {"lzma", "lzma:6", "lzma:9e", "gzip", "gzip:1"}) {
        const auto c = make_compressor(spec);
        const auto text = random_bytes(1, 3000) + std::string(3000, 'q');
        CHECK(c->compressed_size(text) == c->compressed_size(text));
        CHECK(c->compressed_size("") < 64);
        CHECK(c->compressed_size(text) < text.size());
    }
    CHECK_THROWS_AS(make_compressor("bzip3"), ValidationError);
    CHECK_THROWS_AS(make_compressor("lzma:10"), ValidationError);
    CHECK_THROWS_AS(make_compressor("gzip:x"), ValidationError);
}

TEST_CASE("two-part size equals size of the joined buffer") {
    const auto c = make_compressor("lzma");
    const auto x = random_bytes(2, 500), y = random_bytes(3, 700);
    CHECK(c->compressed_size(x, y) == c->compressed_size(x + y));
}

TEST_CASE("compressor keys separate settings") {
    CHECK(make_compressor("lzma")->key() != make_compressor("lzma:6")->key());
    CHECK(make_compressor("lzma:9")->key() != make_compressor("lzma:9e")->key());
    CHECK(make_compressor("gzip")->name() == "gzip");
}

TEST_CASE("ncd: symmetric on random blobs") {
    const auto c = make_compressor("lzma");
    for (std::uint64_t s = 0; s < 5; ++s) {
        const auto x = random_bytes(10 + s, 1024), y = random_bytes(100 + s, 1024);
        CHECK(ncd(*c, x, y) == ncd(*c, y, x));
    }
}

TEST_CASE("ncd: self distance is small, distance to noise is near one") {
    const auto c = make_compressor("lzma");
    const std::string x(4096, 'a');
    // A run of one byte compresses to a few dozen bytes, so fixed coder
    // overhead dominates: C(x) = 45, C(xx) = 59 with the default settings.
    CHECK(c->compressed_size(x) == 45);
    CHECK(c->compressed_size(x, x) == 59);
    CHECK(ncd(*c, x, x) == doctest::Approx(14.0 / 45.0));
    for (std::size_t n : {1024u, 4096u, 65536u}) {
        const auto noise = random_bytes(n, n);
        CHECK(ncd(*c, noise, noise) < 0.1);
    }
    const auto text = make_synthetic_corpus({1, 1, 4096, 100, 8}).docs[0].text;
    CHECK(ncd(*c, text, text) < 0.1);
    const auto y = random_bytes(5, 4096);
    const double d = ncd(*c, x, y);
    CHECK(d > 0.95);
    CHECK(d < 1.1);
}

TEST_CASE("ncd: empty input is rejected") {
    const auto c = make_compressor("lzma");
    CHECK_THROWS_AS(ncd(*c, "", "x"), ValidationError);
    CHECK_THROWS_AS(ncd(*c, "x", ""), ValidationError);
}

TEST_CASE("ncd_from_sizes follows the formula") {
    CHECK(ncd_from_sizes(100, 80, 150, 140) == doctest::Approx(0.6));
    CHECK(ncd_from_sizes(80, 100, 140, 150) == doctest::Approx(0.6));
}

TEST_CASE("size cache returns what a fresh compression returns") {
    const auto c = make_compressor("lzma");
    SizeCache cache;
    const auto x = random_bytes(7, 2000), y = random_bytes(8, 1500);
    CHECK(cache.size_of(*c, x) == c->compressed_size(x));
    CHECK(cache.misses() == 1);
    CHECK(cache.size_of(*c, x) == c->compressed_size(x));
    CHECK(cache.hits() == 1);
    CHECK(cache.size_of(*c, x, y) == c->compressed_size(x + y));
    // The concatenation key is the digest of the joined content.
    CHECK(cache.size_of(*c, x + y) == c->compressed_size(x + y));
    CHECK(cache.hits() == 2);
    const auto g = make_compressor("gzip");
    CHECK(cache.size_of(*g, x) == g->compressed_size(x));
    CHECK(cache.entries() == 3);
}

TEST_CASE("size cache persists and reloads") {
    const auto dir = fs::temp_directory_path() / "ncdlab_test_cache";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const auto path = dir / "sizes.tsv";
    const auto c = make_compressor("lzma:6");
    {
        SizeCache cache(path);
        cache.size_of(*c, "hello hello hello");
        cache.size_of(*c, "abc", "def");
        cache.save();
    }
    SizeCache again(path);
    CHECK(again.entries() == 2);
    CHECK(again.lookup(*c, sha256({"abcdef"})) == c->compressed_size("abcdef"));
    CHECK(again.size_of(*c, "hello hello hello") == c->compressed_size("hello hello hello"));
    CHECK(again.hits() == 1);

    write_file(path, "# ncdlab size-cache v1\ngarbage\n");
    CHECK_THROWS_AS(SizeCache{path}, ParseError);
}

TEST_CASE("sha256 of the empty string") {
    CHECK(to_hex(sha256({""})) == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256({"ab", "c"}) == sha256({"abc"}));
}

TEST_CASE("ncd_matrix: two identical documents") {
    const auto c = make_compressor("lzma");
    SizeCache cache;
    const auto text = make_synthetic_corpus({1, 1, 8000, 50, 4}).docs[0].text;
    const std::vector<Document> docs{Document::make("A", "x", text), Document::make("A", "y", text)};
    const auto m = ncd_matrix(*c, docs, cache);
    REQUIRE(m.size() == 2);
    CHECK(m.at(0, 1) == m.at(1, 0));
    CHECK(m.at(0, 1) < 0.1);
    CHECK(m.labels() == std::vector<std::string>{"A.x", "A.y"});
}

TEST_CASE("ncd_matrix: preconditions") {
    const auto c = make_compressor("lzma");
    SizeCache cache;
    CHECK_THROWS_AS(ncd_matrix(*c, {Document::make("A", "x", "abc")}, cache), ValidationError);
    CHECK_THROWS_AS(ncd_matrix(*c, {Document::make("A", "x", "abc"), Document::make("A", "x", "def")}, cache),
                    ValidationError);
    CHECK_THROWS_AS(ncd_matrix(*c, {Document::make("A", "x", "abc"), Document::make("A", "y", "")}, cache),
                    ValidationError);
}

TEST_CASE("ncd_matrix: cold and warm cache, any job count, same matrix") {
    const auto corpus = make_synthetic_corpus({3, 2, 4000, 60, 11}).docs;
    const auto c = make_compressor("lzma");
    SizeCache cold;
    const auto a = ncd_matrix(*c, corpus, cold, {0.1, 1});
    const auto misses = cold.misses();
    const auto b = ncd_matrix(*c, corpus, cold, {0.1, 4});
    CHECK(cold.misses() == misses);
    SizeCache other;
    const auto d = ncd_matrix(*c, corpus, other, {0.1, 3});
    CHECK(a == b);
    CHECK(a == d);
    // n singles + n diagonals + n(n-1) ordered pairs
    CHECK(misses == 6 + 6 + 30);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < a.size(); ++j) {
            CHECK(a.at(i, j) == a.at(j, i));
            CHECK(a.at(i, j) >= 0.0);
            CHECK(a.at(i, j) <= 1.1);
        }
    }
    CHECK(a.diagnostics().empty());
}

TEST_CASE("ncd_matrix: out-of-range entries are reported by pair") {
    // gzip's small window makes long unrelated inputs overshoot; a zero
    // epsilon turns any overshoot into a diagnostic.
    const auto c = make_compressor("gzip:1");
    SizeCache cache;
    const std::vector<Document> docs{Document::make("N", "a", random_bytes(1, 5000)),
                                     Document::make("N", "b", random_bytes(2, 5000))};
    const auto m = ncd_matrix(*c, docs, cache, {0.0, 1});
    if (m.at(0, 1) > 1.0) {
        REQUIRE(!m.diagnostics().empty());
        CHECK(m.diagnostics().front().find("N.a, N.b") != std::string::npos);
    } else {
        CHECK(m.diagnostics().empty());
    }
}

TEST_CASE("matrix text format round trips") {
    NcdMatrix m({"A.x", "B.y", "C.z"});
    m.set(0, 1, 0.1 + 0.2);
    m.set(0, 2, 1.0 / 3.0);
    m.set(1, 2, 0.987654321012345);
    m.set(1, 1, 0.01);
    std::stringstream s;
    write_matrix(s, m);
    const auto back = read_matrix(s);
    CHECK(back == m);

    std::istringstream asym("\tA\tB\nA\t0\t0.5\nB\t0.4\t0\n");
    CHECK_THROWS_AS(read_matrix(asym), ValidationError);
    std::istringstream short_row("\tA\tB\nA\t0\n");
    CHECK_THROWS_AS(read_matrix(short_row), ParseError);
}

TEST_CASE("complexity_stats: mean of one document is its size") {
    const auto c = make_compressor("lzma");
    const auto d = Document::make("A", "x", "some text some text some text");
    const auto s = complexity_stats(*c, {d});
    CHECK(s.per_doc.size() == 1);
    CHECK(s.mean == static_cast<double>(c->compressed_size(d.text)));
    CHECK_THROWS_AS(complexity_stats(*c, {}), ValidationError);
}

TEST_CASE("complexity: asterisks lower it, random characters raise it") {
    const auto corpus = make_synthetic_corpus({1, 1, 30000, 200, 21});
    const auto& doc = corpus.docs[0];
    const auto c = make_compressor("lzma");
    const auto original = c->compressed_size(doc.text);
    const auto all = select_words(corpus.table, SelectionOrder::most_frequent(), 1.0);
    const auto starred = distort(doc, all, SubstitutionMode::asterisk());
    const auto noisy = distort(doc, all, SubstitutionMode::random_chars(5));
    CHECK(c->compressed_size(starred.text) < original);
    CHECK(c->compressed_size(noisy.text) > original);
}

TEST_CASE("complexity: asterisk distortion is monotone in p up to 0.5% slack") {
    const auto corpus = make_synthetic_corpus({2, 1, 20000, 150, 31});
    const auto c = make_compressor("lzma");
    for (const auto& doc : corpus.docs) {
        const double slack = 0.005 * static_cast<double>(c->compressed_size(doc.text));
        std::vector<double> sizes{static_cast<double>(c->compressed_size(doc.text))};
        for (int k = 1; k <= 10; ++k) {
            const auto words = select_words(corpus.table, SelectionOrder::most_frequent(), k / 10.0);
            sizes.push_back(
                static_cast<double>(c->compressed_size(distort(doc, words, SubstitutionMode::asterisk()).text)));
        }
        for (std::size_t i = 0; i < sizes.size(); ++i) {
            for (std::size_t j = i + 1; j < sizes.size(); ++j) CHECK(sizes[j] <= sizes[i] + slack);
        }
    }
}
