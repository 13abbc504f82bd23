#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "ncdlab/corpus.hpp"

namespace ncdlab {

struct SyntheticCorpusOptions {
    std::size_t sources = 4;
    std::size_t docs_per_source = 3;
    std::size_t doc_bytes = 50 * 1024;
    /// Source-specific pseudo-words per source, on top of a shared core of
    /// common English words.
    std::size_t private_words = 200;
    std::uint64_t seed = 1;
};

struct SyntheticCorpus {
    std::vector<Document> docs;
    /// Zipf-shaped masses over the shared core and most private words; about
    /// one private word in ten is left out, like names missing from a
    /// general-language list.
    FrequencyTable table;
};

/// Documents drawn from distinct word-level order-2 Markov sources. Each
/// source owns its transition function and private vocabulary; documents of
/// one source differ only in their random walk. Group tags are "S<k>",
/// titles "D<j>". ASCII text with sentence punctuation and line breaks.
SyntheticCorpus make_synthetic_corpus(const SyntheticCorpusOptions& options);

/// Writes `<id>.txt` per document, `manifest.tsv` and `freq.txt` into `dir`.
void write_synthetic_corpus(const SyntheticCorpus& corpus, const std::filesystem::path& dir);

}  // namespace ncdlab
