#include "ncdlab/synthetic.hpp"

#include <array>
#include <cmath>
#include <sstream>
#include <string>

#include "ncdlab/error.hpp"
#include "ncdlab/rng.hpp"

namespace ncdlab {
namespace {

constexpr std::array<const char*, 48> kCore = {
    "the",  "of",   "and",  "to",    "a",    "in",   "that", "is",   "was",  "he",   "for",  "it",
    "with", "as",   "his",  "on",    "be",   "at",   "by",   "i",    "this", "had",  "not",  "are",
    "but",  "from", "or",   "have",  "an",   "they", "which", "one", "you",  "were", "her",  "all",
    "she",  "there", "would", "their", "we", "him",  "been", "has",  "when", "who",  "will", "more"};

std::string pseudo_word(Rng& rng) {
    static constexpr char kVowels[] = "aeiou";
    static constexpr char kConsonants[] = "bcdfghjklmnprstvwz";
    const auto len = 3 + uniform_below(rng, 7);
    std::string w;
    for (std::size_t i = 0; i < len; ++i) {
        w += (i % 2 == 0) ? kConsonants[uniform_below(rng, sizeof kConsonants - 1)]
                          : kVowels[uniform_below(rng, sizeof kVowels - 1)];
    }
    return w;
}

}  // namespace

SyntheticCorpus make_synthetic_corpus(const SyntheticCorpusOptions& o) {
    if (o.sources == 0 || o.docs_per_source == 0 || o.doc_bytes == 0 || o.private_words == 0) {
        throw ValidationError("synthetic corpus options must be positive");
    }
    const std::size_t core = kCore.size();

    // Vocabulary: shared core, then each source's private words.
    std::vector<std::string> vocab(kCore.begin(), kCore.end());
    Rng vocab_rng(mix_seed(o.seed, "vocabulary"));
    for (std::size_t s = 0; s < o.sources; ++s) {
        for (std::size_t k = 0; k < o.private_words; ++k) {
            vocab.push_back(pseudo_word(vocab_rng) + static_cast<char>('a' + s % 26));
        }
    }

    SyntheticCorpus out;
    FrequencyTable::Entries entries;
    for (std::size_t r = 0; r < core; ++r) {
        entries[vocab[r]] += std::floor(1e6 / static_cast<double>(r + 1));
    }
    Rng table_rng(mix_seed(o.seed, "table"));
    for (std::size_t i = core; i < vocab.size(); ++i) {
        if (uniform_below(table_rng, 10) == 0) continue;
        entries[vocab[i]] += 1.0 + static_cast<double>(uniform_below(table_rng, 2000));
    }
    out.table = FrequencyTable::from_entries(std::move(entries));

    for (std::size_t s = 0; s < o.sources; ++s) {
        const auto source_seed = mix_seed(o.seed, "source/" + std::to_string(s));
        const std::size_t private_base = core + s * o.private_words;

        // Order-2 transition: the state (w1, w2) deterministically picks six
        // candidate successors with weights 1/(rank + 1).
        auto next_word = [&](std::size_t w1, std::size_t w2, Rng& walk) {
            Rng state_rng(mix_seed(mix_seed(source_seed, w1), w2));
            std::array<std::size_t, 6> cand{};
            for (auto& c : cand) {
                c = uniform_below(state_rng, 2) == 0 ? uniform_below(state_rng, core)
                                                     : private_base + uniform_below(state_rng, o.private_words);
            }
            constexpr double kTotal = 1.0 + 1.0 / 2 + 1.0 / 3 + 1.0 / 4 + 1.0 / 5 + 1.0 / 6;
            double u = uniform_unit(walk) * kTotal;
            for (std::size_t r = 0; r < cand.size(); ++r) {
                u -= 1.0 / static_cast<double>(r + 1);
                if (u < 0) return cand[r];
            }
            return cand.back();
        };

        for (std::size_t d = 0; d < o.docs_per_source; ++d) {
            Rng walk(mix_seed(source_seed, "doc/" + std::to_string(d)));
            std::size_t w1 = uniform_below(walk, core), w2 = uniform_below(walk, core);
            std::string text;
            text.reserve(o.doc_bytes + 32);
            std::size_t line = 0;
            bool capital = true;
            while (text.size() < o.doc_bytes) {
                const auto w = next_word(w1, w2, walk);
                std::string word = vocab[w];
                if (capital) word[0] = static_cast<char>(word[0] - 'a' + 'A');
                capital = false;
                text += word;
                line += word.size();
                const auto roll = uniform_below(walk, 100);
                if (roll < 7) {
                    text += '.';
                    capital = true;
                } else if (roll < 12) {
                    text += ',';
                }
                if (line > 64) {
                    text += '\n';
                    line = 0;
                } else {
                    text += ' ';
                    ++line;
                }
                w1 = w2;
                w2 = w;
            }
            text.resize(o.doc_bytes);
            out.docs.push_back(Document::make("S" + std::to_string(s), "D" + std::to_string(d), std::move(text)));
        }
    }
    return out;
}

void write_synthetic_corpus(const SyntheticCorpus& corpus, const std::filesystem::path& dir) {
    std::vector<ManifestEntry> entries;
    for (const auto& d : corpus.docs) {
        const std::filesystem::path rel = d.id + ".txt";
        write_file(dir / rel, d.text);
        entries.push_back({rel, d.group_tag, d.title_tag});
    }
    write_manifest(dir / "manifest.tsv", entries);
    std::ostringstream freq;
    write_frequency_table(freq, corpus.table);
    write_file(dir / "freq.txt", freq.str());
}

}  // namespace ncdlab
