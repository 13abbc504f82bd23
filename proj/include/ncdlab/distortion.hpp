#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ncdlab/corpus.hpp"

namespace ncdlab {

using WordSet = std::set<std::string, std::less<>>;

struct SelectionOrder {
    enum class Kind { MostFrequentFirst, LeastFrequentFirst, RandomPermutation };

    Kind kind = Kind::MostFrequentFirst;
    std::uint64_t seed = 0;  // used by RandomPermutation only

    static SelectionOrder most_frequent() { return {Kind::MostFrequentFirst, 0}; }
    static SelectionOrder least_frequent() { return {Kind::LeastFrequentFirst, 0}; }
    static SelectionOrder random(std::uint64_t seed) { return {Kind::RandomPermutation, seed}; }

    friend bool operator==(const SelectionOrder&, const SelectionOrder&) = default;
};

struct SubstitutionMode {
    enum class Kind { Asterisk, RandomChars };

    Kind kind = Kind::Asterisk;
    std::uint64_t seed = 0;  // used by RandomChars only

    static SubstitutionMode asterisk() { return {Kind::Asterisk, 0}; }
    static SubstitutionMode random_chars(std::uint64_t seed) { return {Kind::RandomChars, seed}; }

    friend bool operator==(const SubstitutionMode&, const SubstitutionMode&) = default;
};

/// Short names used on the command line and in CSV output:
/// "most" / "least" / "random" and "asterisk" / "random".
std::string_view to_string(SelectionOrder::Kind k);
std::string_view to_string(SubstitutionMode::Kind k);
SelectionOrder::Kind parse_selection_order(std::string_view s);
SubstitutionMode::Kind parse_substitution_mode(std::string_view s);

struct DistortionSpec {
    SelectionOrder order;
    SubstitutionMode mode;
    double p = 0.0;  // fraction of the table's total mass to cover
};

/// The table's words arranged by `order`: descending mass, ascending mass,
/// or a seeded uniform permutation. Equal masses are broken by ascending
/// word; the permutation starts from ascending word order.
std::vector<std::string> arrange_words(const FrequencyTable& table, const SelectionOrder& order);

/// Shortest prefix of arrange_words() whose cumulative mass reaches
/// p * total_mass. p = 0 gives the empty set, p = 1 every word.
WordSet select_words(const FrequencyTable& table, const SelectionOrder& order, double p);

/// Replaces every character of each occurrence whose lowercased form is in
/// `words`, either with '*' or with uniform letters a-z. All other bytes are
/// untouched and the length never changes. The random stream is seeded from
/// (mode.seed, doc.id), so documents can be distorted in any order.
Document distort(const Document& doc, const WordSet& words, const SubstitutionMode& mode);

/// Text-only variant; `stream_key` plays the role of the document id.
std::string distort_text(std::string_view text, const WordSet& words, const SubstitutionMode& mode,
                         std::string_view stream_key = {});

/// select_words once, then distort every document with that word set.
std::vector<Document> apply_spec(const std::vector<Document>& corpus, const FrequencyTable& table,
                                 const DistortionSpec& spec);

}  // namespace ncdlab
