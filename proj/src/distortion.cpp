#include "ncdlab/distortion.hpp"

#include <algorithm>

#include "ncdlab/error.hpp"
#include "ncdlab/rng.hpp"

namespace ncdlab {

std::string_view to_string(SelectionOrder::Kind k) {
    switch (k) {
        case SelectionOrder::Kind::MostFrequentFirst: return "most";
        case SelectionOrder::Kind::LeastFrequentFirst: return "least";
        case SelectionOrder::Kind::RandomPermutation: return "random";
    }
    return "?";
}

std::string_view to_string(SubstitutionMode::Kind k) {
    switch (k) {
        case SubstitutionMode::Kind::Asterisk: return "asterisk";
        case SubstitutionMode::Kind::RandomChars: return "random";
    }
    return "?";
}

SelectionOrder::Kind parse_selection_order(std::string_view s) {
    if (s == "most") return SelectionOrder::Kind::MostFrequentFirst;
    if (s == "least") return SelectionOrder::Kind::LeastFrequentFirst;
    if (s == "random") return SelectionOrder::Kind::RandomPermutation;
    throw ValidationError("unknown selection order '" + std::string(s) + "' (most|least|random)");
}

SubstitutionMode::Kind parse_substitution_mode(std::string_view s) {
    if (s == "asterisk") return SubstitutionMode::Kind::Asterisk;
    if (s == "random") return SubstitutionMode::Kind::RandomChars;
    throw ValidationError("unknown substitution mode '" + std::string(s) + "' (asterisk|random)");
}

std::vector<std::string> arrange_words(const FrequencyTable& table, const SelectionOrder& order) {
    struct Item {
        const std::string* word;
        double mass;
    };
    std::vector<Item> items;
    items.reserve(table.size());
    for (const auto& [w, m] : table.entries()) items.push_back({&w, m});

    switch (order.kind) {
        case SelectionOrder::Kind::MostFrequentFirst:
            std::stable_sort(items.begin(), items.end(),
                             [](const Item& a, const Item& b) { return a.mass > b.mass; });
            break;
        case SelectionOrder::Kind::LeastFrequentFirst:
            std::stable_sort(items.begin(), items.end(),
                             [](const Item& a, const Item& b) { return a.mass < b.mass; });
            break;
        case SelectionOrder::Kind::RandomPermutation: {
            Rng rng(mix_seed(order.seed, "select_words"));
            portable_shuffle(items.begin(), items.end(), rng);
            break;
        }
    }

    std::vector<std::string> out;
    out.reserve(items.size());
    for (const auto& it : items) out.push_back(*it.word);
    return out;
}

WordSet select_words(const FrequencyTable& table, const SelectionOrder& order, double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("selection fraction p must lie in [0, 1]");
    if (table.empty()) throw ValidationError("frequency table is empty");
    WordSet out;
    if (p == 0.0) return out;

    const auto arranged = arrange_words(table, order);
    if (p == 1.0) return WordSet(arranged.begin(), arranged.end());

    // The running sum visits words in a different order than total_mass did,
    // so allow for rounding at the boundary.
    const double target = p * table.total_mass();
    const double slack = 1e-12 * table.total_mass();
    double cumulative = 0.0;
    for (const auto& w : arranged) {
        out.insert(w);
        cumulative += table.mass(w);
        if (cumulative + slack >= target) break;
    }
    return out;
}

std::string distort_text(std::string_view text, const WordSet& words, const SubstitutionMode& mode,
                         std::string_view stream_key) {
    std::string out(text);
    if (words.empty()) {
        check_encoding(text);
        return out;
    }
    const auto occurrences = tokenize(text);
    Rng rng(mix_seed(mode.seed, stream_key));
    for (const auto& occ : occurrences) {
        if (!words.contains(occ.normalized)) continue;
        for (auto i = occ.start; i < occ.end; ++i) {
            out[i] = mode.kind == SubstitutionMode::Kind::Asterisk
                         ? '*'
                         : static_cast<char>('a' + uniform_below(rng, 26));
        }
    }
    return out;
}

Document distort(const Document& doc, const WordSet& words, const SubstitutionMode& mode) {
    Document out = doc;
    out.text = distort_text(doc.text, words, mode, doc.id);
    return out;
}

std::vector<Document> apply_spec(const std::vector<Document>& corpus, const FrequencyTable& table,
                                 const DistortionSpec& spec) {
    const auto words = select_words(table, spec.order, spec.p);
    std::vector<Document> out;
    out.reserve(corpus.size());
    for (const auto& d : corpus) out.push_back(distort(d, words, spec.mode));
    return out;
}

}  // namespace ncdlab
