#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace ncdlab {

/// One text of the corpus. `id` is "<group_tag>.<title_tag>", the leaf label
/// used in dendrograms; `text` is the raw byte content.
struct Document {
    std::string id;
    std::string group_tag;
    std::string title_tag;
    std::string text;

    static Document make(std::string group_tag, std::string title_tag, std::string text);
};

/// A word occurrence as the half-open byte span [start, end) of the source
/// text, plus its lowercased form.
struct WordOccurrence {
    std::size_t start = 0;
    std::size_t end = 0;
    std::string normalized;

    std::size_t length() const noexcept { return end - start; }
    friend bool operator==(const WordOccurrence&, const WordOccurrence&) = default;
};

/// Splits `text` into words: maximal runs of ASCII letters, with apostrophes
/// kept when they sit between two letters ("quixote's"). Everything else is
/// a gap. Throws DecodeError on any byte >= 0x80.
std::vector<WordOccurrence> tokenize(std::string_view text);

/// Throws DecodeError at the first byte outside 7-bit ASCII.
void check_encoding(std::string_view text);

std::string to_lower_ascii(std::string_view s);

/// Word -> frequency mass. Words are stored lowercased; repeated words
/// accumulate; zero masses are dropped.
class FrequencyTable {
public:
    using Entries = std::map<std::string, double, std::less<>>;

    FrequencyTable() = default;

    /// Keys must already be lowercased; zero masses are dropped.
    static FrequencyTable from_entries(Entries entries);

    /// Adds `mass` (>= 0, finite) to `word` (lowercased first).
    void add(std::string_view word, double mass);

    const Entries& entries() const noexcept { return entries_; }
    double total_mass() const noexcept { return total_; }
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }
    bool contains(std::string_view word) const { return entries_.find(word) != entries_.end(); }
    double mass(std::string_view word) const;

private:
    void recompute_total();

    Entries entries_;
    double total_ = 0.0;
};

/// Reads `word<whitespace>mass` lines; blank lines and lines starting with
/// '#' are skipped. Throws ParseError naming the line, or ValidationError if
/// no entries remain.
FrequencyTable load_frequency_table(std::istream& in);
FrequencyTable load_frequency_table(const std::filesystem::path& path);
/// One `word<TAB>mass` line per entry in key order; masses round-trip.
void write_frequency_table(std::ostream& out, const FrequencyTable& table);

struct ManifestEntry {
    std::filesystem::path path;
    std::string group_tag;
    std::string title_tag;
};

/// Manifest file: one `path<TAB>group_tag<TAB>title_tag` record per line,
/// '#' comments, relative paths resolved against the manifest's directory.
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& manifest);
void write_manifest(const std::filesystem::path& manifest, const std::vector<ManifestEntry>& entries);

std::vector<Document> load_corpus(const std::vector<ManifestEntry>& entries);
std::vector<Document> load_corpus(const std::filesystem::path& manifest);

/// Throws ValidationError on duplicate ids or empty group tags.
void validate_corpus(const std::vector<Document>& docs);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace ncdlab
