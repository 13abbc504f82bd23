#include "ncdlab/corpus.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "ncdlab/error.hpp"

namespace ncdlab {
namespace {

bool is_alpha(unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

char lower(char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

std::string_view trim(std::string_view s) {
    const auto ws = " \t\r\n\f\v";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        const auto b = i;
        while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        if (i > b) out.push_back(s.substr(b, i - b));
    }
    return out;
}

}  // namespace

Document Document::make(std::string group_tag, std::string title_tag, std::string text) {
    Document d;
    d.id = group_tag + "." + title_tag;
    d.group_tag = std::move(group_tag);
    d.title_tag = std::move(title_tag);
    d.text = std::move(text);
    return d;
}

void check_encoding(std::string_view text) {
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (static_cast<unsigned char>(text[i]) >= 0x80) {
            throw DecodeError("non-ASCII byte in document text", i);
        }
    }
}

std::string to_lower_ascii(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = lower(c);
    return out;
}

std::vector<WordOccurrence> tokenize(std::string_view text) {
    check_encoding(text);
    std::vector<WordOccurrence> out;
    const auto n = text.size();
    std::size_t i = 0;
    while (i < n) {
        if (!is_alpha(static_cast<unsigned char>(text[i]))) {
            ++i;
            continue;
        }
        const auto start = i;
        while (i < n) {
            const auto c = static_cast<unsigned char>(text[i]);
            if (is_alpha(c)) {
                ++i;
            } else if (c == '\'' && i + 1 < n && is_alpha(static_cast<unsigned char>(text[i + 1]))) {
                i += 2;
            } else {
                break;
            }
        }
        out.push_back({start, i, to_lower_ascii(text.substr(start, i - start))});
    }
    return out;
}

void FrequencyTable::add(std::string_view word, double mass) {
    if (!(mass >= 0.0) || !std::isfinite(mass)) {
        throw ValidationError("frequency mass must be finite and non-negative");
    }
    if (word.empty()) throw ValidationError("empty word in frequency table");
    if (mass == 0.0) return;
    const auto key = to_lower_ascii(word);
    entries_[key] += mass;
    total_ += mass;
}

FrequencyTable FrequencyTable::from_entries(Entries entries) {
    FrequencyTable t;
    for (auto it = entries.begin(); it != entries.end();) {
        if (!(it->second >= 0.0) || !std::isfinite(it->second)) {
            throw ValidationError("frequency mass must be finite and non-negative");
        }
        it = it->second == 0.0 ? entries.erase(it) : std::next(it);
    }
    t.entries_ = std::move(entries);
    t.recompute_total();
    return t;
}

double FrequencyTable::mass(std::string_view word) const {
    const auto it = entries_.find(word);
    return it == entries_.end() ? 0.0 : it->second;
}

void FrequencyTable::recompute_total() {
    // Summed in key order so the total does not depend on insertion history.
    double t = 0.0;
    for (const auto& [w, m] : entries_) t += m;
    total_ = t;
}

FrequencyTable load_frequency_table(std::istream& in) {
    FrequencyTable::Entries merged;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto fields = split_ws(t);
        if (fields.size() != 2) {
            throw ParseError("expected '<word> <mass>', got '" + std::string(t) + "'", lineno);
        }
        double mass = 0.0;
        const auto f = fields[1];
        const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), mass);
        if (ec != std::errc{} || ptr != f.data() + f.size() || !std::isfinite(mass) || mass < 0.0) {
            throw ParseError("invalid mass '" + std::string(f) + "'", lineno);
        }
        if (mass > 0.0) merged[to_lower_ascii(fields[0])] += mass;
    }
    if (merged.empty()) throw ValidationError("frequency table has no entries");
    return FrequencyTable::from_entries(std::move(merged));
}

FrequencyTable load_frequency_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open frequency table " + path.string());
    return load_frequency_table(in);
}

void write_frequency_table(std::ostream& out, const FrequencyTable& table) {
    char buf[64];
    for (const auto& [word, mass] : table.entries()) {
        const auto res = std::to_chars(buf, buf + sizeof buf, mass);
        out << word << '\t' << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf)) << '\n';
    }
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("read failed: " + path.string());
    return std::move(ss).str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw IoError("write failed: " + path.string());
}

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& manifest) {
    std::ifstream in(manifest);
    if (!in) throw IoError("cannot open manifest " + manifest.string());
    const auto base = manifest.parent_path();
    std::vector<ManifestEntry> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        std::vector<std::string_view> fields;
        if (t.find('\t') != std::string_view::npos) {
            std::size_t b = 0;
            while (true) {
                const auto e = t.find('\t', b);
                fields.push_back(trim(t.substr(b, e == std::string_view::npos ? e : e - b)));
                if (e == std::string_view::npos) break;
                b = e + 1;
            }
        } else {
            fields = split_ws(t);
        }
        if (fields.size() != 3 || fields[0].empty() || fields[1].empty() || fields[2].empty()) {
            throw ParseError("expected 'path<TAB>group_tag<TAB>title_tag'", lineno);
        }
        std::filesystem::path p{std::string(fields[0])};
        if (p.is_relative()) p = base / p;
        out.push_back({p, std::string(fields[1]), std::string(fields[2])});
    }
    return out;
}

void write_manifest(const std::filesystem::path& manifest, const std::vector<ManifestEntry>& entries) {
    std::string s = "# path\tgroup_tag\ttitle_tag\n";
    for (const auto& e : entries) {
        s += e.path.generic_string() + "\t" + e.group_tag + "\t" + e.title_tag + "\n";
    }
    write_file(manifest, s);
}

void validate_corpus(const std::vector<Document>& docs) {
    std::set<std::string> seen;
    for (const auto& d : docs) {
        if (d.group_tag.empty()) throw ValidationError("document '" + d.id + "' has an empty group tag");
        if (!seen.insert(d.id).second) throw ValidationError("duplicate document id '" + d.id + "'");
    }
}

std::vector<Document> load_corpus(const std::vector<ManifestEntry>& entries) {
    std::vector<Document> docs;
    docs.reserve(entries.size());
    std::set<std::string> seen;
    for (const auto& e : entries) {
        if (e.group_tag.empty()) throw ValidationError("empty group tag for " + e.path.string());
        const auto id = e.group_tag + "." + e.title_tag;
        if (!seen.insert(id).second) throw ValidationError("duplicate document id '" + id + "'");
        if (!std::filesystem::is_regular_file(e.path)) {
            throw IoError("missing corpus file " + e.path.string());
        }
        docs.push_back(Document::make(e.group_tag, e.title_tag, read_file(e.path)));
    }
    return docs;
}

std::vector<Document> load_corpus(const std::filesystem::path& manifest) {
    return load_corpus(read_manifest(manifest));
}

}  // namespace ncdlab
