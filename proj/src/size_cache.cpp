#include "ncdlab/size_cache.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <memory>
#include <mutex>
#include <vector>

#include "ncdlab/corpus.hpp"
#include "ncdlab/error.hpp"

namespace ncdlab {

Digest sha256(std::initializer_list<std::string_view> parts) {
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
        throw Error("sha256: init failed");
    }
    for (auto part : parts) {
        if (EVP_DigestUpdate(ctx.get(), part.data(), part.size()) != 1) throw Error("sha256: update failed");
    }
    Digest d{};
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(ctx.get(), d.data(), &len) != 1 || len != d.size()) {
        throw Error("sha256: final failed");
    }
    return d;
}

std::string to_hex(const Digest& d) {
    static constexpr char kHex[] = "0123456789abcdef";
    std::string s;
    s.reserve(d.size() * 2);
    for (auto b : d) {
        s.push_back(kHex[b >> 4]);
        s.push_back(kHex[b & 0xf]);
    }
    return s;
}

SizeCache::SizeCache(std::filesystem::path path) : path_(std::move(path)) {
    if (std::filesystem::exists(*path_)) load(*path_);
}

std::string SizeCache::make_key(const Compressor& c, const Digest& d) {
    return c.key() + "\t" + to_hex(d);
}

std::optional<std::size_t> SizeCache::lookup(const Compressor& c, const Digest& d) const {
    const auto key = make_key(c, d);
    std::shared_lock lock(mutex_);
    const auto it = map_.find(key);
    if (it == map_.end()) return std::nullopt;
    return it->second;
}

void SizeCache::store(std::string key, std::size_t size) {
    std::unique_lock lock(mutex_);
    map_.insert_or_assign(std::move(key), size);
}

std::size_t SizeCache::size_of(const Compressor& c, std::string_view x) {
    const auto d = sha256({x});
    if (const auto hit = lookup(c, d)) {
        ++hits_;
        return *hit;
    }
    ++misses_;
    const auto size = c.compressed_size(x);
    store(make_key(c, d), size);
    return size;
}

std::size_t SizeCache::size_of(const Compressor& c, std::string_view x, std::string_view y) {
    const auto d = sha256({x, y});
    if (const auto hit = lookup(c, d)) {
        ++hits_;
        return *hit;
    }
    ++misses_;
    const auto size = c.compressed_size(x, y);
    store(make_key(c, d), size);
    return size;
}

std::size_t SizeCache::entries() const {
    std::shared_lock lock(mutex_);
    return map_.size();
}

void SizeCache::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open size cache " + path.string());
    std::string line;
    std::size_t lineno = 0;
    std::unordered_map<std::string, std::size_t> loaded;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line.front() == '#') continue;
        const auto tab = line.rfind('\t');
        if (tab == std::string::npos || tab == 0) throw ParseError("malformed size-cache entry", lineno);
        std::size_t size = 0;
        const auto* b = line.data() + tab + 1;
        const auto* e = line.data() + line.size();
        const auto [ptr, ec] = std::from_chars(b, e, size);
        if (ec != std::errc{} || ptr != e) throw ParseError("malformed size in size cache", lineno);
        loaded.insert_or_assign(line.substr(0, tab), size);
    }
    std::unique_lock lock(mutex_);
    for (auto& [k, v] : loaded) map_.insert_or_assign(k, v);
}

void SizeCache::save() const {
    if (path_) save(*path_);
}

void SizeCache::save(const std::filesystem::path& path) const {
    std::vector<std::pair<std::string, std::size_t>> items;
    {
        std::shared_lock lock(mutex_);
        items.assign(map_.begin(), map_.end());
    }
    std::sort(items.begin(), items.end());
    std::string s = "# ncdlab size-cache v1\n";
    for (const auto& [k, v] : items) {
        s += k;
        s += '\t';
        s += std::to_string(v);
        s += '\n';
    }
    auto tmp = path;
    tmp += ".tmp";
    write_file(tmp, s);
    std::filesystem::rename(tmp, path);
}

}  // namespace ncdlab
