#pragma once

#include <array>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>

#include "ncdlab/compressor.hpp"

namespace ncdlab {

using Digest = std::array<std::uint8_t, 32>;

/// SHA-256 of the concatenation of `parts`.
Digest sha256(std::initializer_list<std::string_view> parts);
std::string to_hex(const Digest& d);

/// Content-addressed memo of compressed sizes, keyed by (compressor key,
/// SHA-256 of the input). Safe for concurrent use; compression runs outside
/// the lock, so two threads may race to fill the same entry with the same
/// value.
///
/// On-disk format (text, one entry per line, sorted):
///
///     # ncdlab size-cache v1
///     <compressor key>\t<sha256 hex>\t<size>
///
/// The file can be deleted at any time.
class SizeCache {
public:
    SizeCache() = default;
    /// Loads `path` if it exists; save() writes back to it.
    explicit SizeCache(std::filesystem::path path);

    SizeCache(const SizeCache&) = delete;
    SizeCache& operator=(const SizeCache&) = delete;

    std::size_t size_of(const Compressor& c, std::string_view x);
    /// Compressed size of the concatenation xy.
    std::size_t size_of(const Compressor& c, std::string_view x, std::string_view y);

    std::optional<std::size_t> lookup(const Compressor& c, const Digest& d) const;

    void load(const std::filesystem::path& path);
    /// Atomic write (temp file + rename). No-op without a path.
    void save() const;
    void save(const std::filesystem::path& path) const;

    std::size_t entries() const;
    std::size_t hits() const noexcept { return hits_.load(); }
    std::size_t misses() const noexcept { return misses_.load(); }
    const std::optional<std::filesystem::path>& path() const noexcept { return path_; }

private:
    static std::string make_key(const Compressor& c, const Digest& d);
    void store(std::string key, std::size_t size);

    std::optional<std::filesystem::path> path_;
    mutable std::shared_mutex mutex_;
    std::unordered_map<std::string, std::size_t> map_;
    std::atomic<std::size_t> hits_{0};
    std::atomic<std::size_t> misses_{0};
};

}  // namespace ncdlab
