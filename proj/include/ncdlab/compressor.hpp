#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>

namespace ncdlab {

/// Anything that reports the compressed size of a byte string. Sizes count
/// the whole container output, headers included. Implementations must be
/// deterministic and safe to call concurrently.
class Compressor {
public:
    virtual ~Compressor() = default;

    /// Family name, e.g. "lzma".
    virtual std::string name() const = 0;
    /// Name plus every setting that can change the output size. Used as the
    /// size-cache namespace.
    virtual std::string key() const = 0;

    virtual std::size_t compressed_size(std::string_view data) const = 0;

    /// Size of the concatenation xy. The default copies into one buffer.
    virtual std::size_t compressed_size(std::string_view x, std::string_view y) const;

    /// Largest input the compressor can model without forgetting its start;
    /// 0 means unbounded for practical purposes.
    virtual std::size_t window_bytes() const { return 0; }
};

/// LZMA (.lzma "alone" container) at a given preset. The dictionary is sized
/// per input to the next power of two at or above the input length (min 4 KiB,
/// max 1 GiB), so every concatenation the NCD needs fits in the window.
class LzmaCompressor final : public Compressor {
public:
    explicit LzmaCompressor(unsigned preset = 9, bool extreme = false);

    using Compressor::compressed_size;

    std::string name() const override { return "lzma"; }
    std::string key() const override;
    std::size_t compressed_size(std::string_view data) const override;

private:
    unsigned preset_;
    bool extreme_;
};

/// Deflate with a gzip wrapper. Its 32 KiB window is far smaller than a book,
/// which makes NCD values on long texts close to 1 regardless of content.
class GzipCompressor final : public Compressor {
public:
    explicit GzipCompressor(int level = 9);

    using Compressor::compressed_size;

    std::string name() const override { return "gzip"; }
    std::string key() const override;
    std::size_t compressed_size(std::string_view data) const override;
    std::size_t window_bytes() const override { return 32 * 1024; }

private:
    int level_;
};

/// "lzma", "lzma:6", "lzma:9e", "gzip", "gzip:6". Throws ValidationError.
std::unique_ptr<Compressor> make_compressor(std::string_view spec);

}  // namespace ncdlab
