#include "ncdlab/compressor.hpp"

#include <lzma.h>
#include <zlib.h>

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <vector>

#include "ncdlab/error.hpp"

namespace ncdlab {
namespace {

constexpr std::size_t kChunk = 1 << 16;

std::uint32_t adaptive_dict_size(std::size_t n) {
    std::uint64_t d = 4096;
    while (d < n && d < (1ULL << 30)) d <<= 1;
    return static_cast<std::uint32_t>(d);
}

}  // namespace

std::size_t Compressor::compressed_size(std::string_view x, std::string_view y) const {
    std::string xy;
    xy.reserve(x.size() + y.size());
    xy.append(x);
    xy.append(y);
    return compressed_size(xy);
}

LzmaCompressor::LzmaCompressor(unsigned preset, bool extreme) : preset_(preset), extreme_(extreme) {
    if (preset > 9) throw ValidationError("lzma preset must be 0..9");
}

std::string LzmaCompressor::key() const {
    return "lzma-alone:preset=" + std::to_string(preset_) + (extreme_ ? "e" : "") + ":dict=pow2-adaptive";
}

std::size_t LzmaCompressor::compressed_size(std::string_view data) const {
    lzma_options_lzma opts;
    if (lzma_lzma_preset(&opts, preset_ | (extreme_ ? LZMA_PRESET_EXTREME : 0)) != 0) {
        throw CompressorError("lzma: unsupported preset");
    }
    opts.dict_size = adaptive_dict_size(data.size());

    lzma_stream strm = LZMA_STREAM_INIT;
    if (const auto rc = lzma_alone_encoder(&strm, &opts); rc != LZMA_OK) {
        throw CompressorError("lzma: encoder init failed (code " + std::to_string(rc) + ")");
    }
    struct Guard {
        lzma_stream* s;
        ~Guard() { lzma_end(s); }
    } guard{&strm};

    std::vector<std::uint8_t> out(kChunk);
    strm.next_in = reinterpret_cast<const std::uint8_t*>(data.data());
    strm.avail_in = data.size();
    std::size_t total = 0;
    while (true) {
        strm.next_out = out.data();
        strm.avail_out = out.size();
        const auto rc = lzma_code(&strm, LZMA_FINISH);
        total += out.size() - strm.avail_out;
        if (rc == LZMA_STREAM_END) break;
        if (rc != LZMA_OK) throw CompressorError("lzma: encode failed (code " + std::to_string(rc) + ")");
    }
    return total;
}

GzipCompressor::GzipCompressor(int level) : level_(level) {
    if (level < 1 || level > 9) throw ValidationError("gzip level must be 1..9");
}

std::string GzipCompressor::key() const { return "gzip:level=" + std::to_string(level_); }

std::size_t GzipCompressor::compressed_size(std::string_view data) const {
    z_stream strm{};
    if (deflateInit2(&strm, level_, Z_DEFLATED, 15 + 16, 9, Z_DEFAULT_STRATEGY) != Z_OK) {
        throw CompressorError("gzip: deflateInit2 failed");
    }
    struct Guard {
        z_stream* s;
        ~Guard() { deflateEnd(s); }
    } guard{&strm};

    std::vector<Bytef> out(kChunk);
    // zlib counts avail_in in uInt; feed large inputs in slices.
    const auto* p = reinterpret_cast<const Bytef*>(data.data());
    std::size_t remaining = data.size();
    std::size_t total = 0;
    while (true) {
        if (strm.avail_in == 0 && remaining > 0) {
            const auto take = std::min<std::size_t>(remaining, 1u << 30);
            strm.next_in = const_cast<Bytef*>(p);
            strm.avail_in = static_cast<uInt>(take);
            p += take;
            remaining -= take;
        }
        strm.next_out = out.data();
        strm.avail_out = static_cast<uInt>(out.size());
        const auto rc = deflate(&strm, remaining == 0 ? Z_FINISH : Z_NO_FLUSH);
        total += out.size() - strm.avail_out;
        if (rc == Z_STREAM_END) break;
        if (rc != Z_OK && rc != Z_BUF_ERROR) throw CompressorError("gzip: deflate failed");
    }
    return total;
}

std::unique_ptr<Compressor> make_compressor(std::string_view spec) {
    const auto colon = spec.find(':');
    const auto family = spec.substr(0, colon);
    std::string_view arg = colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);

    auto parse_level = [&](std::string_view s, int lo, int hi) {
        int v = 0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size() || v < lo || v > hi) {
            throw ValidationError("bad compressor level in '" + std::string(spec) + "'");
        }
        return v;
    };

    if (family == "lzma" || family == "xz") {
        if (arg.empty()) return std::make_unique<LzmaCompressor>();
        bool extreme = false;
        if (arg.back() == 'e') {
            extreme = true;
            arg.remove_suffix(1);
        }
        return std::make_unique<LzmaCompressor>(static_cast<unsigned>(parse_level(arg, 0, 9)), extreme);
    }
    if (family == "gzip" || family == "zlib") {
        return std::make_unique<GzipCompressor>(arg.empty() ? 9 : parse_level(arg, 1, 9));
    }
    throw ValidationError("unknown compressor '" + std::string(spec) + "' (lzma[:0-9[e]] | gzip[:1-9])");
}

}  // namespace ncdlab
