#include <zlib.h>

#include <array>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "morpho/errors.hpp"
#include "morpho/io.hpp"

namespace morpho {

namespace {

constexpr std::array<std::uint8_t, 8> kSignature = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};

std::uint32_t read_be32(const std::uint8_t* p) {
    return (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) | (std::uint32_t{p[2]} << 8) |
           std::uint32_t{p[3]};
}

void put_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

int channels_for(int colour_type) {
    switch (colour_type) {
        case 0: return 1;
        case 2: return 3;
        case 4: return 2;
        case 6: return 4;
        default: return 0;
    }
}

struct Header {
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    int bit_depth = 0;
    int colour_type = 0;
};

std::vector<std::uint8_t> inflate_all(const std::vector<std::uint8_t>& in, std::size_t expected) {
    std::vector<std::uint8_t> out(expected);
    z_stream zs{};
    if (inflateInit(&zs) != Z_OK) throw DecodeError("zlib initialisation failed");
    zs.next_in = const_cast<Bytef*>(in.data());
    zs.avail_in = static_cast<uInt>(in.size());
    zs.next_out = out.data();
    zs.avail_out = static_cast<uInt>(out.size());
    const int rc = inflate(&zs, Z_FINISH);
    const std::size_t produced = out.size() - zs.avail_out;
    inflateEnd(&zs);
    if (rc != Z_STREAM_END) {
        throw DecodeError(rc == Z_BUF_ERROR && produced == expected
                              ? "image data longer than expected"
                              : "corrupt or truncated image data stream");
    }
    if (produced != expected) throw DecodeError("image data shorter than expected");
    return out;
}

std::uint8_t paeth(int a, int b, int c) {
    const int p = a + b - c;
    const int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
    if (pa <= pb && pa <= pc) return static_cast<std::uint8_t>(a);
    if (pb <= pc) return static_cast<std::uint8_t>(b);
    return static_cast<std::uint8_t>(c);
}

// Undoes per-scanline filtering in place; returns the raw sample bytes.
std::vector<std::uint8_t> unfilter(const std::vector<std::uint8_t>& data, std::size_t rows,
                                   std::size_t row_bytes, std::size_t bpp) {
    std::vector<std::uint8_t> out(rows * row_bytes);
    for (std::size_t r = 0; r < rows; ++r) {
        const std::uint8_t filter = data[r * (row_bytes + 1)];
        const std::uint8_t* src = &data[r * (row_bytes + 1) + 1];
        std::uint8_t* dst = &out[r * row_bytes];
        const std::uint8_t* up = r > 0 ? &out[(r - 1) * row_bytes] : nullptr;
        for (std::size_t i = 0; i < row_bytes; ++i) {
            const int a = i >= bpp ? dst[i - bpp] : 0;
            const int b = up ? up[i] : 0;
            const int c = (up && i >= bpp) ? up[i - bpp] : 0;
            int pred = 0;
            switch (filter) {
                case 0: pred = 0; break;
                case 1: pred = a; break;
                case 2: pred = b; break;
                case 3: pred = (a + b) / 2; break;
                case 4: pred = paeth(a, b, c); break;
                default:
                    throw DecodeError("invalid filter type " + std::to_string(filter) + " on row " +
                                      std::to_string(r));
            }
            dst[i] = static_cast<std::uint8_t>(src[i] + pred);
        }
    }
    return out;
}

}  // namespace

GreyscaleImage decode_png(std::span<const std::uint8_t> bytes, ChannelSelector channel) {
    if (bytes.size() < kSignature.size() ||
        !std::equal(kSignature.begin(), kSignature.end(), bytes.begin())) {
        throw DecodeError("missing PNG signature");
    }
    Header hdr;
    bool have_header = false, have_end = false;
    std::vector<std::uint8_t> idat;
    std::size_t pos = kSignature.size();
    while (!have_end) {
        if (pos + 8 > bytes.size()) throw DecodeError("truncated PNG: missing chunk header");
        const std::uint32_t len = read_be32(&bytes[pos]);
        const std::uint8_t* type = &bytes[pos + 4];
        if (len > bytes.size() || pos + 12 + len > bytes.size()) {
            throw DecodeError("truncated PNG: chunk extends past end of file");
        }
        const std::uint8_t* data = &bytes[pos + 8];
        const std::uint32_t crc = read_be32(data + len);
        if (crc32(crc32(0L, Z_NULL, 0), type, len + 4) != crc) {
            throw DecodeError("CRC mismatch in chunk " + std::string(type, type + 4));
        }
        const std::string name(type, type + 4);
        if (name == "IHDR") {
            if (len != 13) throw DecodeError("malformed IHDR chunk");
            hdr.width = read_be32(data);
            hdr.height = read_be32(data + 4);
            hdr.bit_depth = data[8];
            hdr.colour_type = data[9];
            if (data[10] != 0) throw UnsupportedFormat("compression method " + std::to_string(data[10]));
            if (data[11] != 0) throw UnsupportedFormat("filter method " + std::to_string(data[11]));
            if (data[12] != 0) throw UnsupportedFormat("interlaced PNG (Adam7) is not supported");
            if (hdr.colour_type == 3) throw UnsupportedFormat("palette colour type 3 is not supported");
            if (channels_for(hdr.colour_type) == 0) {
                throw DecodeError("invalid colour type " + std::to_string(hdr.colour_type));
            }
            if (hdr.bit_depth != 8 && hdr.bit_depth != 16) {
                throw UnsupportedFormat("bit depth " + std::to_string(hdr.bit_depth) +
                                        " is not supported (8 or 16 only)");
            }
            if (hdr.width == 0 || hdr.height == 0 || hdr.width > (1u << 24) || hdr.height > (1u << 24)) {
                throw DecodeError("invalid image dimensions");
            }
            have_header = true;
        } else if (name == "IDAT") {
            if (!have_header) throw DecodeError("IDAT before IHDR");
            idat.insert(idat.end(), data, data + len);
        } else if (name == "IEND") {
            have_end = true;
        } else if (!have_header) {
            throw DecodeError("first chunk must be IHDR");
        }
        pos += 12 + len;
    }
    if (!have_header) throw DecodeError("missing IHDR chunk");
    if (idat.empty()) throw DecodeError("missing IDAT chunk");

    const std::size_t nch = static_cast<std::size_t>(channels_for(hdr.colour_type));
    const std::size_t sample_bytes = hdr.bit_depth / 8;
    const std::size_t bpp = nch * sample_bytes;
    const std::size_t row_bytes = bpp * hdr.width;
    const auto raw = unfilter(inflate_all(idat, hdr.height * (row_bytes + 1)), hdr.height, row_bytes, bpp);

    const double max_value = hdr.bit_depth == 16 ? 65535.0 : 255.0;
    auto sample = [&](std::size_t pixel, std::size_t c) {
        const std::uint8_t* p = &raw[pixel * bpp + c * sample_bytes];
        const unsigned v = sample_bytes == 2 ? (unsigned{p[0]} << 8) | p[1] : p[0];
        return v / max_value;
    };
    const bool colour = hdr.colour_type == 2 || hdr.colour_type == 6;
    const bool has_alpha = hdr.colour_type == 4 || hdr.colour_type == 6;

    const std::size_t count = std::size_t{hdr.width} * hdr.height;
    std::vector<double> values(count);
    for (std::size_t k = 0; k < count; ++k) {
        double v = 0.0;
        switch (channel) {
            case ChannelSelector::red: v = sample(k, 0); break;
            case ChannelSelector::green: v = sample(k, colour ? 1 : 0); break;
            case ChannelSelector::blue: v = sample(k, colour ? 2 : 0); break;
            case ChannelSelector::alpha: v = has_alpha ? sample(k, nch - 1) : 1.0; break;
            case ChannelSelector::luma:
                v = colour ? kLumaR * sample(k, 0) + kLumaG * sample(k, 1) + kLumaB * sample(k, 2)
                           : sample(k, 0);
                break;
        }
        values[k] = v;
    }
    return GreyscaleImage(static_cast<int>(hdr.width), static_cast<int>(hdr.height), std::move(values));
}

GreyscaleImage load_image(const std::filesystem::path& path, ChannelSelector channel) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                          std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("read failed on " + path.string());
    return decode_png(bytes, channel);
}

std::vector<std::uint8_t> encode_png(int width, int height, int colour_type, int bit_depth,
                                     std::span<const std::uint16_t> samples) {
    const int nch = channels_for(colour_type);
    if (nch == 0 || (bit_depth != 8 && bit_depth != 16) || width < 1 || height < 1) {
        throw InvalidInput("unsupported encoder parameters");
    }
    if (samples.size() != static_cast<std::size_t>(width) * height * nch) {
        throw InvalidInput("sample count does not match image size");
    }
    const std::size_t sample_bytes = bit_depth / 8;
    std::vector<std::uint8_t> raw;
    raw.reserve(height * (1 + width * nch * sample_bytes));
    std::size_t k = 0;
    for (int r = 0; r < height; ++r) {
        raw.push_back(0);
        for (int i = 0; i < width * nch; ++i, ++k) {
            if (sample_bytes == 2) raw.push_back(static_cast<std::uint8_t>(samples[k] >> 8));
            raw.push_back(static_cast<std::uint8_t>(samples[k] & 0xff));
        }
    }
    uLongf zlen = compressBound(static_cast<uLong>(raw.size()));
    std::vector<std::uint8_t> z(zlen);
    if (compress2(z.data(), &zlen, raw.data(), static_cast<uLong>(raw.size()), 6) != Z_OK) {
        throw Error("zlib compression failed");
    }
    z.resize(zlen);

    std::vector<std::uint8_t> out(kSignature.begin(), kSignature.end());
    auto chunk = [&](const char* type, const std::vector<std::uint8_t>& data) {
        put_be32(out, static_cast<std::uint32_t>(data.size()));
        const std::size_t start = out.size();
        out.insert(out.end(), type, type + 4);
        out.insert(out.end(), data.begin(), data.end());
        put_be32(out, static_cast<std::uint32_t>(
                          crc32(crc32(0L, Z_NULL, 0), &out[start], static_cast<uInt>(data.size() + 4))));
    };
    std::vector<std::uint8_t> ihdr;
    put_be32(ihdr, static_cast<std::uint32_t>(width));
    put_be32(ihdr, static_cast<std::uint32_t>(height));
    ihdr.insert(ihdr.end(), {static_cast<std::uint8_t>(bit_depth), static_cast<std::uint8_t>(colour_type), 0, 0, 0});
    chunk("IHDR", ihdr);
    chunk("IDAT", z);
    chunk("IEND", {});
    return out;
}

}  // namespace morpho
