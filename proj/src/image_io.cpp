#include "cope/image_io.hpp"

#include <png.h>
#include <zlib.h>

#include <cctype>
#include <cstring>
#include <fstream>
#include <vector>

#include "cope/error.hpp"

namespace cope {

namespace {

std::vector<std::uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ValidationError("cannot open file: " + path);
    }
    in.seekg(0, std::ios::end);
    auto size = in.tellg();
    in.seekg(0, std::ios::beg);
    std::vector<std::uint8_t> data(static_cast<std::size_t>(size));
    if (size > 0 && !in.read(reinterpret_cast<char*>(data.data()), size)) {
        throw ProcessingError("failed to read file: " + path);
    }
    return data;
}

bool is_png(const std::vector<std::uint8_t>& d) {
    static const std::uint8_t sig[8] = {0x89, 'P', 'N', 'G', 0x0d, 0x0a, 0x1a, 0x0a};
    return d.size() >= 8 && std::memcmp(d.data(), sig, 8) == 0;
}

bool is_pgm(const std::vector<std::uint8_t>& d) {
    return d.size() >= 2 && d[0] == 'P' && (d[1] == '5' || d[1] == '2');
}

bool is_tiff(const std::vector<std::uint8_t>& d) {
    if (d.size() < 8) return false;
    return (d[0] == 'I' && d[1] == 'I' && d[2] == 42 && d[3] == 0) ||
           (d[0] == 'M' && d[1] == 'M' && d[2] == 0 && d[3] == 42);
}

// ---------------------------------------------------------------- PNG

struct PngMemSource {
    const std::uint8_t* data;
    std::size_t size;
    std::size_t pos;
};

extern "C" void png_mem_read(png_structp png, png_bytep out, png_size_t len) {
    auto* src = static_cast<PngMemSource*>(png_get_io_ptr(png));
    if (src->pos + len > src->size) {
        png_error(png, "read past end of data");
    }
    std::memcpy(out, src->data + src->pos, len);
    src->pos += len;
}

struct PngReader {
    png_structp png = nullptr;
    png_infop info = nullptr;
    PngReader() {
        png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
        if (png) info = png_create_info_struct(png);
    }
    ~PngReader() {
        if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
    }
};

// Decodes to 8-bit with `channels` samples per pixel (1 or 3).
std::vector<std::uint8_t> decode_png(const std::vector<std::uint8_t>& data, int channels,
                                     const std::string& path, int& width, int& height) {
    PngReader reader;
    if (!reader.png || !reader.info) {
        throw ProcessingError("libpng initialization failed");
    }
    if (setjmp(png_jmpbuf(reader.png))) {
        throw ProcessingError("corrupt or truncated PNG: " + path);
    }
    PngMemSource src{data.data(), data.size(), 0};
    png_set_read_fn(reader.png, &src, png_mem_read);
    png_read_info(reader.png, reader.info);

    png_uint_32 w = 0;
    png_uint_32 h = 0;
    int bit_depth = 0;
    int color_type = 0;
    png_get_IHDR(reader.png, reader.info, &w, &h, &bit_depth, &color_type, nullptr, nullptr,
                 nullptr);
    if (bit_depth == 16) {
        throw ProcessingError("unsupported PNG: 16-bit depth (" + path + ")");
    }
    if (color_type == PNG_COLOR_TYPE_PALETTE) {
        png_set_palette_to_rgb(reader.png);
        color_type = PNG_COLOR_TYPE_RGB;
    }
    if (bit_depth < 8) png_set_expand_gray_1_2_4_to_8(reader.png);

    if (channels == 3) {
        if (color_type != PNG_COLOR_TYPE_RGB) {
            throw ProcessingError("unsupported PNG: expected 8-bit RGB (" + path + ")");
        }
    } else {
        if (color_type != PNG_COLOR_TYPE_GRAY) {
            throw ProcessingError("mask input must be single-channel (" + path + ")");
        }
    }
    png_read_update_info(reader.png, reader.info);

    width = static_cast<int>(w);
    height = static_cast<int>(h);
    std::size_t row_bytes = png_get_rowbytes(reader.png, reader.info);
    if (row_bytes != static_cast<std::size_t>(width) * channels) {
        throw ProcessingError("unexpected PNG row size: " + path);
    }
    std::vector<std::uint8_t> out(row_bytes * h);
    std::vector<png_bytep> rows(h);
    for (png_uint_32 y = 0; y < h; ++y) rows[y] = out.data() + y * row_bytes;
    png_read_image(reader.png, rows.data());
    png_read_end(reader.png, nullptr);
    return out;
}

void encode_png(const std::uint8_t* pixels, int width, int height, int channels,
                const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ValidationError("cannot open file for writing: " + path);
    }
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
        throw ProcessingError("libpng initialization failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw ProcessingError("PNG encode failed: " + path);
    }
    png_set_write_fn(
        png, &out,
        [](png_structp p, png_bytep data, png_size_t len) {
            auto* os = static_cast<std::ofstream*>(png_get_io_ptr(p));
            os->write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(len));
            if (!*os) png_error(p, "write failed");
        },
        [](png_structp) {});
    png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8,
                 channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    std::size_t row_bytes = static_cast<std::size_t>(width) * channels;
    for (int y = 0; y < height; ++y) {
        png_write_row(png, const_cast<png_bytep>(pixels + y * row_bytes));
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

// ---------------------------------------------------------------- PGM

void skip_pnm_space(const std::vector<std::uint8_t>& d, std::size_t& pos) {
    while (pos < d.size()) {
        if (d[pos] == '#') {
            while (pos < d.size() && d[pos] != '\n') ++pos;
        } else if (std::isspace(d[pos])) {
            ++pos;
        } else {
            break;
        }
    }
}

long parse_pnm_int(const std::vector<std::uint8_t>& d, std::size_t& pos, const std::string& path) {
    skip_pnm_space(d, pos);
    if (pos >= d.size() || !std::isdigit(d[pos])) {
        throw ProcessingError("corrupt PGM header: " + path);
    }
    long v = 0;
    while (pos < d.size() && std::isdigit(d[pos])) {
        v = v * 10 + (d[pos] - '0');
        ++pos;
    }
    return v;
}

PlantMask load_pgm_mask(const std::vector<std::uint8_t>& d, const std::string& path) {
    bool binary = d[1] == '5';
    std::size_t pos = 2;
    long w = parse_pnm_int(d, pos, path);
    long h = parse_pnm_int(d, pos, path);
    long maxval = parse_pnm_int(d, pos, path);
    if (w <= 0 || h <= 0 || maxval <= 0 || maxval > 255) {
        throw ProcessingError("unsupported PGM header (need 8-bit): " + path);
    }
    PlantMask mask(static_cast<int>(w), static_cast<int>(h));
    std::size_t n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
    if (binary) {
        ++pos;  // single whitespace after maxval
        if (pos + n > d.size()) {
            throw ProcessingError("truncated PGM data: " + path);
        }
        for (std::size_t i = 0; i < n; ++i) {
            mask.bits()[i] = d[pos + i] != 0 ? 1 : 0;
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            mask.bits()[i] = parse_pnm_int(d, pos, path) != 0 ? 1 : 0;
        }
    }
    return mask;
}

void save_pgm(const PlantMask& mask, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ValidationError("cannot open file for writing: " + path);
    }
    out << "P5\n" << mask.width() << " " << mask.height() << "\n255\n";
    std::vector<std::uint8_t> row(static_cast<std::size_t>(mask.width()));
    for (int y = 0; y < mask.height(); ++y) {
        const std::uint8_t* src = mask.row(y);
        for (int x = 0; x < mask.width(); ++x) row[static_cast<std::size_t>(x)] = src[x] ? 255 : 0;
        out.write(reinterpret_cast<const char*>(row.data()), mask.width());
    }
    if (!out) {
        throw ProcessingError("failed to write PGM: " + path);
    }
}

// --------------------------------------------------------------- TIFF
//
// Baseline subset: 8-bit RGB, chunky planar layout, strip-organized,
// compression none (1) or deflate (8 / 32946).

class TiffParser {
public:
    TiffParser(const std::vector<std::uint8_t>& data, const std::string& path)
        : d_(data), path_(path) {
        little_ = d_[0] == 'I';
    }

    RgbImage parse() {
        std::uint32_t ifd = u32(4);
        if (ifd >= d_.size()) fail("bad IFD offset");
        std::uint16_t n_entries = u16(ifd);
        std::uint32_t width = 0;
        std::uint32_t height = 0;
        std::uint32_t compression = 1;
        std::uint32_t spp = 1;
        std::uint32_t rows_per_strip = 0xffffffffu;
        std::uint32_t photometric = 2;
        std::uint32_t predictor = 1;
        std::vector<std::uint32_t> bits;
        std::vector<std::uint32_t> strip_offsets;
        std::vector<std::uint32_t> strip_counts;

        for (std::uint16_t e = 0; e < n_entries; ++e) {
            std::size_t entry = ifd + 2 + static_cast<std::size_t>(e) * 12;
            if (entry + 12 > d_.size()) fail("truncated IFD");
            std::uint16_t tag = u16(entry);
            switch (tag) {
                case 256: width = tag_value(entry, 0); break;
                case 257: height = tag_value(entry, 0); break;
                case 258: bits = tag_values(entry); break;
                case 259: compression = tag_value(entry, 0); break;
                case 262: photometric = tag_value(entry, 0); break;
                case 273: strip_offsets = tag_values(entry); break;
                case 277: spp = tag_value(entry, 0); break;
                case 278: rows_per_strip = tag_value(entry, 0); break;
                case 279: strip_counts = tag_values(entry); break;
                case 317: predictor = tag_value(entry, 0); break;
                case 322:
                case 323: fail("tiled TIFF is not supported"); break;
                default: break;
            }
        }

        if (width == 0 || height == 0) fail("missing dimensions");
        if (spp != 3 || photometric != 2) fail("expected 8-bit RGB");
        for (std::uint32_t b : bits) {
            if (b != 8) fail("expected 8 bits per sample");
        }
        if (bits.empty()) fail("missing BitsPerSample");
        if (predictor != 1) fail("predictor is not supported");
        if (compression != 1 && compression != 8 && compression != 32946) {
            fail("unsupported compression " + std::to_string(compression) +
                 " (need none or deflate)");
        }
        if (strip_offsets.empty() || strip_offsets.size() != strip_counts.size()) {
            fail("bad strip tables");
        }

        RgbImage img(static_cast<int>(width), static_cast<int>(height));
        std::size_t row_bytes = static_cast<std::size_t>(width) * 3;
        std::uint32_t y = 0;
        for (std::size_t s = 0; s < strip_offsets.size(); ++s) {
            std::uint32_t strip_rows =
                std::min<std::uint32_t>(rows_per_strip, height - y);
            std::size_t expect = row_bytes * strip_rows;
            std::uint8_t* dst = img.row(static_cast<int>(y));
            if (strip_offsets[s] + static_cast<std::size_t>(strip_counts[s]) > d_.size()) {
                fail("strip data out of range (truncated file)");
            }
            const std::uint8_t* src = d_.data() + strip_offsets[s];
            if (compression == 1) {
                if (strip_counts[s] < expect) fail("short strip (truncated file)");
                std::memcpy(dst, src, expect);
            } else {
                uLongf out_len = static_cast<uLongf>(expect);
                int rc = uncompress(dst, &out_len, src, strip_counts[s]);
                if (rc != Z_OK || out_len != expect) fail("deflate strip decode failed");
            }
            y += strip_rows;
            if (y >= height) break;
        }
        if (y < height) fail("missing strips (truncated file)");
        return img;
    }

private:
    [[noreturn]] void fail(const std::string& why) const {
        throw ProcessingError("unsupported or corrupt TIFF: " + why + " (" + path_ + ")");
    }

    std::uint16_t u16(std::size_t at) const {
        if (at + 2 > d_.size()) throw ProcessingError("truncated TIFF: " + path_);
        return little_ ? static_cast<std::uint16_t>(d_[at] | (d_[at + 1] << 8))
                       : static_cast<std::uint16_t>((d_[at] << 8) | d_[at + 1]);
    }

    std::uint32_t u32(std::size_t at) const {
        if (at + 4 > d_.size()) throw ProcessingError("truncated TIFF: " + path_);
        if (little_) {
            return static_cast<std::uint32_t>(d_[at]) | (static_cast<std::uint32_t>(d_[at + 1]) << 8) |
                   (static_cast<std::uint32_t>(d_[at + 2]) << 16) |
                   (static_cast<std::uint32_t>(d_[at + 3]) << 24);
        }
        return (static_cast<std::uint32_t>(d_[at]) << 24) |
               (static_cast<std::uint32_t>(d_[at + 1]) << 16) |
               (static_cast<std::uint32_t>(d_[at + 2]) << 8) | static_cast<std::uint32_t>(d_[at + 3]);
    }

    static std::size_t type_size(std::uint16_t type) {
        switch (type) {
            case 1: return 1;   // BYTE
            case 3: return 2;   // SHORT
            case 4: return 4;   // LONG
            default: return 0;
        }
    }

    std::vector<std::uint32_t> tag_values(std::size_t entry) const {
        std::uint16_t type = u16(entry + 2);
        std::uint32_t count = u32(entry + 4);
        std::size_t sz = type_size(type);
        if (sz == 0) throw ProcessingError("unsupported TIFF tag type (" + path_ + ")");
        std::size_t total = sz * count;
        std::size_t at = total <= 4 ? entry + 8 : u32(entry + 8);
        std::vector<std::uint32_t> out(count);
        for (std::uint32_t i = 0; i < count; ++i) {
            std::size_t p = at + i * sz;
            out[i] = sz == 1 ? d_.at(p) : (sz == 2 ? u16(p) : u32(p));
        }
        return out;
    }

    std::uint32_t tag_value(std::size_t entry, std::uint32_t index) const {
        auto v = tag_values(entry);
        if (index >= v.size()) throw ProcessingError("bad TIFF tag (" + path_ + ")");
        return v[index];
    }

    const std::vector<std::uint8_t>& d_;
    std::string path_;
    bool little_;
};

}  // namespace

RgbImage load_image(const std::string& path) {
    std::vector<std::uint8_t> data = read_file(path);
    if (is_png(data)) {
        int w = 0;
        int h = 0;
        std::vector<std::uint8_t> px = decode_png(data, 3, path, w, h);
        RgbImage img(w, h);
        img.pixels() = std::move(px);
        return img;
    }
    if (is_tiff(data)) {
        return TiffParser(data, path).parse();
    }
    throw ProcessingError("unsupported image format (expected PNG or TIFF): " + path);
}

PlantMask load_mask(const std::string& path) {
    std::vector<std::uint8_t> data = read_file(path);
    if (is_pgm(data)) {
        return load_pgm_mask(data, path);
    }
    if (is_png(data)) {
        int w = 0;
        int h = 0;
        std::vector<std::uint8_t> px = decode_png(data, 1, path, w, h);
        PlantMask mask(w, h);
        for (std::size_t i = 0; i < px.size(); ++i) mask.bits()[i] = px[i] != 0 ? 1 : 0;
        return mask;
    }
    throw ProcessingError("unsupported mask format (expected single-channel PNG or PGM): " + path);
}

void save_png_rgb(const RgbImage& img, const std::string& path) {
    encode_png(img.pixels().data(), img.width(), img.height(), 3, path);
}

void save_mask(const PlantMask& mask, const std::string& path) {
    if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".pgm") == 0) {
        save_pgm(mask, path);
        return;
    }
    std::vector<std::uint8_t> gray(mask.bits().size());
    for (std::size_t i = 0; i < gray.size(); ++i) gray[i] = mask.bits()[i] ? 255 : 0;
    encode_png(gray.data(), mask.width(), mask.height(), 1, path);
}

}  // namespace cope
