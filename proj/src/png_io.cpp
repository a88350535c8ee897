#include "niah/png_io.hpp"

#include <png.h>

#include <csetjmp>
#include <cstring>
#include <fstream>
#include <vector>

namespace niah {

namespace {

struct ByteSink {
    std::string bytes;
};

void sink_write(png_structp png, png_bytep data, png_size_t len) {
    auto* sink = static_cast<ByteSink*>(png_get_io_ptr(png));
    sink->bytes.append(reinterpret_cast<const char*>(data), len);
}

void sink_flush(png_structp) {}

struct ByteSource {
    const std::string* bytes;
    std::size_t pos = 0;
};

void source_read(png_structp png, png_bytep out, png_size_t len) {
    auto* src = static_cast<ByteSource*>(png_get_io_ptr(png));
    if (src->pos + len > src->bytes->size()) {
        png_error(png, "truncated png stream");
    }
    std::memcpy(out, src->bytes->data() + src->pos, len);
    src->pos += len;
}

std::vector<std::uint8_t> interleave(const Image& img) {
    const int w = img.width(), h = img.height();
    std::vector<std::uint8_t> rows(static_cast<std::size_t>(w) * h * 3);
    std::size_t i = 0;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            rows[i++] = img.r(y, x);
            rows[i++] = img.g(y, x);
            rows[i++] = img.b(y, x);
        }
    }
    return rows;
}

}  // namespace

std::string encode_png(const Image& img) {
    if (img.empty()) throw IoError("encode_png: empty image");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw IoError("encode_png: png_create_write_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw IoError("encode_png: png_create_info_struct failed");
    }

    ByteSink sink;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("encode_png: libpng error");
    }
    png_set_write_fn(png, &sink, sink_write, sink_flush);

    const int w = img.width(), h = img.height();
    png_set_IHDR(png, info, static_cast<png_uint_32>(w), static_cast<png_uint_32>(h), 8,
                 PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    // Pinned encoder settings: fast and byte-stable.
    png_set_compression_level(png, 1);
    png_set_filter(png, 0, PNG_FILTER_SUB);
    png_write_info(png, info);

    const std::vector<std::uint8_t> rows = interleave(img);
    for (int y = 0; y < h; ++y) {
        png_write_row(png, const_cast<png_bytep>(rows.data() + static_cast<std::size_t>(y) * w * 3));
    }
    png_write_end(png, info);
    png_destroy_write_struct(&png, &info);
    return std::move(sink.bytes);
}

Image decode_png(const std::string& bytes) {
    if (bytes.size() < 8 || png_sig_cmp(reinterpret_cast<png_const_bytep>(bytes.data()), 0, 8)) {
        throw DecodeError("decode_png: not a PNG stream");
    }
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw DecodeError("decode_png: png_create_read_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw DecodeError("decode_png: png_create_info_struct failed");
    }

    ByteSource src{&bytes};
    std::vector<std::uint8_t> raster;
    std::vector<png_bytep> row_ptrs;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw DecodeError("decode_png: libpng error");
    }
    png_set_read_fn(png, &src, source_read);
    png_read_info(png, info);

    // Normalize any input to 8-bit RGB.
    png_set_expand(png);
    png_set_strip_16(png);
    png_set_strip_alpha(png);
    png_set_gray_to_rgb(png);
    png_read_update_info(png, info);

    const png_uint_32 w = png_get_image_width(png, info);
    const png_uint_32 h = png_get_image_height(png, info);
    const std::size_t stride = png_get_rowbytes(png, info);
    raster.resize(stride * h);
    row_ptrs.resize(h);
    for (png_uint_32 y = 0; y < h; ++y) row_ptrs[y] = raster.data() + y * stride;
    png_read_image(png, row_ptrs.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    Image img(static_cast<int>(w), static_cast<int>(h));
    for (png_uint_32 y = 0; y < h; ++y) {
        const std::uint8_t* row = raster.data() + y * stride;
        for (png_uint_32 x = 0; x < w; ++x) {
            img.set(static_cast<int>(x), static_cast<int>(y),
                    {row[x * 3], row[x * 3 + 1], row[x * 3 + 2]});
        }
    }
    return img;
}

void write_png(const std::filesystem::path& path, const Image& img) {
    const std::string bytes = encode_png(img);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("write_png: cannot open " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write_png: short write to " + path.string());
}

Image read_png(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("read_png: cannot open " + path.string());
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return decode_png(bytes);
}

}  // namespace niah
