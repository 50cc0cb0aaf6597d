#include "warenav/raster.hpp"

#include <fmt/format.h>
#include <png.h>

#include <algorithm>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace warenav {

Raster::Raster(int width, int height, Rgb fill) : width_(width), height_(height) {
    if (width < 0 || height < 0) throw std::invalid_argument("raster dimensions must be non-negative");
    data_.resize(static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3);
    for (std::size_t i = 0; i < data_.size(); i += 3) {
        data_[i] = fill.r;
        data_[i + 1] = fill.g;
        data_[i + 2] = fill.b;
    }
}

Rgb Raster::at(int x, int y) const {
    const auto i = (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x)) * 3;
    return {data_[i], data_[i + 1], data_[i + 2]};
}

void Raster::set(int x, int y, Rgb c) {
    if (x < 0 || y < 0 || x >= width_ || y >= height_) return;
    const auto i = (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x)) * 3;
    data_[i] = c.r;
    data_[i + 1] = c.g;
    data_[i + 2] = c.b;
}

void Raster::fill_rect(int x0, int y0, int x1, int y1, Rgb c) {
    x0 = std::max(x0, 0);
    y0 = std::max(y0, 0);
    x1 = std::min(x1, width_);
    y1 = std::min(y1, height_);
    for (int y = y0; y < y1; ++y)
        for (int x = x0; x < x1; ++x) set(x, y, c);
}

std::string encode_ppm(const Raster& image) {
    std::string out = fmt::format("P6\n{} {}\n255\n", image.width(), image.height());
    out.append(reinterpret_cast<const char*>(image.bytes().data()), image.bytes().size());
    return out;
}

void write_ppm(const Raster& image, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path));
    out << encode_ppm(image);
}

Raster decode_ppm(const std::string& bytes) {
    std::istringstream in(bytes);
    std::string magic;
    int width = 0;
    int height = 0;
    int maxval = 0;
    in >> magic >> width >> height >> maxval;
    if (magic != "P6" || maxval != 255 || width < 0 || height < 0) throw std::runtime_error("not an 8-bit P6 image");
    in.get();
    Raster image(width, height);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            char px[3];
            if (!in.read(px, 3)) throw std::runtime_error("truncated PPM data");
            image.set(x, y, {static_cast<std::uint8_t>(px[0]), static_cast<std::uint8_t>(px[1]),
                             static_cast<std::uint8_t>(px[2])});
        }
    }
    return image;
}

std::vector<std::uint8_t> encode_png(const Raster& image) {
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw std::runtime_error("png_create_write_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw std::runtime_error("png_create_info_struct failed");
    }
    std::vector<std::uint8_t> out;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw std::runtime_error("PNG encoding failed");
    }
    png_set_write_fn(
        png, &out,
        [](png_structp p, png_bytep data, png_size_t len) {
            auto* buf = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(p));
            buf->insert(buf->end(), data, data + len);
        },
        nullptr);
    png_set_IHDR(png, info, static_cast<png_uint_32>(image.width()), static_cast<png_uint_32>(image.height()), 8,
                 PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    const auto stride = static_cast<std::size_t>(image.width()) * 3;
    for (int y = 0; y < image.height(); ++y)
        png_write_row(png, const_cast<png_bytep>(image.bytes().data() + static_cast<std::size_t>(y) * stride));
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return out;
}

}  // namespace warenav
