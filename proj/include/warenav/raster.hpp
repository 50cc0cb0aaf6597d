#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace warenav {

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    bool operator==(const Rgb&) const = default;
};

/// Row-major 8-bit RGB image.
class Raster {
public:
    Raster() = default;
    Raster(int width, int height, Rgb fill = {});

    int width() const { return width_; }
    int height() const { return height_; }
    const std::vector<std::uint8_t>& bytes() const { return data_; }

    Rgb at(int x, int y) const;
    void set(int x, int y, Rgb c);
    void fill_rect(int x0, int y0, int x1, int y1, Rgb c);  // half-open, clipped

    bool operator==(const Raster&) const = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> data_;
};

/// Binary PPM (P6, maxval 255).
std::string encode_ppm(const Raster& image);
void write_ppm(const Raster& image, const std::string& path);
Raster decode_ppm(const std::string& bytes);

std::vector<std::uint8_t> encode_png(const Raster& image);

}  // namespace warenav
