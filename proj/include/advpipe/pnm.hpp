#ifndef ADVPIPE_PNM_HPP
#define ADVPIPE_PNM_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace advpipe {

/// 8-bit image buffer for the PGM/PPM emitters; 1 channel (grayscale) or 3
/// (RGB), row-major with interleaved channels.
struct ByteImage {
    int height = 0;
    int width = 0;
    int channels = 1;
    std::vector<std::uint8_t> pixels;

    std::uint8_t& at(int y, int x, int c) {
        return pixels[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    std::uint8_t at(int y, int x, int c) const {
        return pixels[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
};

/// Writes binary PGM (P5, 1 channel) or PPM (P6, 3 channels) with maxval
/// 255 depending on img.channels.
void write_pnm(const std::string& path, const ByteImage& img);

/// Reads a binary P5/P6 file written by write_pnm (maxval must be 255).
ByteImage read_pnm(const std::string& path);

}  // namespace advpipe

#endif
