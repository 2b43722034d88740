#include "advpipe/pnm.hpp"

#include <fstream>
#include <stdexcept>

namespace advpipe {

void write_pnm(const std::string& path, const ByteImage& img) {
    if (img.height <= 0 || img.width <= 0 ||
        (img.channels != 1 && img.channels != 3)) {
        throw std::invalid_argument("write_pnm: need positive dims and 1 or 3 channels");
    }
    if (img.pixels.size() !=
        static_cast<std::size_t>(img.height) * img.width * img.channels) {
        throw std::invalid_argument("write_pnm: pixel buffer size mismatch");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open image for writing: " + path);
    }
    out << (img.channels == 1 ? "P5" : "P6") << "\n"
        << img.width << " " << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.pixels.data()),
              static_cast<std::streamsize>(img.pixels.size()));
    if (!out) {
        throw std::runtime_error("write failure on image: " + path);
    }
}

namespace {

// Reads one whitespace-delimited header token, skipping '#' comment lines.
std::string next_token(std::istream& in) {
    std::string tok;
    int ch = in.get();
    while (ch != EOF) {
        if (ch == '#') {
            while (ch != EOF && ch != '\n') {
                ch = in.get();
            }
        } else if (std::isspace(ch)) {
            if (!tok.empty()) {
                in.unget();
                return tok;
            }
        } else {
            tok.push_back(static_cast<char>(ch));
        }
        ch = in.get();
    }
    return tok;
}

}  // namespace

ByteImage read_pnm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open image: " + path);
    }
    const std::string magic = next_token(in);
    ByteImage img;
    if (magic == "P5") {
        img.channels = 1;
    } else if (magic == "P6") {
        img.channels = 3;
    } else {
        throw std::runtime_error("not a binary PGM/PPM file: " + path);
    }
    int maxval = 0;
    try {
        img.width = std::stoi(next_token(in));
        img.height = std::stoi(next_token(in));
        maxval = std::stoi(next_token(in));
    } catch (const std::exception&) {
        throw std::runtime_error("malformed PGM/PPM header in " + path);
    }
    if (maxval != 255) {
        throw std::runtime_error("unsupported PGM/PPM maxval in " + path);
    }
    if (img.width <= 0 || img.height <= 0) {
        throw std::runtime_error("malformed PGM/PPM dimensions in " + path);
    }
    in.get();  // single whitespace byte separating header from payload
    img.pixels.resize(static_cast<std::size_t>(img.height) * img.width * img.channels);
    if (!in.read(reinterpret_cast<char*>(img.pixels.data()),
                 static_cast<std::streamsize>(img.pixels.size()))) {
        throw std::runtime_error("truncated PGM/PPM payload in " + path);
    }
    return img;
}

}  // namespace advpipe
