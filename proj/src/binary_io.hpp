#ifndef ADVPIPE_SRC_BINARY_IO_HPP
#define ADVPIPE_SRC_BINARY_IO_HPP

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

// Little-endian scalar I/O shared by the binary file formats. Byte order is
// written out explicitly so files are portable across hosts.
namespace advpipe::io {

inline void write_u32(std::ostream& out, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v & 0xFF),
                          static_cast<unsigned char>((v >> 8) & 0xFF),
                          static_cast<unsigned char>((v >> 16) & 0xFF),
                          static_cast<unsigned char>((v >> 24) & 0xFF)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

inline std::uint32_t read_u32(std::istream& in, const char* what) {
    unsigned char b[4];
    if (!in.read(reinterpret_cast<char*>(b), 4)) {
        throw std::runtime_error(std::string("truncated file while reading ") + what);
    }
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) |
           (static_cast<std::uint32_t>(b[3]) << 24);
}

inline void write_u64(std::ostream& out, std::uint64_t v) {
    write_u32(out, static_cast<std::uint32_t>(v & 0xFFFFFFFFULL));
    write_u32(out, static_cast<std::uint32_t>(v >> 32));
}

inline std::uint64_t read_u64(std::istream& in, const char* what) {
    const std::uint64_t lo = read_u32(in, what);
    const std::uint64_t hi = read_u32(in, what);
    return lo | (hi << 32);
}

inline void write_f64(std::ostream& out, double v) {
    write_u64(out, std::bit_cast<std::uint64_t>(v));
}

inline double read_f64(std::istream& in, const char* what) {
    return std::bit_cast<double>(read_u64(in, what));
}

inline void write_f32(std::ostream& out, float v) {
    write_u32(out, std::bit_cast<std::uint32_t>(v));
}

inline float read_f32(std::istream& in, const char* what) {
    return std::bit_cast<float>(read_u32(in, what));
}

inline void write_string(std::ostream& out, const std::string& s) {
    write_u32(out, static_cast<std::uint32_t>(s.size()));
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

inline std::string read_string(std::istream& in, const char* what,
                               std::uint32_t max_len = 1u << 20) {
    const std::uint32_t n = read_u32(in, what);
    if (n > max_len) {
        throw std::runtime_error(std::string("implausible string length for ") + what);
    }
    std::string s(n, '\0');
    if (n > 0 && !in.read(s.data(), n)) {
        throw std::runtime_error(std::string("truncated file while reading ") + what);
    }
    return s;
}

}  // namespace advpipe::io

#endif
