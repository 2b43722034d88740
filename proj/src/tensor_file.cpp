#include "advpipe/tensor_file.hpp"

#include <fstream>
#include <stdexcept>

#include "binary_io.hpp"

namespace advpipe {
namespace {

constexpr char kMagic[4] = {'A', 'T', 'N', 'S'};
constexpr unsigned char kVersion = 1;
constexpr unsigned char kRank = 3;

}  // namespace

void save_tensor(const std::string& path, const ImageTensor& t) {
    if (t.empty()) {
        throw std::invalid_argument("save_tensor: empty tensor");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open tensor file for writing: " + path);
    }
    out.write(kMagic, 4);
    out.put(static_cast<char>(kVersion));
    out.put(static_cast<char>(kRank));
    io::write_u32(out, static_cast<std::uint32_t>(t.height()));
    io::write_u32(out, static_cast<std::uint32_t>(t.width()));
    io::write_u32(out, static_cast<std::uint32_t>(t.channels()));
    for (std::size_t i = 0; i < t.size(); ++i) {
        io::write_f32(out, static_cast<float>(t[i]));
    }
    if (!out) {
        throw std::runtime_error("write failure on tensor file: " + path);
    }
}

ImageTensor load_tensor(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open tensor file: " + path);
    }
    char magic[4] = {};
    if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) {
        throw std::runtime_error("not a tensor file (bad magic): " + path);
    }
    const int version = in.get();
    if (version != kVersion) {
        throw std::runtime_error("unsupported tensor file version in " + path);
    }
    const int rank = in.get();
    if (rank != kRank) {
        throw std::runtime_error("unsupported tensor rank in " + path);
    }
    const std::uint32_t h = io::read_u32(in, "tensor height");
    const std::uint32_t w = io::read_u32(in, "tensor width");
    const std::uint32_t c = io::read_u32(in, "tensor channels");
    if (h == 0 || w == 0 || c == 0 || h > 1u << 16 || w > 1u << 16 || c > 1024) {
        throw std::runtime_error("implausible tensor dimensions in " + path);
    }
    ImageTensor t(static_cast<int>(h), static_cast<int>(w), static_cast<int>(c));
    for (std::size_t i = 0; i < t.size(); ++i) {
        t[i] = static_cast<double>(io::read_f32(in, "tensor payload"));
    }
    return t;
}

}  // namespace advpipe
