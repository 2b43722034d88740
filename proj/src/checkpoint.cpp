#include "advpipe/checkpoint.hpp"

#include <fstream>
#include <stdexcept>

#include "binary_io.hpp"

namespace advpipe::models {
namespace {

constexpr char kMagic[4] = {'A', 'D', 'V', 'M'};
constexpr std::uint32_t kVersion = 1;

}  // namespace

void save_model(const std::string& path, const Classifier& model) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open checkpoint for writing: " + path);
    }
    out.write(kMagic, 4);
    io::write_u32(out, kVersion);
    io::write_string(out, model.descriptor());
    io::write_u32(out, static_cast<std::uint32_t>(model.params().size()));
    for (const ParamTensor& p : model.params()) {
        io::write_string(out, p.name);
        io::write_u32(out, static_cast<std::uint32_t>(p.shape.size()));
        for (const int d : p.shape) {
            io::write_u32(out, static_cast<std::uint32_t>(d));
        }
        for (const double v : p.values) {
            io::write_f64(out, v);
        }
    }
    if (!out) {
        throw std::runtime_error("write failure on checkpoint: " + path);
    }
}

std::unique_ptr<Classifier> load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open checkpoint: " + path);
    }
    char magic[4] = {};
    if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) {
        throw std::runtime_error("not a model checkpoint (bad magic): " + path);
    }
    const std::uint32_t version = io::read_u32(in, "checkpoint version");
    if (version != kVersion) {
        throw std::runtime_error("unsupported checkpoint version in " + path);
    }
    const std::string descriptor = io::read_string(in, "architecture descriptor");
    std::unique_ptr<Classifier> model = make_model(descriptor);

    const std::uint32_t count = io::read_u32(in, "tensor count");
    if (count != model->params().size()) {
        throw std::runtime_error("checkpoint tensor count does not match architecture: " +
                                 path);
    }
    for (std::uint32_t t = 0; t < count; ++t) {
        const std::string name = io::read_string(in, "tensor name");
        ParamTensor& p = model->params()[t];
        if (name != p.name) {
            throw std::runtime_error("checkpoint tensor '" + name +
                                     "' does not match expected '" + p.name + "'");
        }
        const std::uint32_t ndim = io::read_u32(in, "tensor rank");
        if (ndim != p.shape.size()) {
            throw std::runtime_error("checkpoint tensor '" + name + "' has wrong rank");
        }
        for (std::uint32_t d = 0; d < ndim; ++d) {
            const std::uint32_t dim = io::read_u32(in, "tensor dimension");
            if (dim != static_cast<std::uint32_t>(p.shape[d])) {
                throw std::runtime_error("checkpoint tensor '" + name +
                                         "' has wrong shape");
            }
        }
        for (double& v : p.values) {
            v = io::read_f64(in, "tensor payload");
        }
    }
    return model;
}

}  // namespace advpipe::models
