#include "advpipe/dataset.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "advpipe/rng.hpp"
#include "advpipe/tensor_file.hpp"

namespace advpipe::data {
namespace {

namespace fs = std::filesystem;

std::string trim(const std::string& s) {
    const std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) {
        return "";
    }
    const std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) {
        parts.push_back(trim(item));
    }
    return parts;
}

}  // namespace

Dataset load_dataset(const std::string& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) {
        throw std::runtime_error("cannot open dataset manifest: " + manifest_path);
    }
    const fs::path dir = fs::path(manifest_path).parent_path();

    Dataset ds;
    std::string line;
    bool have_descriptor = false;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty()) {
            continue;
        }
        if (t.rfind("#descriptor,", 0) == 0) {
            const std::vector<std::string> f = split(t.substr(12), ',');
            if (f.size() != 4) {
                throw std::runtime_error("manifest descriptor needs 4 fields: " + t);
            }
            ds.side = std::stoi(f[0]);
            if (std::stoi(f[1]) != ds.side) {
                throw std::runtime_error("manifest descriptor must be square: " + t);
            }
            ds.channels = std::stoi(f[2]);
            ds.classes = std::stoi(f[3]);
            if (ds.side <= 0 || ds.channels <= 0 || ds.classes < 2) {
                throw std::runtime_error("manifest descriptor out of range: " + t);
            }
            have_descriptor = true;
            continue;
        }
        if (t[0] == '#') {
            continue;
        }
        if (!have_descriptor) {
            throw std::runtime_error("manifest is missing the #descriptor line: " +
                                     manifest_path);
        }
        const std::vector<std::string> f = split(t, ',');
        if (f.size() != 2 || f[0].empty()) {
            std::ostringstream msg;
            msg << "manifest line " << line_no << " is not path,label: " << t;
            throw std::runtime_error(msg.str());
        }
        int label = 0;
        try {
            label = std::stoi(f[1]);
        } catch (const std::exception&) {
            throw std::runtime_error("manifest entry '" + f[0] + "' has a bad label: " +
                                     f[1]);
        }
        if (label < 0 || label >= ds.classes) {
            throw std::runtime_error("manifest entry '" + f[0] +
                                     "' has label out of range");
        }
        const fs::path file = dir / f[0];
        ImageTensor img = load_tensor(file.string());
        if (img.height() != ds.side || img.width() != ds.side ||
            img.channels() != ds.channels) {
            throw std::runtime_error("manifest entry '" + f[0] +
                                     "' does not match the descriptor shape");
        }
        ds.examples.push_back({std::move(img), label});
    }
    if (!have_descriptor) {
        throw std::runtime_error("manifest is missing the #descriptor line: " +
                                 manifest_path);
    }
    if (ds.examples.empty()) {
        throw std::runtime_error("empty dataset: " + manifest_path);
    }
    return ds;
}

std::string make_toy_dataset(const std::string& out_dir, std::uint64_t seed,
                             int per_class, int side, int classes) {
    if (per_class <= 0 || side <= 0 || classes < 2) {
        throw std::invalid_argument("make_toy_dataset: per_class, side positive and >= 2 classes");
    }
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);
    const fs::path manifest_path = dir / "manifest.csv";
    std::ofstream manifest(manifest_path);
    if (!manifest) {
        throw std::runtime_error("cannot write manifest: " + manifest_path.string());
    }
    manifest << "#descriptor," << side << "," << side << ",1," << classes << "\n";

    Rng rng(seed);
    for (int c = 0; c < classes; ++c) {
        // Class identity is the grating orientation, sweeping [0, pi) across
        // classes. Every class shares one spatial frequency so that class
        // identity is invariant under mild rescaling of the image.
        const double theta = std::numbers::pi * static_cast<double>(c) / classes;
        const double freq = 3.0;
        const double kx = std::cos(theta) * 2.0 * std::numbers::pi * freq / side;
        const double ky = std::sin(theta) * 2.0 * std::numbers::pi * freq / side;
        for (int i = 0; i < per_class; ++i) {
            const double phase = rng.next_double() * 2.0 * std::numbers::pi;
            ImageTensor img(side, side, 1);
            for (int y = 0; y < side; ++y) {
                for (int x = 0; x < side; ++x) {
                    // Amplitude is kept small relative to the pixel range so
                    // class margins sit near typical perturbation budgets,
                    // while noise still averages out over the image area.
                    const double noise = (rng.next_double() - 0.5) * 0.10;
                    double v = 0.5 + 0.12 * std::sin(kx * x + ky * y + phase) + noise;
                    v = std::clamp(v, 0.0, 1.0);
                    // Quantize through float so saved and in-memory values
                    // agree bit for bit.
                    img.at(y, x, 0) = static_cast<double>(static_cast<float>(v));
                }
            }
            std::ostringstream name;
            name << "c" << c << "_" << i << ".atns";
            save_tensor((dir / name.str()).string(), img);
            manifest << name.str() << "," << c << "\n";
        }
    }
    if (!manifest) {
        throw std::runtime_error("write failure on manifest: " + manifest_path.string());
    }
    return manifest_path.string();
}

std::uint64_t dataset_checksum(const Dataset& ds) {
    std::uint64_t h = 0xCBF29CE484222325ULL;  // FNV-1a offset basis
    auto mix_byte = [&h](unsigned char b) {
        h ^= b;
        h *= 0x100000001B3ULL;  // FNV prime
    };
    auto mix_u32 = [&mix_byte](std::uint32_t v) {
        mix_byte(static_cast<unsigned char>(v & 0xFF));
        mix_byte(static_cast<unsigned char>((v >> 8) & 0xFF));
        mix_byte(static_cast<unsigned char>((v >> 16) & 0xFF));
        mix_byte(static_cast<unsigned char>((v >> 24) & 0xFF));
    };
    mix_u32(static_cast<std::uint32_t>(ds.side));
    mix_u32(static_cast<std::uint32_t>(ds.channels));
    mix_u32(static_cast<std::uint32_t>(ds.classes));
    for (const models::LabeledExample& ex : ds.examples) {
        mix_u32(static_cast<std::uint32_t>(ex.label));
        for (std::size_t i = 0; i < ex.image.size(); ++i) {
            mix_u32(std::bit_cast<std::uint32_t>(static_cast<float>(ex.image[i])));
        }
    }
    return h;
}

}  // namespace advpipe::data
