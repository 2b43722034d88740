#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "advpipe/attack.hpp"

namespace advpipe::attack {
namespace {

std::string trim(const std::string& s) {
    const std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) {
        return "";
    }
    const std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::string fmt_double(double v) {
    std::ostringstream out;
    out.precision(std::numeric_limits<double>::max_digits10);
    out << v;
    return out.str();
}

bool parse_bool(const std::string& v, const std::string& key) {
    if (v == "true" || v == "1") {
        return true;
    }
    if (v == "false" || v == "0") {
        return false;
    }
    throw std::invalid_argument("attack config: bad boolean for " + key + ": " + v);
}

double parse_double(const std::string& v, const std::string& key) {
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size()) {
            throw std::invalid_argument("trailing");
        }
        return d;
    } catch (const std::exception&) {
        throw std::invalid_argument("attack config: bad number for " + key + ": " + v);
    }
}

int parse_int(const std::string& v, const std::string& key) {
    try {
        std::size_t used = 0;
        const int i = std::stoi(v, &used);
        if (used != v.size()) {
            throw std::invalid_argument("trailing");
        }
        return i;
    } catch (const std::exception&) {
        throw std::invalid_argument("attack config: bad integer for " + key + ": " + v);
    }
}

std::vector<std::string> split_commas(const std::string& v) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(v);
    while (std::getline(in, item, ',')) {
        const std::string t = trim(item);
        if (!t.empty()) {
            parts.push_back(t);
        }
    }
    return parts;
}

}  // namespace

std::string serialize_attack_config(const AttackConfig& cfg) {
    std::ostringstream out;
    out << "name=" << cfg.name << "\n";
    out << "eps=" << fmt_double(cfg.eps) << "\n";
    out << "iterations=" << cfg.iterations << "\n";
    out << "alpha=" << fmt_double(cfg.alpha) << "\n";
    out << "mu=" << fmt_double(cfg.mu) << "\n";
    out << "momentum=" << (cfg.momentum ? "true" : "false") << "\n";
    out << "nesterov=" << (cfg.nesterov ? "true" : "false") << "\n";
    out << "region_fitting=" << (cfg.region_fitting ? "true" : "false") << "\n";
    out << "transform=";
    switch (cfg.transform) {
        case TransformKind::none: out << "none"; break;
        case TransformKind::rdim: out << "rdim"; break;
        case TransformKind::dim: out << "dim"; break;
    }
    out << "\n";
    out << "transform_canvas=" << cfg.transform_canvas << "\n";
    out << "dim_probability=" << fmt_double(cfg.dim_probability) << "\n";
    if (!cfg.diversity_scales.empty()) {
        out << "diversity_scales=";
        for (std::size_t i = 0; i < cfg.diversity_scales.size(); ++i) {
            out << (i ? "," : "") << cfg.diversity_scales[i];
        }
        out << "\n";
    }
    if (!cfg.diversity_weights.empty()) {
        out << "diversity_weights=";
        for (std::size_t i = 0; i < cfg.diversity_weights.size(); ++i) {
            out << (i ? "," : "") << fmt_double(cfg.diversity_weights[i]);
        }
        out << "\n";
    }
    out << "kernel_side=" << cfg.kernel_side << "\n";
    out << "kernel_sigma=" << fmt_double(cfg.kernel_sigma) << "\n";
    out << "targeted=" << (cfg.targeted ? "true" : "false") << "\n";
    out << "seed=" << cfg.seed << "\n";
    out << "record_snapshots=" << (cfg.record_snapshots ? "true" : "false") << "\n";
    return out.str();
}

AttackConfig parse_attack_config(const std::string& text) {
    AttackConfig cfg;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') {
            continue;
        }
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("attack config: expected key=value, got: " + t);
        }
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key == "name") {
            cfg.name = value;
        } else if (key == "eps") {
            cfg.eps = parse_double(value, key);
        } else if (key == "iterations") {
            cfg.iterations = parse_int(value, key);
        } else if (key == "alpha") {
            cfg.alpha = parse_double(value, key);
        } else if (key == "mu") {
            cfg.mu = parse_double(value, key);
        } else if (key == "momentum") {
            cfg.momentum = parse_bool(value, key);
        } else if (key == "nesterov") {
            cfg.nesterov = parse_bool(value, key);
        } else if (key == "region_fitting") {
            cfg.region_fitting = parse_bool(value, key);
        } else if (key == "transform") {
            if (value == "none") {
                cfg.transform = TransformKind::none;
            } else if (value == "rdim") {
                cfg.transform = TransformKind::rdim;
            } else if (value == "dim") {
                cfg.transform = TransformKind::dim;
            } else {
                throw std::invalid_argument("attack config: unknown transform: " + value);
            }
        } else if (key == "transform_canvas") {
            cfg.transform_canvas = parse_int(value, key);
        } else if (key == "dim_probability") {
            cfg.dim_probability = parse_double(value, key);
        } else if (key == "diversity_scales") {
            cfg.diversity_scales.clear();
            for (const std::string& s : split_commas(value)) {
                cfg.diversity_scales.push_back(parse_int(s, key));
            }
        } else if (key == "diversity_weights") {
            cfg.diversity_weights.clear();
            for (const std::string& s : split_commas(value)) {
                cfg.diversity_weights.push_back(parse_double(s, key));
            }
        } else if (key == "kernel_side") {
            cfg.kernel_side = parse_int(value, key);
        } else if (key == "kernel_sigma") {
            cfg.kernel_sigma = parse_double(value, key);
        } else if (key == "targeted") {
            cfg.targeted = parse_bool(value, key);
        } else if (key == "seed") {
            try {
                cfg.seed = std::stoull(value);
            } catch (const std::exception&) {
                throw std::invalid_argument("attack config: bad seed: " + value);
            }
        } else if (key == "record_snapshots") {
            cfg.record_snapshots = parse_bool(value, key);
        } else {
            throw std::invalid_argument("attack config: unknown key: " + key);
        }
    }
    return cfg;
}

AttackConfig load_attack_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open attack config: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_attack_config(buf.str());
}

}  // namespace advpipe::attack
