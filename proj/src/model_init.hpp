#ifndef ADVPIPE_SRC_MODEL_INIT_HPP
#define ADVPIPE_SRC_MODEL_INIT_HPP

#include <cmath>
#include <span>

#include "advpipe/rng.hpp"

namespace advpipe::models {

// Glorot-style uniform init on [-limit, limit), limit = sqrt(6/(fan_in+fan_out)).
inline void glorot_fill(std::span<double> values, int fan_in, int fan_out, Rng& rng) {
    const double limit = std::sqrt(6.0 / (static_cast<double>(fan_in) + fan_out));
    for (double& v : values) {
        v = (2.0 * rng.next_double() - 1.0) * limit;
    }
}

}  // namespace advpipe::models

#endif
