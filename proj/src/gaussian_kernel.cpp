#include "advpipe/gaussian_kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace advpipe {

GaussianKernel make_gaussian_kernel(int side, double sigma) {
    if (side < 1 || side % 2 == 0) {
        throw std::invalid_argument("make_gaussian_kernel: side must be odd and >= 1");
    }
    if (!(sigma > 0.0)) {
        throw std::invalid_argument("make_gaussian_kernel: sigma must be positive");
    }
    GaussianKernel k;
    k.side = side;
    k.sigma = sigma;
    k.weights.resize(static_cast<std::size_t>(side) * side);
    const int r = (side - 1) / 2;
    double sum = 0.0;
    for (int i = 0; i < side; ++i) {
        for (int j = 0; j < side; ++j) {
            const double dy = i - r, dx = j - r;
            const double w = std::exp(-(dy * dy + dx * dx) / (2.0 * sigma * sigma));
            k.weights[static_cast<std::size_t>(i) * side + j] = w;
            sum += w;
        }
    }
    for (double& w : k.weights) w /= sum;
    return k;
}

}  // namespace advpipe
