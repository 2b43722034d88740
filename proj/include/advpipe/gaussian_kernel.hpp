#ifndef ADVPIPE_GAUSSIAN_KERNEL_HPP
#define ADVPIPE_GAUSSIAN_KERNEL_HPP

#include <vector>

namespace advpipe {

/// Normalized 2-D Gaussian smoothing kernel. Weights sum to 1, are
/// symmetric under horizontal/vertical flips, and peak at the center.
struct GaussianKernel {
    int side = 1;
    double sigma = 1.0;
    std::vector<double> weights;  // side * side, row-major

    double at(int i, int j) const { return weights[static_cast<std::size_t>(i) * side + j]; }
};

/// Builds a kernel with weights[i][j] proportional to
/// exp(-((i-r)^2 + (j-r)^2) / (2 sigma^2)), r = (side-1)/2, normalized to
/// sum 1. Side must be odd and >= 1, sigma positive.
GaussianKernel make_gaussian_kernel(int side, double sigma);

}  // namespace advpipe

#endif
