#include <stdexcept>

#include "oracle.hpp"

namespace advpipe::oracle {
namespace {

// shift(in, i, j)(y, x) = in(y + i, x + j), zero where the source falls off
// the image. Materialized as a whole tensor on purpose: the brute-force
// definition, not the convolution shortcut.
ImageTensor shift_image(const ImageTensor& in, int i, int j) {
    ImageTensor out = ImageTensor::zeros_like(in);
    for (int y = 0; y < in.height(); ++y) {
        const int sy = y + i;
        if (sy < 0 || sy >= in.height()) {
            continue;
        }
        for (int x = 0; x < in.width(); ++x) {
            const int sx = x + j;
            if (sx < 0 || sx >= in.width()) {
                continue;
            }
            for (int c = 0; c < in.channels(); ++c) {
                out.at(y, x, c) = in.at(sy, sx, c);
            }
        }
    }
    return out;
}

}  // namespace

ImageTensor translation_sum(const ImageTensor& grad, const GaussianKernel& kernel) {
    if (kernel.side % 2 == 0 || kernel.side < 1) {
        throw std::invalid_argument("translation_sum: kernel side must be odd");
    }
    const int r = (kernel.side - 1) / 2;
    ImageTensor acc = ImageTensor::zeros_like(grad);
    for (int i = -r; i <= r; ++i) {
        for (int j = -r; j <= r; ++j) {
            const double w = kernel.at(i + r, j + r);
            const ImageTensor shifted = shift_image(grad, i, j);
            for (std::size_t n = 0; n < acc.size(); ++n) {
                acc[n] += w * shifted[n];
            }
        }
    }
    return acc;
}

}  // namespace advpipe::oracle
