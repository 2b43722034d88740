#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "advpipe/rng.hpp"
#include "oracle.hpp"

namespace advpipe::oracle {
namespace {

// Inline half-pixel-center bilinear resize of a square image, transcribed
// from the sampling definition rather than calling the library operation.
ImageTensor resize_square(const ImageTensor& in, int out_n) {
    const int in_n = in.height();
    const int chans = in.channels();
    ImageTensor out(out_n, out_n, chans);
    const double scale = static_cast<double>(in_n) / static_cast<double>(out_n);
    for (int y = 0; y < out_n; ++y) {
        const double sy = (static_cast<double>(y) + 0.5) * scale - 0.5;
        const double fy = std::floor(sy);
        int y0 = static_cast<int>(fy);
        int y1 = y0 + 1;
        y0 = std::clamp(y0, 0, in_n - 1);
        y1 = std::clamp(y1, 0, in_n - 1);
        const double ty = sy - fy;
        for (int x = 0; x < out_n; ++x) {
            const double sx = (static_cast<double>(x) + 0.5) * scale - 0.5;
            const double fx = std::floor(sx);
            int x0 = static_cast<int>(fx);
            int x1 = x0 + 1;
            x0 = std::clamp(x0, 0, in_n - 1);
            x1 = std::clamp(x1, 0, in_n - 1);
            const double tx = sx - fx;
            for (int c = 0; c < chans; ++c) {
                const double p00 = in.at(y0, x0, c);
                const double p01 = in.at(y0, x1, c);
                const double p10 = in.at(y1, x0, c);
                const double p11 = in.at(y1, x1, c);
                const double top = p00 + tx * (p01 - p00);
                const double bot = p10 + tx * (p11 - p10);
                out.at(y, x, c) = top + ty * (bot - top);
            }
        }
    }
    return out;
}

}  // namespace

ImageTensor replay_rdim(const ImageTensor& x, int base, int canvas, std::uint64_t seed) {
    if (x.height() != base || x.width() != base) {
        throw std::invalid_argument("replay_rdim: input side does not match base");
    }
    if (canvas < base) {
        throw std::invalid_argument("replay_rdim: canvas smaller than base");
    }
    Rng rng(seed);
    const int a = uniform_int(rng, base, canvas);
    const int slack = canvas - a;
    const int top = uniform_int(rng, 0, slack);
    const int left = uniform_int(rng, 0, slack);

    const ImageTensor content = resize_square(x, a);
    ImageTensor padded(canvas, canvas, x.channels(), 0.0);
    for (int y = 0; y < a; ++y) {
        for (int xx = 0; xx < a; ++xx) {
            for (int c = 0; c < x.channels(); ++c) {
                padded.at(top + y, left + xx, c) = content.at(y, xx, c);
            }
        }
    }
    return resize_square(padded, base);
}

}  // namespace advpipe::oracle
