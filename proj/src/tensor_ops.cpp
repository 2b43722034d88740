#include "advpipe/tensor_ops.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace advpipe {

namespace {

struct Taps {
    int i0, i1;   // clamped source indices
    double frac;  // interpolation fraction toward i1
};

// Half-pixel-center source taps for output index `i` of `out_n` samples
// drawn from `in_n` sources. Out-of-range taps clamp to the edge; the
// fraction is kept so that lerp(a, a, frac) == a exactly at clamped edges.
inline Taps taps_for(int i, int out_n, int in_n) {
    const double scale = static_cast<double>(in_n) / static_cast<double>(out_n);
    const double s = (static_cast<double>(i) + 0.5) * scale - 0.5;
    const double f = std::floor(s);
    int i0 = static_cast<int>(f);
    int i1 = i0 + 1;
    i0 = std::clamp(i0, 0, in_n - 1);
    i1 = std::clamp(i1, 0, in_n - 1);
    return {i0, i1, s - f};
}

inline double lerp(double a, double b, double t) { return a + t * (b - a); }

}  // namespace

ImageTensor sign(const ImageTensor& t) {
    if (!t.all_finite()) {
        throw std::invalid_argument("sign: non-finite value in input (corrupt gradient)");
    }
    ImageTensor out = ImageTensor::zeros_like(t);
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double v = t[i];
        out[i] = (v > 0.0) ? 1.0 : (v < 0.0 ? -1.0 : 0.0);
    }
    return out;
}

ImageTensor bilinear_resize(const ImageTensor& t, int out_h, int out_w) {
    if (out_h < 1 || out_w < 1) {
        throw std::invalid_argument("bilinear_resize: target size must be positive");
    }
    if (out_h == t.height() && out_w == t.width()) {
        return t;
    }
    const int c_n = t.channels();
    ImageTensor out(out_h, out_w, c_n);
    for (int y = 0; y < out_h; ++y) {
        const Taps ty = taps_for(y, out_h, t.height());
        for (int x = 0; x < out_w; ++x) {
            const Taps tx = taps_for(x, out_w, t.width());
            for (int c = 0; c < c_n; ++c) {
                const double top = lerp(t.at(ty.i0, tx.i0, c), t.at(ty.i0, tx.i1, c), tx.frac);
                const double bot = lerp(t.at(ty.i1, tx.i0, c), t.at(ty.i1, tx.i1, c), tx.frac);
                out.at(y, x, c) = lerp(top, bot, ty.frac);
            }
        }
    }
    return out;
}

ImageTensor bilinear_resize_adjoint(const ImageTensor& grad, int in_h, int in_w) {
    if (in_h < 1 || in_w < 1) {
        throw std::invalid_argument("bilinear_resize_adjoint: source size must be positive");
    }
    if (grad.height() == in_h && grad.width() == in_w) {
        return grad;
    }
    const int c_n = grad.channels();
    ImageTensor out(in_h, in_w, c_n);
    for (int y = 0; y < grad.height(); ++y) {
        const Taps ty = taps_for(y, grad.height(), in_h);
        const double wy1 = ty.frac, wy0 = 1.0 - ty.frac;
        for (int x = 0; x < grad.width(); ++x) {
            const Taps tx = taps_for(x, grad.width(), in_w);
            const double wx1 = tx.frac, wx0 = 1.0 - tx.frac;
            for (int c = 0; c < c_n; ++c) {
                const double g = grad.at(y, x, c);
                out.at(ty.i0, tx.i0, c) += wy0 * wx0 * g;
                out.at(ty.i0, tx.i1, c) += wy0 * wx1 * g;
                out.at(ty.i1, tx.i0, c) += wy1 * wx0 * g;
                out.at(ty.i1, tx.i1, c) += wy1 * wx1 * g;
            }
        }
    }
    return out;
}

ImageTensor pad(const ImageTensor& t, int top, int bottom, int left, int right, double fill) {
    if (top < 0 || bottom < 0 || left < 0 || right < 0) {
        throw std::invalid_argument("pad: margins must be non-negative");
    }
    if (top == 0 && bottom == 0 && left == 0 && right == 0) {
        return t;
    }
    ImageTensor out(t.height() + top + bottom, t.width() + left + right, t.channels(), fill);
    for (int y = 0; y < t.height(); ++y) {
        for (int x = 0; x < t.width(); ++x) {
            for (int c = 0; c < t.channels(); ++c) {
                out.at(y + top, x + left, c) = t.at(y, x, c);
            }
        }
    }
    return out;
}

ImageTensor crop(const ImageTensor& t, int top, int left, int h, int w) {
    if (top < 0 || left < 0 || top + h > t.height() || left + w > t.width()) {
        throw std::invalid_argument("crop: window outside tensor");
    }
    if (top == 0 && left == 0 && h == t.height() && w == t.width()) {
        return t;
    }
    ImageTensor out(h, w, t.channels());
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            for (int c = 0; c < t.channels(); ++c) {
                out.at(y, x, c) = t.at(y + top, x + left, c);
            }
        }
    }
    return out;
}

ImageTensor conv2d_same(const ImageTensor& t, std::span<const double> weights, int side) {
    if (side < 1 || side % 2 == 0) {
        throw std::invalid_argument("conv2d_same: kernel side must be odd");
    }
    if (weights.size() != static_cast<std::size_t>(side) * side) {
        throw std::invalid_argument("conv2d_same: weight count does not match side");
    }
    const int r = (side - 1) / 2;
    ImageTensor out = ImageTensor::zeros_like(t);
    for (int y = 0; y < t.height(); ++y) {
        for (int x = 0; x < t.width(); ++x) {
            for (int c = 0; c < t.channels(); ++c) {
                double acc = 0.0;
                for (int dy = -r; dy <= r; ++dy) {
                    const int sy = y + dy;
                    if (sy < 0 || sy >= t.height()) continue;
                    for (int dx = -r; dx <= r; ++dx) {
                        const int sx = x + dx;
                        if (sx < 0 || sx >= t.width()) continue;
                        acc += weights[static_cast<std::size_t>(dy + r) * side + (dx + r)] *
                               t.at(sy, sx, c);
                    }
                }
                out.at(y, x, c) = acc;
            }
        }
    }
    return out;
}

ImageTensor conv2d_same(const ImageTensor& t, const GaussianKernel& kernel) {
    return conv2d_same(t, kernel.weights, kernel.side);
}

ImageTensor clip_to_ball(const ImageTensor& x, const ImageTensor& x_ref, double eps,
                         double lo, double hi) {
    if (!x.same_shape(x_ref)) {
        throw std::invalid_argument("clip_to_ball: shape mismatch");
    }
    if (eps < 0.0 || !(lo < hi)) {
        throw std::invalid_argument("clip_to_ball: invalid eps or range");
    }
    ImageTensor out = ImageTensor::zeros_like(x);
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lower = std::max(lo, x_ref[i] - eps);
        const double upper = std::min(hi, x_ref[i] + eps);
        out[i] = std::min(std::max(x[i], lower), upper);
    }
    return out;
}

ImageTensor add_scaled(const ImageTensor& a, double s, const ImageTensor& b) {
    if (!a.same_shape(b)) {
        throw std::invalid_argument("add_scaled: shape mismatch");
    }
    ImageTensor out = a;
    for (std::size_t i = 0; i < a.size(); ++i) {
        out[i] = a[i] + s * b[i];
    }
    return out;
}

double l1_norm(const ImageTensor& t) {
    double s = 0.0;
    for (double v : t.data()) s += std::abs(v);
    return s;
}

double linf_dist(const ImageTensor& a, const ImageTensor& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

double channel_min(const ImageTensor& t, int c) {
    double m = t.at(0, 0, c);
    for (int y = 0; y < t.height(); ++y)
        for (int x = 0; x < t.width(); ++x) m = std::min(m, t.at(y, x, c));
    return m;
}

double channel_max(const ImageTensor& t, int c) {
    double m = t.at(0, 0, c);
    for (int y = 0; y < t.height(); ++y)
        for (int x = 0; x < t.width(); ++x) m = std::max(m, t.at(y, x, c));
    return m;
}

}  // namespace advpipe
