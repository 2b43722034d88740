#include "advpipe/transforms.hpp"

#include <cmath>
#include <stdexcept>

#include "advpipe/tensor_ops.hpp"

namespace advpipe::transforms {
namespace {

void check_square_input(const ImageTensor& x, int base) {
    if (x.height() != base || x.width() != base) {
        throw std::invalid_argument("diversity transform input side does not match base");
    }
}

}  // namespace

RdimDraw draw_rdim(int base, int canvas, Rng& rng) {
    if (base <= 0) {
        throw std::invalid_argument("draw_rdim: base side must be positive");
    }
    if (canvas < base) {
        throw std::invalid_argument("draw_rdim: canvas side smaller than base");
    }
    RdimDraw d;
    d.base = base;
    d.canvas = canvas;
    d.a = uniform_int(rng, base, canvas);
    const int slack = canvas - d.a;
    d.top = uniform_int(rng, 0, slack);
    d.left = uniform_int(rng, 0, slack);
    return d;
}

ImageTensor rdim_apply(const ImageTensor& x, const RdimDraw& d) {
    check_square_input(x, d.base);
    const ImageTensor resized = bilinear_resize(x, d.a, d.a);
    const int slack = d.canvas - d.a;
    const ImageTensor padded =
        pad(resized, d.top, slack - d.top, d.left, slack - d.left, 0.0);
    return bilinear_resize(padded, d.base, d.base);
}

ImageTensor rdim_pullback(const ImageTensor& grad, const RdimDraw& d) {
    check_square_input(grad, d.base);
    const ImageTensor on_canvas = bilinear_resize_adjoint(grad, d.canvas, d.canvas);
    const ImageTensor on_window = crop(on_canvas, d.top, d.left, d.a, d.a);
    return bilinear_resize_adjoint(on_window, d.base, d.base);
}

ImageTensor rdim_window_mask(const RdimDraw& d) {
    ImageTensor mask(d.canvas, d.canvas, 1, 0.0);
    for (int y = d.top; y < d.top + d.a; ++y) {
        for (int x = d.left; x < d.left + d.a; ++x) {
            mask.at(y, x, 0) = 1.0;
        }
    }
    return mask;
}

ImageTensor rdim_transform(const ImageTensor& x, int base, int canvas, Rng& rng) {
    return rdim_apply(x, draw_rdim(base, canvas, rng));
}

DimDraw draw_dim(int base, int canvas, double p, Rng& rng) {
    if (p < 0.0 || p > 1.0) {
        throw std::invalid_argument("draw_dim: probability outside [0, 1]");
    }
    DimDraw d;
    d.transformed = rng.next_double() < p;
    if (d.transformed) {
        d.inner = draw_rdim(base, canvas, rng);
    }
    return d;
}

ImageTensor dim_transform(const ImageTensor& x, double p, int canvas, Rng& rng) {
    if (x.height() != x.width()) {
        throw std::invalid_argument("dim_transform expects a square input");
    }
    const DimDraw d = draw_dim(x.height(), canvas, p, rng);
    if (!d.transformed) {
        return x;
    }
    const ImageTensor resized = bilinear_resize(x, d.inner.a, d.inner.a);
    const int slack = d.inner.canvas - d.inner.a;
    return pad(resized, d.inner.top, slack - d.inner.top, d.inner.left,
               slack - d.inner.left, 0.0);
}

int count_zero_rows(const ImageTensor& t, double tol) {
    int count = 0;
    for (int y = 0; y < t.height(); ++y) {
        bool all_zero = true;
        for (int x = 0; x < t.width() && all_zero; ++x) {
            for (int c = 0; c < t.channels(); ++c) {
                if (std::abs(t.at(y, x, c)) > tol) {
                    all_zero = false;
                    break;
                }
            }
        }
        if (all_zero) {
            ++count;
        }
    }
    return count;
}

int count_zero_cols(const ImageTensor& t, double tol) {
    int count = 0;
    for (int x = 0; x < t.width(); ++x) {
        bool all_zero = true;
        for (int y = 0; y < t.height() && all_zero; ++y) {
            for (int c = 0; c < t.channels(); ++c) {
                if (std::abs(t.at(y, x, c)) > tol) {
                    all_zero = false;
                    break;
                }
            }
        }
        if (all_zero) {
            ++count;
        }
    }
    return count;
}

}  // namespace advpipe::transforms
