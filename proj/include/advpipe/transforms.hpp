#ifndef ADVPIPE_TRANSFORMS_HPP
#define ADVPIPE_TRANSFORMS_HPP

#include "advpipe/rng.hpp"
#include "advpipe/tensor.hpp"

namespace advpipe::transforms {

/// One sampled resize-and-pad geometry: content resized to a x a, placed at
/// (top, left) on a canvas x canvas zero background. `base` is the model
/// input side. Freezing the draws lets forward and pullback share the exact
/// same geometry.
struct RdimDraw {
    int base = 0;
    int canvas = 0;
    int a = 0;
    int top = 0;
    int left = 0;
};

/// Samples a geometry: a from [base, canvas), then with H = canvas - a the
/// offsets top and left each from [0, H). Exactly three draws are consumed
/// in that order, degenerate ranges included, so replaying a seed
/// reproduces the sequence regardless of the range widths. canvas == base
/// yields the identity geometry.
RdimDraw draw_rdim(int base, int canvas, Rng& rng);

/// resize to a x a -> zero-pad onto the canvas -> resize back to base.
/// Output shape always equals input shape; the identity geometry returns a
/// bit-identical copy.
ImageTensor rdim_apply(const ImageTensor& x, const RdimDraw& d);

/// Exact adjoint of rdim_apply for the same draw: resize-adjoint to the
/// canvas, crop the content window, resize-adjoint back to base. Maps a
/// gradient w.r.t. the transform output to one w.r.t. its input.
ImageTensor rdim_pullback(const ImageTensor& grad, const RdimDraw& d);

/// canvas x canvas x 1 indicator of the content window: 1 where the padded
/// canvas holds resized content, 0 on the vacated margin rows/columns.
ImageTensor rdim_window_mask(const RdimDraw& d);

/// Convenience: draw_rdim + rdim_apply. The randomized diversity transform
/// applied on every call (no probability gate).
ImageTensor rdim_transform(const ImageTensor& x, int base, int canvas, Rng& rng);

/// Probability-gated diversity draw: with probability p a fresh geometry,
/// otherwise the untransformed marker.
struct DimDraw {
    bool transformed = false;
    RdimDraw inner;
};

DimDraw draw_dim(int base, int canvas, double p, Rng& rng);

/// Baseline diversity transform: with probability p returns the resized and
/// padded image at side `canvas` (no resize back), otherwise x unchanged.
ImageTensor dim_transform(const ImageTensor& x, double p, int canvas, Rng& rng);

/// Rows (respectively columns) whose every element has |v| <= tol.
int count_zero_rows(const ImageTensor& t, double tol);
int count_zero_cols(const ImageTensor& t, double tol);

}  // namespace advpipe::transforms

#endif
