#ifndef ADVPIPE_TENSOR_OPS_HPP
#define ADVPIPE_TENSOR_OPS_HPP

#include <span>

#include "advpipe/gaussian_kernel.hpp"
#include "advpipe/tensor.hpp"

namespace advpipe {

/// Elementwise sign: -1, 0 or +1. Rejects non-finite inputs, which only
/// arise from a corrupt gradient upstream.
ImageTensor sign(const ImageTensor& t);

/// Bilinear resize with half-pixel-center sampling and edge clamping.
/// Resizing to the identical size returns a bit-identical copy; constant
/// images stay constant exactly.
ImageTensor bilinear_resize(const ImageTensor& t, int out_h, int out_w);

/// Exact adjoint (transpose) of bilinear_resize: maps a gradient w.r.t. a
/// (grad.h x grad.w) output back to a gradient w.r.t. an (in_h x in_w)
/// input, scattering each sample's interpolation weights.
ImageTensor bilinear_resize_adjoint(const ImageTensor& grad, int in_h, int in_w);

/// Pads with a constant fill value; original content lands at offset
/// (top, left).
ImageTensor pad(const ImageTensor& t, int top, int bottom, int left, int right, double fill);

/// Adjoint of pad with respect to the content: crops the (h x w) window at
/// offset (top, left).
ImageTensor crop(const ImageTensor& t, int top, int left, int h, int w);

/// Depthwise 2-D cross-correlation with zero padding outside the borders;
/// output shape equals input shape. Side must be odd.
ImageTensor conv2d_same(const ImageTensor& t, std::span<const double> weights, int side);
ImageTensor conv2d_same(const ImageTensor& t, const GaussianKernel& kernel);

/// Projects x onto the L-inf ball of radius eps around x_ref intersected
/// with the value range [lo, hi]. Idempotent.
ImageTensor clip_to_ball(const ImageTensor& x, const ImageTensor& x_ref, double eps,
                         double lo, double hi);

// Small elementwise helpers shared by the attack engine.

/// a + s * b, elementwise.
ImageTensor add_scaled(const ImageTensor& a, double s, const ImageTensor& b);

/// Sum of absolute values over all elements.
double l1_norm(const ImageTensor& t);

/// max |a - b| over all elements.
double linf_dist(const ImageTensor& a, const ImageTensor& b);

/// Per-channel minimum / maximum.
double channel_min(const ImageTensor& t, int c);
double channel_max(const ImageTensor& t, int c);

}  // namespace advpipe

#endif
