#ifndef ADVPIPE_ORACLE_HPP
#define ADVPIPE_ORACLE_HPP

#include <cstdint>
#include <vector>

#include "advpipe/classifier.hpp"
#include "advpipe/gaussian_kernel.hpp"
#include "advpipe/tensor.hpp"

// Brute-force reference implementations used only by tests and the gradcheck
// command. Each deliberately avoids the analytic shortcut it certifies and
// shares no helper code with the module it checks: the loss here is its own
// transcription, the translation sum shifts whole images instead of
// convolving, and the diversity-transform replay re-derives the resize and
// pad arithmetic inline.
namespace advpipe::oracle {

/// Central finite differences of the softmax cross-entropy w.r.t. every
/// input coordinate: (J(x + h e_i) − J(x − h e_i)) / 2h.
ImageTensor finite_diff_grad(const models::Classifier& model, const ImageTensor& x,
                             int y, double h);

/// Same scheme applied to one parameter tensor; the model is restored to its
/// original values before returning.
std::vector<double> finite_diff_param_grad(models::Classifier& model,
                                           const ImageTensor& x, int y,
                                           std::size_t param_index, double h);

/// Largest |analytic − reference| / max(|reference|, floor) over all
/// coordinates; the floor guards against division by a vanishing entry.
double max_relative_error(const ImageTensor& analytic, const ImageTensor& reference,
                          double floor);

/// Σ_{i,j} W_{ij} · shift(grad, i, j) with offsets spanning [−r, r]² and
/// zeros filling vacated pixels; the definition the gradient-blurring
/// convolution must reproduce.
ImageTensor translation_sum(const ImageTensor& grad, const GaussianKernel& kernel);

/// Straight-line transcription of the randomized resize-and-pad transform:
/// draws (a, top, left) from a fresh PRNG at `seed`, then resizes, pads and
/// resizes back with inline arithmetic. Must match the library transform
/// bit for bit under the same seed.
ImageTensor replay_rdim(const ImageTensor& x, int base, int canvas, std::uint64_t seed);

}  // namespace advpipe::oracle

#endif
