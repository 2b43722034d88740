#ifndef ADVPIPE_VISUALIZE_HPP
#define ADVPIPE_VISUALIZE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "advpipe/attack.hpp"
#include "advpipe/classifier.hpp"
#include "advpipe/tensor.hpp"

namespace advpipe::viz {

struct StripeImage {
    int zero_rows = 0;
    int zero_cols = 0;
    int canvas = 0;
};

/// Renders where the loss gradient of one randomized resize-and-pad example
/// can reach the enlarged canvas. The gradient at the model input is pulled
/// back onto the canvas, zeroed outside the sampled content window, and
/// binarized (|g| > 1e−12 -> 255, else 0) into a PGM at `out_path`. Rows
/// the content never covered come out as black stripes; their count equals
/// the canvas side minus the sampled content side and never decreases as
/// the canvas grows under the same seed.
StripeImage visualize_gradient_stripes(const models::Classifier& model,
                                       const ImageTensor& x, int y, int canvas,
                                       std::uint64_t seed,
                                       const std::string& out_path);

/// Zero-row count of the content-window mask alone (no model in the loop):
/// the transform-determined stripe count for this (canvas, seed) pair.
int stripe_count_for_draw(int base, int canvas, std::uint64_t seed);

/// Writes one image per recorded snapshot mapping the perturbation
/// x_t − x0 affinely from [−eps, eps] to [0, 255]; grayscale inputs become
/// PGM files, 3-channel inputs PPM. Returns the written paths.
std::vector<std::string> visualize_perturbation(const attack::AttackTrace& trace,
                                                const ImageTensor& x0, double eps,
                                                const std::string& out_dir,
                                                const std::string& basename);

}  // namespace advpipe::viz

#endif
