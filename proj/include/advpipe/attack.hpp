#ifndef ADVPIPE_ATTACK_HPP
#define ADVPIPE_ATTACK_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "advpipe/classifier.hpp"
#include "advpipe/gaussian_kernel.hpp"
#include "advpipe/rng.hpp"
#include "advpipe/tensor.hpp"

namespace advpipe::attack {

enum class TransformKind { none, rdim, dim };

/// Full description of one attack run. Toggles compose: momentum, Nesterov
/// lookahead, input-diversity transforms, multi-scale logit fusion, gradient
/// blurring and the region-fitting step rule can each be enabled
/// independently, so every baseline is a restriction of the same runner.
struct AttackConfig {
    std::string name = "attack";

    double eps = 16.0 / 255.0;  // L-inf budget, pixel-domain units
    int iterations = 10;
    double alpha = 0.0;  // step size; 0 selects the default eps / iterations
    double mu = 1.0;     // momentum decay factor
    bool momentum = false;
    bool nesterov = false;        // requires momentum
    bool region_fitting = false;  // full-eps step each iteration

    // Per-iteration input transform. rdim resizes to a random side in
    // [S, canvas), pads randomly onto the canvas and resizes back; dim is the
    // probability-gated baseline (also resized back so the fixed-size models
    // can consume it).
    TransformKind transform = TransformKind::none;
    int transform_canvas = 0;      // canvas side for rdim/dim
    double dim_probability = 0.5;  // dim only

    // Multi-scale fusion: logits averaged over one rdim draw per scale with
    // the given convex weights (empty weights = equal). Mutually exclusive
    // with the single-transform field above.
    std::vector<int> diversity_scales;
    std::vector<double> diversity_weights;

    // Gradient blurring. kernel_side 0 disables; odd side >= 1 applies a
    // normalized Gaussian. kernel_sigma 0 selects the default side / 3.
    int kernel_side = 0;
    double kernel_sigma = 0.0;

    bool targeted = false;  // y is then the target class; step descends
    std::uint64_t seed = 0;
    bool record_snapshots = false;
};

/// Per-iteration trace. grad_l1 is the L1 norm of the gradient entering the
/// momentum update (after blurring); pert_linf is ‖x_t − x₀‖∞ after the
/// step. Snapshots hold each iterate when requested.
struct AttackTrace {
    struct Iteration {
        double loss = 0.0;
        double grad_l1 = 0.0;
        double pert_linf = 0.0;
    };
    std::vector<Iteration> iterations;
    std::vector<ImageTensor> snapshots;
};

struct AttackResult {
    ImageTensor x_adv;
    AttackTrace trace;
};

/// mu * g_prev + grad / ‖grad‖₁ (L1 over all elements). A vanishing
/// gradient (‖grad‖₁ < 1e−12) contributes zero instead of dividing.
ImageTensor momentum_update(const ImageTensor& g_prev, const ImageTensor& grad,
                            double mu);

/// x_adv + alpha * mu * g — the look-ahead evaluation point; never clipped.
ImageTensor nesterov_lookahead(const ImageTensor& x_adv, double alpha, double mu,
                               const ImageTensor& g);

/// clip_to_ball(x_t + alpha * sign(g), x0, eps, 0, 1).
ImageTensor step_value_fitting(const ImageTensor& x_t, const ImageTensor& g,
                               double alpha, const ImageTensor& x0, double eps);

/// clip_to_ball(x_t + eps * sign(g), x0, eps, 0, 1): every step moves the
/// full budget, so the projection decides the perturbation region rather
/// than its size.
ImageTensor step_region_fitting(const ImageTensor& g, double eps,
                                const ImageTensor& x0, const ImageTensor& x_t);

/// Σ_k ω_k · logits(model, rdim(x, S, scales[k])) with one independent
/// fresh draw per scale, consumed in scale order.
std::vector<double> dem_fused_logits(const models::Classifier& model,
                                     const ImageTensor& x,
                                     const std::vector<int>& scales,
                                     const std::vector<double>& weights, Rng& rng);

/// Σ_m w_m · logits(model_m, x). Models must agree on input shape and class
/// count; empty weights means equal.
std::vector<double> ensemble_logits(const std::vector<const models::Classifier*>& models,
                                    const std::vector<double>& weights,
                                    const ImageTensor& x);

/// Throws std::invalid_argument describing the first violated invariant;
/// run_attack calls this before touching the input.
void validate_config(const AttackConfig& cfg, int input_side);

/// Runs the configured attack against an ensemble of white-box models:
/// per iteration, optional Nesterov lookahead -> fused logits over scales
/// and models -> loss gradient pulled back through the transforms ->
/// optional Gaussian blur -> optional momentum -> value- or region-fitting
/// step projected to the eps-ball and [0,1]. Deterministic given cfg.seed.
AttackResult run_attack(const std::vector<const models::Classifier*>& source_models,
                        const std::vector<double>& model_weights, const ImageTensor& x,
                        int y, const AttackConfig& cfg);

/// Single-model convenience overload.
AttackResult run_attack(const models::Classifier& model, const ImageTensor& x, int y,
                        const AttackConfig& cfg);

/// Flat key=value serialization ('#' comments and blank lines ignored);
/// parse(serialize(cfg)) reproduces every field exactly.
std::string serialize_attack_config(const AttackConfig& cfg);
AttackConfig parse_attack_config(const std::string& text);
AttackConfig load_attack_config(const std::string& path);

}  // namespace advpipe::attack

#endif
