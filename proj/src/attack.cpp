#include "advpipe/attack.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "advpipe/tensor_ops.hpp"
#include "advpipe/transforms.hpp"

namespace advpipe::attack {
namespace {

constexpr double kZeroGradGuard = 1e-12;
constexpr double kWeightSumTol = 1e-12;

void check_convex_weights(const std::vector<double>& w, std::size_t n,
                          const char* what) {
    if (w.size() != n) {
        throw std::invalid_argument(std::string(what) + ": weight count mismatch");
    }
    double sum = 0.0;
    for (const double v : w) {
        if (!(v >= 0.0)) {
            throw std::invalid_argument(std::string(what) + ": negative weight");
        }
        sum += v;
    }
    if (std::abs(sum - 1.0) > kWeightSumTol) {
        throw std::invalid_argument(std::string(what) + ": weights must sum to 1");
    }
}

std::vector<double> equal_weights(std::size_t n) {
    return std::vector<double>(n, 1.0 / static_cast<double>(n));
}

}  // namespace

ImageTensor momentum_update(const ImageTensor& g_prev, const ImageTensor& grad,
                            double mu) {
    if (!g_prev.same_shape(grad)) {
        throw std::invalid_argument("momentum_update: shape mismatch");
    }
    const double norm = l1_norm(grad);
    ImageTensor out = ImageTensor::zeros_like(grad);
    if (norm < kZeroGradGuard) {
        // The normalization is undefined at a vanishing gradient: keep the
        // accumulated direction and add nothing.
        for (std::size_t i = 0; i < out.size(); ++i) {
            out[i] = mu * g_prev[i];
        }
        return out;
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = mu * g_prev[i] + grad[i] / norm;
    }
    return out;
}

ImageTensor nesterov_lookahead(const ImageTensor& x_adv, double alpha, double mu,
                               const ImageTensor& g) {
    if (!x_adv.same_shape(g)) {
        throw std::invalid_argument("nesterov_lookahead: shape mismatch");
    }
    return add_scaled(x_adv, alpha * mu, g);
}

ImageTensor step_value_fitting(const ImageTensor& x_t, const ImageTensor& g,
                               double alpha, const ImageTensor& x0, double eps) {
    if (!(alpha > 0.0)) {
        throw std::invalid_argument("step_value_fitting: alpha must be positive");
    }
    return clip_to_ball(add_scaled(x_t, alpha, sign(g)), x0, eps, 0.0, 1.0);
}

ImageTensor step_region_fitting(const ImageTensor& g, double eps,
                                const ImageTensor& x0, const ImageTensor& x_t) {
    if (eps < 0.0) {
        throw std::invalid_argument("step_region_fitting: eps must be non-negative");
    }
    return clip_to_ball(add_scaled(x_t, eps, sign(g)), x0, eps, 0.0, 1.0);
}

std::vector<double> dem_fused_logits(const models::Classifier& model,
                                     const ImageTensor& x,
                                     const std::vector<int>& scales,
                                     const std::vector<double>& weights, Rng& rng) {
    if (scales.empty()) {
        throw std::invalid_argument("dem_fused_logits: empty scale list");
    }
    const std::vector<double> w =
        weights.empty() ? equal_weights(scales.size()) : weights;
    check_convex_weights(w, scales.size(), "dem_fused_logits");
    model.check_input(x);
    const int base = model.input_size();
    std::vector<double> fused(static_cast<std::size_t>(model.num_classes()), 0.0);
    for (std::size_t k = 0; k < scales.size(); ++k) {
        const ImageTensor xk = transforms::rdim_transform(x, base, scales[k], rng);
        const std::vector<double> z = model.logits(xk);
        for (std::size_t c = 0; c < fused.size(); ++c) {
            fused[c] += w[k] * z[c];
        }
    }
    return fused;
}

std::vector<double> ensemble_logits(const std::vector<const models::Classifier*>& models,
                                    const std::vector<double>& weights,
                                    const ImageTensor& x) {
    if (models.empty()) {
        throw std::invalid_argument("ensemble_logits: empty model list");
    }
    for (const models::Classifier* m : models) {
        if (m->num_classes() != models[0]->num_classes() ||
            m->input_size() != models[0]->input_size() ||
            m->input_channels() != models[0]->input_channels()) {
            throw std::invalid_argument("ensemble_logits: models disagree on shape");
        }
    }
    const std::vector<double> w = weights.empty() ? equal_weights(models.size()) : weights;
    check_convex_weights(w, models.size(), "ensemble_logits");
    std::vector<double> fused(static_cast<std::size_t>(models[0]->num_classes()), 0.0);
    for (std::size_t m = 0; m < models.size(); ++m) {
        const std::vector<double> z = models[m]->logits(x);
        for (std::size_t c = 0; c < fused.size(); ++c) {
            fused[c] += w[m] * z[c];
        }
    }
    return fused;
}

void validate_config(const AttackConfig& cfg, int input_side) {
    if (!(cfg.eps >= 0.0)) {
        throw std::invalid_argument("attack config: eps must be >= 0");
    }
    if (cfg.iterations < 1) {
        throw std::invalid_argument("attack config: iterations must be >= 1");
    }
    if (cfg.alpha < 0.0) {
        throw std::invalid_argument("attack config: alpha must be >= 0");
    }
    if (cfg.mu < 0.0) {
        throw std::invalid_argument("attack config: mu must be >= 0");
    }
    if (cfg.nesterov && !cfg.momentum) {
        throw std::invalid_argument("attack config: nesterov lookahead requires momentum");
    }
    if (cfg.transform != TransformKind::none && !cfg.diversity_scales.empty()) {
        throw std::invalid_argument(
            "attack config: single transform and diversity scales are mutually exclusive");
    }
    if (cfg.transform != TransformKind::none && cfg.transform_canvas < input_side) {
        throw std::invalid_argument(
            "attack config: transform canvas smaller than model input side");
    }
    if (cfg.transform == TransformKind::dim &&
        (cfg.dim_probability < 0.0 || cfg.dim_probability > 1.0)) {
        throw std::invalid_argument("attack config: dim probability outside [0, 1]");
    }
    for (const int s : cfg.diversity_scales) {
        if (s < input_side) {
            throw std::invalid_argument(
                "attack config: diversity scale smaller than model input side");
        }
    }
    if (!cfg.diversity_weights.empty()) {
        if (cfg.diversity_scales.empty()) {
            throw std::invalid_argument(
                "attack config: diversity weights given without scales");
        }
        check_convex_weights(cfg.diversity_weights, cfg.diversity_scales.size(),
                             "attack config diversity weights");
    }
    if (cfg.kernel_side < 0 || (cfg.kernel_side > 0 && cfg.kernel_side % 2 == 0)) {
        throw std::invalid_argument("attack config: kernel side must be 0 (off) or odd");
    }
    if (cfg.kernel_side > 0 && cfg.kernel_sigma < 0.0) {
        throw std::invalid_argument("attack config: kernel sigma must be >= 0");
    }
}

AttackResult run_attack(const std::vector<const models::Classifier*>& source_models,
                        const std::vector<double>& model_weights, const ImageTensor& x,
                        int y, const AttackConfig& cfg) {
    if (source_models.empty()) {
        throw std::invalid_argument("run_attack: empty source model list");
    }
    const models::Classifier& first = *source_models[0];
    for (const models::Classifier* m : source_models) {
        if (m->num_classes() != first.num_classes() ||
            m->input_size() != first.input_size() ||
            m->input_channels() != first.input_channels()) {
            throw std::invalid_argument("run_attack: source models disagree on shape");
        }
    }
    first.check_input(x);
    const int base = first.input_size();
    const int classes = first.num_classes();
    validate_config(cfg, base);
    if (y < 0 || y >= classes) {
        throw std::invalid_argument("run_attack: label out of range");
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] < 0.0 || x[i] > 1.0) {
            throw std::invalid_argument("run_attack: input outside the [0,1] pixel domain");
        }
    }
    const std::vector<double> mw =
        model_weights.empty() ? equal_weights(source_models.size()) : model_weights;
    check_convex_weights(mw, source_models.size(), "run_attack model weights");

    const double alpha =
        cfg.alpha > 0.0 ? cfg.alpha : cfg.eps / static_cast<double>(cfg.iterations);

    // Normalize the transform choice to one list of (canvas, weight) fusion
    // terms; the plain and single-rdim cases are one-term lists, which keeps
    // a single gradient path for every configuration.
    const bool dim_mode = cfg.transform == TransformKind::dim;
    std::vector<int> canvases;
    std::vector<double> sw;
    if (!dim_mode) {
        if (!cfg.diversity_scales.empty()) {
            canvases = cfg.diversity_scales;
            sw = cfg.diversity_weights.empty() ? equal_weights(canvases.size())
                                               : cfg.diversity_weights;
        } else if (cfg.transform == TransformKind::rdim) {
            canvases = {cfg.transform_canvas};
            sw = {1.0};
        } else {
            canvases = {base};  // identity geometry
            sw = {1.0};
        }
    }

    GaussianKernel kernel;
    const bool blur = cfg.kernel_side > 0;
    if (blur) {
        const double sigma =
            cfg.kernel_sigma > 0.0 ? cfg.kernel_sigma
                                   : static_cast<double>(cfg.kernel_side) / 3.0;
        kernel = make_gaussian_kernel(cfg.kernel_side, sigma);
    }

    Rng rng(cfg.seed);
    ImageTensor x_adv = x;
    ImageTensor g = ImageTensor::zeros_like(x);
    AttackResult result;
    result.trace.iterations.reserve(static_cast<std::size_t>(cfg.iterations));

    for (int t = 0; t < cfg.iterations; ++t) {
        const ImageTensor x_eval =
            cfg.nesterov ? nesterov_lookahead(x_adv, alpha, cfg.mu, g) : x_adv;

        // Sample this iteration's transforms and push the evaluation point
        // through them. Draw order: one geometry per fusion term, in term
        // order (dim: one gate draw, then the geometry if gated).
        std::vector<transforms::RdimDraw> draws;
        std::vector<bool> applied;
        std::vector<ImageTensor> inputs;
        if (dim_mode) {
            const transforms::DimDraw dd =
                transforms::draw_dim(base, cfg.transform_canvas, cfg.dim_probability, rng);
            applied.push_back(dd.transformed);
            draws.push_back(dd.inner);
            // Unlike the companion baseline op, the runner resizes the
            // diverse image back to the model side so fixed-input models can
            // consume it.
            inputs.push_back(dd.transformed ? transforms::rdim_apply(x_eval, dd.inner)
                                            : x_eval);
            sw = {1.0};
        } else {
            for (const int canvas : canvases) {
                draws.push_back(transforms::draw_rdim(base, canvas, rng));
                applied.push_back(true);
                inputs.push_back(transforms::rdim_apply(x_eval, draws.back()));
            }
        }

        // Fused logits over fusion terms and ensemble members.
        std::vector<double> fused(static_cast<std::size_t>(classes), 0.0);
        for (std::size_t k = 0; k < inputs.size(); ++k) {
            for (std::size_t m = 0; m < source_models.size(); ++m) {
                const std::vector<double> z = source_models[m]->logits(inputs[k]);
                for (std::size_t c = 0; c < fused.size(); ++c) {
                    fused[c] += sw[k] * mw[m] * z[c];
                }
            }
        }
        const double loss = models::cross_entropy_from_logits(fused, y);
        std::vector<double> lgrad = models::softmax(fused);
        lgrad[static_cast<std::size_t>(y)] -= 1.0;

        // Gradient w.r.t. the evaluation point: weight each member's
        // logit-gradient, then pull back through that term's geometry.
        ImageTensor grad = ImageTensor::zeros_like(x);
        std::vector<double> scaled(lgrad.size());
        for (std::size_t k = 0; k < inputs.size(); ++k) {
            ImageTensor gk = ImageTensor::zeros_like(x);
            for (std::size_t m = 0; m < source_models.size(); ++m) {
                for (std::size_t c = 0; c < lgrad.size(); ++c) {
                    scaled[c] = sw[k] * mw[m] * lgrad[c];
                }
                const ImageTensor gm = source_models[m]->input_vjp(inputs[k], scaled);
                for (std::size_t i = 0; i < gk.size(); ++i) {
                    gk[i] += gm[i];
                }
            }
            const ImageTensor pulled =
                applied[k] ? transforms::rdim_pullback(gk, draws[k]) : gk;
            for (std::size_t i = 0; i < grad.size(); ++i) {
                grad[i] += pulled[i];
            }
        }

        if (blur) {
            grad = conv2d_same(grad, kernel);
        }
        const double grad_l1 = l1_norm(grad);

        if (cfg.momentum) {
            g = momentum_update(g, grad, cfg.mu);
        } else {
            g = grad;
        }

        const double step =
            (cfg.targeted ? -1.0 : 1.0) * (cfg.region_fitting ? cfg.eps : alpha);
        x_adv = clip_to_ball(add_scaled(x_adv, step, sign(g)), x, cfg.eps, 0.0, 1.0);

        AttackTrace::Iteration rec;
        rec.loss = loss;
        rec.grad_l1 = grad_l1;
        rec.pert_linf = linf_dist(x_adv, x);
        result.trace.iterations.push_back(rec);
        if (cfg.record_snapshots) {
            result.trace.snapshots.push_back(x_adv);
        }
    }
    result.x_adv = std::move(x_adv);
    return result;
}

AttackResult run_attack(const models::Classifier& model, const ImageTensor& x, int y,
                        const AttackConfig& cfg) {
    return run_attack(std::vector<const models::Classifier*>{&model}, {}, x, y, cfg);
}

}  // namespace advpipe::attack
