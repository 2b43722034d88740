#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "oracle.hpp"

namespace advpipe::oracle {
namespace {

// Own transcription of softmax cross-entropy so the oracle does not lean on
// the library's loss code: J = log Σ_j exp(z_j − z_max) + z_max − z_y.
double reference_loss(const models::Classifier& model, const ImageTensor& x, int y) {
    const std::vector<double> z = model.logits(x);
    double z_max = z[0];
    for (const double v : z) {
        z_max = std::max(z_max, v);
    }
    double acc = 0.0;
    for (const double v : z) {
        acc += std::exp(v - z_max);
    }
    return std::log(acc) + z_max - z[static_cast<std::size_t>(y)];
}

}  // namespace

ImageTensor finite_diff_grad(const models::Classifier& model, const ImageTensor& x,
                             int y, double h) {
    if (!(h > 0.0)) {
        throw std::invalid_argument("finite_diff_grad: step must be positive");
    }
    ImageTensor grad = ImageTensor::zeros_like(x);
    ImageTensor probe = x;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double keep = probe[i];
        probe[i] = keep + h;
        const double plus = reference_loss(model, probe, y);
        probe[i] = keep - h;
        const double minus = reference_loss(model, probe, y);
        probe[i] = keep;
        grad[i] = (plus - minus) / (2.0 * h);
    }
    return grad;
}

std::vector<double> finite_diff_param_grad(models::Classifier& model,
                                           const ImageTensor& x, int y,
                                           std::size_t param_index, double h) {
    if (!(h > 0.0)) {
        throw std::invalid_argument("finite_diff_param_grad: step must be positive");
    }
    if (param_index >= model.params().size()) {
        throw std::invalid_argument("finite_diff_param_grad: parameter index out of range");
    }
    std::vector<double>& values = model.params()[param_index].values;
    std::vector<double> grad(values.size(), 0.0);
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double keep = values[i];
        values[i] = keep + h;
        const double plus = reference_loss(model, x, y);
        values[i] = keep - h;
        const double minus = reference_loss(model, x, y);
        values[i] = keep;
        grad[i] = (plus - minus) / (2.0 * h);
    }
    return grad;
}

double max_relative_error(const ImageTensor& analytic, const ImageTensor& reference,
                          double floor) {
    if (!analytic.same_shape(reference)) {
        throw std::invalid_argument("max_relative_error: shape mismatch");
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < analytic.size(); ++i) {
        const double denom = std::max(std::abs(reference[i]), floor);
        worst = std::max(worst, std::abs(analytic[i] - reference[i]) / denom);
    }
    return worst;
}

}  // namespace advpipe::oracle
