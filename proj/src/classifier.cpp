#include "advpipe/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace advpipe::models {

void Classifier::check_input(const ImageTensor& x) const {
    if (x.height() != input_size() || x.width() != input_size() ||
        x.channels() != input_channels()) {
        std::ostringstream msg;
        msg << "classifier expects " << input_size() << "x" << input_size() << "x"
            << input_channels() << " input, got " << x.height() << "x" << x.width()
            << "x" << x.channels();
        throw std::invalid_argument(msg.str());
    }
    if (!x.all_finite()) {
        throw std::invalid_argument("classifier input contains non-finite values");
    }
}

std::vector<ParamTensor> Classifier::zero_param_grads() const {
    std::vector<ParamTensor> grads;
    grads.reserve(params().size());
    for (const ParamTensor& p : params()) {
        grads.push_back({p.name, p.shape, std::vector<double>(p.values.size(), 0.0)});
    }
    return grads;
}

std::vector<double> softmax(std::span<const double> logits) {
    if (logits.empty()) {
        throw std::invalid_argument("softmax of empty logit vector");
    }
    const double top = *std::max_element(logits.begin(), logits.end());
    std::vector<double> probs(logits.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        probs[i] = std::exp(logits[i] - top);
        sum += probs[i];
    }
    for (double& p : probs) {
        p /= sum;
    }
    return probs;
}

double cross_entropy_from_logits(std::span<const double> logits, int label) {
    if (label < 0 || static_cast<std::size_t>(label) >= logits.size()) {
        throw std::invalid_argument("cross-entropy label out of range");
    }
    // log-sum-exp form: J = log(sum_j exp(z_j)) - z_y, stable via max shift.
    const double top = *std::max_element(logits.begin(), logits.end());
    double sum = 0.0;
    for (const double z : logits) {
        sum += std::exp(z - top);
    }
    return std::log(sum) + top - logits[label];
}

std::pair<double, ImageTensor> loss_and_input_gradient(const Classifier& model,
                                                       const ImageTensor& x, int y) {
    model.check_input(x);
    const std::vector<double> z = model.logits(x);
    const double loss = cross_entropy_from_logits(z, y);
    // dJ/dz = softmax(z) - onehot(y), then pull back through the network.
    std::vector<double> lgrad = softmax(z);
    lgrad[static_cast<std::size_t>(y)] -= 1.0;
    return {loss, model.input_vjp(x, lgrad)};
}

int predict(const Classifier& model, const ImageTensor& x) {
    const std::vector<double> z = model.logits(x);
    int best = 0;
    for (int c = 1; c < static_cast<int>(z.size()); ++c) {
        if (z[static_cast<std::size_t>(c)] > z[static_cast<std::size_t>(best)]) {
            best = c;
        }
    }
    return best;
}

std::unique_ptr<Classifier> make_model(const std::string& descriptor,
                                       std::uint64_t init_seed) {
    std::istringstream in(descriptor);
    std::string kind;
    in >> kind;
    auto read_int = [&in, &descriptor]() {
        int v = 0;
        if (!(in >> v)) {
            throw std::invalid_argument("malformed model descriptor: " + descriptor);
        }
        return v;
    };
    std::unique_ptr<Classifier> model;
    if (kind == "linear") {
        const int s = read_int(), cin = read_int(), classes = read_int();
        model = make_linear_model(s, cin, classes, init_seed);
    } else if (kind == "cnn") {
        const int s = read_int(), cin = read_int(), classes = read_int();
        const int f1 = read_int(), f2 = read_int();
        model = make_cnn_model(s, cin, classes, f1, f2, init_seed);
    } else if (kind == "dense") {
        const int s = read_int(), cin = read_int(), classes = read_int();
        const int h = read_int();
        model = make_dense_model(s, cin, classes, h, init_seed);
    } else {
        throw std::invalid_argument("unknown model kind in descriptor: " + descriptor);
    }
    std::string extra;
    if (in >> extra) {
        throw std::invalid_argument("trailing tokens in model descriptor: " + descriptor);
    }
    return model;
}

std::unique_ptr<Classifier> make_model(const std::string& descriptor) {
    std::unique_ptr<Classifier> model = make_model(descriptor, 0);
    for (ParamTensor& p : model->params()) {
        std::fill(p.values.begin(), p.values.end(), 0.0);
    }
    return model;
}

}  // namespace advpipe::models
