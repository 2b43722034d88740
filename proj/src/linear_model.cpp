#include <sstream>
#include <stdexcept>

#include "advpipe/classifier.hpp"
#include "model_init.hpp"

namespace advpipe::models {
namespace {

/// logits[c] = sum_d W[c][d] * flatten(x)[d] + b[c]. The flatten order is the
/// tensor's own row-major layout, so x.data() is already the feature vector.
class LinearSoftmax final : public Classifier {
public:
    LinearSoftmax(int input_size, int channels, int classes, std::uint64_t init_seed)
        : size_(input_size), channels_(channels), classes_(classes) {
        if (input_size <= 0 || channels <= 0 || classes <= 0) {
            throw std::invalid_argument("linear model dimensions must be positive");
        }
        const int dim = size_ * size_ * channels_;
        params_.push_back({"w", {classes_, dim}, std::vector<double>(
                               static_cast<std::size_t>(classes_) * dim, 0.0)});
        params_.push_back({"b", {classes_}, std::vector<double>(
                               static_cast<std::size_t>(classes_), 0.0)});
        Rng rng(init_seed);
        glorot_fill(params_[0].values, dim, classes_, rng);
    }

    int input_size() const override { return size_; }
    int input_channels() const override { return channels_; }
    int num_classes() const override { return classes_; }

    std::string descriptor() const override {
        std::ostringstream out;
        out << "linear " << size_ << " " << channels_ << " " << classes_;
        return out.str();
    }

    std::vector<double> logits(const ImageTensor& x) const override {
        check_input(x);
        const int dim = size_ * size_ * channels_;
        const std::vector<double>& w = params_[0].values;
        const std::vector<double>& b = params_[1].values;
        std::vector<double> z(static_cast<std::size_t>(classes_));
        for (int c = 0; c < classes_; ++c) {
            double acc = b[static_cast<std::size_t>(c)];
            const double* row = w.data() + static_cast<std::size_t>(c) * dim;
            for (int d = 0; d < dim; ++d) {
                acc += row[d] * x.data()[d];
            }
            z[static_cast<std::size_t>(c)] = acc;
        }
        return z;
    }

    ImageTensor input_vjp(const ImageTensor& x,
                          std::span<const double> logit_grad) const override {
        check_input(x);
        check_lgrad(logit_grad);
        const int dim = size_ * size_ * channels_;
        const std::vector<double>& w = params_[0].values;
        ImageTensor grad(size_, size_, channels_);
        for (int c = 0; c < classes_; ++c) {
            const double g = logit_grad[static_cast<std::size_t>(c)];
            if (g == 0.0) {
                continue;
            }
            const double* row = w.data() + static_cast<std::size_t>(c) * dim;
            for (int d = 0; d < dim; ++d) {
                grad.data()[d] += g * row[d];
            }
        }
        return grad;
    }

    void param_vjp(const ImageTensor& x, std::span<const double> logit_grad,
                   std::vector<ParamTensor>& grads) const override {
        check_input(x);
        check_lgrad(logit_grad);
        const int dim = size_ * size_ * channels_;
        std::vector<double>& gw = grads[0].values;
        std::vector<double>& gb = grads[1].values;
        for (int c = 0; c < classes_; ++c) {
            const double g = logit_grad[static_cast<std::size_t>(c)];
            gb[static_cast<std::size_t>(c)] += g;
            double* row = gw.data() + static_cast<std::size_t>(c) * dim;
            for (int d = 0; d < dim; ++d) {
                row[d] += g * x.data()[d];
            }
        }
    }

    std::vector<ParamTensor>& params() override { return params_; }
    const std::vector<ParamTensor>& params() const override { return params_; }

private:
    void check_lgrad(std::span<const double> logit_grad) const {
        if (static_cast<int>(logit_grad.size()) != classes_) {
            throw std::invalid_argument("logit gradient length does not match class count");
        }
    }

    int size_;
    int channels_;
    int classes_;
    std::vector<ParamTensor> params_;
};

}  // namespace

std::unique_ptr<Classifier> make_linear_model(int input_size, int channels, int classes,
                                              std::uint64_t init_seed) {
    return std::make_unique<LinearSoftmax>(input_size, channels, classes, init_seed);
}

}  // namespace advpipe::models
