#include <sstream>
#include <stdexcept>
#include <vector>

#include "advpipe/classifier.hpp"
#include "model_init.hpp"

namespace advpipe::models {
namespace {

/// flatten -> dense(hidden) -> ReLU -> dense -> logits.
class DenseNet final : public Classifier {
public:
    DenseNet(int input_size, int channels, int classes, int hidden,
             std::uint64_t init_seed)
        : size_(input_size), channels_(channels), classes_(classes), hidden_(hidden) {
        if (input_size <= 0 || channels <= 0 || classes <= 0 || hidden <= 0) {
            throw std::invalid_argument("dense model dimensions must be positive");
        }
        dim_ = size_ * size_ * channels_;
        params_.push_back({"w1", {hidden_, dim_}, std::vector<double>(
                               static_cast<std::size_t>(hidden_) * dim_, 0.0)});
        params_.push_back({"b1", {hidden_}, std::vector<double>(
                               static_cast<std::size_t>(hidden_), 0.0)});
        params_.push_back({"w2", {classes_, hidden_}, std::vector<double>(
                               static_cast<std::size_t>(classes_) * hidden_, 0.0)});
        params_.push_back({"b2", {classes_}, std::vector<double>(
                               static_cast<std::size_t>(classes_), 0.0)});
        Rng rng(init_seed);
        glorot_fill(params_[0].values, dim_, hidden_, rng);
        glorot_fill(params_[2].values, hidden_, classes_, rng);
    }

    int input_size() const override { return size_; }
    int input_channels() const override { return channels_; }
    int num_classes() const override { return classes_; }

    std::string descriptor() const override {
        std::ostringstream out;
        out << "dense " << size_ << " " << channels_ << " " << classes_ << " " << hidden_;
        return out.str();
    }

    std::vector<double> logits(const ImageTensor& x) const override {
        check_input(x);
        std::vector<double> h, z;
        forward(x, h, z);
        return z;
    }

    ImageTensor input_vjp(const ImageTensor& x,
                          std::span<const double> logit_grad) const override {
        check_input(x);
        check_lgrad(logit_grad);
        std::vector<double> h, z;
        forward(x, h, z);
        const std::vector<double> gh = hidden_grad(h, logit_grad);
        const std::vector<double>& w1 = params_[0].values;
        ImageTensor gin(size_, size_, channels_);
        for (int j = 0; j < hidden_; ++j) {
            const double g = gh[static_cast<std::size_t>(j)];
            if (g == 0.0) {
                continue;
            }
            const double* row = w1.data() + static_cast<std::size_t>(j) * dim_;
            for (int d = 0; d < dim_; ++d) {
                gin.data()[d] += g * row[d];
            }
        }
        return gin;
    }

    void param_vjp(const ImageTensor& x, std::span<const double> logit_grad,
                   std::vector<ParamTensor>& grads) const override {
        check_input(x);
        check_lgrad(logit_grad);
        std::vector<double> h, z;
        forward(x, h, z);
        for (int c = 0; c < classes_; ++c) {
            const double g = logit_grad[static_cast<std::size_t>(c)];
            grads[3].values[static_cast<std::size_t>(c)] += g;
            double* grow = grads[2].values.data() + static_cast<std::size_t>(c) * hidden_;
            for (int j = 0; j < hidden_; ++j) {
                grow[j] += g * h[static_cast<std::size_t>(j)];
            }
        }
        const std::vector<double> gh = hidden_grad(h, logit_grad);
        for (int j = 0; j < hidden_; ++j) {
            const double g = gh[static_cast<std::size_t>(j)];
            grads[1].values[static_cast<std::size_t>(j)] += g;
            if (g == 0.0) {
                continue;
            }
            double* grow = grads[0].values.data() + static_cast<std::size_t>(j) * dim_;
            for (int d = 0; d < dim_; ++d) {
                grow[d] += g * x.data()[d];
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

    void forward(const ImageTensor& x, std::vector<double>& h,
                 std::vector<double>& z) const {
        const std::vector<double>& w1 = params_[0].values;
        const std::vector<double>& b1 = params_[1].values;
        const std::vector<double>& w2 = params_[2].values;
        const std::vector<double>& b2 = params_[3].values;
        h.assign(static_cast<std::size_t>(hidden_), 0.0);
        for (int j = 0; j < hidden_; ++j) {
            double acc = b1[static_cast<std::size_t>(j)];
            const double* row = w1.data() + static_cast<std::size_t>(j) * dim_;
            for (int d = 0; d < dim_; ++d) {
                acc += row[d] * x.data()[d];
            }
            h[static_cast<std::size_t>(j)] = acc > 0.0 ? acc : 0.0;
        }
        z.assign(static_cast<std::size_t>(classes_), 0.0);
        for (int c = 0; c < classes_; ++c) {
            double acc = b2[static_cast<std::size_t>(c)];
            const double* row = w2.data() + static_cast<std::size_t>(c) * hidden_;
            for (int j = 0; j < hidden_; ++j) {
                acc += row[j] * h[static_cast<std::size_t>(j)];
            }
            z[static_cast<std::size_t>(c)] = acc;
        }
    }

    // Gradient w.r.t. the pre-ReLU hidden units; h holds post-ReLU values,
    // whose positivity doubles as the ReLU gate.
    std::vector<double> hidden_grad(const std::vector<double>& h,
                                    std::span<const double> logit_grad) const {
        const std::vector<double>& w2 = params_[2].values;
        std::vector<double> gh(static_cast<std::size_t>(hidden_), 0.0);
        for (int c = 0; c < classes_; ++c) {
            const double g = logit_grad[static_cast<std::size_t>(c)];
            if (g == 0.0) {
                continue;
            }
            const double* row = w2.data() + static_cast<std::size_t>(c) * hidden_;
            for (int j = 0; j < hidden_; ++j) {
                gh[static_cast<std::size_t>(j)] += g * row[j];
            }
        }
        for (int j = 0; j < hidden_; ++j) {
            if (h[static_cast<std::size_t>(j)] <= 0.0) {
                gh[static_cast<std::size_t>(j)] = 0.0;
            }
        }
        return gh;
    }

    int size_;
    int channels_;
    int classes_;
    int hidden_;
    int dim_ = 0;
    std::vector<ParamTensor> params_;
};

}  // namespace

std::unique_ptr<Classifier> make_dense_model(int input_size, int channels, int classes,
                                             int hidden, std::uint64_t init_seed) {
    return std::make_unique<DenseNet>(input_size, channels, classes, hidden, init_seed);
}

}  // namespace advpipe::models
