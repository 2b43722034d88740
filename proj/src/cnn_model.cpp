#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "advpipe/classifier.hpp"
#include "model_init.hpp"

namespace advpipe::models {
namespace {

constexpr int kKernel = 3;
constexpr int kRadius = kKernel / 2;

inline std::size_t at3(int y, int x, int f, int width, int feats) {
    return (static_cast<std::size_t>(y) * width + x) * feats + f;
}

/// conv3x3(f1, zero-pad same) -> ReLU -> maxpool2 -> conv3x3(f2) -> ReLU ->
/// maxpool2 -> dense -> logits. Feature maps use [y][x][feature] layout so
/// the input tensor's own storage doubles as the first feature map.
class TinyCnn final : public Classifier {
public:
    TinyCnn(int input_size, int channels, int classes, int f1, int f2,
            std::uint64_t init_seed)
        : size_(input_size), channels_(channels), classes_(classes), f1_(f1), f2_(f2) {
        if (input_size <= 0 || channels <= 0 || classes <= 0 || f1 <= 0 || f2 <= 0) {
            throw std::invalid_argument("cnn dimensions must be positive");
        }
        if (input_size % 4 != 0) {
            throw std::invalid_argument("cnn input side must be divisible by 4");
        }
        half_ = size_ / 2;
        quarter_ = size_ / 4;
        flat_dim_ = quarter_ * quarter_ * f2_;

        auto add = [this](const char* name, std::vector<int> shape) {
            std::size_t n = 1;
            for (const int d : shape) {
                n *= static_cast<std::size_t>(d);
            }
            params_.push_back({name, std::move(shape), std::vector<double>(n, 0.0)});
        };
        add("conv1.w", {f1_, channels_, kKernel, kKernel});
        add("conv1.b", {f1_});
        add("conv2.w", {f2_, f1_, kKernel, kKernel});
        add("conv2.b", {f2_});
        add("fc.w", {classes_, flat_dim_});
        add("fc.b", {classes_});

        Rng rng(init_seed);
        glorot_fill(params_[0].values, channels_ * kKernel * kKernel,
                    f1_ * kKernel * kKernel, rng);
        glorot_fill(params_[2].values, f1_ * kKernel * kKernel, f2_ * kKernel * kKernel,
                    rng);
        glorot_fill(params_[4].values, flat_dim_, classes_, rng);
    }

    int input_size() const override { return size_; }
    int input_channels() const override { return channels_; }
    int num_classes() const override { return classes_; }

    std::string descriptor() const override {
        std::ostringstream out;
        out << "cnn " << size_ << " " << channels_ << " " << classes_ << " " << f1_
            << " " << f2_;
        return out.str();
    }

    std::vector<double> logits(const ImageTensor& x) const override {
        check_input(x);
        Acts acts;
        forward(x, acts);
        return acts.logits;
    }

    ImageTensor input_vjp(const ImageTensor& x,
                          std::span<const double> logit_grad) const override {
        check_input(x);
        check_lgrad(logit_grad);
        Acts acts;
        forward(x, acts);
        ImageTensor gin(size_, size_, channels_);
        backward(x, acts, logit_grad, &gin, nullptr);
        return gin;
    }

    void param_vjp(const ImageTensor& x, std::span<const double> logit_grad,
                   std::vector<ParamTensor>& grads) const override {
        check_input(x);
        check_lgrad(logit_grad);
        Acts acts;
        forward(x, acts);
        backward(x, acts, logit_grad, nullptr, &grads);
    }

    std::vector<ParamTensor>& params() override { return params_; }
    const std::vector<ParamTensor>& params() const override { return params_; }

private:
    struct Acts {
        std::vector<double> pre1;   // size_^2 * f1, pre-ReLU
        std::vector<double> pool1;  // half_^2 * f1
        std::vector<int> arg1;      // argmax source index into the ReLU-1 map
        std::vector<double> pre2;   // half_^2 * f2
        std::vector<double> pool2;  // quarter_^2 * f2 (= flattened fc input)
        std::vector<int> arg2;
        std::vector<double> logits;
    };

    void check_lgrad(std::span<const double> logit_grad) const {
        if (static_cast<int>(logit_grad.size()) != classes_) {
            throw std::invalid_argument("logit gradient length does not match class count");
        }
    }

    void conv_forward(const double* in, int side, int cin, int cout, const double* w,
                      const double* b, double* out) const {
        for (int y = 0; y < side; ++y) {
            for (int x = 0; x < side; ++x) {
                for (int f = 0; f < cout; ++f) {
                    double acc = b[f];
                    for (int ci = 0; ci < cin; ++ci) {
                        for (int dy = 0; dy < kKernel; ++dy) {
                            const int iy = y + dy - kRadius;
                            if (iy < 0 || iy >= side) {
                                continue;
                            }
                            for (int dx = 0; dx < kKernel; ++dx) {
                                const int ix = x + dx - kRadius;
                                if (ix < 0 || ix >= side) {
                                    continue;
                                }
                                acc += in[at3(iy, ix, ci, side, cin)] *
                                       w[((static_cast<std::size_t>(f) * cin + ci) * kKernel +
                                          dy) * kKernel + dx];
                            }
                        }
                    }
                    out[at3(y, x, f, side, cout)] = acc;
                }
            }
        }
    }

    // Scatters gout back through the same taps the forward pass read.
    // Either of gin / (gw, gb) may be null to skip that half.
    void conv_backward(const double* in, int side, int cin, int cout, const double* w,
                       const double* gout, double* gin, double* gw, double* gb) const {
        for (int y = 0; y < side; ++y) {
            for (int x = 0; x < side; ++x) {
                for (int f = 0; f < cout; ++f) {
                    const double g = gout[at3(y, x, f, side, cout)];
                    if (gb != nullptr) {
                        gb[f] += g;
                    }
                    if (g == 0.0 && gw == nullptr) {
                        continue;
                    }
                    for (int ci = 0; ci < cin; ++ci) {
                        for (int dy = 0; dy < kKernel; ++dy) {
                            const int iy = y + dy - kRadius;
                            if (iy < 0 || iy >= side) {
                                continue;
                            }
                            for (int dx = 0; dx < kKernel; ++dx) {
                                const int ix = x + dx - kRadius;
                                if (ix < 0 || ix >= side) {
                                    continue;
                                }
                                const std::size_t wi =
                                    ((static_cast<std::size_t>(f) * cin + ci) * kKernel +
                                     dy) * kKernel + dx;
                                if (gin != nullptr) {
                                    gin[at3(iy, ix, ci, side, cin)] += g * w[wi];
                                }
                                if (gw != nullptr) {
                                    gw[wi] += g * in[at3(iy, ix, ci, side, cin)];
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    // ReLU fused with 2x2/2 maxpool over the pre-activation map; records the
    // argmax source index so the backward pass can route the gradient.
    void relu_pool_forward(const std::vector<double>& pre, int side, int feats,
                           std::vector<double>& pooled, std::vector<int>& arg) const {
        const int out_side = side / 2;
        pooled.assign(static_cast<std::size_t>(out_side) * out_side * feats, 0.0);
        arg.assign(pooled.size(), 0);
        for (int py = 0; py < out_side; ++py) {
            for (int px = 0; px < out_side; ++px) {
                for (int f = 0; f < feats; ++f) {
                    double best = -1.0;
                    int best_idx = -1;
                    for (int dy = 0; dy < 2; ++dy) {
                        for (int dx = 0; dx < 2; ++dx) {
                            const std::size_t idx =
                                at3(2 * py + dy, 2 * px + dx, f, side, feats);
                            const double v = std::max(pre[idx], 0.0);
                            if (best_idx < 0 || v > best) {
                                best = v;
                                best_idx = static_cast<int>(idx);
                            }
                        }
                    }
                    const std::size_t out_idx = at3(py, px, f, out_side, feats);
                    pooled[out_idx] = best;
                    arg[out_idx] = best_idx;
                }
            }
        }
    }

    void relu_pool_backward(const std::vector<double>& pre, const std::vector<int>& arg,
                            const std::vector<double>& gpooled,
                            std::vector<double>& gpre) const {
        gpre.assign(pre.size(), 0.0);
        for (std::size_t i = 0; i < gpooled.size(); ++i) {
            const std::size_t src = static_cast<std::size_t>(arg[i]);
            if (pre[src] > 0.0) {  // ReLU gate: gradient is zero at or below 0
                gpre[src] += gpooled[i];
            }
        }
    }

    void forward(const ImageTensor& x, Acts& acts) const {
        const double* w1 = params_[0].values.data();
        const double* b1 = params_[1].values.data();
        const double* w2 = params_[2].values.data();
        const double* b2 = params_[3].values.data();
        const std::vector<double>& wfc = params_[4].values;
        const std::vector<double>& bfc = params_[5].values;

        acts.pre1.assign(static_cast<std::size_t>(size_) * size_ * f1_, 0.0);
        conv_forward(x.data().data(), size_, channels_, f1_, w1, b1, acts.pre1.data());
        relu_pool_forward(acts.pre1, size_, f1_, acts.pool1, acts.arg1);

        acts.pre2.assign(static_cast<std::size_t>(half_) * half_ * f2_, 0.0);
        conv_forward(acts.pool1.data(), half_, f1_, f2_, w2, b2, acts.pre2.data());
        relu_pool_forward(acts.pre2, half_, f2_, acts.pool2, acts.arg2);

        acts.logits.assign(static_cast<std::size_t>(classes_), 0.0);
        for (int c = 0; c < classes_; ++c) {
            double acc = bfc[static_cast<std::size_t>(c)];
            const double* row = wfc.data() + static_cast<std::size_t>(c) * flat_dim_;
            for (int d = 0; d < flat_dim_; ++d) {
                acc += row[d] * acts.pool2[static_cast<std::size_t>(d)];
            }
            acts.logits[static_cast<std::size_t>(c)] = acc;
        }
    }

    void backward(const ImageTensor& x, const Acts& acts,
                  std::span<const double> logit_grad, ImageTensor* gin,
                  std::vector<ParamTensor>* grads) const {
        const double* w1 = params_[0].values.data();
        const double* w2 = params_[2].values.data();
        const std::vector<double>& wfc = params_[4].values;

        // Dense layer.
        std::vector<double> gpool2(acts.pool2.size(), 0.0);
        for (int c = 0; c < classes_; ++c) {
            const double g = logit_grad[static_cast<std::size_t>(c)];
            if (grads != nullptr) {
                (*grads)[5].values[static_cast<std::size_t>(c)] += g;
                double* grow = (*grads)[4].values.data() +
                               static_cast<std::size_t>(c) * flat_dim_;
                for (int d = 0; d < flat_dim_; ++d) {
                    grow[d] += g * acts.pool2[static_cast<std::size_t>(d)];
                }
            }
            if (g != 0.0) {
                const double* row = wfc.data() + static_cast<std::size_t>(c) * flat_dim_;
                for (int d = 0; d < flat_dim_; ++d) {
                    gpool2[static_cast<std::size_t>(d)] += g * row[d];
                }
            }
        }

        // Second pool/ReLU and conv block.
        std::vector<double> gpre2;
        relu_pool_backward(acts.pre2, acts.arg2, gpool2, gpre2);
        std::vector<double> gpool1(acts.pool1.size(), 0.0);
        conv_backward(acts.pool1.data(), half_, f1_, f2_, w2, gpre2.data(),
                      gpool1.data(), grads != nullptr ? (*grads)[2].values.data() : nullptr,
                      grads != nullptr ? (*grads)[3].values.data() : nullptr);

        // First pool/ReLU and conv block.
        std::vector<double> gpre1;
        relu_pool_backward(acts.pre1, acts.arg1, gpool1, gpre1);
        conv_backward(x.data().data(), size_, channels_, f1_, w1, gpre1.data(),
                      gin != nullptr ? gin->data().data() : nullptr,
                      grads != nullptr ? (*grads)[0].values.data() : nullptr,
                      grads != nullptr ? (*grads)[1].values.data() : nullptr);
    }

    int size_;
    int channels_;
    int classes_;
    int f1_;
    int f2_;
    int half_ = 0;
    int quarter_ = 0;
    int flat_dim_ = 0;
    std::vector<ParamTensor> params_;
};

}  // namespace

std::unique_ptr<Classifier> make_cnn_model(int input_size, int channels, int classes,
                                           int f1, int f2, std::uint64_t init_seed) {
    return std::make_unique<TinyCnn>(input_size, channels, classes, f1, f2, init_seed);
}

}  // namespace advpipe::models
