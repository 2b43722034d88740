#ifndef ADVPIPE_CLASSIFIER_HPP
#define ADVPIPE_CLASSIFIER_HPP

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "advpipe/tensor.hpp"

namespace advpipe::models {

/// Named parameter tensor with an explicit shape; models expose their
/// parameters this way so the trainer, checkpoints and gradient checks can
/// treat every architecture uniformly.
struct ParamTensor {
    std::string name;
    std::vector<int> shape;
    std::vector<double> values;

    std::size_t count() const { return values.size(); }
};

struct LabeledExample {
    ImageTensor image;  // pixel domain [0,1]
    int label = 0;
};

/// Differentiable classifier contract: logits plus vector-Jacobian
/// products w.r.t. the input and the parameters. Models are immutable
/// once trained; logits/vjp calls are safe to run concurrently.
class Classifier {
public:
    virtual ~Classifier() = default;

    virtual int input_size() const = 0;  // square side length
    virtual int input_channels() const = 0;
    virtual int num_classes() const = 0;

    /// One-line architecture descriptor, parseable by make_model().
    virtual std::string descriptor() const = 0;

    virtual std::vector<double> logits(const ImageTensor& x) const = 0;

    /// Gradient of <logit_grad, logits(x)> with respect to x.
    virtual ImageTensor input_vjp(const ImageTensor& x,
                                  std::span<const double> logit_grad) const = 0;

    /// Accumulates the gradient of <logit_grad, logits(x)> with respect to
    /// each parameter into `grads` (same shapes as params()).
    virtual void param_vjp(const ImageTensor& x, std::span<const double> logit_grad,
                           std::vector<ParamTensor>& grads) const = 0;

    virtual std::vector<ParamTensor>& params() = 0;
    virtual const std::vector<ParamTensor>& params() const = 0;

    /// Throws on shape mismatch or non-finite input values.
    void check_input(const ImageTensor& x) const;

    /// Grad tensors shaped like params(), zero-filled.
    std::vector<ParamTensor> zero_param_grads() const;
};

/// Numerically stable softmax.
std::vector<double> softmax(std::span<const double> logits);

/// Softmax cross-entropy from raw logits; >= 0, equals ln(C) at uniform
/// logits.
double cross_entropy_from_logits(std::span<const double> logits, int label);

/// Loss J(x, y) and its gradient w.r.t. x. For a targeted attack pass the
/// target class as y; the attack engine negates the ascent direction.
std::pair<double, ImageTensor> loss_and_input_gradient(const Classifier& model,
                                                       const ImageTensor& x, int y);

/// argmax of logits; ties break toward the lowest class index.
int predict(const Classifier& model, const ImageTensor& x);

/// Exact softmax-linear model: logits = W x + b.
std::unique_ptr<Classifier> make_linear_model(int input_size, int channels, int classes,
                                              std::uint64_t init_seed);

/// Tiny CNN: conv3x3(f1) -> ReLU -> maxpool2 -> conv3x3(f2) -> ReLU ->
/// maxpool2 -> dense -> logits. Input side must be divisible by 4.
std::unique_ptr<Classifier> make_cnn_model(int input_size, int channels, int classes,
                                           int f1, int f2, std::uint64_t init_seed);

/// One-hidden-layer dense net: flatten -> dense(h) -> ReLU -> dense -> logits.
std::unique_ptr<Classifier> make_dense_model(int input_size, int channels, int classes,
                                             int hidden, std::uint64_t init_seed);

/// Recreates a model from its descriptor() line (parameters zeroed).
std::unique_ptr<Classifier> make_model(const std::string& descriptor);

/// Same parse, but with freshly initialized parameters for training.
std::unique_ptr<Classifier> make_model(const std::string& descriptor,
                                       std::uint64_t init_seed);

}  // namespace advpipe::models

#endif
