#ifndef ADVPIPE_TRAIN_HPP
#define ADVPIPE_TRAIN_HPP

#include <cstdint>
#include <span>

#include "advpipe/classifier.hpp"

namespace advpipe::models {

struct TrainConfig {
    int epochs = 10;
    double learning_rate = 0.1;
    int batch_size = 16;
    std::uint64_t seed = 0;
};

/// Plain minibatch SGD on softmax cross-entropy, deterministic given
/// cfg.seed. Updates the model in place and returns the final accuracy on
/// the training set. epochs = 0 leaves the parameters untouched.
double train(Classifier& model, std::span<const LabeledExample> data,
             const TrainConfig& cfg);

/// Fraction of examples whose predicted class equals the label.
double accuracy(const Classifier& model, std::span<const LabeledExample> data);

}  // namespace advpipe::models

#endif
