#include "advpipe/train.hpp"

#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "advpipe/rng.hpp"

namespace advpipe::models {

double train(Classifier& model, std::span<const LabeledExample> data,
             const TrainConfig& cfg) {
    if (data.empty()) {
        throw std::invalid_argument("train: empty dataset");
    }
    if (cfg.epochs < 0 || cfg.learning_rate <= 0.0 || cfg.batch_size <= 0) {
        throw std::invalid_argument("train: invalid config");
    }
    for (const LabeledExample& ex : data) {
        if (ex.label < 0 || ex.label >= model.num_classes()) {
            throw std::invalid_argument("train: label out of range");
        }
    }

    Rng rng(cfg.seed);
    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        // Fisher-Yates shuffle driven by the library PRNG so epoch order is
        // reproducible across platforms.
        for (std::size_t i = order.size() - 1; i > 0; --i) {
            const std::size_t j = static_cast<std::size_t>(
                uniform_int(rng, 0, static_cast<int>(i) + 1));
            std::swap(order[i], order[j]);
        }
        for (std::size_t start = 0; start < order.size();
             start += static_cast<std::size_t>(cfg.batch_size)) {
            const std::size_t stop =
                std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
            std::vector<ParamTensor> grads = model.zero_param_grads();
            for (std::size_t k = start; k < stop; ++k) {
                const LabeledExample& ex = data[order[k]];
                std::vector<double> lgrad = softmax(model.logits(ex.image));
                lgrad[static_cast<std::size_t>(ex.label)] -= 1.0;
                model.param_vjp(ex.image, lgrad, grads);
            }
            const double scale = cfg.learning_rate / static_cast<double>(stop - start);
            for (std::size_t p = 0; p < grads.size(); ++p) {
                std::vector<double>& values = model.params()[p].values;
                const std::vector<double>& g = grads[p].values;
                for (std::size_t i = 0; i < values.size(); ++i) {
                    values[i] -= scale * g[i];
                }
            }
        }
    }
    return accuracy(model, data);
}

double accuracy(const Classifier& model, std::span<const LabeledExample> data) {
    if (data.empty()) {
        throw std::invalid_argument("accuracy: empty dataset");
    }
    std::size_t hits = 0;
    for (const LabeledExample& ex : data) {
        if (predict(model, ex.image) == ex.label) {
            ++hits;
        }
    }
    return static_cast<double>(hits) / static_cast<double>(data.size());
}

}  // namespace advpipe::models
