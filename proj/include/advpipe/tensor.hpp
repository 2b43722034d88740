#ifndef ADVPIPE_TENSOR_HPP
#define ADVPIPE_TENSOR_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace advpipe {

/// Dense H x W x C tensor of doubles, row-major (height, then width, then
/// channel). Carries images in the [0,1] pixel domain as well as gradients
/// and perturbations, which are unconstrained but must stay finite.
class ImageTensor {
public:
    ImageTensor() = default;

    ImageTensor(int height, int width, int channels, double fill = 0.0)
        : height_(height), width_(width), channels_(channels) {
        if (height <= 0 || width <= 0 || channels <= 0) {
            throw std::invalid_argument("ImageTensor: dimensions must be positive");
        }
        data_.assign(static_cast<std::size_t>(height) * width * channels, fill);
    }

    static ImageTensor zeros_like(const ImageTensor& t) {
        return ImageTensor(t.height_, t.width_, t.channels_, 0.0);
    }

    int height() const { return height_; }
    int width() const { return width_; }
    int channels() const { return channels_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    double& at(int y, int x, int c) {
        return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
    }
    double at(int y, int x, int c) const {
        return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
    }

    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    bool same_shape(const ImageTensor& o) const {
        return height_ == o.height_ && width_ == o.width_ && channels_ == o.channels_;
    }

    bool all_finite() const {
        for (double v : data_) {
            if (!std::isfinite(v)) return false;
        }
        return true;
    }

private:
    int height_ = 0;
    int width_ = 0;
    int channels_ = 0;
    std::vector<double> data_;
};

}  // namespace advpipe

#endif
