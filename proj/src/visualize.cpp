#include "advpipe/visualize.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>
#include <stdexcept>

#include "advpipe/pnm.hpp"
#include "advpipe/rng.hpp"
#include "advpipe/tensor_ops.hpp"
#include "advpipe/transforms.hpp"

namespace advpipe::viz {
namespace {

constexpr double kNonzeroTol = 1e-12;

}  // namespace

StripeImage visualize_gradient_stripes(const models::Classifier& model,
                                       const ImageTensor& x, int y, int canvas,
                                       std::uint64_t seed,
                                       const std::string& out_path) {
    Rng rng(seed);
    const int base = model.input_size();
    const transforms::RdimDraw draw = transforms::draw_rdim(base, canvas, rng);

    // Forward chain of the diverse example, then the gradient pulled back
    // one stage so it lives on the enlarged canvas.
    const ImageTensor diverse = transforms::rdim_apply(x, draw);
    const auto [loss, grad_at_input] = models::loss_and_input_gradient(model, diverse, y);
    (void)loss;
    const ImageTensor grad_on_canvas =
        bilinear_resize_adjoint(grad_at_input, canvas, canvas);
    const ImageTensor window = transforms::rdim_window_mask(draw);

    ByteImage img;
    img.height = canvas;
    img.width = canvas;
    img.channels = 1;
    img.pixels.assign(static_cast<std::size_t>(canvas) * canvas, 0);
    for (int yy = 0; yy < canvas; ++yy) {
        for (int xx = 0; xx < canvas; ++xx) {
            if (window.at(yy, xx, 0) == 0.0) {
                continue;  // vacated margin: stays black
            }
            double mag = 0.0;
            for (int c = 0; c < grad_on_canvas.channels(); ++c) {
                mag = std::max(mag, std::abs(grad_on_canvas.at(yy, xx, c)));
            }
            img.at(yy, xx, 0) = mag > kNonzeroTol ? 255 : 0;
        }
    }
    write_pnm(out_path, img);

    StripeImage out;
    out.canvas = canvas;
    for (int yy = 0; yy < canvas; ++yy) {
        bool all_zero = true;
        for (int xx = 0; xx < canvas && all_zero; ++xx) {
            all_zero = img.at(yy, xx, 0) == 0;
        }
        out.zero_rows += all_zero ? 1 : 0;
    }
    for (int xx = 0; xx < canvas; ++xx) {
        bool all_zero = true;
        for (int yy = 0; yy < canvas && all_zero; ++yy) {
            all_zero = img.at(yy, xx, 0) == 0;
        }
        out.zero_cols += all_zero ? 1 : 0;
    }
    return out;
}

int stripe_count_for_draw(int base, int canvas, std::uint64_t seed) {
    Rng rng(seed);
    const transforms::RdimDraw draw = transforms::draw_rdim(base, canvas, rng);
    return transforms::count_zero_rows(transforms::rdim_window_mask(draw), 0.0);
}

std::vector<std::string> visualize_perturbation(const attack::AttackTrace& trace,
                                                const ImageTensor& x0, double eps,
                                                const std::string& out_dir,
                                                const std::string& basename) {
    if (trace.snapshots.empty()) {
        throw std::invalid_argument("visualize_perturbation: trace has no snapshots");
    }
    if (!(eps > 0.0)) {
        throw std::invalid_argument("visualize_perturbation: eps must be positive");
    }
    if (x0.channels() != 1 && x0.channels() != 3) {
        throw std::invalid_argument(
            "visualize_perturbation: need a 1- or 3-channel image");
    }
    std::filesystem::create_directories(out_dir);
    std::vector<std::string> written;
    for (std::size_t i = 0; i < trace.snapshots.size(); ++i) {
        const ImageTensor& snap = trace.snapshots[i];
        if (!snap.same_shape(x0)) {
            throw std::invalid_argument("visualize_perturbation: snapshot shape mismatch");
        }
        ByteImage img;
        img.height = x0.height();
        img.width = x0.width();
        img.channels = x0.channels();
        img.pixels.resize(x0.size());
        for (std::size_t j = 0; j < x0.size(); ++j) {
            // delta/eps in [-1, 1] -> [0, 255], mid-gray = untouched pixel.
            const double delta = snap[j] - x0[j];
            const double level = std::round((delta / eps + 1.0) * 127.5);
            img.pixels[j] = static_cast<std::uint8_t>(std::clamp(level, 0.0, 255.0));
        }
        std::ostringstream name;
        name << basename << "_iter" << (i < 9 ? "0" : "") << i + 1
             << (img.channels == 1 ? ".pgm" : ".ppm");
        const std::string path =
            (std::filesystem::path(out_dir) / name.str()).string();
        write_pnm(path, img);
        written.push_back(path);
    }
    return written;
}

}  // namespace advpipe::viz
