#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <memory>

#include "advpipe/classifier.hpp"
#include "advpipe/gaussian_kernel.hpp"
#include "advpipe/rng.hpp"
#include "advpipe/tensor.hpp"
#include "advpipe/tensor_ops.hpp"
#include "advpipe/transforms.hpp"
#include "oracle.hpp"

using namespace advpipe;

namespace {

ImageTensor random_tensor(int h, int w, int c, Rng& rng, double lo = -1.0,
                          double hi = 1.0) {
    ImageTensor t(h, w, c);
    for (std::size_t i = 0; i < t.size(); ++i) {
        t[i] = lo + rng.next_double() * (hi - lo);
    }
    return t;
}

bool bit_identical(const ImageTensor& a, const ImageTensor& b) {
    if (!a.same_shape(b)) {
        return false;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] != b[i]) {
            return false;
        }
    }
    return true;
}

double max_abs_diff(const ImageTensor& a, const ImageTensor& b) {
    REQUIRE(a.same_shape(b));
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        worst = std::max(worst, std::abs(a[i] - b[i]));
    }
    return worst;
}

}  // namespace

TEST_CASE("finite differences on a zero-weight model give a flat gradient") {
    const std::unique_ptr<models::Classifier> m = models::make_model("linear 4 1 5");
    Rng rng(1);
    const ImageTensor x = random_tensor(4, 4, 1, rng, 0.0, 1.0);
    const ImageTensor fd = oracle::finite_diff_grad(*m, x, 2, 1e-5);
    for (std::size_t i = 0; i < fd.size(); ++i) {
        CHECK(std::abs(fd[i]) < 1e-10);
    }
}

TEST_CASE("finite differences match the linear closed form to 1e-8") {
    const std::unique_ptr<models::Classifier> m = models::make_model("linear 5 1 4", 19);
    Rng rng(2);
    const ImageTensor x = random_tensor(5, 5, 1, rng, 0.0, 1.0);
    const ImageTensor analytic = models::loss_and_input_gradient(*m, x, 1).second;
    const ImageTensor fd = oracle::finite_diff_grad(*m, x, 1, 1e-5);
    CHECK(oracle::max_relative_error(analytic, fd, 0.01) < 1e-8);
}

TEST_CASE("finite differences leave model parameters untouched") {
    const std::unique_ptr<models::Classifier> m = models::make_model("cnn 8 1 4 4 8", 3);
    const std::vector<models::ParamTensor> before = m->params();
    Rng rng(3);
    const ImageTensor x = random_tensor(8, 8, 1, rng, 0.0, 1.0);
    (void)oracle::finite_diff_param_grad(*m, x, 2, 0, 1e-4);
    const std::vector<models::ParamTensor>& after = m->params();
    REQUIRE(after.size() == before.size());
    for (std::size_t i = 0; i < after.size(); ++i) {
        CHECK(after[i].values == before[i].values);
    }
}

TEST_CASE("max_relative_error applies the denominator floor") {
    ImageTensor a(1, 2, 1);
    ImageTensor b(1, 2, 1);
    a[0] = 1.0;
    b[0] = 1.0 + 1e-6;  // relative error 1e-6 against |b| = 1
    a[1] = 1e-9;
    b[1] = 2e-9;  // tiny values: 1e-9 absolute over the 0.01 floor
    const double err = oracle::max_relative_error(a, b, 0.01);
    CHECK(err == doctest::Approx(1e-6).epsilon(1e-3));
}

TEST_CASE("translation_sum with the delta kernel is the identity") {
    Rng rng(4);
    const ImageTensor g = random_tensor(9, 9, 2, rng);
    const GaussianKernel delta = make_gaussian_kernel(1, 1.0);
    CHECK(bit_identical(oracle::translation_sum(g, delta), g));
}

TEST_CASE("translation_sum equals conv2d_same on random instances") {
    Rng rng(5);
    const ImageTensor g = random_tensor(16, 16, 3, rng);
    const GaussianKernel k = make_gaussian_kernel(5, 5.0 / 3.0);
    CHECK(max_abs_diff(oracle::translation_sum(g, k), conv2d_same(g, k)) < 1e-10);

    const ImageTensor g2 = random_tensor(11, 7, 1, rng);
    const GaussianKernel k2 = make_gaussian_kernel(9, 2.5);
    CHECK(max_abs_diff(oracle::translation_sum(g2, k2), conv2d_same(g2, k2)) < 1e-10);
}

TEST_CASE("a single bright pixel stamps the flip-indexed kernel") {
    // With an asymmetric kernel the stamp orientation is observable:
    // out(c + dy, c + dx) must equal W(r - dy, r - dx).
    GaussianKernel k;
    k.side = 3;
    k.sigma = 1.0;
    k.weights = {0.01, 0.02, 0.03, 0.04, 0.10, 0.06, 0.07, 0.08, 0.09};
    ImageTensor g(5, 5, 1);
    g.at(2, 2, 0) = 1.0;
    const ImageTensor out = oracle::translation_sum(g, k);
    for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
            CHECK(out.at(2 + dy, 2 + dx, 0) ==
                  doctest::Approx(k.at(1 - dy, 1 - dx)).epsilon(1e-15));
        }
    }
    CHECK(out.at(0, 0, 0) == 0.0);
    CHECK(max_abs_diff(out, conv2d_same(g, std::span<const double>(k.weights), 3)) <
          1e-15);
}

TEST_CASE("replay_rdim is the identity when the canvas equals the base") {
    Rng rng(6);
    const ImageTensor x = random_tensor(16, 16, 1, rng, 0.0, 1.0);
    CHECK(bit_identical(oracle::replay_rdim(x, 16, 16, 123), x));
}

TEST_CASE("replay_rdim reproduces the library transform at seed 0, 28 to 40") {
    Rng rng(7);
    const ImageTensor x = random_tensor(28, 28, 1, rng, 0.0, 1.0);
    Rng draws(0);
    const ImageTensor lib = transforms::rdim_transform(x, 28, 40, draws);
    CHECK(bit_identical(oracle::replay_rdim(x, 28, 40, 0), lib));
}

TEST_CASE("replay_rdim reproduces the draw triple at 28 to 47") {
    // Inline transcription of the sampling procedure against the library's
    // draw structure under one seed.
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng lib_rng(seed);
        const transforms::RdimDraw d = transforms::draw_rdim(28, 47, lib_rng);
        Rng replay(seed);
        const int a = uniform_int(replay, 28, 47);
        const int slack = 47 - a;
        const int top = uniform_int(replay, 0, slack);
        const int left = uniform_int(replay, 0, slack);
        CHECK(d.a == a);
        CHECK(d.top == top);
        CHECK(d.left == left);
    }
}

TEST_CASE("replay_rdim matches the library across 100 seeds and shapes") {
    Rng rng(8);
    const ImageTensor x16 = random_tensor(16, 16, 3, rng, 0.0, 1.0);
    const ImageTensor x28 = random_tensor(28, 28, 1, rng, 0.0, 1.0);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        {
            Rng draws(seed);
            const ImageTensor lib = transforms::rdim_transform(x16, 16, 22, draws);
            CHECK(bit_identical(oracle::replay_rdim(x16, 16, 22, seed), lib));
        }
        {
            Rng draws(seed);
            const ImageTensor lib = transforms::rdim_transform(x28, 28, 40, draws);
            CHECK(bit_identical(oracle::replay_rdim(x28, 28, 40, seed), lib));
        }
    }
}
