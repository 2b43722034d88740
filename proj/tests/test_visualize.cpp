#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "advpipe/attack.hpp"
#include "advpipe/classifier.hpp"
#include "advpipe/pnm.hpp"
#include "advpipe/rng.hpp"
#include "advpipe/tensor.hpp"
#include "advpipe/visualize.hpp"

using namespace advpipe;

namespace {

namespace fs = std::filesystem;

fs::path fresh_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

// Two-class linear model whose input gradient is nonzero at every pixel and
// alternates sign in a checkerboard, so perturbation images show both
// extremes and gradient images have no accidentally-dark rows.
std::unique_ptr<models::Classifier> checkerboard_model(int side) {
    std::unique_ptr<models::Classifier> m =
        models::make_model("linear " + std::to_string(side) + " 1 2");
    for (models::ParamTensor& p : m->params()) {
        if (p.name == "w") {
            const int dim = side * side;
            for (int i = 0; i < dim; ++i) {
                const double v = ((i / side) + (i % side)) % 2 == 0 ? 1.0 : -1.0;
                p.values[static_cast<std::size_t>(i)] = v;
                p.values[static_cast<std::size_t>(dim + i)] = -v;
            }
        }
    }
    return m;
}

ImageTensor midgray(int side, int channels) {
    ImageTensor x(side, side, channels);
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = 0.5;
    }
    return x;
}

}  // namespace

TEST_CASE("byte images round-trip through PGM and PPM") {
    const fs::path dir = fresh_dir("advpipe_pnm");
    Rng rng(1);
    for (const int channels : {1, 3}) {
        ByteImage img;
        img.height = 5;
        img.width = 7;
        img.channels = channels;
        img.pixels.resize(static_cast<std::size_t>(5 * 7 * channels));
        for (std::uint8_t& p : img.pixels) {
            p = static_cast<std::uint8_t>(uniform_int(rng, 0, 256));
        }
        const std::string path =
            (dir / (channels == 1 ? "gray.pgm" : "color.ppm")).string();
        write_pnm(path, img);
        const ByteImage back = read_pnm(path);
        CHECK(back.height == img.height);
        CHECK(back.width == img.width);
        CHECK(back.channels == img.channels);
        CHECK(back.pixels == img.pixels);
    }
    fs::remove_all(dir);
}

TEST_CASE("an identity canvas produces a stripe-free gradient image") {
    const fs::path dir = fresh_dir("advpipe_stripes_identity");
    const std::unique_ptr<models::Classifier> m = checkerboard_model(16);
    const ImageTensor x = midgray(16, 1);
    const std::string path = (dir / "s16.pgm").string();
    const viz::StripeImage si = viz::visualize_gradient_stripes(*m, x, 0, 16, 3, path);
    CHECK(si.canvas == 16);
    CHECK(si.zero_rows == 0);
    CHECK(si.zero_cols == 0);
    CHECK(viz::stripe_count_for_draw(16, 16, 3) == 0);

    const ByteImage img = read_pnm(path);
    CHECK(img.height == 16);
    CHECK(img.width == 16);
    CHECK(img.channels == 1);
    for (const std::uint8_t p : img.pixels) {
        CHECK((p == 0 || p == 255));
    }
    fs::remove_all(dir);
}

TEST_CASE("gradient images agree with their reported stripe counts") {
    const fs::path dir = fresh_dir("advpipe_stripes_counts");
    const std::unique_ptr<models::Classifier> m = checkerboard_model(16);
    const ImageTensor x = midgray(16, 1);
    for (const int canvas : {18, 22, 27}) {
        const std::string path =
            (dir / ("s" + std::to_string(canvas) + ".pgm")).string();
        const viz::StripeImage si =
            viz::visualize_gradient_stripes(*m, x, 0, canvas, 11, path);
        const ByteImage img = read_pnm(path);
        REQUIRE(img.height == canvas);
        REQUIRE(img.width == canvas);
        int dark_rows = 0;
        for (int y = 0; y < canvas; ++y) {
            bool all_zero = true;
            for (int xx = 0; xx < canvas; ++xx) {
                if (img.at(y, xx, 0) != 0) {
                    all_zero = false;
                    break;
                }
            }
            dark_rows += all_zero ? 1 : 0;
        }
        CHECK(si.zero_rows == dark_rows);
    }
    fs::remove_all(dir);
}

TEST_CASE("mask stripe counts never decrease along the scale list") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        int prev = -1;
        for (const int canvas : {16, 18, 20, 22, 25, 27}) {
            const int count = viz::stripe_count_for_draw(16, canvas, seed);
            CHECK(count >= prev);
            prev = count;
        }
    }
}

TEST_CASE("region-fitting snapshots render to pure black and white") {
    const std::unique_ptr<models::Classifier> m = checkerboard_model(8);
    const ImageTensor x = midgray(8, 1);
    attack::AttackConfig cfg;
    cfg.eps = 16.0 / 255.0;
    cfg.iterations = 3;
    cfg.region_fitting = true;
    cfg.record_snapshots = true;
    const attack::AttackResult res = attack::run_attack(*m, x, 0, cfg);

    const fs::path dir = fresh_dir("advpipe_viz_region");
    const std::vector<std::string> files =
        viz::visualize_perturbation(res.trace, x, cfg.eps, dir.string(), "region");
    REQUIRE(files.size() == 3);
    const ByteImage first = read_pnm(files[0]);
    std::set<int> levels;
    for (const std::uint8_t p : first.pixels) {
        levels.insert(p);
    }
    CHECK(levels == std::set<int>{0, 255});
    fs::remove_all(dir);
}

TEST_CASE("value-fitting snapshots sit in the narrow band around mid-gray") {
    const std::unique_ptr<models::Classifier> m = checkerboard_model(8);
    const ImageTensor x = midgray(8, 1);
    attack::AttackConfig cfg;
    cfg.eps = 16.0 / 255.0;
    cfg.iterations = 10;  // alpha defaults to eps / 10
    cfg.record_snapshots = true;
    const attack::AttackResult res = attack::run_attack(*m, x, 0, cfg);

    const fs::path dir = fresh_dir("advpipe_viz_value");
    const std::vector<std::string> files =
        viz::visualize_perturbation(res.trace, x, cfg.eps, dir.string(), "value");
    REQUIRE(files.size() == 10);
    const ByteImage first = read_pnm(files[0]);
    std::set<int> levels;
    for (const std::uint8_t p : first.pixels) {
        levels.insert(static_cast<int>(p));
        CHECK(p >= 114);
        CHECK(p <= 141);
    }
    CHECK(levels.count(115) + levels.count(140) > 0);
    fs::remove_all(dir);
}

TEST_CASE("every snapshot becomes one file with the iteration in its name") {
    const std::unique_ptr<models::Classifier> m = checkerboard_model(8);
    const ImageTensor x = midgray(8, 1);
    attack::AttackConfig cfg;
    cfg.eps = 0.05;
    cfg.iterations = 4;
    cfg.record_snapshots = true;
    const attack::AttackResult res = attack::run_attack(*m, x, 1, cfg);

    const fs::path dir = fresh_dir("advpipe_viz_names");
    const std::vector<std::string> files =
        viz::visualize_perturbation(res.trace, x, cfg.eps, dir.string(), "steps");
    REQUIRE(files.size() == 4);
    for (std::size_t i = 0; i < files.size(); ++i) {
        CHECK(fs::exists(files[i]));
        CHECK(files[i].find("steps") != std::string::npos);
        CHECK(files[i].find(".pgm") != std::string::npos);
    }
    CHECK(files[0].find("iter01") != std::string::npos);
    CHECK(files[3].find("iter04") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("three-channel perturbations render as PPM") {
    const std::unique_ptr<models::Classifier> m = models::make_model("linear 6 3 2", 7);
    const ImageTensor x = midgray(6, 3);
    attack::AttackConfig cfg;
    cfg.eps = 0.05;
    cfg.iterations = 2;
    cfg.record_snapshots = true;
    const attack::AttackResult res = attack::run_attack(*m, x, 0, cfg);

    const fs::path dir = fresh_dir("advpipe_viz_color");
    const std::vector<std::string> files =
        viz::visualize_perturbation(res.trace, x, cfg.eps, dir.string(), "rgb");
    REQUIRE(files.size() == 2);
    CHECK(files[0].find(".ppm") != std::string::npos);
    const ByteImage img = read_pnm(files[0]);
    CHECK(img.channels == 3);
    CHECK(img.height == 6);
    fs::remove_all(dir);
}

TEST_CASE("visualize_perturbation requires recorded snapshots") {
    const std::unique_ptr<models::Classifier> m = checkerboard_model(8);
    const ImageTensor x = midgray(8, 1);
    attack::AttackConfig cfg;
    cfg.eps = 0.05;
    cfg.iterations = 2;
    cfg.record_snapshots = false;
    const attack::AttackResult res = attack::run_attack(*m, x, 0, cfg);
    const fs::path dir = fresh_dir("advpipe_viz_empty");
    CHECK_THROWS(
        viz::visualize_perturbation(res.trace, x, cfg.eps, dir.string(), "none"));
    fs::remove_all(dir);
}
