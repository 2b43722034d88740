#include "cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

#include "CLI11.hpp"

#include "advpipe/attack.hpp"
#include "advpipe/checkpoint.hpp"
#include "advpipe/dataset.hpp"
#include "advpipe/report.hpp"
#include "advpipe/rng.hpp"
#include "advpipe/tensor_file.hpp"
#include "advpipe/train.hpp"
#include "advpipe/visualize.hpp"
#include "oracle.hpp"

namespace advpipe::cli {
namespace {

namespace fs = std::filesystem;

std::uint64_t parse_seed_string(const std::string& text, const std::string& what) {
    try {
        std::size_t used = 0;
        const std::uint64_t v = std::stoull(text, &used);
        if (used != text.size()) {
            throw std::invalid_argument("trailing characters");
        }
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error(what + " is not an unsigned integer: " + text);
    }
}

/// --seed beats ADVPIPE_SEED beats the given fallback.
std::uint64_t resolve_seed(const CLI::App* sub, std::uint64_t cli_value,
                           std::uint64_t fallback) {
    if (sub->count("--seed") > 0) {
        return cli_value;
    }
    if (const char* env = std::getenv("ADVPIPE_SEED"); env != nullptr && *env != '\0') {
        return parse_seed_string(env, "ADVPIPE_SEED");
    }
    return fallback;
}

std::string trim(const std::string& s) {
    const std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) {
        return "";
    }
    const std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) {
        const std::string t = trim(item);
        if (!t.empty()) {
            parts.push_back(t);
        }
    }
    return parts;
}

data::Dataset load_dataset_checked(const std::string& path) {
    return data::load_dataset(path);
}

// ---------------------------------------------------------------- gen-data

struct GenDataArgs {
    std::string out;
    std::uint64_t seed = 0;
    int train_per_class = 40;
    int test_per_class = 20;
    int size = 16;
    int classes = 10;
};

int run_gen_data(const CLI::App* sub, GenDataArgs& args) {
    args.seed = resolve_seed(sub, args.seed, 0);
    const std::string train_manifest = data::make_toy_dataset(
        (fs::path(args.out) / "train").string(), child_seed(args.seed, 0),
        args.train_per_class, args.size, args.classes);
    const std::string test_manifest = data::make_toy_dataset(
        (fs::path(args.out) / "test").string(), child_seed(args.seed, 1),
        args.test_per_class, args.size, args.classes);
    for (const std::string& m : {train_manifest, test_manifest}) {
        const data::Dataset ds = data::load_dataset(m);
        std::printf("%s: %zu examples, checksum %016llx\n", m.c_str(),
                    ds.examples.size(),
                    static_cast<unsigned long long>(data::dataset_checksum(ds)));
    }
    return 0;
}

// ------------------------------------------------------------------- train

struct TrainArgs {
    std::string data;
    std::string arch;
    std::string out;
    std::string eval;
    int epochs = 30;
    double lr = 0.1;
    int batch = 16;
    std::uint64_t seed = 0;
};

int run_train(const CLI::App* sub, TrainArgs& args) {
    args.seed = resolve_seed(sub, args.seed, 0);
    const data::Dataset ds = load_dataset_checked(args.data);
    std::unique_ptr<models::Classifier> model = models::make_model(args.arch, args.seed);
    if (model->input_size() != ds.side || model->input_channels() != ds.channels ||
        model->num_classes() != ds.classes) {
        throw std::runtime_error("architecture '" + args.arch +
                                 "' does not match the dataset descriptor");
    }
    models::TrainConfig cfg;
    cfg.epochs = args.epochs;
    cfg.learning_rate = args.lr;
    cfg.batch_size = args.batch;
    cfg.seed = child_seed(args.seed, 1);
    const double train_acc = models::train(*model, ds.examples, cfg);
    if (const fs::path parent = fs::path(args.out).parent_path(); !parent.empty()) {
        fs::create_directories(parent);
    }
    models::save_model(args.out, *model);
    std::printf("trained %s: train accuracy %.4f -> %s\n", model->descriptor().c_str(),
                train_acc, args.out.c_str());
    if (!args.eval.empty()) {
        const data::Dataset held_out = load_dataset_checked(args.eval);
        std::printf("eval accuracy %.4f on %s\n",
                    models::accuracy(*model, held_out.examples), args.eval.c_str());
    }
    return 0;
}

// ------------------------------------------------------------------ attack

struct AttackArgs {
    std::string model;
    std::string data;
    std::string config;
    std::string out;
    std::uint64_t seed = 0;
    int limit = 0;
};

int run_attack_cmd(const CLI::App* sub, AttackArgs& args) {
    const std::unique_ptr<models::Classifier> model = models::load_model(args.model);
    data::Dataset ds = load_dataset_checked(args.data);
    attack::AttackConfig cfg = attack::load_attack_config(args.config);
    const std::uint64_t base_seed = resolve_seed(sub, args.seed, cfg.seed);
    if (args.limit > 0 && static_cast<std::size_t>(args.limit) < ds.examples.size()) {
        ds.examples.resize(static_cast<std::size_t>(args.limit));
    }

    std::ofstream manifest;
    if (!args.out.empty()) {
        fs::create_directories(args.out);
        manifest.open(fs::path(args.out) / "manifest.csv");
        manifest << "#descriptor," << ds.side << "," << ds.side << "," << ds.channels
                 << "," << ds.classes << "\n";
    }

    std::size_t clean_correct = 0;
    std::size_t fooled = 0;
    double worst_linf = 0.0;
    for (std::size_t e = 0; e < ds.examples.size(); ++e) {
        const models::LabeledExample& ex = ds.examples[e];
        attack::AttackConfig run_cfg = cfg;
        run_cfg.seed = child_seed(base_seed, e);
        const attack::AttackResult res =
            attack::run_attack(*model, ex.image, ex.label, run_cfg);
        const bool was_correct = models::predict(*model, ex.image) == ex.label;
        clean_correct += was_correct ? 1 : 0;
        if (was_correct && models::predict(*model, res.x_adv) != ex.label) {
            ++fooled;
        }
        worst_linf = std::max(worst_linf, res.trace.iterations.back().pert_linf);
        if (!args.out.empty()) {
            std::ostringstream name;
            name << "adv_" << e << ".atns";
            save_tensor((fs::path(args.out) / name.str()).string(), res.x_adv);
            manifest << name.str() << "," << ex.label << "\n";
        }
    }
    std::printf("attack %s on %s: %zu/%zu clean-correct fooled (%.1f%%), "
                "max |delta|_inf %.6f (eps %.6f)\n",
                cfg.name.c_str(), model->descriptor().c_str(), fooled, clean_correct,
                clean_correct > 0
                    ? 100.0 * static_cast<double>(fooled) /
                          static_cast<double>(clean_correct)
                    : 0.0,
                worst_linf, cfg.eps);
    if (!args.out.empty()) {
        std::printf("adversarial tensors written under %s\n", args.out.c_str());
    }
    return 0;
}

// ------------------------------------------------------------------ matrix

struct ExperimentSpec {
    std::string data;
    std::vector<std::uint64_t> seeds;
    std::vector<std::pair<std::string, std::string>> sources;  // name -> ckpt
    std::vector<std::pair<std::string, std::string>> targets;
    std::vector<std::string> attack_paths;
    std::string policy = "clean_correct";
    int limit = 0;
    int threads = 1;
    std::string out = "report";
};

ExperimentSpec parse_experiment_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open experiment config: " + path);
    }
    const fs::path dir = fs::path(path).parent_path();
    auto resolve = [&dir](const std::string& p) {
        const fs::path fp(p);
        return fp.is_absolute() ? fp.string() : (dir / fp).string();
    };

    ExperimentSpec spec;
    spec.out = resolve("report");
    std::string line;
    while (std::getline(in, line)) {
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') {
            continue;
        }
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos) {
            throw std::runtime_error("experiment config: expected key=value, got: " + t);
        }
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key == "data") {
            spec.data = resolve(value);
        } else if (key == "seeds") {
            spec.seeds.clear();
            for (const std::string& s : split_commas(value)) {
                spec.seeds.push_back(parse_seed_string(s, "experiment seed"));
            }
        } else if (key.rfind("source.", 0) == 0) {
            spec.sources.emplace_back(key.substr(7), resolve(value));
        } else if (key.rfind("target.", 0) == 0) {
            spec.targets.emplace_back(key.substr(7), resolve(value));
        } else if (key == "attacks") {
            spec.attack_paths.clear();
            for (const std::string& s : split_commas(value)) {
                spec.attack_paths.push_back(resolve(s));
            }
        } else if (key == "policy") {
            spec.policy = value;
        } else if (key == "limit") {
            spec.limit = std::stoi(value);
        } else if (key == "threads") {
            spec.threads = std::stoi(value);
        } else if (key == "out") {
            spec.out = resolve(value);
        } else {
            throw std::runtime_error("experiment config: unknown key: " + key);
        }
    }
    if (spec.data.empty() || spec.seeds.empty() || spec.sources.empty() ||
        spec.targets.empty() || spec.attack_paths.empty()) {
        throw std::runtime_error(
            "experiment config needs data, seeds, source.*, target.* and attacks");
    }
    return spec;
}

void write_text_file(const std::string& path, const std::string& content) {
    if (const fs::path parent = fs::path(path).parent_path(); !parent.empty()) {
        fs::create_directories(parent);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open for writing: " + path);
    }
    out << content;
    if (!out) {
        throw std::runtime_error("write failure: " + path);
    }
}

struct MatrixArgs {
    std::string config;
    std::string out;
    int threads = 0;
};

int run_matrix_cmd(MatrixArgs& args) {
    ExperimentSpec spec = parse_experiment_file(args.config);
    if (!args.out.empty()) {
        spec.out = args.out;
    }
    if (args.threads > 0) {
        spec.threads = args.threads;
    }

    data::Dataset ds = load_dataset_checked(spec.data);
    if (spec.limit > 0 && static_cast<std::size_t>(spec.limit) < ds.examples.size()) {
        ds.examples.resize(static_cast<std::size_t>(spec.limit));
    }

    // Load every referenced checkpoint once.
    std::map<std::string, std::unique_ptr<models::Classifier>> cache;
    auto model_for = [&cache](const std::string& ckpt) -> const models::Classifier* {
        auto it = cache.find(ckpt);
        if (it == cache.end()) {
            it = cache.emplace(ckpt, models::load_model(ckpt)).first;
        }
        return it->second.get();
    };

    report::MatrixJob job;
    for (const auto& [name, ckpt] : spec.sources) {
        job.sources.emplace_back(name, model_for(ckpt));
    }
    for (const auto& [name, ckpt] : spec.targets) {
        job.targets.emplace_back(name, model_for(ckpt));
    }
    for (const std::string& p : spec.attack_paths) {
        attack::AttackConfig cfg = attack::load_attack_config(p);
        if (cfg.name.empty() || cfg.name == "attack") {
            cfg.name = fs::path(p).stem().string();
        }
        job.attacks.push_back(std::move(cfg));
    }
    job.dataset = &ds;
    job.policy = spec.policy;
    job.threads = spec.threads;

    std::vector<report::EvalReport> per_seed;
    for (const std::uint64_t seed : spec.seeds) {
        job.base_seed = seed;
        report::EvalReport rep = report::run_matrix(job);
        const std::string stem = spec.out + "_seed" + std::to_string(seed);
        write_text_file(stem + ".csv", report::to_csv(rep));
        write_text_file(stem + ".md", report::to_markdown(rep));
        std::printf("seed %llu report: %s.csv\n",
                    static_cast<unsigned long long>(seed), stem.c_str());
        per_seed.push_back(std::move(rep));
    }
    const report::EvalReport pooled = report::pool_reports(per_seed);
    write_text_file(spec.out + "_mean.csv", report::to_csv(pooled));
    write_text_file(spec.out + "_mean.md", report::to_markdown(pooled));
    std::printf("pooled report over %zu seeds: %s_mean.csv\n", per_seed.size(),
                spec.out.c_str());
    std::fputs(report::to_markdown(pooled).c_str(), stdout);
    return 0;
}

// ---------------------------------------------------------------- gradcheck

struct GradcheckArgs {
    std::string model;
    std::string arch;
    int trials = 10;
    int coords = 100;
    // Small enough that the interval [x - h, x + h] almost never straddles a
    // relu or pooling boundary, while central-difference roundoff stays four
    // orders of magnitude below the pass threshold.
    double step = 1e-6;
    std::uint64_t seed = 0;
};

int run_gradcheck(const CLI::App* sub, GradcheckArgs& args) {
    args.seed = resolve_seed(sub, args.seed, 0);
    std::unique_ptr<models::Classifier> model;
    if (!args.model.empty()) {
        model = models::load_model(args.model);
    } else if (!args.arch.empty()) {
        model = models::make_model(args.arch, args.seed);
    } else {
        throw std::runtime_error("gradcheck needs --model or --arch");
    }
    Rng rng(child_seed(args.seed, 7));
    double worst = 0.0;
    for (int trial = 0; trial < args.trials; ++trial) {
        ImageTensor x(model->input_size(), model->input_size(),
                      model->input_channels());
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] = rng.next_double();
        }
        const int y = uniform_int(rng, 0, model->num_classes());
        const ImageTensor analytic =
            models::loss_and_input_gradient(*model, x, y).second;
        const ImageTensor reference = oracle::finite_diff_grad(*model, x, y, args.step);
        for (int k = 0; k < args.coords; ++k) {
            const std::size_t i = static_cast<std::size_t>(
                uniform_int(rng, 0, static_cast<int>(x.size())));
            const double denom = std::max(std::abs(reference[i]), 0.01);
            worst = std::max(worst, std::abs(analytic[i] - reference[i]) / denom);
        }
    }
    std::printf("gradcheck %s: max relative error %.3e over %d trials x %d coords\n",
                model->descriptor().c_str(), worst, args.trials, args.coords);
    return worst < 1e-4 ? 0 : 1;
}

// -------------------------------------------------------------- viz-stripes

struct VizStripesArgs {
    std::string model;
    std::string data;
    int index = 0;
    std::vector<int> scales;
    std::uint64_t seed = 0;
    std::string out = "stripes";
};

int run_viz_stripes(const CLI::App* sub, VizStripesArgs& args) {
    args.seed = resolve_seed(sub, args.seed, 0);
    const std::unique_ptr<models::Classifier> model = models::load_model(args.model);
    const data::Dataset ds = load_dataset_checked(args.data);
    if (args.index < 0 || static_cast<std::size_t>(args.index) >= ds.examples.size()) {
        throw std::runtime_error("example index out of range");
    }
    const models::LabeledExample& ex = ds.examples[static_cast<std::size_t>(args.index)];
    if (const fs::path parent = fs::path(args.out).parent_path(); !parent.empty()) {
        fs::create_directories(parent);
    }
    for (const int scale : args.scales) {
        const std::string path = args.out + "_s" + std::to_string(scale) + ".pgm";
        const viz::StripeImage si = viz::visualize_gradient_stripes(
            *model, ex.image, ex.label, scale, args.seed, path);
        std::printf("scale %d: %d zero rows, %d zero cols -> %s\n", scale,
                    si.zero_rows, si.zero_cols, path.c_str());
    }
    return 0;
}

// -------------------------------------------------------------- viz-perturb

struct VizPerturbArgs {
    std::string model;
    std::string data;
    std::string config;
    int index = 0;
    std::uint64_t seed = 0;
    std::string out = "perturb";
};

int run_viz_perturb(const CLI::App* sub, VizPerturbArgs& args) {
    const std::unique_ptr<models::Classifier> model = models::load_model(args.model);
    const data::Dataset ds = load_dataset_checked(args.data);
    if (args.index < 0 || static_cast<std::size_t>(args.index) >= ds.examples.size()) {
        throw std::runtime_error("example index out of range");
    }
    const models::LabeledExample& ex = ds.examples[static_cast<std::size_t>(args.index)];
    attack::AttackConfig cfg = attack::load_attack_config(args.config);
    cfg.seed = resolve_seed(sub, args.seed, cfg.seed);
    cfg.record_snapshots = true;
    const attack::AttackResult res = attack::run_attack(*model, ex.image, ex.label, cfg);
    const std::vector<std::string> files =
        viz::visualize_perturbation(res.trace, ex.image, cfg.eps, args.out, cfg.name);
    for (std::size_t t = 0; t < files.size(); ++t) {
        std::printf("iter %zu: loss %.4f, |delta|_inf %.6f -> %s\n", t + 1,
                    res.trace.iterations[t].loss, res.trace.iterations[t].pert_linf,
                    files[t].c_str());
    }
    return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"Gradient-based adversarial attack pipeline: toy models, "
                 "transferable attacks, evaluation matrices and visualizers"};
    app.require_subcommand(1);

    GenDataArgs gen_args;
    CLI::App* gen = app.add_subcommand("gen-data", "Generate the synthetic dataset");
    gen->add_option("--out", gen_args.out, "Output directory")->required();
    gen->add_option("--seed", gen_args.seed, "Generator seed");
    gen->add_option("--train-per-class", gen_args.train_per_class,
                    "Training examples per class");
    gen->add_option("--test-per-class", gen_args.test_per_class,
                    "Held-out examples per class");
    gen->add_option("--size", gen_args.size, "Image side length");
    gen->add_option("--classes", gen_args.classes, "Number of classes");

    TrainArgs train_args;
    CLI::App* train = app.add_subcommand("train", "Train a model and save a checkpoint");
    train->add_option("--data", train_args.data, "Training manifest")->required();
    train->add_option("--arch", train_args.arch,
                      "Architecture descriptor, e.g. 'cnn 16 1 10 8 16'")
        ->required();
    train->add_option("--out", train_args.out, "Checkpoint output path")->required();
    train->add_option("--eval", train_args.eval, "Optional held-out manifest");
    train->add_option("--epochs", train_args.epochs, "Training epochs");
    train->add_option("--lr", train_args.lr, "Learning rate");
    train->add_option("--batch", train_args.batch, "Batch size");
    train->add_option("--seed", train_args.seed, "Init/shuffle seed");

    AttackArgs attack_args;
    CLI::App* atk = app.add_subcommand("attack", "Run one attack config white-box");
    atk->add_option("--model", attack_args.model, "Source checkpoint")->required();
    atk->add_option("--data", attack_args.data, "Dataset manifest")->required();
    atk->add_option("--config", attack_args.config, "Attack config file")->required();
    atk->add_option("--out", attack_args.out, "Directory for adversarial tensors");
    atk->add_option("--seed", attack_args.seed, "Base seed (else config/env)");
    atk->add_option("--limit", attack_args.limit, "Use only the first N examples");

    MatrixArgs matrix_args;
    CLI::App* mtx = app.add_subcommand(
        "matrix", "Run a source x attack x target experiment matrix");
    mtx->add_option("--config", matrix_args.config, "Experiment config file")
        ->required();
    mtx->add_option("--out", matrix_args.out, "Report path prefix (overrides config)");
    mtx->add_option("--threads", matrix_args.threads,
                    "Worker threads (overrides config)");

    GradcheckArgs grad_args;
    CLI::App* grd = app.add_subcommand(
        "gradcheck", "Compare analytic gradients against finite differences");
    grd->add_option("--model", grad_args.model, "Checkpoint to check");
    grd->add_option("--arch", grad_args.arch, "Fresh architecture to check");
    grd->add_option("--trials", grad_args.trials, "Random trials");
    grd->add_option("--coords", grad_args.coords, "Coordinates per trial");
    grd->add_option("--step", grad_args.step, "Finite-difference step");
    grd->add_option("--seed", grad_args.seed, "Trial seed");

    VizStripesArgs stripes_args;
    CLI::App* vzs = app.add_subcommand(
        "viz-stripes", "Render the diversity transform's reachable-gradient image");
    vzs->add_option("--model", stripes_args.model, "Checkpoint")->required();
    vzs->add_option("--data", stripes_args.data, "Dataset manifest")->required();
    vzs->add_option("--index", stripes_args.index, "Example index");
    vzs->add_option("--scales", stripes_args.scales, "Canvas sides to render")
        ->required()
        ->delimiter(',');
    vzs->add_option("--seed", stripes_args.seed, "Draw seed (shared across scales)");
    vzs->add_option("--out", stripes_args.out, "Output path prefix");

    VizPerturbArgs perturb_args;
    CLI::App* vzp = app.add_subcommand(
        "viz-perturb", "Render per-iteration perturbation images for one attack");
    vzp->add_option("--model", perturb_args.model, "Checkpoint")->required();
    vzp->add_option("--data", perturb_args.data, "Dataset manifest")->required();
    vzp->add_option("--config", perturb_args.config, "Attack config file")->required();
    vzp->add_option("--index", perturb_args.index, "Example index");
    vzp->add_option("--seed", perturb_args.seed, "Attack seed (else config/env)");
    vzp->add_option("--out", perturb_args.out, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) {
            return app.exit(e);  // --help and friends
        }
        app.exit(e);  // prints the diagnostic and usage hint to stderr
        return 2;
    }

    try {
        if (gen->parsed()) {
            return run_gen_data(gen, gen_args);
        }
        if (train->parsed()) {
            return run_train(train, train_args);
        }
        if (atk->parsed()) {
            return run_attack_cmd(atk, attack_args);
        }
        if (mtx->parsed()) {
            return run_matrix_cmd(matrix_args);
        }
        if (grd->parsed()) {
            return run_gradcheck(grd, grad_args);
        }
        if (vzs->parsed()) {
            return run_viz_stripes(vzs, stripes_args);
        }
        if (vzp->parsed()) {
            return run_viz_perturb(vzp, perturb_args);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    std::cerr << "error: no subcommand selected\n";
    return 2;
}

}  // namespace advpipe::cli
