#ifndef ADVPIPE_DATASET_HPP
#define ADVPIPE_DATASET_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "advpipe/classifier.hpp"

namespace advpipe::data {

/// In-memory dataset with its shape/class descriptor.
struct Dataset {
    int side = 0;
    int channels = 0;
    int classes = 0;
    std::vector<models::LabeledExample> examples;
};

/// Loads a manifest: first line `#descriptor,<side>,<side>,<channels>,<classes>`,
/// then one `path,label` row per example (paths relative to the manifest's
/// directory; '#' comment lines and blanks ignored). Every tensor is
/// validated against the descriptor; errors name the offending entry.
Dataset load_dataset(const std::string& manifest_path);

/// Writes a synthetic dataset under out_dir and returns the manifest path.
/// Classes are oriented sinusoidal gratings (one shared spatial frequency,
/// per-class orientation) with random per-example phase and pixel noise —
/// deterministic in `seed`, learnable by the small models, float-exact on
/// disk.
std::string make_toy_dataset(const std::string& out_dir, std::uint64_t seed,
                             int per_class, int side, int classes);

/// Order-sensitive FNV-1a digest of the descriptor, labels and float
/// payloads; pins generator determinism in tests.
std::uint64_t dataset_checksum(const Dataset& ds);

}  // namespace advpipe::data

#endif
