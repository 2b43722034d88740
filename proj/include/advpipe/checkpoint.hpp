#ifndef ADVPIPE_CHECKPOINT_HPP
#define ADVPIPE_CHECKPOINT_HPP

#include <memory>
#include <string>

#include "advpipe/classifier.hpp"

namespace advpipe::models {

/// Writes the model to a binary checkpoint (magic "ADVM", format version,
/// architecture descriptor, then each parameter tensor with explicit shape
/// and 64-bit little-endian float payload).
void save_model(const std::string& path, const Classifier& model);

/// Reconstructs a model from a checkpoint written by save_model. Throws on
/// missing file, bad magic, unknown version or shape mismatches.
std::unique_ptr<Classifier> load_model(const std::string& path);

}  // namespace advpipe::models

#endif
