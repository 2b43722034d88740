#ifndef ADVPIPE_TENSOR_FILE_HPP
#define ADVPIPE_TENSOR_FILE_HPP

#include <string>

#include "advpipe/tensor.hpp"

namespace advpipe {

/// Writes an H x W x C tensor to a small binary container: magic "ATNS",
/// a version byte, a rank byte, 32-bit little-endian dims, then the payload
/// as 32-bit IEEE-754 little-endian floats in row-major order. Values are
/// narrowed to float on write, so callers should store float-exact data
/// (pixel images are) when bit-exact round-trips matter.
void save_tensor(const std::string& path, const ImageTensor& t);

/// Reads a tensor written by save_tensor. Throws on missing file, bad
/// magic, unsupported version/rank or truncated payload.
ImageTensor load_tensor(const std::string& path);

}  // namespace advpipe

#endif
