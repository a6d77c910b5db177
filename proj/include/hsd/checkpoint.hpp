#pragma once

#include <string>

#include "hsd/embedding.hpp"
#include "hsd/model.hpp"

namespace hsd {

// Model checkpoint, binary, little-endian.
//
//   magic   "HSDCKPT1" (8 bytes)
//   u32     format version (currently 1)
//   u32     embed_dim, u32 hidden, u32 layer count
//   u64     fallback hash seed, u32 fallback gram length
//   u32     head count, then per head: string task name,
//           u32 label count, then each label as a string
//   u64     scalar count
//   f64[]   scalars in the visit_tensors order
//
// Strings are u32 byte length + bytes. Scalars are written as f64 even when
// the build computes in f32, so files stay readable across builds.
struct Checkpoint {
    ModelParams model;
    CharFallbackConfig fallback;
};

void save_checkpoint(const std::string& path, const ModelParams& model,
                     const CharFallbackConfig& fallback);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace hsd
