#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "rampart/nn.hpp"
#include "rampart/tensor.hpp"

namespace rampart {

// Self-describing binary container for named tensors. Layout (little-endian):
//   magic "RPCK" | u32 version | u32 meta_count | meta entries (key, value as
//   length-prefixed strings) | u32 tensor_count | per tensor: name, u32 rank,
//   u64 dims, raw f64 payload.
// Round-trips are lossless: doubles are stored as their exact 64 bits.
struct Checkpoint {
  uint32_t version = 1;
  std::map<std::string, std::string> metadata;
  std::vector<std::pair<std::string, Tensor>> tensors;

  const Tensor& tensor(const std::string& name) const;
};

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::filesystem::path& path);

Checkpoint checkpoint_from_params(const ParamSet& params);
void params_from_checkpoint(const Checkpoint& ckpt, ParamSet& params);

}  // namespace rampart
