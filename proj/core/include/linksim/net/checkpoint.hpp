#pragma once

#include <iosfwd>
#include <string>

#include "linksim/net/model.hpp"

namespace linksim::net {

// Binary checkpoint, little-endian regardless of host:
//   magic "LSIMDNET", u32 version, u8 head kind, string modulation name,
//   u32 k, u32 hidden_channels, u32 hidden_kernel, u32 n_hidden_blocks,
//   u32 layer count, then per-layer records:
//     u8 kind (0 deconv, 1 conv, 2 bn), u32 dim count, u32 dims...,
//     float32 arrays — weights+bias for (de)conv; gamma, beta,
//     running_mean, running_var and u64 batches_seen for bn.
// Round-trips are bit-exact: save(load(save(m))) == save(m).
inline constexpr char kCheckpointMagic[8] = {'L', 'S', 'I', 'M', 'D', 'N', 'E', 'T'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

void save_checkpoint(DemodNetModel& model, std::ostream& os);
void save_checkpoint(DemodNetModel& model, const std::string& path);

DemodNetModel load_checkpoint(std::istream& is);
DemodNetModel load_checkpoint(const std::string& path);

// Header-only peek for `info` and error messages.
ModelConfig read_checkpoint_config(const std::string& path);

} // namespace linksim::net
