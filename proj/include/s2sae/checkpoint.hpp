// include/s2sae/checkpoint.hpp
//
// Checkpoint container ("S2SC1"): architecture spec as canonical JSON,
// epoch number, RNG seed, then each named parameter as name, shape and
// little-endian 32-bit floats. Round-trips are bit-exact. Optimiser
// moments ride along as extra arrays under "opt/" so training can resume
// exactly; model loading ignores them.

#ifndef S2SAE_CHECKPOINT_HPP
#define S2SAE_CHECKPOINT_HPP

#include <cstdint>
#include <string>

#include "s2sae/model_spec.hpp"
#include "s2sae/param_set.hpp"

namespace s2sae {

struct Checkpoint {
  ModelSpec spec;
  std::uint32_t epoch = 0;
  std::uint64_t seed = 0;
  ParamSet<float> params;  // may include opt/ arrays

  // Model parameters only (opt/ arrays stripped).
  ParamSet<float> model_params() const;
};

void write_checkpoint(const std::string& path, const Checkpoint& ckpt);
Checkpoint read_checkpoint(const std::string& path);

}  // namespace s2sae

#endif  // S2SAE_CHECKPOINT_HPP
