#ifndef FND_CHECKPOINT_HPP
#define FND_CHECKPOINT_HPP

#include <string>
#include <utility>
#include <vector>

#include "fnd/models.hpp"
#include "fnd/tensor.hpp"

namespace fnd {

// Versioned binary checkpoint: a self-describing header (model spec line,
// dtype) followed by parameter blobs in declaration order, little-endian.
// Byte-stable for identical parameters.
void save_checkpoint(const std::string& path, const ModelSpec& spec, Model<float>& model);

struct Checkpoint {
    ModelSpec spec;
    std::vector<std::pair<std::string, Tensor<float>>> params;
};

Checkpoint load_checkpoint(const std::string& path);

// Copies checkpoint parameters into a freshly built model (shape-checked).
void restore_params(Model<float>& model, const Checkpoint& ckpt);

} // namespace fnd

#endif
