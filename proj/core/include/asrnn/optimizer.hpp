#pragma once

#include <cstddef>
#include <vector>

#include "asrnn/graph.hpp"

namespace asrnn {

struct RmsPropConfig {
  double lr = 1e-3;
  double decay = 0.9;   // rho
  double eps = 1e-8;
};

// RMSProp over a fixed parameter list:
//   v <- rho * v + (1 - rho) * g^2
//   p <- p - lr * g / (sqrt(v) + eps)
// A non-finite gradient aborts before any state is touched.
class RmsProp {
 public:
  RmsProp(std::vector<Parameter*> params, RmsPropConfig cfg);

  void step();
  void zero_grad();

  const Tensor& accumulator(std::size_t i) const { return accum_[i]; }
  const RmsPropConfig& config() const { return cfg_; }

 private:
  std::vector<Parameter*> params_;
  std::vector<Tensor> accum_;
  RmsPropConfig cfg_;
};

}  // namespace asrnn
