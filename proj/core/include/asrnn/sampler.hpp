#pragma once

#include <cstddef>

#include "asrnn/graph.hpp"
#include "asrnn/rng.hpp"
#include "asrnn/tensor.hpp"

namespace asrnn {

// Graph-bound sampler parameters for one sequence unroll:
// W [J x m], U [J x n], b [J].
struct SamplerVars {
  Var W, U, b;
};

// Context logits z_t = W h_{t-1} + U x_t + b. The sampler sees the raw
// frame x_t, not the scale-related input, so the logits do not depend on
// the scale they select.
Var scale_logits(Graph& g, const SamplerVars& s, Var h_prev, Var x_t);

// J i.i.d. Gumbel(0,1) draws.
Tensor gumbel_noise(std::size_t J, RngStream& rng);

// Gumbel-Softmax sample y = softmax((log pi + g) / tau) with pi =
// softmax(z). log pi is formed as z - logsumexp(z) in one fused op; the
// noise is a constant, so gradients flow to z only.
Var gm_sample(Graph& g, Var z, const Tensor& noise, double tau);

// Index of the largest entry; ties break toward the smaller scale.
std::size_t hard_scale(const Tensor& y);

}  // namespace asrnn
