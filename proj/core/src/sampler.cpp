#include "asrnn/sampler.hpp"

#include <string>

#include "asrnn/errors.hpp"

namespace asrnn {

Var scale_logits(Graph& g, const SamplerVars& s, Var h_prev, Var x_t) {
  return g.add(g.add(g.matmul(s.W, h_prev), g.matmul(s.U, x_t)), s.b);
}

Tensor gumbel_noise(std::size_t J, RngStream& rng) {
  Tensor t = Tensor::zeros({J});
  for (std::size_t i = 0; i < J; ++i) t.data[i] = rng.gumbel();
  return t;
}

Var gm_sample(Graph& g, Var z, const Tensor& noise, double tau) {
  if (tau <= 0.0)
    throw DomainError("gm_sample: temperature must be positive, got " +
                      std::to_string(tau));
  // (log pi + g) / tau, with log pi = z - logsumexp(z)
  Tensor scaled_noise = noise;
  for (double& v : scaled_noise.data) v /= tau;
  Var perturbed = g.affine_const(g.log_softmax(z), 1.0 / tau,
                                 std::move(scaled_noise));
  return g.softmax(perturbed);
}

std::size_t hard_scale(const Tensor& y) { return argmax_index(y); }

}  // namespace asrnn
