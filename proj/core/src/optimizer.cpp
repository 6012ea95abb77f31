#include "asrnn/optimizer.hpp"

#include <cmath>

#include "asrnn/errors.hpp"

namespace asrnn {

RmsProp::RmsProp(std::vector<Parameter*> params, RmsPropConfig cfg)
    : params_(std::move(params)), cfg_(cfg) {
  accum_.reserve(params_.size());
  for (Parameter* p : params_) accum_.push_back(Tensor::zeros(p->value.shape));
}

void RmsProp::step() {
  for (Parameter* p : params_)
    if (!p->grad.all_finite())
      throw NumericError("rmsprop: non-finite gradient in parameter " + p->name);

  for (std::size_t i = 0; i < params_.size(); ++i) {
    Parameter& p = *params_[i];
    double* v = accum_[i].data.data();
    double* w = p.value.data.data();
    const double* g = p.grad.data.data();
    for (std::size_t k = 0; k < p.value.data.size(); ++k) {
      v[k] = cfg_.decay * v[k] + (1.0 - cfg_.decay) * g[k] * g[k];
      w[k] -= cfg_.lr * g[k] / (std::sqrt(v[k]) + cfg_.eps);
    }
  }
}

void RmsProp::zero_grad() {
  for (Parameter* p : params_) p->zero_grad();
}

}  // namespace asrnn
