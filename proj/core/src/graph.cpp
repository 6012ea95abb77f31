#include "asrnn/graph.hpp"

#include <algorithm>
#include <cmath>

#include "asrnn/errors.hpp"

namespace asrnn {

namespace {

void check_same_shape(const char* op, const Tensor& a, const Tensor& b) {
  if (!a.same_shape(b)) {
    throw ShapeError(std::string(op) + ": operand shapes differ, " +
                     a.shape_str() + " vs " + b.shape_str());
  }
}

double stable_sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  double e = std::exp(x);
  return e / (1.0 + e);
}

// out[p] += M[p x q] * v[q]
void matvec_acc(const double* m, const double* v, double* out, std::size_t p,
                std::size_t q) {
  for (std::size_t i = 0; i < p; ++i) {
    const double* row = m + i * q;
    double acc = 0.0;
    for (std::size_t k = 0; k < q; ++k) acc += row[k] * v[k];
    out[i] += acc;
  }
}

// out[q] += M^T[q x p] * v[p]   (M is p x q row-major)
void matvec_t_acc(const double* m, const double* v, double* out, std::size_t p,
                  std::size_t q) {
  for (std::size_t i = 0; i < p; ++i) {
    const double* row = m + i * q;
    const double vi = v[i];
    for (std::size_t k = 0; k < q; ++k) out[k] += vi * row[k];
  }
}

}  // namespace

Graph::Graph(std::size_t reserve_nodes, bool recording) : recording_(recording) {
  if (reserve_nodes) nodes_.reserve(reserve_nodes);
}

Var Graph::make(Tensor value, bool requires_grad, Parameter* bound) {
  auto n = std::make_unique<Node>();
  n->value = std::move(value);
  n->requires_grad = requires_grad;
  n->bound = bound;
  Node* raw = n.get();
  nodes_.push_back(std::move(n));
  return Var(raw);
}

void Graph::set_backprop(Var v, std::function<void()> fn) {
  if (recording_ && v.node_->requires_grad) v.node_->backprop = std::move(fn);
}

Var Graph::constant(Tensor v) { return make(std::move(v), false); }

Var Graph::constant_scalar(double v) { return make(Tensor::scalar(v), false); }

Var Graph::leaf(Tensor v, bool requires_grad) {
  return make(std::move(v), requires_grad);
}

Var Graph::param(Parameter& p) {
  Var v = make(p.value, true, &p);
  Node* n = v.node_;
  Parameter* pp = &p;
  set_backprop(v, [n, pp]() {
    double* g = pp->grad.data.data();
    const double* ng = n->grad.data.data();
    for (std::size_t i = 0; i < pp->grad.data.size(); ++i) g[i] += ng[i];
  });
  return v;
}

Var Graph::matmul(Var a, Var b) {
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  if (av.rank() != 2 || (bv.rank() != 2 && bv.rank() != 1)) {
    throw ShapeError("matmul: expects [p x q] lhs and [q x r] or [q] rhs, got " +
                     av.shape_str() + " and " + bv.shape_str());
  }
  const std::size_t p = av.shape[0], q = av.shape[1];
  if (bv.shape[0] != q) {
    throw ShapeError("matmul: inner dimensions disagree, " + av.shape_str() +
                     " vs " + bv.shape_str());
  }
  const bool vec = bv.rank() == 1;
  const std::size_t r = vec ? 1 : bv.shape[1];

  Tensor out = vec ? Tensor::zeros({p}) : Tensor::zeros({p, r});
  const double* ad = av.data.data();
  const double* bd = bv.data.data();
  double* od = out.data.data();
  if (vec) {
    for (std::size_t i = 0; i < p; ++i) {
      const double* row = ad + i * q;
      double acc = 0.0;
      for (std::size_t k = 0; k < q; ++k) acc += row[k] * bd[k];
      od[i] = acc;
    }
  } else {
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t k = 0; k < q; ++k) {
        const double aik = ad[i * q + k];
        const double* brow = bd + k * r;
        double* orow = od + i * r;
        for (std::size_t j = 0; j < r; ++j) orow[j] += aik * brow[j];
      }
  }

  Var v = make(std::move(out), a.requires_grad() || b.requires_grad());
  Node* an = a.node_;
  Node* bn = b.node_;
  Node* on = v.node_;
  set_backprop(v, [an, bn, on, p, q, r, vec]() {
    const double* g = on->grad.data.data();
    if (an->requires_grad) {
      // dA = G * B^T
      double* ga = an->grad.data.data();
      const double* bd2 = bn->value.data.data();
      if (vec) {
        for (std::size_t i = 0; i < p; ++i) {
          const double gi = g[i];
          double* row = ga + i * q;
          for (std::size_t k = 0; k < q; ++k) row[k] += gi * bd2[k];
        }
      } else {
        for (std::size_t i = 0; i < p; ++i)
          for (std::size_t k = 0; k < q; ++k) {
            double acc = 0.0;
            const double* grow = g + i * r;
            const double* brow = bd2 + k * r;
            for (std::size_t j = 0; j < r; ++j) acc += grow[j] * brow[j];
            ga[i * q + k] += acc;
          }
      }
    }
    if (bn->requires_grad) {
      // dB = A^T * G
      double* gb = bn->grad.data.data();
      const double* ad2 = an->value.data.data();
      if (vec) {
        matvec_t_acc(ad2, g, gb, p, q);
      } else {
        for (std::size_t k = 0; k < q; ++k)
          for (std::size_t i = 0; i < p; ++i) {
            const double aik = ad2[i * q + k];
            const double* grow = g + i * r;
            double* brow = gb + k * r;
            for (std::size_t j = 0; j < r; ++j) brow[j] += aik * grow[j];
          }
      }
    }
  });
  return v;
}

Var Graph::add(Var a, Var b) {
  check_same_shape("add", a.value(), b.value());
  Tensor out = a.value();
  const double* bd = b.value().data.data();
  for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] += bd[i];
  Var v = make(std::move(out), a.requires_grad() || b.requires_grad());
  Node* an = a.node_;
  Node* bn = b.node_;
  Node* on = v.node_;
  set_backprop(v, [an, bn, on]() {
    const double* g = on->grad.data.data();
    const std::size_t n = on->grad.data.size();
    if (an->requires_grad) {
      double* ga = an->grad.data.data();
      for (std::size_t i = 0; i < n; ++i) ga[i] += g[i];
    }
    if (bn->requires_grad) {
      double* gb = bn->grad.data.data();
      for (std::size_t i = 0; i < n; ++i) gb[i] += g[i];
    }
  });
  return v;
}

Var Graph::sub(Var a, Var b) {
  check_same_shape("sub", a.value(), b.value());
  Tensor out = a.value();
  const double* bd = b.value().data.data();
  for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] -= bd[i];
  Var v = make(std::move(out), a.requires_grad() || b.requires_grad());
  Node* an = a.node_;
  Node* bn = b.node_;
  Node* on = v.node_;
  set_backprop(v, [an, bn, on]() {
    const double* g = on->grad.data.data();
    const std::size_t n = on->grad.data.size();
    if (an->requires_grad) {
      double* ga = an->grad.data.data();
      for (std::size_t i = 0; i < n; ++i) ga[i] += g[i];
    }
    if (bn->requires_grad) {
      double* gb = bn->grad.data.data();
      for (std::size_t i = 0; i < n; ++i) gb[i] -= g[i];
    }
  });
  return v;
}

Var Graph::hadamard(Var a, Var b) {
  check_same_shape("hadamard", a.value(), b.value());
  Tensor out = a.value();
  const double* bd = b.value().data.data();
  for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] *= bd[i];
  Var v = make(std::move(out), a.requires_grad() || b.requires_grad());
  Node* an = a.node_;
  Node* bn = b.node_;
  Node* on = v.node_;
  set_backprop(v, [an, bn, on]() {
    const double* g = on->grad.data.data();
    const std::size_t n = on->grad.data.size();
    if (an->requires_grad) {
      double* ga = an->grad.data.data();
      const double* bd2 = bn->value.data.data();
      for (std::size_t i = 0; i < n; ++i) ga[i] += g[i] * bd2[i];
    }
    if (bn->requires_grad) {
      double* gb = bn->grad.data.data();
      const double* ad2 = an->value.data.data();
      for (std::size_t i = 0; i < n; ++i) gb[i] += g[i] * ad2[i];
    }
  });
  return v;
}

Var Graph::sigmoid(Var x) {
  Tensor out = x.value();
  for (double& v : out.data) v = stable_sigmoid(v);
  Var v = make(std::move(out), x.requires_grad());
  Node* xn = x.node_;
  Node* on = v.node_;
  set_backprop(v, [xn, on]() {
    if (!xn->requires_grad) return;
    const double* g = on->grad.data.data();
    const double* y = on->value.data.data();
    double* gx = xn->grad.data.data();
    for (std::size_t i = 0; i < on->grad.data.size(); ++i)
      gx[i] += g[i] * y[i] * (1.0 - y[i]);
  });
  return v;
}

Var Graph::tanh(Var x) {
  Tensor out = x.value();
  for (double& v : out.data) v = std::tanh(v);
  Var v = make(std::move(out), x.requires_grad());
  Node* xn = x.node_;
  Node* on = v.node_;
  set_backprop(v, [xn, on]() {
    if (!xn->requires_grad) return;
    const double* g = on->grad.data.data();
    const double* y = on->value.data.data();
    double* gx = xn->grad.data.data();
    for (std::size_t i = 0; i < on->grad.data.size(); ++i)
      gx[i] += g[i] * (1.0 - y[i] * y[i]);
  });
  return v;
}

Var Graph::exp(Var x) {
  Tensor out = x.value();
  for (double& v : out.data) v = std::exp(v);
  Var v = make(std::move(out), x.requires_grad());
  Node* xn = x.node_;
  Node* on = v.node_;
  set_backprop(v, [xn, on]() {
    if (!xn->requires_grad) return;
    const double* g = on->grad.data.data();
    const double* y = on->value.data.data();
    double* gx = xn->grad.data.data();
    for (std::size_t i = 0; i < on->grad.data.size(); ++i) gx[i] += g[i] * y[i];
  });
  return v;
}

Var Graph::log(Var x) {
  Tensor out = x.value();
  for (double& v : out.data) {
    if (v <= 0.0)
      throw DomainError("log: nonpositive input " + std::to_string(v));
    v = std::log(v);
  }
  Var v = make(std::move(out), x.requires_grad());
  Node* xn = x.node_;
  Node* on = v.node_;
  set_backprop(v, [xn, on]() {
    if (!xn->requires_grad) return;
    const double* g = on->grad.data.data();
    const double* xv = xn->value.data.data();
    double* gx = xn->grad.data.data();
    for (std::size_t i = 0; i < on->grad.data.size(); ++i) gx[i] += g[i] / xv[i];
  });
  return v;
}

Var Graph::neg(Var x) { return scale(x, -1.0); }

Var Graph::scale(Var x, double c) {
  Tensor out = x.value();
  for (double& v : out.data) v *= c;
  Var v = make(std::move(out), x.requires_grad());
  Node* xn = x.node_;
  Node* on = v.node_;
  set_backprop(v, [xn, on, c]() {
    if (!xn->requires_grad) return;
    const double* g = on->grad.data.data();
    double* gx = xn->grad.data.data();
    for (std::size_t i = 0; i < on->grad.data.size(); ++i) gx[i] += c * g[i];
  });
  return v;
}

Var Graph::affine_const(Var x, double a, Tensor c) {
  check_same_shape("affine_const", x.value(), c);
  Tensor out = x.value();
  for (std::size_t i = 0; i < out.data.size(); ++i)
    out.data[i] = a * out.data[i] + c.data[i];
  Var v = make(std::move(out), x.requires_grad());
  Node* xn = x.node_;
  Node* on = v.node_;
  set_backprop(v, [xn, on, a]() {
    if (!xn->requires_grad) return;
    const double* g = on->grad.data.data();
    double* gx = xn->grad.data.data();
    for (std::size_t i = 0; i < on->grad.data.size(); ++i) gx[i] += a * g[i];
  });
  return v;
}

Var Graph::softmax(Var x) {
  if (x.value().rank() != 1)
    throw ShapeError("softmax: expects a rank-1 tensor, got " +
                     x.value().shape_str());
  Tensor out = softmax_values(x.value());
  Var v = make(std::move(out), x.requires_grad());
  Node* xn = x.node_;
  Node* on = v.node_;
  set_backprop(v, [xn, on]() {
    if (!xn->requires_grad) return;
    const double* g = on->grad.data.data();
    const double* y = on->value.data.data();
    double* gx = xn->grad.data.data();
    const std::size_t n = on->grad.data.size();
    double dot = 0.0;
    for (std::size_t i = 0; i < n; ++i) dot += g[i] * y[i];
    for (std::size_t i = 0; i < n; ++i) gx[i] += y[i] * (g[i] - dot);
  });
  return v;
}

Var Graph::log_softmax(Var x) {
  if (x.value().rank() != 1)
    throw ShapeError("log_softmax: expects a rank-1 tensor, got " +
                     x.value().shape_str());
  const Tensor& xv = x.value();
  double mx = xv.data[0];
  for (double v : xv.data) mx = std::max(mx, v);
  double sum = 0.0;
  for (double v : xv.data) sum += std::exp(v - mx);
  const double lse = mx + std::log(sum);
  Tensor out = xv;
  for (double& v : out.data) v -= lse;
  Var v = make(std::move(out), x.requires_grad());
  Node* xn = x.node_;
  Node* on = v.node_;
  set_backprop(v, [xn, on]() {
    if (!xn->requires_grad) return;
    const double* g = on->grad.data.data();
    const double* ls = on->value.data.data();
    double* gx = xn->grad.data.data();
    const std::size_t n = on->grad.data.size();
    double gsum = 0.0;
    for (std::size_t i = 0; i < n; ++i) gsum += g[i];
    for (std::size_t i = 0; i < n; ++i) gx[i] += g[i] - std::exp(ls[i]) * gsum;
  });
  return v;
}

Var Graph::cross_entropy(Var logits, std::size_t target) {
  const Tensor& z = logits.value();
  if (z.rank() != 1)
    throw ShapeError("cross_entropy: expects rank-1 logits, got " +
                     z.shape_str());
  if (target >= z.numel())
    throw UsageError("cross_entropy: target " + std::to_string(target) +
                     " out of range for " + std::to_string(z.numel()) +
                     " classes");
  double mx = z.data[0];
  for (double v : z.data) mx = std::max(mx, v);
  double sum = 0.0;
  for (double v : z.data) sum += std::exp(v - mx);
  const double lse = mx + std::log(sum);
  Var v = make(Tensor::scalar(lse - z.data[target]), logits.requires_grad());
  Node* zn = logits.node_;
  Node* on = v.node_;
  set_backprop(v, [zn, on, target]() {
    if (!zn->requires_grad) return;
    const double g = on->grad.data[0];
    const Tensor p = softmax_values(zn->value);
    double* gz = zn->grad.data.data();
    for (std::size_t i = 0; i < p.data.size(); ++i) {
      double d = p.data[i] - (i == target ? 1.0 : 0.0);
      gz[i] += g * d;
    }
  });
  return v;
}

Var Graph::sum(Var x) {
  double acc = 0.0;
  for (double v : x.value().data) acc += v;
  Var v = make(Tensor::scalar(acc), x.requires_grad());
  Node* xn = x.node_;
  Node* on = v.node_;
  set_backprop(v, [xn, on]() {
    if (!xn->requires_grad) return;
    const double g = on->grad.data[0];
    double* gx = xn->grad.data.data();
    for (std::size_t i = 0; i < xn->grad.data.size(); ++i) gx[i] += g;
  });
  return v;
}

Var Graph::straight_through_onehot(Var y) {
  if (y.value().rank() != 1)
    throw ShapeError("straight_through_onehot: expects rank-1, got " +
                     y.value().shape_str());
  Tensor out = Tensor::one_hot(y.value().numel(), argmax_index(y.value()));
  Var v = make(std::move(out), y.requires_grad());
  Node* yn = y.node_;
  Node* on = v.node_;
  set_backprop(v, [yn, on]() {
    if (!yn->requires_grad) return;
    const double* g = on->grad.data.data();
    double* gy = yn->grad.data.data();
    for (std::size_t i = 0; i < on->grad.data.size(); ++i) gy[i] += g[i];
  });
  return v;
}

void Graph::backward(Var loss) {
  if (!recording_)
    throw UsageError("backward: graph was built in forward-only mode");
  if (!loss.valid() || loss.value().numel() != 1)
    throw UsageError("backward: loss must be a scalar node");
  for (auto& n : nodes_) {
    if (!n->requires_grad) continue;
    if (n->grad.data.size() != n->value.data.size())
      n->grad = Tensor::zeros(n->value.shape);
    else
      n->grad.fill(0.0);
  }
  if (!loss.node_->requires_grad) return;  // constant loss: all-zero gradients
  loss.node_->grad.data[0] = 1.0;
  for (std::size_t i = nodes_.size(); i-- > 0;) {
    Node* n = nodes_[i].get();
    if (n->requires_grad && n->backprop) n->backprop();
  }
}

Tensor softmax_values(const Tensor& x) {
  Tensor out = x;
  double mx = x.data[0];
  for (double v : x.data) mx = std::max(mx, v);
  double sum = 0.0;
  for (double& v : out.data) {
    v = std::exp(v - mx);
    sum += v;
  }
  for (double& v : out.data) v /= sum;
  return out;
}

std::size_t argmax_index(const Tensor& x) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < x.data.size(); ++i)
    if (x.data[i] > x.data[best]) best = i;
  return best;
}

}  // namespace asrnn
