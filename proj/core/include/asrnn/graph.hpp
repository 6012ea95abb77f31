#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "asrnn/tensor.hpp"

namespace asrnn {

class Graph;

// A trainable tensor with externally owned gradient storage. Backward
// passes accumulate (+=) into `grad`; the optimizer zeroes it between steps.
struct Parameter {
  std::string name;
  Tensor value;
  Tensor grad;

  Parameter() = default;
  Parameter(std::string n, Tensor v)
      : name(std::move(n)), value(std::move(v)) {
    grad = Tensor::zeros(value.shape);
  }
  void zero_grad() { grad.fill(0.0); }
};

struct Node {
  Tensor value;
  Tensor grad;
  bool requires_grad = false;
  Parameter* bound = nullptr;        // external accumulation target, leaves only
  std::function<void()> backprop;    // adds this node's grad into its parents'
};

// Cheap handle onto a node owned by a Graph.
class Var {
 public:
  Var() = default;
  const Tensor& value() const { return node_->value; }
  const Tensor& grad() const { return node_->grad; }
  double scalar() const { return node_->value.data[0]; }
  bool requires_grad() const { return node_->requires_grad; }
  bool valid() const { return node_ != nullptr; }

 private:
  friend class Graph;
  explicit Var(Node* n) : node_(n) {}
  Node* node_ = nullptr;
};

// Dynamically recorded computation tape over dense tensors. Nodes are
// appended in creation order, which is a topological order by construction;
// backward() sweeps the tape in reverse. A graph and its nodes belong to a
// single thread; independent graphs may run concurrently.
class Graph {
 public:
  // `recording` off skips building backward closures (forward-only
  // evaluation); backward() is then unavailable.
  explicit Graph(std::size_t reserve_nodes = 0, bool recording = true);

  // leaves ------------------------------------------------------------
  Var constant(Tensor v);
  Var constant_scalar(double v);
  Var leaf(Tensor v, bool requires_grad = true);  // owned differentiable leaf
  Var param(Parameter& p);                        // bound to external storage

  // ops ----------------------------------------------------------------
  Var matmul(Var a, Var b);
  Var add(Var a, Var b);
  Var sub(Var a, Var b);
  Var hadamard(Var a, Var b);
  Var sigmoid(Var x);
  Var tanh(Var x);
  Var exp(Var x);
  Var log(Var x);
  Var neg(Var x);
  Var scale(Var x, double c);
  // Elementwise a*x + c for a constant tensor c (shape of x).
  Var affine_const(Var x, double a, Tensor c);
  Var softmax(Var x);      // rank-1
  Var log_softmax(Var x);  // rank-1, fused stable form
  Var cross_entropy(Var logits, std::size_t target);  // -> {1}
  Var sum(Var x);                                     // -> {1}
  // Forward: one-hot at argmax (ties to the smaller index).
  // Backward: identity (straight-through).
  Var straight_through_onehot(Var y);

  // Reverse sweep from a scalar node. Node gradients are zeroed first, so
  // repeated calls on the same tape are bit-identical; bound Parameter
  // gradients accumulate across calls until explicitly cleared.
  void backward(Var loss);

  std::size_t size() const { return nodes_.size(); }
  bool recording() const { return recording_; }

 private:
  Var make(Tensor value, bool requires_grad, Parameter* bound = nullptr);
  void set_backprop(Var v, std::function<void()> fn);

  std::vector<std::unique_ptr<Node>> nodes_;
  bool recording_;
};

// Non-graph helpers shared with evaluation paths.
Tensor softmax_values(const Tensor& x);
std::size_t argmax_index(const Tensor& x);  // ties to the smaller index

}  // namespace asrnn
