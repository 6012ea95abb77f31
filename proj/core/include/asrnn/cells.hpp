#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "asrnn/graph.hpp"
#include "asrnn/rng.hpp"
#include "asrnn/sampler.hpp"
#include "asrnn/tasks.hpp"
#include "asrnn/wavelet.hpp"

namespace asrnn {

enum class CellKind { Lstm, Gru };

// How the scale-related input is produced each step:
//   vanilla   - the raw frame, no convolution (conventional cell)
//   fixed(j)  - the scale-j convolution every step (SRNN baseline is J-1)
//   adaptive  - Gumbel-Softmax mixture over all J scales
struct ScaleMode {
  enum class Kind { Vanilla, Fixed, Adaptive };
  Kind kind = Kind::Vanilla;
  std::size_t fixed_scale = 0;

  static ScaleMode vanilla() { return {Kind::Vanilla, 0}; }
  static ScaleMode fixed(std::size_t j) { return {Kind::Fixed, j}; }
  static ScaleMode adaptive() { return {Kind::Adaptive, 0}; }
};

// Cell, head and (when adaptive) sampler parameters, in a fixed
// declaration order shared by the optimizer and checkpoint format.
// The sampler comes last so vanilla and adaptive models draw identical
// cell/head initializations from the same seed.
struct Model {
  CellKind cell = CellKind::Gru;
  ScaleMode mode;
  std::size_t hidden = 0;   // m
  std::size_t input = 0;    // n
  std::size_t scales = 1;   // J
  std::size_t classes = 0;  // C
  std::vector<Parameter> params;

  Parameter& p(std::string_view name);
  const Parameter& p(std::string_view name) const;
  std::vector<Parameter*> parameters();
  std::size_t param_count() const;  // total scalar weights
  void zero_grad();
};

// Glorot-uniform matrices, zero biases.
Model init_model(CellKind cell, ScaleMode mode, std::size_t m, std::size_t n,
                 std::size_t J, std::size_t classes, RngStream& rng);

struct StepTrace {
  std::size_t t = 0;
  std::size_t hard = 0;
  std::vector<double> y;
  std::vector<double> pi;  // filled only when requested
};

struct RunOptions {
  const WaveletBank* bank = nullptr;  // required unless vanilla
  double tau = 0.1;
  bool hard_forward = false;  // straight-through mixture
  bool argmax_scale = false;  // no noise; one-hot argmax of pi
  std::optional<std::size_t> force_scale;  // pin y to this one-hot
  const std::vector<Tensor>* fixed_noise = nullptr;  // per-step Gumbel draws
  RngStream* noise_rng = nullptr;
  bool collect_pi = false;
};

// Per-sequence graph bindings for the model parameters.
struct GateVars {
  Var W, U, b;
};
struct BoundModel {
  std::vector<GateVars> gates;  // lstm: f,i,o,g  gru: z,r,g
  Var head_W, head_b;
  SamplerVars sampler;
  bool has_sampler = false;
};

BoundModel bind_model(Graph& g, Model& model);

struct CellState {
  Var h;
  Var c;  // LSTM only
};

CellState zero_state(Graph& g, const Model& model);

struct StepResult {
  CellState state;
  StepTrace trace;
};

StepResult step_aslstm(Graph& g, const BoundModel& bound, const Model& model,
                       const TaskExample& ex, std::size_t t,
                       const CellState& state, const RunOptions& opt);
StepResult step_asgru(Graph& g, const BoundModel& bound, const Model& model,
                      const TaskExample& ex, std::size_t t,
                      const CellState& state, const RunOptions& opt);

struct SequenceRun {
  Var loss;  // mean cross entropy over loss-bearing steps, or the label CE
  std::vector<StepTrace> traces;
  std::size_t label_pred = 0;
  std::vector<std::uint16_t> step_preds;
  std::size_t masked_steps = 0;
  std::size_t masked_correct = 0;
};

// Unrolls the cell over the whole example, applies the linear head at the
// last step (sequence-label) or every step (per-step), and reduces the
// cross entropies per the example's mask.
SequenceRun run_sequence(Graph& g, Model& model, const TaskExample& ex,
                         const RunOptions& opt);

}  // namespace asrnn
