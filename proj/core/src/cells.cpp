#include "asrnn/cells.hpp"

#include <cmath>
#include <string>

#include "asrnn/errors.hpp"

namespace asrnn {

namespace {

Tensor glorot_uniform(std::size_t rows, std::size_t cols, RngStream& rng) {
  Tensor t = Tensor::zeros({rows, cols});
  const double bound = std::sqrt(6.0 / static_cast<double>(rows + cols));
  for (double& v : t.data) v = rng.uniform(-bound, bound);
  return t;
}

void add_gate(Model& model, const std::string& gate, std::size_t m,
              std::size_t n, RngStream& rng) {
  model.params.emplace_back("cell." + gate + ".W", glorot_uniform(m, m, rng));
  model.params.emplace_back("cell." + gate + ".U", glorot_uniform(m, n, rng));
  model.params.emplace_back("cell." + gate + ".b", Tensor::zeros({m}));
}

Var affine(Graph& g, const GateVars& gate, Var h_prev, Var x) {
  return g.add(g.add(g.matmul(gate.W, h_prev), g.matmul(gate.U, x)), gate.b);
}

// Builds the scale-related input for one step and records the selection.
Var scale_input(Graph& g, const BoundModel& bound, const Model& model,
                const TaskExample& ex, std::size_t t, Var h_prev,
                const RunOptions& opt, StepTrace& trace) {
  trace.t = t;
  const ScaleMode::Kind kind = model.mode.kind;

  if (kind == ScaleMode::Kind::Vanilla) {
    trace.hard = 0;
    trace.y = {1.0};
    Tensor frame = Tensor::zeros({model.input});
    const double* src = ex.frames.data() + t * ex.frame_dim;
    for (std::size_t d = 0; d < model.input; ++d) frame.data[d] = src[d];
    return g.constant(std::move(frame));
  }

  const WaveletBank& bank = *opt.bank;
  if (kind == ScaleMode::Kind::Fixed) {
    const std::size_t j = model.mode.fixed_scale;
    trace.hard = j;
    trace.y.assign(bank.num_scales, 0.0);
    trace.y[j] = 1.0;
    return g.constant(scaled_input_at(ex.frames, ex.frame_dim, t, j, bank));
  }

  // adaptive: logits from the raw frame, then a GM selection over all scales
  Tensor frame = Tensor::zeros({model.input});
  const double* src = ex.frames.data() + t * ex.frame_dim;
  for (std::size_t d = 0; d < model.input; ++d) frame.data[d] = src[d];
  Var x_raw = g.constant(std::move(frame));
  Var z = scale_logits(g, bound.sampler, h_prev, x_raw);
  if (opt.collect_pi) trace.pi = softmax_values(z.value()).data;

  const std::size_t J = bank.num_scales;
  Var y;
  if (opt.force_scale) {
    trace.hard = *opt.force_scale;
    y = g.constant(Tensor::one_hot(J, trace.hard));
  } else if (opt.argmax_scale) {
    trace.hard = argmax_index(softmax_values(z.value()));
    y = g.constant(Tensor::one_hot(J, trace.hard));
  } else {
    Tensor noise = opt.fixed_noise ? (*opt.fixed_noise)[t]
                                   : gumbel_noise(J, *opt.noise_rng);
    y = gm_sample(g, z, noise, opt.tau);
    trace.hard = hard_scale(y.value());
    if (opt.hard_forward) y = g.straight_through_onehot(y);
  }
  trace.y = y.value().data;

  // x_tilde = sum_j y_j * scaled_input(j), as a [n x J] constant times y
  Tensor rows = scaled_input_all(ex.frames, ex.frame_dim, t, bank);
  Tensor cols = Tensor::zeros({model.input, J});
  for (std::size_t j = 0; j < J; ++j)
    for (std::size_t d = 0; d < model.input; ++d)
      cols.at(d, j) = rows.at(j, d);
  return g.matmul(g.constant(std::move(cols)), y);
}

void check_run(const Model& model, const TaskExample& ex,
               const RunOptions& opt) {
  if (ex.length() == 0) throw UsageError("run_sequence: empty sequence");
  if (ex.frame_dim != model.input)
    throw ShapeError("run_sequence: frame dim " + std::to_string(ex.frame_dim) +
                     " does not match model input " +
                     std::to_string(model.input));
  if (model.mode.kind != ScaleMode::Kind::Vanilla) {
    if (opt.bank == nullptr)
      throw ConfigError("run_sequence: scale mode needs a wavelet bank");
    if (model.mode.kind == ScaleMode::Kind::Fixed &&
        model.mode.fixed_scale >= opt.bank->num_scales)
      throw ConfigError("run_sequence: fixed scale " +
                        std::to_string(model.mode.fixed_scale) +
                        " out of range [0, " +
                        std::to_string(opt.bank->num_scales) + ")");
    if (model.mode.kind == ScaleMode::Kind::Adaptive) {
      if (opt.bank->num_scales != model.scales)
        throw ConfigError("run_sequence: bank has " +
                          std::to_string(opt.bank->num_scales) +
                          " scales, model expects " +
                          std::to_string(model.scales));
      if (!opt.force_scale && !opt.argmax_scale && !opt.fixed_noise &&
          opt.noise_rng == nullptr)
        throw ConfigError("run_sequence: adaptive mode needs a noise source");
    }
  }
  if (ex.per_step) {
    if (ex.step_targets.size() != ex.length() || ex.mask.size() != ex.length())
      throw ShapeError("run_sequence: per-step targets/mask must cover every frame");
  }
}

}  // namespace

Parameter& Model::p(std::string_view name) {
  for (Parameter& q : params)
    if (q.name == name) return q;
  throw UsageError("Model: no parameter named " + std::string(name));
}

const Parameter& Model::p(std::string_view name) const {
  for (const Parameter& q : params)
    if (q.name == name) return q;
  throw UsageError("Model: no parameter named " + std::string(name));
}

std::vector<Parameter*> Model::parameters() {
  std::vector<Parameter*> out;
  out.reserve(params.size());
  for (Parameter& q : params) out.push_back(&q);
  return out;
}

std::size_t Model::param_count() const {
  std::size_t n = 0;
  for (const Parameter& q : params) n += q.value.numel();
  return n;
}

void Model::zero_grad() {
  for (Parameter& q : params) q.zero_grad();
}

Model init_model(CellKind cell, ScaleMode mode, std::size_t m, std::size_t n,
                 std::size_t J, std::size_t classes, RngStream& rng) {
  if (m < 1 || n < 1 || J < 1 || classes < 1)
    throw ConfigError("init_model: m, n, J and classes must all be >= 1");
  if (mode.kind == ScaleMode::Kind::Fixed && mode.fixed_scale >= J)
    throw ConfigError("init_model: fixed scale " +
                      std::to_string(mode.fixed_scale) + " out of range [0, " +
                      std::to_string(J) + ")");
  Model model;
  model.cell = cell;
  model.mode = mode;
  model.hidden = m;
  model.input = n;
  model.scales = J;
  model.classes = classes;

  if (cell == CellKind::Lstm) {
    for (const char* gate : {"f", "i", "o", "g"}) add_gate(model, gate, m, n, rng);
  } else {
    for (const char* gate : {"z", "r", "g"}) add_gate(model, gate, m, n, rng);
  }
  model.params.emplace_back("head.W", glorot_uniform(classes, m, rng));
  model.params.emplace_back("head.b", Tensor::zeros({classes}));
  if (mode.kind == ScaleMode::Kind::Adaptive) {
    model.params.emplace_back("sampler.W", glorot_uniform(J, m, rng));
    model.params.emplace_back("sampler.U", glorot_uniform(J, n, rng));
    model.params.emplace_back("sampler.b", Tensor::zeros({J}));
  }
  return model;
}

BoundModel bind_model(Graph& g, Model& model) {
  BoundModel b;
  const std::size_t ngates = model.cell == CellKind::Lstm ? 4 : 3;
  const char* lstm_names[] = {"f", "i", "o", "g"};
  const char* gru_names[] = {"z", "r", "g"};
  for (std::size_t i = 0; i < ngates; ++i) {
    const std::string gate =
        model.cell == CellKind::Lstm ? lstm_names[i] : gru_names[i];
    GateVars gv;
    gv.W = g.param(model.p("cell." + gate + ".W"));
    gv.U = g.param(model.p("cell." + gate + ".U"));
    gv.b = g.param(model.p("cell." + gate + ".b"));
    b.gates.push_back(gv);
  }
  b.head_W = g.param(model.p("head.W"));
  b.head_b = g.param(model.p("head.b"));
  if (model.mode.kind == ScaleMode::Kind::Adaptive) {
    b.sampler.W = g.param(model.p("sampler.W"));
    b.sampler.U = g.param(model.p("sampler.U"));
    b.sampler.b = g.param(model.p("sampler.b"));
    b.has_sampler = true;
  }
  return b;
}

CellState zero_state(Graph& g, const Model& model) {
  CellState s;
  s.h = g.constant(Tensor::zeros({model.hidden}));
  if (model.cell == CellKind::Lstm)
    s.c = g.constant(Tensor::zeros({model.hidden}));
  return s;
}

StepResult step_aslstm(Graph& g, const BoundModel& bound, const Model& model,
                       const TaskExample& ex, std::size_t t,
                       const CellState& state, const RunOptions& opt) {
  StepResult r;
  Var xt = scale_input(g, bound, model, ex, t, state.h, opt, r.trace);
  Var f = g.sigmoid(affine(g, bound.gates[0], state.h, xt));
  Var i = g.sigmoid(affine(g, bound.gates[1], state.h, xt));
  Var o = g.sigmoid(affine(g, bound.gates[2], state.h, xt));
  Var cand = g.tanh(affine(g, bound.gates[3], state.h, xt));
  r.state.c = g.add(g.hadamard(f, state.c), g.hadamard(i, cand));
  r.state.h = g.hadamard(o, g.tanh(r.state.c));
  return r;
}

StepResult step_asgru(Graph& g, const BoundModel& bound, const Model& model,
                      const TaskExample& ex, std::size_t t,
                      const CellState& state, const RunOptions& opt) {
  StepResult r;
  Var xt = scale_input(g, bound, model, ex, t, state.h, opt, r.trace);
  Var update = g.sigmoid(affine(g, bound.gates[0], state.h, xt));
  Var reset = g.sigmoid(affine(g, bound.gates[1], state.h, xt));
  Var cand = g.tanh(g.add(
      g.add(g.matmul(bound.gates[2].W, g.hadamard(reset, state.h)),
            g.matmul(bound.gates[2].U, xt)),
      bound.gates[2].b));
  Var keep = g.affine_const(update, -1.0, Tensor({model.hidden},
                            std::vector<double>(model.hidden, 1.0)));
  r.state.h = g.add(g.hadamard(update, state.h), g.hadamard(keep, cand));
  return r;
}

SequenceRun run_sequence(Graph& g, Model& model, const TaskExample& ex,
                         const RunOptions& opt) {
  check_run(model, ex, opt);
  const std::size_t T = ex.length();

  BoundModel bound = bind_model(g, model);
  CellState state = zero_state(g, model);

  SequenceRun run;
  run.traces.reserve(T);
  if (ex.per_step) run.step_preds.reserve(T);

  Var loss_sum;
  for (std::size_t t = 0; t < T; ++t) {
    StepResult sr = model.cell == CellKind::Lstm
                        ? step_aslstm(g, bound, model, ex, t, state, opt)
                        : step_asgru(g, bound, model, ex, t, state, opt);
    state = sr.state;
    run.traces.push_back(std::move(sr.trace));

    if (ex.per_step) {
      Var logits = g.add(g.matmul(bound.head_W, state.h), bound.head_b);
      const std::size_t pred = argmax_index(logits.value());
      run.step_preds.push_back(static_cast<std::uint16_t>(pred));
      if (ex.mask[t]) {
        ++run.masked_steps;
        if (pred == ex.step_targets[t]) ++run.masked_correct;
        Var ce = g.cross_entropy(logits, ex.step_targets[t]);
        loss_sum = loss_sum.valid() ? g.add(loss_sum, ce) : ce;
      }
    }
  }

  if (ex.per_step) {
    run.loss = run.masked_steps == 0
                   ? g.constant_scalar(0.0)
                   : g.scale(loss_sum, 1.0 / static_cast<double>(run.masked_steps));
  } else {
    Var logits = g.add(g.matmul(bound.head_W, state.h), bound.head_b);
    run.label_pred = argmax_index(logits.value());
    run.loss = g.cross_entropy(logits, ex.label);
  }
  return run;
}

}  // namespace asrnn
