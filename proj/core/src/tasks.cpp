#include "asrnn/tasks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "asrnn/errors.hpp"

namespace asrnn {

bool operator==(const TaskExample& a, const TaskExample& b) {
  return a.frame_dim == b.frame_dim && a.frames == b.frames &&
         a.per_step == b.per_step && a.label == b.label &&
         a.step_targets == b.step_targets && a.mask == b.mask;
}

bool operator==(const Dataset& a, const Dataset& b) {
  return a.task == b.task && a.frame_dim == b.frame_dim &&
         a.classes == b.classes && a.per_step == b.per_step &&
         a.seed == b.seed && a.header_text == b.header_text &&
         a.examples == b.examples;
}

namespace {

double snap_f32(double v) { return static_cast<double>(static_cast<float>(v)); }

struct Interval {
  std::size_t start, len;
};

bool overlaps(const Interval& a, const Interval& b) {
  return a.start < b.start + b.len && b.start < a.start + a.len;
}

double wave_value(std::uint16_t wave_class, double amplitude, double period,
                  double phase, std::size_t i) {
  const double pos = static_cast<double>(i) + phase;
  const double u = std::fmod(pos, period);
  switch (wave_class) {
    case 0:  // square: +A for the first half period, -A for the second
      return u < period / 2.0 ? amplitude : -amplitude;
    case 1:  // sawtooth: ramp from -A to A over one period
      return -amplitude + 2.0 * amplitude * (u / period);
    default:  // sine
      return amplitude * std::sin(2.0 * std::numbers::pi * pos / period);
  }
}

}  // namespace

std::string SignalIdSpec::to_text() const {
  std::ostringstream os;
  os << "length=" << length << "\n"
     << "min_subseq=" << min_subseq << "\n"
     << "max_subseq=" << max_subseq << "\n"
     << "min_sub_len=" << min_sub_len << "\n"
     << "max_sub_len=" << max_sub_len << "\n"
     << "amp_min=" << amp_min << "\n"
     << "amp_max=" << amp_max << "\n"
     << "noise_min=" << noise_min << "\n"
     << "noise_max=" << noise_max << "\n"
     << "period_min=" << period_min << "\n"
     << "period_max=" << period_max << "\n"
     << "train_per_class=" << train_per_class << "\n"
     << "test_per_class=" << test_per_class << "\n";
  return os.str();
}

TaskExample make_signal_example(const SignalIdSpec& spec,
                                std::uint16_t wave_class,
                                std::uint64_t example_seed) {
  if (spec.min_sub_len > spec.max_sub_len || spec.min_subseq > spec.max_subseq)
    throw ConfigError("make_signal_example: inverted spec ranges");
  if (spec.max_sub_len > spec.length)
    throw ConfigError("make_signal_example: subsequence longer than sequence");

  RngStream rng(example_seed);
  const std::size_t p =
      spec.min_subseq + rng.uniform_int(spec.max_subseq - spec.min_subseq + 1);

  std::vector<Interval> intervals;
  std::size_t attempts = 0;
  while (intervals.size() < p) {
    if (++attempts > 10000)
      throw DataError("make_signal_example: could not place " +
                      std::to_string(p) + " disjoint subsequences");
    Interval cand;
    cand.len = spec.min_sub_len +
               rng.uniform_int(spec.max_sub_len - spec.min_sub_len + 1);
    cand.start = rng.uniform_int(spec.length - cand.len + 1);
    bool ok = true;
    for (const Interval& iv : intervals)
      if (overlaps(cand, iv)) {
        ok = false;
        break;
      }
    if (ok) intervals.push_back(cand);
  }

  struct WaveParams {
    double amplitude, period, phase;
  };
  std::vector<WaveParams> waves(intervals.size());
  for (WaveParams& w : waves) {
    w.amplitude = rng.uniform(spec.amp_min, spec.amp_max);
    w.period = static_cast<double>(
        spec.period_min + rng.uniform_int(spec.period_max - spec.period_min + 1));
    w.phase = rng.uniform(0.0, w.period);
  }

  TaskExample ex;
  ex.frame_dim = 1;
  ex.per_step = false;
  ex.label = wave_class;
  ex.frames.resize(spec.length);
  for (std::size_t i = 0; i < spec.length; ++i) {
    double u = rng.uniform_open01();
    ex.frames[i] = snap_f32(spec.noise_min + (spec.noise_max - spec.noise_min) * u);
  }
  for (std::size_t s = 0; s < intervals.size(); ++s) {
    const Interval& iv = intervals[s];
    const WaveParams& w = waves[s];
    for (std::size_t i = 0; i < iv.len; ++i)
      ex.frames[iv.start + i] =
          snap_f32(wave_value(wave_class, w.amplitude, w.period, w.phase, i));
  }
  return ex;
}

SplitDataset gen_signal_id(const SignalIdSpec& spec, std::uint64_t seed) {
  SplitDataset out;
  for (Dataset* ds : {&out.train, &out.test}) {
    ds->task = "signal-id";
    ds->frame_dim = 1;
    ds->classes = kSignalClasses;
    ds->per_step = false;
    ds->seed = seed;
    ds->header_text = spec.to_text();
  }
  const std::size_t per_class = spec.train_per_class + spec.test_per_class;
  std::uint64_t index = 0;
  for (std::uint16_t cls = 0; cls < kSignalClasses; ++cls) {
    for (std::size_t i = 0; i < per_class; ++i, ++index) {
      TaskExample ex = make_signal_example(spec, cls, seed + index);
      if (i < spec.train_per_class)
        out.train.examples.push_back(std::move(ex));
      else
        out.test.examples.push_back(std::move(ex));
    }
  }
  return out;
}

std::string CopySpec::to_text() const {
  std::ostringstream os;
  os << "delay=" << delay << "\n"
     << "payload=" << payload << "\n"
     << "train_count=" << train_count << "\n"
     << "test_count=" << test_count << "\n";
  return os.str();
}

TaskExample make_copy_example(const CopySpec& spec,
                              std::uint64_t example_seed) {
  if (spec.delay < 1) throw ConfigError("make_copy_example: delay must be >= 1");
  RngStream rng(example_seed);
  const std::size_t T = spec.delay;
  const std::size_t len = T + 2 * spec.payload;

  std::vector<std::uint16_t> symbols(len, kCopyBlank);
  std::vector<std::uint16_t> payload(spec.payload);
  for (std::size_t i = 0; i < spec.payload; ++i) {
    payload[i] = static_cast<std::uint16_t>(rng.uniform_int(8));
    symbols[i] = payload[i];
  }
  symbols[T + spec.payload - 1] = kCopyTrigger;  // position T+10, 1-based

  TaskExample ex;
  ex.frame_dim = kCopyAlphabet;
  ex.per_step = true;
  ex.frames.assign(len * kCopyAlphabet, 0.0);
  for (std::size_t t = 0; t < len; ++t)
    ex.frames[t * kCopyAlphabet + symbols[t]] = 1.0;

  ex.step_targets.assign(len, kCopyBlank);
  for (std::size_t i = 0; i < spec.payload; ++i)
    ex.step_targets[T + spec.payload + i] = payload[i];
  ex.mask.assign(len, 1);
  return ex;
}

SplitDataset gen_copy(const CopySpec& spec, std::uint64_t seed) {
  SplitDataset out;
  for (Dataset* ds : {&out.train, &out.test}) {
    ds->task = "copy";
    ds->frame_dim = kCopyAlphabet;
    ds->classes = kCopyClasses;
    ds->per_step = true;
    ds->seed = seed;
    ds->header_text = spec.to_text();
  }
  std::uint64_t index = 0;
  out.train.examples.reserve(spec.train_count);
  for (std::size_t i = 0; i < spec.train_count; ++i, ++index)
    out.train.examples.push_back(make_copy_example(spec, seed + index));
  out.test.examples.reserve(spec.test_count);
  for (std::size_t i = 0; i < spec.test_count; ++i, ++index)
    out.test.examples.push_back(make_copy_example(spec, seed + index));
  return out;
}

double copy_memoryless_entropy(std::size_t delay) {
  return 10.0 * std::log(8.0) / (static_cast<double>(delay) + 20.0);
}

}  // namespace asrnn
