#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "asrnn/rng.hpp"

namespace asrnn {

// One benchmark sequence. Frames are stored flat (length * frame_dim,
// row-major); every stored value is exactly representable as a 32-bit
// float so dataset files round-trip bit-for-bit.
struct TaskExample {
  std::size_t frame_dim = 1;
  std::vector<double> frames;
  bool per_step = false;
  std::uint16_t label = 0;                  // sequence-label tasks
  std::vector<std::uint16_t> step_targets;  // per-step tasks
  std::vector<std::uint8_t> mask;           // per-step loss indicator

  std::size_t length() const {
    return frame_dim ? frames.size() / frame_dim : 0;
  }
};

bool operator==(const TaskExample& a, const TaskExample& b);

struct Dataset {
  std::string task;  // "signal-id" | "copy"
  std::size_t frame_dim = 1;
  std::size_t classes = 0;
  bool per_step = false;
  std::uint64_t seed = 0;
  std::string header_text;  // generator parameters, key=value lines
  std::vector<TaskExample> examples;
};

bool operator==(const Dataset& a, const Dataset& b);

// ---------------------------------------------------------------------
// Low density signal type identification. Each sequence is uniform noise
// with a handful of disjoint wave bursts of one type; the label is the
// wave type (0 square, 1 sawtooth, 2 sine).
struct SignalIdSpec {
  std::size_t length = 1000;
  std::size_t min_subseq = 3, max_subseq = 5;
  std::size_t min_sub_len = 20, max_sub_len = 100;
  double amp_min = -7.0, amp_max = 7.0;
  double noise_min = -1.0, noise_max = 1.0;
  std::size_t period_min = 10, period_max = 50;
  std::size_t train_per_class = 1600, test_per_class = 400;

  std::string to_text() const;
};

inline constexpr std::size_t kSignalClasses = 3;

// Deterministic per-example construction; the dataset generator derives
// example_seed = seed + global index so generation can be sharded.
TaskExample make_signal_example(const SignalIdSpec& spec,
                                std::uint16_t wave_class,
                                std::uint64_t example_seed);

struct SplitDataset {
  Dataset train;
  Dataset test;
};

SplitDataset gen_signal_id(const SignalIdSpec& spec, std::uint64_t seed);

// ---------------------------------------------------------------------
// Copy memory problem. Inputs are one-hot over the 10-symbol alphabet
// {0..7 payload, 8 blank, 9 trigger}; targets cover all delay+20 steps
// (blank until the recall phase, then the payload).
struct CopySpec {
  std::size_t delay = 100;  // T
  std::size_t payload = 10;
  std::size_t train_count = 10000;
  std::size_t test_count = 1000;

  std::string to_text() const;
};

inline constexpr std::size_t kCopyAlphabet = 10;
inline constexpr std::size_t kCopyClasses = 9;  // targets never include the trigger
inline constexpr std::uint16_t kCopyBlank = 8;
inline constexpr std::uint16_t kCopyTrigger = 9;

TaskExample make_copy_example(const CopySpec& spec, std::uint64_t example_seed);

SplitDataset gen_copy(const CopySpec& spec, std::uint64_t seed);

// Mean per-step cross entropy of the predictor that outputs the blank
// until the recall phase and guesses uniformly afterwards.
double copy_memoryless_entropy(std::size_t delay);

// ---------------------------------------------------------------------
// Dataset files: magic + version, a human-readable key=value header, then
// per-example records with 32-bit little-endian frame floats and 16-bit
// targets. load(save(d)) == d bit-for-bit.
void save_dataset(const Dataset& ds, const std::string& path);
Dataset load_dataset(const std::string& path);

}  // namespace asrnn
