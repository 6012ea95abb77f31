#pragma once

#include <cstddef>
#include <vector>

#include "asrnn/tensor.hpp"

namespace asrnn {

// Bank of J dilated copies of one K-tap kernel. Scale j places the base
// taps at offsets 2^j * k into the past (k = 0..K-1), so tap 0 always
// covers the current frame and the dilated kernel is zero wherever the
// offset is not a multiple of 2^j.
struct WaveletBank {
  std::size_t base_size = 0;   // K
  std::size_t num_scales = 0;  // J
  std::vector<double> taps;    // h[0..K-1]

  std::size_t dilation(std::size_t j) const { return std::size_t{1} << j; }
  std::size_t receptive_field(std::size_t j) const {
    return dilation(j) * (base_size - 1) + 1;
  }
};

// Discrete Haar step kernel: +1 on the first ceil(K/2) taps, -1 on the
// rest. K=1 degenerates to [1], which reduces the whole mechanism to a
// conventional RNN when J=1 as well.
WaveletBank make_haar_bank(std::size_t K, std::size_t J);

// Scale-related input for frame t (0-based) at scale j:
//   out = sum_k h[k] * x[t - 2^j * k],  with x[i] = 0 for i < 0.
// `frames` holds T frames of width `frame_dim`, row-major.
Tensor scaled_input_at(const std::vector<double>& frames, std::size_t frame_dim,
                       std::size_t t, std::size_t j, const WaveletBank& bank);

// All J scale rows stacked into a [J x frame_dim] tensor.
Tensor scaled_input_all(const std::vector<double>& frames,
                        std::size_t frame_dim, std::size_t t,
                        const WaveletBank& bank);

// Same as scaled_input_at but accumulating into caller storage; the hot
// path for cell unrolls.
void scaled_input_into(const double* frames, std::size_t num_frames,
                       std::size_t frame_dim, std::size_t t, std::size_t j,
                       const WaveletBank& bank, double* out);

}  // namespace asrnn
