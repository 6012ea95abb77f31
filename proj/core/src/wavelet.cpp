#include "asrnn/wavelet.hpp"

#include <string>

#include "asrnn/errors.hpp"

namespace asrnn {

WaveletBank make_haar_bank(std::size_t K, std::size_t J) {
  if (K < 1 || J < 1)
    throw DomainError("make_haar_bank: K and J must be >= 1, got K=" +
                      std::to_string(K) + " J=" + std::to_string(J));
  WaveletBank bank;
  bank.base_size = K;
  bank.num_scales = J;
  bank.taps.resize(K);
  const std::size_t half = (K + 1) / 2;
  for (std::size_t k = 0; k < K; ++k) bank.taps[k] = k < half ? 1.0 : -1.0;
  return bank;
}

void scaled_input_into(const double* frames, std::size_t num_frames,
                       std::size_t frame_dim, std::size_t t, std::size_t j,
                       const WaveletBank& bank, double* out) {
  const std::size_t step = bank.dilation(j);
  for (std::size_t k = 0; k < bank.base_size; ++k) {
    const std::size_t back = step * k;
    if (back > t) break;  // frames before the sequence start are zero
    const std::size_t idx = t - back;
    if (idx >= num_frames) continue;
    const double h = bank.taps[k];
    const double* frame = frames + idx * frame_dim;
    for (std::size_t d = 0; d < frame_dim; ++d) out[d] += h * frame[d];
  }
}

Tensor scaled_input_at(const std::vector<double>& frames, std::size_t frame_dim,
                       std::size_t t, std::size_t j, const WaveletBank& bank) {
  if (j >= bank.num_scales)
    throw DomainError("scaled_input_at: scale " + std::to_string(j) +
                      " out of range [0, " + std::to_string(bank.num_scales) +
                      ")");
  const std::size_t num_frames = frame_dim ? frames.size() / frame_dim : 0;
  if (t >= num_frames)
    throw DomainError("scaled_input_at: frame index " + std::to_string(t) +
                      " out of range for " + std::to_string(num_frames) +
                      " frames");
  Tensor out = Tensor::zeros({frame_dim});
  scaled_input_into(frames.data(), num_frames, frame_dim, t, j, bank,
                    out.data.data());
  return out;
}

Tensor scaled_input_all(const std::vector<double>& frames,
                        std::size_t frame_dim, std::size_t t,
                        const WaveletBank& bank) {
  const std::size_t num_frames = frame_dim ? frames.size() / frame_dim : 0;
  if (t >= num_frames)
    throw DomainError("scaled_input_all: frame index " + std::to_string(t) +
                      " out of range for " + std::to_string(num_frames) +
                      " frames");
  Tensor out = Tensor::zeros({bank.num_scales, frame_dim});
  for (std::size_t j = 0; j < bank.num_scales; ++j)
    scaled_input_into(frames.data(), num_frames, frame_dim, t, j, bank,
                      out.data.data() + j * frame_dim);
  return out;
}

}  // namespace asrnn
