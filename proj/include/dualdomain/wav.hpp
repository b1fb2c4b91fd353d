#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace dd {

struct WavData {
  std::vector<double> samples;  // first channel, in [-1, 1]
  std::size_t sample_rate = 0;
};

// Reads 16/24-bit PCM or 32-bit float WAV (plain or extensible header);
// multichannel input yields the first channel.
WavData load_wav(const std::string& path);

// Writes mono 16-bit PCM; samples are clamped to [-1, 1].
void save_wav(const std::string& path, std::span<const double> samples,
              std::size_t sample_rate);

}  // namespace dd
