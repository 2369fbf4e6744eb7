// include/s2sae/wav.hpp

#ifndef S2SAE_WAV_HPP
#define S2SAE_WAV_HPP

#include <string>
#include <vector>

namespace s2sae {

struct WavData {
  std::vector<double> samples;  // mono; multi-channel inputs are averaged
  double sample_rate = 0.0;
  int source_channels = 1;
};

// PCM WAV reader: 16-bit integer or 32-bit IEEE float, any sample rate,
// any channel count (averaged to mono). Unknown RIFF chunks are skipped.
WavData read_wav(const std::string& path);

// 16-bit PCM mono writer; samples are clamped to [-1, 1] and rounded.
void write_wav_pcm16(const std::string& path, const std::vector<double>& samples,
                     int sample_rate);

}  // namespace s2sae

#endif  // S2SAE_WAV_HPP
