// include/s2sae/spectrogram_io.hpp
//
// Spectrogram container ("MELS1"): header with instance id, frame counts and
// extraction config, followed by T * n_mels little-endian 32-bit floats,
// row-major by frame.

#ifndef S2SAE_SPECTROGRAM_IO_HPP
#define S2SAE_SPECTROGRAM_IO_HPP

#include <string>

#include "s2sae/dsp.hpp"

namespace s2sae {

void write_spectrogram(const std::string& path, const Spectrogram& spec);
Spectrogram read_spectrogram(const std::string& path);

}  // namespace s2sae

#endif  // S2SAE_SPECTROGRAM_IO_HPP
