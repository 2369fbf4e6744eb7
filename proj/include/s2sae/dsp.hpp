// include/s2sae/dsp.hpp
//
// Raw audio -> clipped, normalised log-Mel spectrograms.

#ifndef S2SAE_DSP_HPP
#define S2SAE_DSP_HPP

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

namespace s2sae {

struct SpectrogramConfig {
  double window_width_s = 0.04;    // Hamming window width w, seconds
  double overlap_fraction = 0.5;   // fraction of w overlapped by consecutive windows
  int n_mels = 128;
  std::optional<double> clip_threshold_db;  // negative when present
  double sample_rate = 16000.0;

  void validate() const;
  bool operator==(const SpectrogramConfig&) const = default;
};

struct Spectrogram {
  std::string instance_id;
  Eigen::MatrixXf frames;  // T x n_mels, values in [-1, 1] after normalisation
  SpectrogramConfig config;
};

// Periodic Hamming window: w[k] = 0.54 - 0.46 cos(2 pi k / n), k = 0..n-1.
Eigen::VectorXd hamming_window(int n);

// Forward FFT of a complex sequence whose length must be a power of two.
// Iterative radix-2 Cooley-Tukey; used by extract_mel_spectrogram via
// zero-padding to the next power of two.
void fft_radix2(std::vector<std::complex<double>>& data);

// HTK mel scale.
inline double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
inline double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

// Triangular filters on the HTK mel scale, centers equally spaced in mel
// between 0 and sample_rate/2. Rows are scaled to peak exactly 1 at the
// strongest FFT bin; n_fft_bins is the one-sided bin count (nfft/2 + 1).
Eigen::MatrixXd mel_filterbank(int n_fft_bins, int n_mels, double sample_rate);

// Framing, periodic Hamming windowing, power spectrum through the mel
// filterbank, dB relative to the per-instance maximum (0 dB at the loudest
// bin), floored at -120 dB. Returns T x n_mels.
Eigen::MatrixXd extract_mel_spectrogram(const std::vector<double>& samples,
                                        double sample_rate,
                                        const SpectrogramConfig& config);

// Closed-form frame count for a signal of n samples.
// win = round(w * rate), hop = round((1 - overlap) * win), T = (n-win)/hop + 1.
long frame_count(long n_samples, double sample_rate, const SpectrogramConfig& config);

// Values below the threshold are raised to it; the clipped range [min, max]
// is then mapped affinely onto [-1, 1]. A constant matrix maps to zeros.
Eigen::MatrixXf clip_and_normalize(const Eigen::MatrixXd& db_matrix,
                                   std::optional<double> clip_threshold_db);

// Full pipeline for one instance.
Spectrogram make_spectrogram(const std::string& instance_id,
                             const std::vector<double>& samples, double sample_rate,
                             SpectrogramConfig config);

}  // namespace s2sae

#endif  // S2SAE_DSP_HPP
