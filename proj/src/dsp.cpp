// src/dsp.cpp

#include "s2sae/dsp.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "s2sae/errors.hpp"

namespace s2sae {

void SpectrogramConfig::validate() const {
  if (!(window_width_s > 0.0))
    throw InvalidArgument("spectrogram config: window width must be positive");
  if (!(overlap_fraction > 0.0 && overlap_fraction < 1.0))
    throw InvalidArgument("spectrogram config: overlap must be in (0, 1)");
  if (n_mels < 1) throw InvalidArgument("spectrogram config: n_mels must be >= 1");
  if (clip_threshold_db && !(*clip_threshold_db < 0.0))
    throw InvalidArgument("spectrogram config: clip threshold must be negative dB");
  if (!(sample_rate > 0.0))
    throw InvalidArgument("spectrogram config: sample rate must be positive");
}

Eigen::VectorXd hamming_window(int n) {
  if (n < 1) throw InvalidArgument("hamming_window: n must be >= 1");
  Eigen::VectorXd w(n);
  for (int k = 0; k < n; ++k)
    w[k] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * k / n);
  return w;
}

void fft_radix2(std::vector<std::complex<double>>& data) {
  const std::size_t n = data.size();
  if (n == 0 || (n & (n - 1)) != 0)
    throw InvalidArgument("fft_radix2: length must be a power of two");

  // bit-reversal permutation
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }

  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double angle = -2.0 * std::numbers::pi / static_cast<double>(len);
    const std::complex<double> wlen(std::cos(angle), std::sin(angle));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = data[i + k];
        const std::complex<double> v = data[i + k + len / 2] * w;
        data[i + k] = u + v;
        data[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

Eigen::MatrixXd mel_filterbank(int n_fft_bins, int n_mels, double sample_rate) {
  if (n_mels < 1) throw InvalidArgument("mel_filterbank: n_mels must be >= 1");
  if (n_fft_bins < n_mels)
    throw InvalidArgument("mel_filterbank: need at least as many FFT bins as mel bands");

  const int nfft = 2 * (n_fft_bins - 1);
  const double mel_max = hz_to_mel(sample_rate / 2.0);
  Eigen::VectorXd edges(n_mels + 2);  // triangle corners, equally spaced in mel
  for (int i = 0; i < n_mels + 2; ++i) edges[i] = mel_max * i / (n_mels + 1);

  Eigen::MatrixXd fb = Eigen::MatrixXd::Zero(n_mels, n_fft_bins);
  for (int m = 0; m < n_mels; ++m) {
    const double lo = edges[m], center = edges[m + 1], hi = edges[m + 2];
    double peak = 0.0;
    for (int k = 0; k < n_fft_bins; ++k) {
      const double mel = hz_to_mel(k * sample_rate / nfft);
      double w = 0.0;
      if (mel > lo && mel < hi)
        w = mel <= center ? (mel - lo) / (center - lo) : (hi - mel) / (hi - center);
      fb(m, k) = w;
      peak = std::max(peak, w);
    }
    if (peak <= 0.0)
      throw InvalidArgument("mel_filterbank: band " + std::to_string(m) +
                            " covers no FFT bin; too many mel bands for this FFT size");
    fb.row(m) /= peak;
  }
  return fb;
}

namespace {

int next_pow2(int n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace

long frame_count(long n_samples, double sample_rate, const SpectrogramConfig& config) {
  const long win = std::lround(config.window_width_s * sample_rate);
  const long hop = std::lround((1.0 - config.overlap_fraction) * win);
  if (win < 1 || hop < 1 || n_samples < win) return 0;
  return (n_samples - win) / hop + 1;
}

Eigen::MatrixXd extract_mel_spectrogram(const std::vector<double>& samples,
                                        double sample_rate,
                                        const SpectrogramConfig& config) {
  config.validate();
  if (samples.empty()) throw InvalidInput("extract_mel_spectrogram: empty signal");
  for (double s : samples)
    if (!std::isfinite(s))
      throw InvalidInput("extract_mel_spectrogram: non-finite sample value");

  const long win = std::lround(config.window_width_s * sample_rate);
  const long hop = std::lround((1.0 - config.overlap_fraction) * win);
  if (win < 1) throw InvalidArgument("extract_mel_spectrogram: window rounds to zero");
  if (static_cast<long>(samples.size()) < win)
    throw TooShortSignal("extract_mel_spectrogram: signal shorter than one window (" +
                         std::to_string(samples.size()) + " < " + std::to_string(win) + ")");

  const long T = (static_cast<long>(samples.size()) - win) / hop + 1;
  const int nfft = next_pow2(static_cast<int>(win));
  const int n_bins = nfft / 2 + 1;
  const Eigen::VectorXd window = hamming_window(static_cast<int>(win));
  const Eigen::MatrixXd fb = mel_filterbank(n_bins, config.n_mels, sample_rate);

  Eigen::MatrixXd mel_power(T, config.n_mels);
  std::vector<std::complex<double>> buf(nfft);
  Eigen::VectorXd power(n_bins);
  for (long t = 0; t < T; ++t) {
    const long start = t * hop;
    for (long k = 0; k < win; ++k)
      buf[k] = std::complex<double>(samples[start + k] * window[k], 0.0);
    for (int k = win; k < nfft; ++k) buf[k] = {0.0, 0.0};
    fft_radix2(buf);
    for (int k = 0; k < n_bins; ++k) power[k] = std::norm(buf[k]);
    mel_power.row(t) = (fb * power).transpose();
  }

  const double ref = mel_power.maxCoeff();
  constexpr double kFloorDb = -120.0;
  Eigen::MatrixXd db(T, config.n_mels);
  if (ref <= 0.0) {
    db.setConstant(kFloorDb);  // pure silence
    return db;
  }
  for (long t = 0; t < T; ++t)
    for (int m = 0; m < config.n_mels; ++m) {
      const double p = mel_power(t, m);
      db(t, m) = p > 0.0 ? std::max(kFloorDb, 10.0 * std::log10(p / ref)) : kFloorDb;
    }
  return db;
}

Eigen::MatrixXf clip_and_normalize(const Eigen::MatrixXd& db_matrix,
                                   std::optional<double> clip_threshold_db) {
  if (!db_matrix.allFinite())
    throw InvalidInput("clip_and_normalize: non-finite dB values");
  Eigen::MatrixXd clipped = db_matrix;
  if (clip_threshold_db)
    clipped = clipped.cwiseMax(*clip_threshold_db);
  const double lo = clipped.minCoeff();
  const double hi = clipped.maxCoeff();
  if (hi <= lo) return Eigen::MatrixXf::Zero(db_matrix.rows(), db_matrix.cols());
  return ((clipped.array() - lo) / (hi - lo) * 2.0 - 1.0).cast<float>();
}

Spectrogram make_spectrogram(const std::string& instance_id,
                             const std::vector<double>& samples, double sample_rate,
                             SpectrogramConfig config) {
  config.sample_rate = sample_rate;
  Spectrogram spec;
  spec.instance_id = instance_id;
  spec.config = config;
  spec.frames = clip_and_normalize(extract_mel_spectrogram(samples, sample_rate, config),
                                   config.clip_threshold_db);
  return spec;
}

}  // namespace s2sae
