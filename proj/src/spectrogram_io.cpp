// src/spectrogram_io.cpp
//
// Layout, all little-endian:
//   char[5]  magic "MELS1"
//   u32      instance id length, then id bytes
//   u32      T, u32 n_mels
//   f64      window_width_s, f64 overlap_fraction, u32 config n_mels,
//   u8       has_clip, f64 clip_threshold_db (0 when absent), f64 sample_rate
//   f32[T*n_mels] frames, row-major by frame

#include "s2sae/spectrogram_io.hpp"

#include <cstring>
#include <fstream>
#include <vector>

#include "s2sae/errors.hpp"

namespace s2sae {

namespace {

constexpr char kMagic[5] = {'M', 'E', 'L', 'S', '1'};

template <typename T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in, const std::string& path) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw InvalidInput("truncated spectrogram container: " + path);
  return v;
}

}  // namespace

void write_spectrogram(const std::string& path, const Spectrogram& spec) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write spectrogram file: " + path);

  out.write(kMagic, sizeof(kMagic));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(spec.instance_id.size()));
  out.write(spec.instance_id.data(), static_cast<std::streamsize>(spec.instance_id.size()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(spec.frames.rows()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(spec.frames.cols()));
  put<double>(out, spec.config.window_width_s);
  put<double>(out, spec.config.overlap_fraction);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(spec.config.n_mels));
  put<std::uint8_t>(out, spec.config.clip_threshold_db ? 1 : 0);
  put<double>(out, spec.config.clip_threshold_db.value_or(0.0));
  put<double>(out, spec.config.sample_rate);

  std::vector<float> row(spec.frames.cols());
  for (Eigen::Index t = 0; t < spec.frames.rows(); ++t) {
    for (Eigen::Index m = 0; m < spec.frames.cols(); ++m) row[m] = spec.frames(t, m);
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(row.size() * sizeof(float)));
  }
  if (!out) throw IoError("short write to spectrogram file: " + path);
}

Spectrogram read_spectrogram(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open spectrogram file: " + path);

  char magic[sizeof(kMagic)];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw InvalidInput("not a MELS1 spectrogram container: " + path);

  Spectrogram spec;
  const auto id_len = get<std::uint32_t>(in, path);
  spec.instance_id.resize(id_len);
  in.read(spec.instance_id.data(), id_len);
  const auto T = get<std::uint32_t>(in, path);
  const auto n_mels = get<std::uint32_t>(in, path);
  spec.config.window_width_s = get<double>(in, path);
  spec.config.overlap_fraction = get<double>(in, path);
  spec.config.n_mels = static_cast<int>(get<std::uint32_t>(in, path));
  const bool has_clip = get<std::uint8_t>(in, path) != 0;
  const double clip = get<double>(in, path);
  if (has_clip) spec.config.clip_threshold_db = clip;
  spec.config.sample_rate = get<double>(in, path);

  spec.frames.resize(T, n_mels);
  std::vector<float> row(n_mels);
  for (std::uint32_t t = 0; t < T; ++t) {
    in.read(reinterpret_cast<char*>(row.data()),
            static_cast<std::streamsize>(row.size() * sizeof(float)));
    if (!in) throw InvalidInput("truncated spectrogram frames: " + path);
    for (std::uint32_t m = 0; m < n_mels; ++m) spec.frames(t, m) = row[m];
  }
  return spec;
}

}  // namespace s2sae
