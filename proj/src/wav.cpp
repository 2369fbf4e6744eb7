// src/wav.cpp

#include "s2sae/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "s2sae/errors.hpp"

namespace s2sae {

namespace {

template <typename T>
T read_le(std::istream& in) {
  unsigned char buf[sizeof(T)];
  in.read(reinterpret_cast<char*>(buf), sizeof(T));
  T v{};
  std::memcpy(&v, buf, sizeof(T));  // build targets are little-endian
  return v;
}

template <typename T>
void write_le(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

}  // namespace

WavData read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open WAV file: " + path);

  char riff[4], wave[4];
  in.read(riff, 4);
  read_le<std::uint32_t>(in);  // RIFF size
  in.read(wave, 4);
  if (!in || std::memcmp(riff, "RIFF", 4) != 0 || std::memcmp(wave, "WAVE", 4) != 0)
    throw InvalidInput("not a RIFF/WAVE file: " + path);

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  bool have_fmt = false;
  std::vector<char> data;

  while (in) {
    char id[4];
    in.read(id, 4);
    if (!in) break;
    const std::uint32_t size = read_le<std::uint32_t>(in);
    if (std::memcmp(id, "fmt ", 4) == 0) {
      format = read_le<std::uint16_t>(in);
      channels = read_le<std::uint16_t>(in);
      rate = read_le<std::uint32_t>(in);
      read_le<std::uint32_t>(in);  // byte rate
      read_le<std::uint16_t>(in);  // block align
      bits = read_le<std::uint16_t>(in);
      if (size > 16) in.seekg(size - 16, std::ios::cur);
      have_fmt = true;
    } else if (std::memcmp(id, "data", 4) == 0) {
      data.resize(size);
      in.read(data.data(), size);
      if (static_cast<std::uint32_t>(in.gcount()) != size)
        throw InvalidInput("truncated WAV data chunk: " + path);
      if (size % 2 == 1) in.seekg(1, std::ios::cur);  // chunk padding
    } else {
      in.seekg(size + (size % 2), std::ios::cur);
    }
  }

  if (!have_fmt) throw InvalidInput("WAV file has no fmt chunk: " + path);
  if (channels == 0 || rate == 0) throw InvalidInput("WAV fmt chunk is degenerate: " + path);

  const bool pcm16 = format == 1 && bits == 16;
  const bool float32 = format == 3 && bits == 32;
  if (!pcm16 && !float32)
    throw InvalidInput("unsupported WAV encoding (want 16-bit PCM or 32-bit float): " + path);

  const std::size_t bytes_per_sample = pcm16 ? 2 : 4;
  const std::size_t frame_bytes = bytes_per_sample * channels;
  const std::size_t n_frames = data.size() / frame_bytes;

  WavData out;
  out.sample_rate = static_cast<double>(rate);
  out.source_channels = channels;
  out.samples.resize(n_frames);
  for (std::size_t t = 0; t < n_frames; ++t) {
    double acc = 0.0;
    for (std::uint16_t ch = 0; ch < channels; ++ch) {
      const char* p = data.data() + t * frame_bytes + ch * bytes_per_sample;
      if (pcm16) {
        std::int16_t v;
        std::memcpy(&v, p, 2);
        acc += static_cast<double>(v) / 32768.0;
      } else {
        float v;
        std::memcpy(&v, p, 4);
        acc += static_cast<double>(v);
      }
    }
    out.samples[t] = acc / channels;
  }
  return out;
}

void write_wav_pcm16(const std::string& path, const std::vector<double>& samples,
                     int sample_rate) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write WAV file: " + path);

  const std::uint32_t data_bytes = static_cast<std::uint32_t>(samples.size() * 2);
  out.write("RIFF", 4);
  write_le<std::uint32_t>(out, 36 + data_bytes);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  write_le<std::uint32_t>(out, 16);
  write_le<std::uint16_t>(out, 1);  // PCM
  write_le<std::uint16_t>(out, 1);  // mono
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(sample_rate));
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(sample_rate * 2));
  write_le<std::uint16_t>(out, 2);
  write_le<std::uint16_t>(out, 16);
  out.write("data", 4);
  write_le<std::uint32_t>(out, data_bytes);
  for (double s : samples) {
    const double clamped = std::clamp(s, -1.0, 1.0);
    write_le<std::int16_t>(out, static_cast<std::int16_t>(std::lround(clamped * 32767.0)));
  }
  if (!out) throw IoError("short write to WAV file: " + path);
}

}  // namespace s2sae
