// src/checkpoint.cpp
//
// Layout, all little-endian:
//   char[5] magic "S2SC1"
//   u32 json length, canonical JSON architecture spec
//   u32 epoch, u64 seed
//   u32 parameter count, then per parameter:
//     u32 name length, name bytes
//     u8 rank, u32 dims[rank] (rank 1: size; rank 2: rows, cols)
//     f32 values, column-major

#include "s2sae/checkpoint.hpp"

#include <fstream>
#include <vector>

#include "s2sae/errors.hpp"

namespace s2sae {

namespace {

constexpr char kMagic[5] = {'S', '2', 'S', 'C', '1'};

template <typename T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in, const std::string& path) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw InvalidInput("truncated checkpoint: " + path);
  return v;
}

}  // namespace

ParamSet<float> Checkpoint::model_params() const {
  ParamSet<float> out;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto& e = params.entry(i);
    if (e.name.rfind("opt/", 0) == 0) continue;
    out.add(e.name, e.value, e.rank);
  }
  return out;
}

void write_checkpoint(const std::string& path, const Checkpoint& ckpt) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write checkpoint: " + path);

  out.write(kMagic, sizeof(kMagic));
  const std::string arch = ckpt.spec.canonical_json();
  put<std::uint32_t>(out, static_cast<std::uint32_t>(arch.size()));
  out.write(arch.data(), static_cast<std::streamsize>(arch.size()));
  put<std::uint32_t>(out, ckpt.epoch);
  put<std::uint64_t>(out, ckpt.seed);

  put<std::uint32_t>(out, static_cast<std::uint32_t>(ckpt.params.size()));
  for (std::size_t i = 0; i < ckpt.params.size(); ++i) {
    const auto& e = ckpt.params.entry(i);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(e.name.size()));
    out.write(e.name.data(), static_cast<std::streamsize>(e.name.size()));
    put<std::uint8_t>(out, static_cast<std::uint8_t>(e.rank));
    if (e.rank == 1) {
      put<std::uint32_t>(out, static_cast<std::uint32_t>(e.value.rows()));
    } else {
      put<std::uint32_t>(out, static_cast<std::uint32_t>(e.value.rows()));
      put<std::uint32_t>(out, static_cast<std::uint32_t>(e.value.cols()));
    }
    out.write(reinterpret_cast<const char*>(e.value.data()),
              static_cast<std::streamsize>(sizeof(float) * e.value.size()));
  }
  if (!out) throw IoError("short write to checkpoint: " + path);
}

Checkpoint read_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint: " + path);

  char magic[sizeof(kMagic)];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw InvalidInput("not an S2SC1 checkpoint: " + path);

  Checkpoint ckpt;
  const auto json_len = get<std::uint32_t>(in, path);
  std::string arch(json_len, '\0');
  in.read(arch.data(), json_len);
  if (!in) throw InvalidInput("truncated checkpoint: " + path);
  ckpt.spec = ModelSpec::from_json(nlohmann::json::parse(arch));
  ckpt.epoch = get<std::uint32_t>(in, path);
  ckpt.seed = get<std::uint64_t>(in, path);

  const auto n_params = get<std::uint32_t>(in, path);
  for (std::uint32_t i = 0; i < n_params; ++i) {
    const auto name_len = get<std::uint32_t>(in, path);
    std::string name(name_len, '\0');
    in.read(name.data(), name_len);
    const auto rank = get<std::uint8_t>(in, path);
    if (rank != 1 && rank != 2)
      throw InvalidInput("checkpoint parameter '" + name + "' has unsupported rank");
    const auto rows = get<std::uint32_t>(in, path);
    const auto cols = rank == 2 ? get<std::uint32_t>(in, path) : 1u;
    MatX<float> m(rows, cols);
    in.read(reinterpret_cast<char*>(m.data()),
            static_cast<std::streamsize>(sizeof(float) * m.size()));
    if (!in) throw InvalidInput("truncated checkpoint values: " + path);
    ckpt.params.add(name, std::move(m), rank);
  }
  return ckpt;
}

}  // namespace s2sae
