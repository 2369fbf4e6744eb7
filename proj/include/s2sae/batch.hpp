// include/s2sae/batch.hpp
//
// Zero-padded minibatches and the teacher-forcing input/target layout.
// Time steps are stored as n_mels x B matrices so the models can run whole
// batches through single matrix products.

#ifndef S2SAE_BATCH_HPP
#define S2SAE_BATCH_HPP

#include <vector>

#include "s2sae/dsp.hpp"
#include "s2sae/errors.hpp"
#include "s2sae/param_set.hpp"

namespace s2sae {

template <typename S>
struct Batch {
  std::vector<MatX<S>> steps;  // T_max entries, each n_mels x B; zero padded
  std::vector<long> lengths;   // true frame count per element
  int n_mels = 0;

  long t_max() const { return static_cast<long>(steps.size()); }
  long size() const { return static_cast<long>(lengths.size()); }

  // 1 x B row with 1 where t < length, else 0.
  Eigen::RowVectorX<S> step_mask(long t) const {
    Eigen::RowVectorX<S> m(size());
    for (long b = 0; b < size(); ++b) m[b] = t < lengths[b] ? S{1} : S{0};
    return m;
  }
};

template <typename S>
Batch<S> pad_batch(const std::vector<Spectrogram>& specs) {
  if (specs.empty()) throw InvalidArgument("pad_batch: empty batch");
  const int n_mels = static_cast<int>(specs[0].frames.cols());
  long t_max = 0;
  for (const auto& s : specs) {
    if (s.frames.cols() != n_mels)
      throw ConfigMismatch("pad_batch: mixed mel band counts in one batch");
    if (s.frames.rows() < 1) throw InvalidArgument("pad_batch: empty spectrogram");
    t_max = std::max<long>(t_max, s.frames.rows());
  }

  Batch<S> batch;
  batch.n_mels = n_mels;
  batch.lengths.reserve(specs.size());
  for (const auto& s : specs) batch.lengths.push_back(s.frames.rows());
  batch.steps.assign(t_max, MatX<S>::Zero(n_mels, static_cast<long>(specs.size())));
  for (std::size_t b = 0; b < specs.size(); ++b)
    for (Eigen::Index t = 0; t < specs[b].frames.rows(); ++t)
      batch.steps[t].col(static_cast<long>(b)) =
          specs[b].frames.row(t).transpose().template cast<S>();
  return batch;
}

// Teacher-forced decoder IO. Targets are the input frames reversed within
// each element's true length; the decoder input is the target sequence
// shifted right by one step with a zero frame first.
template <typename S>
struct DecoderIo {
  std::vector<MatX<S>> inputs;   // T_max entries, n_mels x B
  std::vector<MatX<S>> targets;  // T_max entries, n_mels x B
};

template <typename S>
DecoderIo<S> prepare_decoder_io(const Batch<S>& batch) {
  DecoderIo<S> io;
  const long T = batch.t_max();
  const long B = batch.size();
  io.targets.assign(T, MatX<S>::Zero(batch.n_mels, B));
  io.inputs.assign(T, MatX<S>::Zero(batch.n_mels, B));
  for (long b = 0; b < B; ++b) {
    const long len = batch.lengths[b];
    for (long t = 0; t < len; ++t)
      io.targets[t].col(b) = batch.steps[len - 1 - t].col(b);
    for (long t = 1; t < len; ++t) io.inputs[t].col(b) = io.targets[t - 1].col(b);
  }
  return io;
}

// Single-instance convenience used by the operation-level API and tests.
template <typename S>
Batch<S> single_batch(const Spectrogram& spec) {
  return pad_batch<S>({spec});
}

}  // namespace s2sae

#endif  // S2SAE_BATCH_HPP
