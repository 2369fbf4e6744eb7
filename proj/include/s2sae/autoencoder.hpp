// include/s2sae/autoencoder.hpp
//
// Single-instance operation surface of the non-attention autoencoder:
// encoding, context computation, teacher-forcing layout, decoding and the
// reconstruction loss. These wrap the batched tape builders with B = 1.

#ifndef S2SAE_AUTOENCODER_HPP
#define S2SAE_AUTOENCODER_HPP

#include <vector>

#include "s2sae/model.hpp"

namespace s2sae {

template <typename S>
struct EncoderOutput {
  // states[layer][direction][t], each units-dim
  std::vector<std::vector<std::vector<VecX<S>>>> states;
  VecX<S> final_concat;  // [l0 fwd, l0 bwd, l1 fwd, l1 bwd] final hidden states
};

template <typename S>
EncoderOutput<S> encode_sequence(const ParamSet<S>& params, const ModelSpec& spec,
                                 const Spectrogram& spectrogram) {
  if (spectrogram.frames.rows() < 1)
    throw InvalidArgument("encode_sequence: empty sequence");
  Batch<S> batch = single_batch<S>(spectrogram);
  Tape<S> t;
  TapeParams<S> P(t, params, false);
  std::vector<typename Tape<S>::Var> x_steps(batch.t_max());
  for (long ti = 0; ti < batch.t_max(); ++ti) x_steps[ti] = t.constant(batch.steps[ti]);
  EncoderVars<S> enc = build_encoder(t, spec, P, x_steps, batch);

  EncoderOutput<S> out;
  out.states.resize(spec.enc_layers);
  for (int k = 0; k < spec.enc_layers; ++k) {
    out.states[k].resize(spec.enc_dirs());
    for (int d = 0; d < spec.enc_dirs(); ++d) {
      out.states[k][d].resize(batch.t_max());
      for (long ti = 0; ti < batch.t_max(); ++ti)
        out.states[k][d][ti] = t.value(enc.runs[k][d].outputs[ti]).col(0);
    }
  }
  out.final_concat = t.value(enc.final_concat).col(0);
  return out;
}

// tanh dense layer over the concatenated final encoder states. For the
// non-attention model this vector seeds the decoder state and is the
// extracted feature.
template <typename S>
VecX<S> context_from_final(const MatX<S>& fc_W, const VecX<S>& fc_b,
                           const VecX<S>& final_concat) {
  return dense<S>(fc_W, fc_b, final_concat, Activation::Tanh);
}

// Teacher-forcing layout for one instance: target is the reversed frame
// sequence, the decoder input is the target shifted right with a zero
// frame first.
template <typename S>
struct DecoderIoSingle {
  std::vector<VecX<S>> inputs;
  std::vector<VecX<S>> targets;
};

template <typename S>
DecoderIoSingle<S> prepare_decoder_io_single(const Spectrogram& spectrogram) {
  Batch<S> batch = single_batch<S>(spectrogram);
  DecoderIo<S> io = prepare_decoder_io(batch);
  DecoderIoSingle<S> out;
  for (const auto& m : io.inputs) out.inputs.push_back(m.col(0));
  for (const auto& m : io.targets) out.targets.push_back(m.col(0));
  return out;
}

// Runs the fixed-context decoder over a teacher-forced input sequence and
// applies the shared tanh projection; returns T x n_mels.
template <typename S>
MatX<S> decode_and_project(const ParamSet<S>& params, const ModelSpec& spec,
                           const VecX<S>& context,
                           const std::vector<VecX<S>>& decoder_input) {
  if (decoder_input.empty()) throw InvalidArgument("decode_and_project: empty input");
  if (context.rows() != spec.context_dim())
    throw ShapeMismatch("decode_and_project: context dim " + std::to_string(context.rows()) +
                        " does not match fc sizing " + std::to_string(spec.context_dim()));
  const long T = static_cast<long>(decoder_input.size());
  Batch<S> batch;  // only lengths/masks matter for the builder
  batch.n_mels = spec.n_mels;
  batch.lengths = {T};
  batch.steps.assign(T, MatX<S>::Zero(spec.n_mels, 1));

  Tape<S> t;
  TapeParams<S> P(t, params, false);
  auto ctx = t.constant(context);
  std::vector<typename Tape<S>::Var> inputs(T);
  for (long ti = 0; ti < T; ++ti) {
    if (decoder_input[ti].rows() != spec.n_mels)
      throw ShapeMismatch("decode_and_project: frame dim mismatch");
    inputs[ti] = t.constant(decoder_input[ti]);
  }
  DecoderOut<S> dec = build_decoder(t, spec, P, ctx, inputs, batch);
  MatX<S> recon(T, spec.n_mels);
  for (long ti = 0; ti < T; ++ti) recon.row(ti) = t.value(dec.recon_steps[ti]).col(0).transpose();
  return recon;
}

// Mean of squared differences over the first valid_length frames and all
// mel bins.
template <typename S>
S reconstruction_mse(const MatX<S>& reconstruction, const MatX<S>& target,
                     long valid_length) {
  if (reconstruction.rows() != target.rows() || reconstruction.cols() != target.cols())
    throw ShapeMismatch("reconstruction_mse: shapes differ");
  if (valid_length > reconstruction.rows())
    throw InvalidArgument("reconstruction_mse: valid_length exceeds frame count");
  if (valid_length < 1) throw InvalidArgument("reconstruction_mse: empty range");
  const auto r = reconstruction.topRows(valid_length);
  const auto g = target.topRows(valid_length);
  return (r - g).squaredNorm() / static_cast<S>(valid_length * reconstruction.cols());
}

}  // namespace s2sae

#endif  // S2SAE_AUTOENCODER_HPP
