// include/s2sae/attention.hpp
//
// Operation surface of the attention model: additive alignment scores,
// softmax weights, dynamic context, the full attention decode for one
// instance, and the two feature taps.

#ifndef S2SAE_ATTENTION_HPP
#define S2SAE_ATTENTION_HPP

#include <string>
#include <vector>

#include "s2sae/model.hpp"

namespace s2sae {

template <typename S>
struct AlignmentParams {
  VecX<S> v_a;   // l
  MatX<S> W_a;   // l x n_dec_state
  MatX<S> U_a;   // l x n_enc_state
};

// e_j = v_a' tanh(W_a h_dec_prev + U_a enc_states[j])
template <typename S>
VecX<S> alignment_scores(const AlignmentParams<S>& p, const VecX<S>& h_dec_prev,
                         const std::vector<VecX<S>>& enc_states) {
  if (p.W_a.rows() != p.v_a.rows() || p.U_a.rows() != p.v_a.rows())
    throw ShapeMismatch("alignment_scores: inconsistent alignment dims");
  if (p.W_a.cols() != h_dec_prev.rows())
    throw ShapeMismatch("alignment_scores: decoder state dim mismatch");
  VecX<S> e(enc_states.size());
  const VecX<S> wh = p.W_a * h_dec_prev;
  for (std::size_t j = 0; j < enc_states.size(); ++j) {
    if (p.U_a.cols() != enc_states[j].rows())
      throw ShapeMismatch("alignment_scores: encoder state dim mismatch");
    e[j] = p.v_a.dot((wh + p.U_a * enc_states[j]).array().tanh().matrix());
  }
  return e;
}

// Softmax with max subtraction.
template <typename S>
VecX<S> attention_weights(const VecX<S>& scores) {
  if (scores.rows() == 0) throw InvalidArgument("attention_weights: empty scores");
  if (!scores.allFinite()) throw InvalidInput("attention_weights: non-finite scores");
  const S m = scores.maxCoeff();
  VecX<S> ex = (scores.array() - m).exp().matrix();
  return ex / ex.sum();
}

// c = sum_j alpha_j enc_states[j]
template <typename S>
VecX<S> attention_context(const VecX<S>& alpha, const std::vector<VecX<S>>& enc_states) {
  if (static_cast<std::size_t>(alpha.rows()) != enc_states.size())
    throw ShapeMismatch("attention_context: weight count does not match state count");
  if (enc_states.empty()) throw InvalidArgument("attention_context: no encoder states");
  VecX<S> c = VecX<S>::Zero(enc_states[0].rows());
  for (std::size_t j = 0; j < enc_states.size(); ++j) c += alpha[j] * enc_states[j];
  return c;
}

template <typename S>
struct AttentionTrace {
  MatX<S> alphas;               // T_dec x T_enc
  std::vector<VecX<S>> contexts;
};

template <typename S>
struct AttentionDecodeResult {
  MatX<S> reconstruction;  // T x n_mels
  AttentionTrace<S> trace;
  VecX<S> dec_final_state;  // last decoder layer, final valid step
};

// Full teacher-forced attention decode of one instance through the real
// training path.
template <typename S>
AttentionDecodeResult<S> attention_decode(const ParamSet<S>& params, const ModelSpec& spec,
                                          const Spectrogram& spectrogram) {
  if (!spec.attention)
    throw ConfigMismatch("attention_decode: model spec has no attention");
  Batch<S> batch = single_batch<S>(spectrogram);
  Tape<S> t;
  auto art = forward_model(t, spec, params, batch, /*params_require_grad=*/false);

  AttentionDecodeResult<S> out;
  const long T = batch.t_max();
  std::vector<VecX<S>> enc_states;
  enc_states.reserve(T);
  for (long j = 0; j < T; ++j) enc_states.push_back(t.value(art.enc_top_steps[j]).col(0));

  out.reconstruction.resize(T, spec.n_mels);
  out.trace.alphas.resize(T, T);
  for (long i = 0; i < T; ++i) {
    out.reconstruction.row(i) = t.value(art.recon_steps[i]).col(0).transpose();
    out.trace.alphas.row(i) = t.value(art.alpha_steps[i]).col(0).transpose();
    out.trace.contexts.push_back(
        attention_context<S>(VecX<S>(out.trace.alphas.row(i).transpose()), enc_states));
  }
  out.dec_final_state = t.value(art.state_dec).col(0);
  return out;
}

enum class FeatureTap { Context, FcEnc, StateDec };

inline FeatureTap tap_from_name(const std::string& name) {
  if (name == "context") return FeatureTap::Context;
  if (name == "fc_enc") return FeatureTap::FcEnc;
  if (name == "state_dec") return FeatureTap::StateDec;
  throw InvalidArgument("unknown feature tap '" + name +
                        "' (expected context, fc_enc or state_dec)");
}

inline const char* tap_name(FeatureTap tap) {
  switch (tap) {
    case FeatureTap::Context: return "context";
    case FeatureTap::FcEnc: return "fc_enc";
    case FeatureTap::StateDec: return "state_dec";
  }
  return "?";
}

// Feature vector of one instance. `context` requires a non-attention
// model; `fc_enc` and `state_dec` require attention.
template <typename S>
VecX<S> tap_features(const ModelSpec& spec, const ParamSet<S>& params,
                     const Spectrogram& spectrogram, FeatureTap tap) {
  if (tap == FeatureTap::Context && spec.attention)
    throw ConfigMismatch("tap 'context' requires a non-attention checkpoint");
  if (tap != FeatureTap::Context && !spec.attention)
    throw ConfigMismatch(std::string("tap '") + tap_name(tap) +
                         "' requires an attention checkpoint");

  Batch<S> batch = single_batch<S>(spectrogram);
  Tape<S> t;
  const ForwardMode mode =
      tap == FeatureTap::StateDec ? ForwardMode::Full : ForwardMode::EncoderOnly;
  auto art = forward_model(t, spec, params, batch, /*params_require_grad=*/false, mode);
  if (tap == FeatureTap::StateDec) return t.value(art.state_dec).col(0);
  return t.value(art.feature_context).col(0);
}

}  // namespace s2sae

#endif  // S2SAE_ATTENTION_HPP
