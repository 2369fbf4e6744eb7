// include/s2sae/model.hpp
//
// Tape-level builders for both autoencoder families and the Model wrapper
// used by training and feature extraction.
//
// Variable-length batches use copy-through masking: at padded steps a
// state keeps its previous value, so the carried state after the full loop
// equals the state at each element's own last frame. The backward encoder
// direction iterates from T_max-1 down to 0 under the same masks, which
// starts each element's recursion at its own final frame and leaves the
// per-step outputs aligned with the forward direction.

#ifndef S2SAE_MODEL_HPP
#define S2SAE_MODEL_HPP

#include <string>
#include <unordered_map>
#include <vector>

#include "s2sae/batch.hpp"
#include "s2sae/cells.hpp"
#include "s2sae/model_spec.hpp"
#include "s2sae/numerics.hpp"
#include "s2sae/rng.hpp"

namespace s2sae {

// Parameter names follow "enc/l{layer}/{fwd|bwd}/{W_z,...}"; see
// init_params for the full inventory of a model family.
namespace names {
inline std::string cell_prefix(const std::string& scope, int layer, int dir) {
  return scope + "/l" + std::to_string(layer) + "/" + (dir == 0 ? "fwd" : "bwd") + "/";
}
}  // namespace names

namespace detail {

template <typename S>
void add_gru_params(ParamSet<S>& ps, const std::string& prefix, int units, int input_dim,
                    Rng& rng) {
  for (const char* g : {"W_z", "W_r", "W_h"})
    ps.add(prefix + g, glorot_init<S>(units, input_dim, rng));
  for (const char* g : {"R_z", "R_r", "R_h"})
    ps.add(prefix + g, glorot_init<S>(units, units, rng));
  for (const char* g : {"b_z", "b_r", "b_h"})
    ps.add_vector(prefix + g, VecX<S>::Zero(units));
}

template <typename S>
void add_lstm_params(ParamSet<S>& ps, const std::string& prefix, int units, int input_dim,
                     int context_dim, Rng& rng) {
  for (const char* g : {"W_z", "W_i", "W_f", "W_o"})
    ps.add(prefix + g, glorot_init<S>(units, input_dim, rng));
  for (const char* g : {"R_z", "R_i", "R_f", "R_o"})
    ps.add(prefix + g, glorot_init<S>(units, units, rng));
  if (context_dim > 0)
    for (const char* g : {"C_z", "C_i", "C_f", "C_o"})
      ps.add(prefix + g, glorot_init<S>(units, context_dim, rng));
  // Peepholes start at zero; the forget gate bias starts at +1 so memory is
  // initially retained.
  for (const char* g : {"p_i", "p_f", "p_o"})
    ps.add_vector(prefix + g, VecX<S>::Zero(units));
  ps.add_vector(prefix + "b_z", VecX<S>::Zero(units));
  ps.add_vector(prefix + "b_i", VecX<S>::Zero(units));
  ps.add_vector(prefix + "b_f", VecX<S>::Ones(units));
  ps.add_vector(prefix + "b_o", VecX<S>::Zero(units));
}

template <typename S>
void add_cell_params(ParamSet<S>& ps, CellType cell, const std::string& prefix, int units,
                     int input_dim, int context_dim, Rng& rng) {
  if (cell == CellType::Gru) {
    // GRU context conditioning concatenates the context onto the input.
    add_gru_params(ps, prefix, units, input_dim + context_dim, rng);
  } else {
    add_lstm_params(ps, prefix, units, input_dim, context_dim, rng);
  }
}

}  // namespace detail

// Fresh Glorot-initialised parameters for `spec`, drawn from `rng` in a
// fixed order (encoder layers, then the family-specific head, decoder,
// projection).
template <typename S>
ParamSet<S> init_params(const ModelSpec& spec, Rng& rng) {
  spec.validate();
  ParamSet<S> ps;

  int layer_input = spec.n_mels;
  for (int k = 0; k < spec.enc_layers; ++k) {
    for (int d = 0; d < spec.enc_dirs(); ++d)
      detail::add_cell_params(ps, spec.cell, names::cell_prefix("enc", k, d), spec.units,
                              layer_input, 0, rng);
    layer_input = spec.enc_dirs() * spec.units;
  }

  if (spec.attention) {
    const int l = spec.alignment_dim();
    ps.add("fc_enc/W", glorot_init<S>(spec.units, spec.final_concat_dim(), rng));
    ps.add_vector("fc_enc/b", VecX<S>::Zero(spec.units));
    detail::add_cell_params(ps, spec.cell, "query/", spec.units, spec.n_mels, 0, rng);
    ps.add("attn/W_a", glorot_init<S>(l, spec.units, rng));
    ps.add("attn/U_a", glorot_init<S>(l, spec.enc_state_dim(), rng));
    ps.add("attn/v_a", glorot_init<S>(1, l, rng));
    int dec_input = spec.n_mels;
    for (int k = 0; k < spec.dec_layers; ++k) {
      detail::add_cell_params(ps, spec.cell, names::cell_prefix("dec", k, 0), spec.units,
                              dec_input, spec.enc_state_dim(), rng);
      dec_input = spec.units;
    }
    ps.add("proj/W", glorot_init<S>(spec.n_mels, spec.units, rng));
  } else {
    const int ctx = spec.context_dim();
    ps.add("fc/W", glorot_init<S>(ctx, spec.final_concat_dim(), rng));
    ps.add_vector("fc/b", VecX<S>::Zero(ctx));
    int dec_input = spec.n_mels;
    for (int k = 0; k < spec.dec_layers; ++k) {
      for (int d = 0; d < spec.dec_dirs(); ++d)
        detail::add_cell_params(ps, spec.cell, names::cell_prefix("dec", k, d), spec.units,
                                dec_input, ctx, rng);
      dec_input = spec.dec_dirs() * spec.units;
    }
    ps.add("proj/W", glorot_init<S>(spec.n_mels, spec.dec_dirs() * spec.units, rng));
  }
  ps.add_vector("proj/b", VecX<S>::Zero(spec.n_mels));
  return ps;
}

// --- parameters on the tape ---------------------------------------------------

template <typename S>
class TapeParams {
 public:
  TapeParams(Tape<S>& tape, const ParamSet<S>& params, bool requires_grad) : tape_(&tape) {
    for (std::size_t i = 0; i < params.size(); ++i) {
      const auto& e = params.entry(i);
      vars_.emplace(e.name, tape.leaf(e.value, requires_grad));
    }
  }

  typename Tape<S>::Var operator()(const std::string& name) const {
    auto it = vars_.find(name);
    if (it == vars_.end()) throw InvalidArgument("tape params: unknown name " + name);
    return it->second;
  }

  bool contains(const std::string& name) const { return vars_.count(name) > 0; }

  // Gradients in the same order and shapes as `params`.
  ParamSet<S> gradients(const ParamSet<S>& params) const {
    ParamSet<S> g;
    for (std::size_t i = 0; i < params.size(); ++i) {
      const auto& e = params.entry(i);
      g.add(e.name, tape_->grad((*this)(e.name)), e.rank);
    }
    return g;
  }

 private:
  Tape<S>* tape_;
  std::unordered_map<std::string, typename Tape<S>::Var> vars_;
};

namespace detail {

template <typename S>
GruVars<S> gru_vars(const TapeParams<S>& P, const std::string& prefix) {
  GruVars<S> v;
  v.W_z = P(prefix + "W_z"); v.W_r = P(prefix + "W_r"); v.W_h = P(prefix + "W_h");
  v.R_z = P(prefix + "R_z"); v.R_r = P(prefix + "R_r"); v.R_h = P(prefix + "R_h");
  v.b_z = P(prefix + "b_z"); v.b_r = P(prefix + "b_r"); v.b_h = P(prefix + "b_h");
  return v;
}

template <typename S>
LstmVars<S> lstm_vars(const TapeParams<S>& P, const std::string& prefix, bool with_context) {
  LstmVars<S> v;
  v.W_z = P(prefix + "W_z"); v.W_i = P(prefix + "W_i");
  v.W_f = P(prefix + "W_f"); v.W_o = P(prefix + "W_o");
  v.R_z = P(prefix + "R_z"); v.R_i = P(prefix + "R_i");
  v.R_f = P(prefix + "R_f"); v.R_o = P(prefix + "R_o");
  if (with_context) {
    v.C_z = P(prefix + "C_z"); v.C_i = P(prefix + "C_i");
    v.C_f = P(prefix + "C_f"); v.C_o = P(prefix + "C_o");
  }
  v.p_i = P(prefix + "p_i"); v.p_f = P(prefix + "p_f"); v.p_o = P(prefix + "p_o");
  v.b_z = P(prefix + "b_z"); v.b_i = P(prefix + "b_i");
  v.b_f = P(prefix + "b_f"); v.b_o = P(prefix + "b_o");
  return v;
}

// One recurrent layer-direction over a step sequence with copy-through
// masking. `reverse` runs time from T-1 down to 0 (per-step outputs stay
// indexed by original position). The context, when valid, conditions an
// LSTM through its C_* weights and is concatenated onto a GRU input.
template <typename S>
struct LayerRun {
  std::vector<typename Tape<S>::Var> outputs;  // per original step, units x B
  typename Tape<S>::Var final_h;               // carried state after the loop
};

template <typename S>
LayerRun<S> run_layer(Tape<S>& t, const ModelSpec& spec, const TapeParams<S>& P,
                      const std::string& prefix,
                      const std::vector<typename Tape<S>::Var>& inputs,
                      const Batch<S>& batch, bool reverse,
                      typename Tape<S>::Var context = typename Tape<S>::Var{},
                      typename Tape<S>::Var h0 = typename Tape<S>::Var{},
                      typename Tape<S>::Var c0 = typename Tape<S>::Var{}) {
  const long T = batch.t_max();
  const long B = batch.size();
  const bool gru = spec.cell == CellType::Gru;

  LayerRun<S> run;
  run.outputs.resize(T);
  auto zero_state = t.constant(MatX<S>::Zero(spec.units, B));
  auto h = h0.valid() ? h0 : zero_state;
  auto c = c0.valid() ? c0 : zero_state;  // LSTM only

  GruVars<S> gv;
  LstmVars<S> lv;
  if (gru) gv = gru_vars(P, prefix);
  else lv = lstm_vars(P, prefix, context.valid());

  for (long step = 0; step < T; ++step) {
    const long ti = reverse ? T - 1 - step : step;
    const Eigen::RowVectorX<S> mask = batch.step_mask(ti);
    auto x = inputs[ti];
    if (gru && context.valid()) x = t.concat_rows({x, context});
    if (gru) {
      auto h_new = gru_step_t(t, gv, x, h);
      h = t.mask_blend(h_new, h, mask);
    } else {
      LstmState<S> next = lstm_step_t(t, lv, x, LstmState<S>{h, c}, context);
      h = t.mask_blend(next.h, h, mask);
      c = t.mask_blend(next.c, c, mask);
    }
    run.outputs[ti] = h;
  }
  run.final_h = h;
  return run;
}

}  // namespace detail

// --- encoder -------------------------------------------------------------------

template <typename S>
struct EncoderVars {
  // combined per-step outputs of each layer ([fwd; bwd] when bidirectional)
  std::vector<std::vector<typename Tape<S>::Var>> layer_steps;
  // per layer, per direction: outputs and final state
  std::vector<std::vector<detail::LayerRun<S>>> runs;
  typename Tape<S>::Var final_concat;  // [l0 fwd, l0 bwd, l1 fwd, l1 bwd] finals
};

template <typename S>
EncoderVars<S> build_encoder(Tape<S>& t, const ModelSpec& spec, const TapeParams<S>& P,
                             const std::vector<typename Tape<S>::Var>& x_steps,
                             const Batch<S>& batch) {
  EncoderVars<S> enc;
  std::vector<typename Tape<S>::Var> finals;
  std::vector<typename Tape<S>::Var> layer_input = x_steps;

  for (int k = 0; k < spec.enc_layers; ++k) {
    std::vector<detail::LayerRun<S>> dir_runs;
    for (int d = 0; d < spec.enc_dirs(); ++d) {
      dir_runs.push_back(detail::run_layer(t, spec, P, names::cell_prefix("enc", k, d),
                                           layer_input, batch, /*reverse=*/d == 1));
      finals.push_back(dir_runs.back().final_h);
    }
    std::vector<typename Tape<S>::Var> combined(batch.t_max());
    for (long ti = 0; ti < batch.t_max(); ++ti) {
      if (spec.enc_dirs() == 2)
        combined[ti] = t.concat_rows({dir_runs[0].outputs[ti], dir_runs[1].outputs[ti]});
      else
        combined[ti] = dir_runs[0].outputs[ti];
    }
    enc.runs.push_back(std::move(dir_runs));
    enc.layer_steps.push_back(combined);
    layer_input = enc.layer_steps.back();
  }
  enc.final_concat = t.concat_rows(finals);
  return enc;
}

// --- decoders -------------------------------------------------------------------

template <typename S>
struct DecoderOut {
  std::vector<typename Tape<S>::Var> recon_steps;  // n_mels x B per step
  typename Tape<S>::Var last_layer_final_h;        // units x B
  std::vector<typename Tape<S>::Var> alpha_steps;  // attention only; T_enc x B per step
};

// Decoder initial states read the context by equal split across
// layer-direction chunks: chunk rows [0, units) seed h, rows [units, 2 units)
// seed the LSTM cell state when the chunk is wide enough, missing entries
// stay zero and surplus entries are ignored.
template <typename S>
void split_context_state(Tape<S>& t, const ModelSpec& spec, typename Tape<S>::Var ctx,
                         int chunk_index, int n_chunks, long batch_size,
                         typename Tape<S>::Var& h0, typename Tape<S>::Var& c0) {
  const long ctx_dim = t.value(ctx).rows();
  const long chunk = ctx_dim / n_chunks;
  const long base = chunk_index * chunk;
  const long u = spec.units;

  auto take = [&](long offset, long want) -> typename Tape<S>::Var {
    const long have = std::min<long>(want, std::max<long>(0, chunk - offset));
    if (have <= 0) return t.constant(MatX<S>::Zero(want, batch_size));
    auto part = t.slice_rows(ctx, base + offset, have);
    if (have == want) return part;
    auto pad = t.constant(MatX<S>::Zero(want - have, batch_size));
    return t.concat_rows({part, pad});
  };

  h0 = take(0, u);
  c0 = spec.cell == CellType::Lstm ? take(u, u) : typename Tape<S>::Var{};
}

// Fixed-context decoder of the non-attention family. The context enters
// every decoder layer, every step, and additionally seeds the initial
// states.
template <typename S>
DecoderOut<S> build_decoder(Tape<S>& t, const ModelSpec& spec, const TapeParams<S>& P,
                            typename Tape<S>::Var context,
                            const std::vector<typename Tape<S>::Var>& dec_inputs,
                            const Batch<S>& batch) {
  const int n_chunks = spec.dec_layers * spec.dec_dirs();
  std::vector<typename Tape<S>::Var> layer_input = dec_inputs;
  detail::LayerRun<S> top_run;

  for (int k = 0; k < spec.dec_layers; ++k) {
    std::vector<detail::LayerRun<S>> dir_runs;
    for (int d = 0; d < spec.dec_dirs(); ++d) {
      typename Tape<S>::Var h0, c0;
      split_context_state(t, spec, context, k * spec.dec_dirs() + d, n_chunks,
                          batch.size(), h0, c0);
      dir_runs.push_back(detail::run_layer(t, spec, P, names::cell_prefix("dec", k, d),
                                           layer_input, batch, /*reverse=*/d == 1, context,
                                           h0, c0));
    }
    std::vector<typename Tape<S>::Var> combined(batch.t_max());
    for (long ti = 0; ti < batch.t_max(); ++ti)
      combined[ti] = spec.dec_dirs() == 2
                         ? t.concat_rows({dir_runs[0].outputs[ti], dir_runs[1].outputs[ti]})
                         : dir_runs[0].outputs[ti];
    layer_input = combined;
    top_run = dir_runs[0];
  }

  DecoderOut<S> out;
  out.last_layer_final_h = top_run.final_h;
  out.recon_steps.resize(batch.t_max());
  auto W_p = P("proj/W");
  auto b_p = P("proj/b");
  for (long ti = 0; ti < batch.t_max(); ++ti)
    out.recon_steps[ti] = t.tanh_(t.add_colvec(t.matmul(W_p, layer_input[ti]), b_p));
  return out;
}

// Attention decoder: a query RNN layer advances on the teacher-forced
// frame, alignment scores against every encoder step are softmax-normalised
// into weights, and the resulting dynamic context conditions the stacked
// decoder layers. The encoder-side fully connected layer seeds the query
// layer's initial state and doubles as the fc_enc feature tap.
template <typename S>
DecoderOut<S> build_attention_decoder(Tape<S>& t, const ModelSpec& spec,
                                      const TapeParams<S>& P,
                                      const EncoderVars<S>& enc,
                                      typename Tape<S>::Var fc_enc,
                                      const std::vector<typename Tape<S>::Var>& dec_inputs,
                                      const Batch<S>& batch) {
  const long T = batch.t_max();
  const long B = batch.size();
  const bool gru = spec.cell == CellType::Gru;
  const auto& enc_top = enc.layer_steps.back();

  // Score mask: padded encoder steps get a large negative additive term.
  MatX<S> score_mask = MatX<S>::Zero(T, B);
  for (long j = 0; j < T; ++j)
    for (long b = 0; b < B; ++b)
      if (j >= batch.lengths[b]) score_mask(j, b) = S{-1e30};

  auto W_a = P("attn/W_a");
  auto U_a = P("attn/U_a");
  auto v_a = P("attn/v_a");
  std::vector<typename Tape<S>::Var> UH(T);
  for (long j = 0; j < T; ++j) UH[j] = t.matmul(U_a, enc_top[j]);

  // query layer state; h0 comes from the fc_enc activations
  auto q_h = fc_enc;
  auto q_c = t.constant(MatX<S>::Zero(spec.units, B));
  GruVars<S> qgv;
  LstmVars<S> qlv;
  if (gru) qgv = detail::gru_vars(P, "query/");
  else qlv = detail::lstm_vars(P, "query/", false);

  // stacked decoder layer states (unidirectional)
  std::vector<typename Tape<S>::Var> dh(spec.dec_layers), dc(spec.dec_layers);
  std::vector<GruVars<S>> dgv(spec.dec_layers);
  std::vector<LstmVars<S>> dlv(spec.dec_layers);
  for (int k = 0; k < spec.dec_layers; ++k) {
    dh[k] = t.constant(MatX<S>::Zero(spec.units, B));
    dc[k] = dh[k];
    if (gru) dgv[k] = detail::gru_vars(P, names::cell_prefix("dec", k, 0));
    else dlv[k] = detail::lstm_vars(P, names::cell_prefix("dec", k, 0), true);
  }

  auto W_p = P("proj/W");
  auto b_p = P("proj/b");

  DecoderOut<S> out;
  out.recon_steps.resize(T);
  out.alpha_steps.resize(T);

  for (long i = 0; i < T; ++i) {
    const Eigen::RowVectorX<S> mask = batch.step_mask(i);

    if (gru) {
      auto q_new = gru_step_t(t, qgv, dec_inputs[i], q_h);
      q_h = t.mask_blend(q_new, q_h, mask);
    } else {
      LstmState<S> q_next = lstm_step_t(t, qlv, dec_inputs[i], LstmState<S>{q_h, q_c});
      q_h = t.mask_blend(q_next.h, q_h, mask);
      q_c = t.mask_blend(q_next.c, q_c, mask);
    }

    auto Wq = t.matmul(W_a, q_h);
    std::vector<typename Tape<S>::Var> scores(T);
    for (long j = 0; j < T; ++j) scores[j] = t.matmul(v_a, t.tanh_(t.add(Wq, UH[j])));
    auto e = t.concat_rows(scores);
    auto alpha = t.softmax_rows_per_col(e, score_mask);
    auto ctx = t.attend_mix(enc_top, alpha);
    out.alpha_steps[i] = alpha;

    auto layer_x = dec_inputs[i];
    for (int k = 0; k < spec.dec_layers; ++k) {
      if (gru) {
        auto x = t.concat_rows({layer_x, ctx});
        auto h_new = gru_step_t(t, dgv[k], x, dh[k]);
        dh[k] = t.mask_blend(h_new, dh[k], mask);
      } else {
        LstmState<S> next = lstm_step_t(t, dlv[k], layer_x, LstmState<S>{dh[k], dc[k]}, ctx);
        dh[k] = t.mask_blend(next.h, dh[k], mask);
        dc[k] = t.mask_blend(next.c, dc[k], mask);
      }
      layer_x = dh[k];
    }
    out.recon_steps[i] = t.tanh_(t.add_colvec(t.matmul(W_p, layer_x), b_p));
  }
  out.last_layer_final_h = dh[spec.dec_layers - 1];
  return out;
}

// Mean squared error per element over its valid frames and all mel bands,
// averaged over the batch. Padded frames carry zero weight.
template <typename S>
typename Tape<S>::Var masked_mse(Tape<S>& t,
                                 const std::vector<typename Tape<S>::Var>& recon_steps,
                                 const std::vector<MatX<S>>& targets,
                                 const Batch<S>& batch) {
  const long B = batch.size();
  typename Tape<S>::Var loss = t.constant(MatX<S>::Zero(1, 1));
  for (long ti = 0; ti < batch.t_max(); ++ti) {
    Eigen::RowVectorX<S> w(B);
    for (long b = 0; b < B; ++b)
      w[b] = ti < batch.lengths[b]
                 ? S{1} / static_cast<S>(batch.lengths[b] * batch.n_mels * B)
                 : S{0};
    auto d = t.sub(recon_steps[ti], t.constant(targets[ti]));
    loss = t.add(loss, t.sum_all(t.scale_cols(t.hadamard(d, d), w)));
  }
  return loss;
}

// --- full forward ---------------------------------------------------------------

enum class ForwardMode { Full, EncoderOnly };

template <typename S>
struct ForwardArtifacts {
  TapeParams<S> params;
  typename Tape<S>::Var loss;             // Full mode only
  typename Tape<S>::Var feature_context;  // fc context (non-attn) / fc_enc (attn)
  typename Tape<S>::Var final_concat;
  typename Tape<S>::Var state_dec;                 // last decoder layer carried state
  std::vector<typename Tape<S>::Var> enc_top_steps;
  std::vector<typename Tape<S>::Var> recon_steps;  // Full mode only
  std::vector<typename Tape<S>::Var> alpha_steps;  // attention + Full mode only
};

template <typename S>
ForwardArtifacts<S> forward_model(Tape<S>& t, const ModelSpec& spec,
                                  const ParamSet<S>& params, const Batch<S>& batch,
                                  bool params_require_grad,
                                  ForwardMode mode = ForwardMode::Full) {
  spec.validate();
  if (batch.n_mels != spec.n_mels)
    throw ConfigMismatch("forward: batch has " + std::to_string(batch.n_mels) +
                         " mel bands, model expects " + std::to_string(spec.n_mels));

  ForwardArtifacts<S> art{TapeParams<S>(t, params, params_require_grad),
                          typename Tape<S>::Var{}, typename Tape<S>::Var{},
                          typename Tape<S>::Var{}, typename Tape<S>::Var{}, {}, {}, {}};
  const TapeParams<S>& P = art.params;

  std::vector<typename Tape<S>::Var> x_steps(batch.t_max());
  for (long ti = 0; ti < batch.t_max(); ++ti) x_steps[ti] = t.constant(batch.steps[ti]);

  EncoderVars<S> enc = build_encoder(t, spec, P, x_steps, batch);
  art.final_concat = enc.final_concat;
  art.enc_top_steps = enc.layer_steps.back();

  if (spec.attention) {
    art.feature_context =
        t.tanh_(t.add_colvec(t.matmul(P("fc_enc/W"), enc.final_concat), P("fc_enc/b")));
  } else {
    art.feature_context =
        t.tanh_(t.add_colvec(t.matmul(P("fc/W"), enc.final_concat), P("fc/b")));
  }
  if (mode == ForwardMode::EncoderOnly) return art;

  DecoderIo<S> io = prepare_decoder_io(batch);
  std::vector<typename Tape<S>::Var> dec_inputs(batch.t_max());
  for (long ti = 0; ti < batch.t_max(); ++ti) dec_inputs[ti] = t.constant(io.inputs[ti]);

  DecoderOut<S> dec;
  if (spec.attention)
    dec = build_attention_decoder(t, spec, P, enc, art.feature_context, dec_inputs, batch);
  else
    dec = build_decoder(t, spec, P, art.feature_context, dec_inputs, batch);

  art.state_dec = dec.last_layer_final_h;
  art.recon_steps = dec.recon_steps;
  art.alpha_steps = dec.alpha_steps;
  art.loss = masked_mse(t, dec.recon_steps, io.targets, batch);
  return art;
}

// --- model wrapper ----------------------------------------------------------------

template <typename S>
struct Model {
  ModelSpec spec;
  ParamSet<S> params;

  static Model init(const ModelSpec& spec, std::uint64_t seed) {
    Rng rng(seed);
    return Model{spec, init_params<S>(spec, rng)};
  }

  S loss_and_grad(const Batch<S>& batch, ParamSet<S>& grads_out) const {
    Tape<S> t;
    auto art = forward_model(t, spec, params, batch, /*params_require_grad=*/true);
    t.backward(art.loss);
    grads_out = art.params.gradients(params);
    return t.value(art.loss)(0, 0);
  }

  S loss_only(const Batch<S>& batch) const {
    Tape<S> t;
    auto art = forward_model(t, spec, params, batch, /*params_require_grad=*/false);
    return t.value(art.loss)(0, 0);
  }
};

}  // namespace s2sae

#endif  // S2SAE_MODEL_HPP
