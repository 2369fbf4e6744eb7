// include/s2sae/cells.hpp
//
// Recurrent cell step functions on the autodiff tape: GRU (original Cho
// formulation, reset gate applied before the candidate), peephole LSTM, and
// the context-conditioned LSTM whose gates receive an extra C * context
// term. The output gate peephole reads the updated cell state.
//
// Tape-level builders operate on batches (columns); the value-level
// wrappers below run a single step through a throwaway tape.

#ifndef S2SAE_CELLS_HPP
#define S2SAE_CELLS_HPP

#include <string>
#include <vector>

#include "s2sae/param_set.hpp"
#include "s2sae/tape.hpp"

namespace s2sae {

enum class CellType { Gru, Lstm };

inline const char* cell_name(CellType c) { return c == CellType::Gru ? "gru" : "lstm"; }

// --- tape-level parameter handles -------------------------------------------

template <typename S>
struct GruVars {
  typename Tape<S>::Var W_z, W_r, W_h;  // input weights, units x input_dim
  typename Tape<S>::Var R_z, R_r, R_h;  // recurrent weights, units x units
  typename Tape<S>::Var b_z, b_r, b_h;  // biases, units x 1
};

template <typename S>
struct LstmVars {
  typename Tape<S>::Var W_z, W_i, W_f, W_o;  // input weights
  typename Tape<S>::Var R_z, R_i, R_f, R_o;  // recurrent weights
  typename Tape<S>::Var C_z, C_i, C_f, C_o;  // context weights; invalid when absent
  typename Tape<S>::Var p_i, p_f, p_o;       // peepholes, units x 1
  typename Tape<S>::Var b_z, b_i, b_f, b_o;  // biases
};

template <typename S>
struct LstmState {
  typename Tape<S>::Var h, c;
};

// --- step builders -----------------------------------------------------------

// z = sigma(W_z x + R_z h + b_z)
// r = sigma(W_r x + R_r h + b_r)
// hc = tanh(W_h x + R_h (r .* h) + b_h)
// h' = (1 - z) .* h + z .* hc
template <typename S>
typename Tape<S>::Var gru_step_t(Tape<S>& t, const GruVars<S>& p,
                                 typename Tape<S>::Var x, typename Tape<S>::Var h) {
  auto z = t.sigmoid(t.add_colvec(t.add(t.matmul(p.W_z, x), t.matmul(p.R_z, h)), p.b_z));
  auto r = t.sigmoid(t.add_colvec(t.add(t.matmul(p.W_r, x), t.matmul(p.R_r, h)), p.b_r));
  auto hc = t.tanh_(
      t.add_colvec(t.add(t.matmul(p.W_h, x), t.matmul(p.R_h, t.hadamard(r, h))), p.b_h));
  return t.add(t.hadamard(t.affine(z, S{-1}, S{1}), h), t.hadamard(z, hc));
}

// Peephole LSTM with optional context conditioning. With a valid `ctx`
// every gate preactivation gains C_* ctx; without one the C terms are
// skipped entirely, which is the plain peephole cell.
template <typename S>
LstmState<S> lstm_step_t(Tape<S>& t, const LstmVars<S>& p, typename Tape<S>::Var x,
                         const LstmState<S>& prev,
                         typename Tape<S>::Var ctx = typename Tape<S>::Var{}) {
  auto pre = [&](typename Tape<S>::Var W, typename Tape<S>::Var R,
                 typename Tape<S>::Var C) {
    auto a = t.add(t.matmul(W, x), t.matmul(R, prev.h));
    if (ctx.valid()) a = t.add(a, t.matmul(C, ctx));
    return a;
  };
  auto z = t.tanh_(t.add_colvec(pre(p.W_z, p.R_z, p.C_z), p.b_z));
  auto i = t.sigmoid(
      t.add_colvec(t.add(pre(p.W_i, p.R_i, p.C_i), t.colvec_mul(p.p_i, prev.c)), p.b_i));
  auto f = t.sigmoid(
      t.add_colvec(t.add(pre(p.W_f, p.R_f, p.C_f), t.colvec_mul(p.p_f, prev.c)), p.b_f));
  LstmState<S> next;
  next.c = t.add(t.hadamard(f, prev.c), t.hadamard(i, z));
  auto o = t.sigmoid(
      t.add_colvec(t.add(pre(p.W_o, p.R_o, p.C_o), t.colvec_mul(p.p_o, next.c)), p.b_o));
  next.h = t.hadamard(o, t.tanh_(next.c));
  return next;
}

// --- value-level parameters and single-step wrappers -------------------------

template <typename S>
struct GruParams {
  MatX<S> W_z, W_r, W_h;
  MatX<S> R_z, R_r, R_h;
  VecX<S> b_z, b_r, b_h;

  static GruParams zeros(Eigen::Index units, Eigen::Index input_dim) {
    GruParams p;
    p.W_z = p.W_r = p.W_h = MatX<S>::Zero(units, input_dim);
    p.R_z = p.R_r = p.R_h = MatX<S>::Zero(units, units);
    p.b_z = p.b_r = p.b_h = VecX<S>::Zero(units);
    return p;
  }
};

template <typename S>
struct ContextLstmParams {
  MatX<S> W_z, W_i, W_f, W_o;
  MatX<S> R_z, R_i, R_f, R_o;
  MatX<S> C_z, C_i, C_f, C_o;  // 0 x 0 when the cell has no context path
  VecX<S> p_i, p_f, p_o;
  VecX<S> b_z, b_i, b_f, b_o;

  static ContextLstmParams zeros(Eigen::Index units, Eigen::Index input_dim,
                                 Eigen::Index context_dim = 0) {
    ContextLstmParams p;
    p.W_z = p.W_i = p.W_f = p.W_o = MatX<S>::Zero(units, input_dim);
    p.R_z = p.R_i = p.R_f = p.R_o = MatX<S>::Zero(units, units);
    if (context_dim > 0) p.C_z = p.C_i = p.C_f = p.C_o = MatX<S>::Zero(units, context_dim);
    p.p_i = p.p_f = p.p_o = VecX<S>::Zero(units);
    p.b_z = p.b_i = p.b_f = p.b_o = VecX<S>::Zero(units);
    return p;
  }
};

template <typename S>
struct CellState {
  VecX<S> h;
  VecX<S> c;  // empty for GRU

  static CellState zeros(Eigen::Index units, bool with_cell) {
    CellState s;
    s.h = VecX<S>::Zero(units);
    if (with_cell) s.c = VecX<S>::Zero(units);
    return s;
  }
};

namespace detail {

template <typename S>
GruVars<S> load_gru(Tape<S>& t, const GruParams<S>& p) {
  GruVars<S> v;
  v.W_z = t.constant(p.W_z); v.W_r = t.constant(p.W_r); v.W_h = t.constant(p.W_h);
  v.R_z = t.constant(p.R_z); v.R_r = t.constant(p.R_r); v.R_h = t.constant(p.R_h);
  v.b_z = t.constant(p.b_z); v.b_r = t.constant(p.b_r); v.b_h = t.constant(p.b_h);
  return v;
}

template <typename S>
LstmVars<S> load_lstm(Tape<S>& t, const ContextLstmParams<S>& p, bool with_context) {
  LstmVars<S> v;
  v.W_z = t.constant(p.W_z); v.W_i = t.constant(p.W_i);
  v.W_f = t.constant(p.W_f); v.W_o = t.constant(p.W_o);
  v.R_z = t.constant(p.R_z); v.R_i = t.constant(p.R_i);
  v.R_f = t.constant(p.R_f); v.R_o = t.constant(p.R_o);
  if (with_context) {
    if (p.C_z.size() == 0)
      throw ShapeMismatch("context_lstm_step: cell has no context weights");
    v.C_z = t.constant(p.C_z); v.C_i = t.constant(p.C_i);
    v.C_f = t.constant(p.C_f); v.C_o = t.constant(p.C_o);
  }
  v.p_i = t.constant(p.p_i); v.p_f = t.constant(p.p_f); v.p_o = t.constant(p.p_o);
  v.b_z = t.constant(p.b_z); v.b_i = t.constant(p.b_i);
  v.b_f = t.constant(p.b_f); v.b_o = t.constant(p.b_o);
  return v;
}

}  // namespace detail

template <typename S>
VecX<S> gru_step(const GruParams<S>& p, const VecX<S>& x, const VecX<S>& h_prev) {
  Tape<S> t;
  auto vars = detail::load_gru(t, p);
  auto h = t.constant(h_prev);
  auto out = gru_step_t(t, vars, t.constant(x), h);
  return t.value(out).col(0);
}

template <typename S>
CellState<S> lstm_step(const ContextLstmParams<S>& p, const VecX<S>& x,
                       const CellState<S>& prev) {
  Tape<S> t;
  auto vars = detail::load_lstm(t, p, /*with_context=*/false);
  LstmState<S> st{t.constant(prev.h), t.constant(prev.c)};
  auto next = lstm_step_t(t, vars, t.constant(x), st);
  CellState<S> out;
  out.h = t.value(next.h).col(0);
  out.c = t.value(next.c).col(0);
  return out;
}

template <typename S>
CellState<S> context_lstm_step(const ContextLstmParams<S>& p, const VecX<S>& x,
                               const CellState<S>& prev, const VecX<S>& context) {
  if (p.C_z.size() == 0 || p.C_z.cols() != context.rows())
    throw ShapeMismatch("context_lstm_step: context dim does not match C_* columns");
  Tape<S> t;
  auto vars = detail::load_lstm(t, p, /*with_context=*/true);
  LstmState<S> st{t.constant(prev.h), t.constant(prev.c)};
  auto next = lstm_step_t(t, vars, t.constant(x), st, t.constant(context));
  CellState<S> out;
  out.h = t.value(next.h).col(0);
  out.c = t.value(next.c).col(0);
  return out;
}

}  // namespace s2sae

#endif  // S2SAE_CELLS_HPP
