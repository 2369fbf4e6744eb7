// include/s2sae/numerics.hpp
//
// Dense layer, Adam optimiser with global-norm gradient clipping, and the
// central finite-difference gradient checker.

#ifndef S2SAE_NUMERICS_HPP
#define S2SAE_NUMERICS_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "s2sae/errors.hpp"
#include "s2sae/param_set.hpp"

namespace s2sae {

enum class Activation { Tanh, Sigmoid, Identity };

// activation(W x + b)
template <typename S>
VecX<S> dense(const MatX<S>& W, const VecX<S>& b, const VecX<S>& x, Activation act) {
  if (W.cols() != x.rows() || W.rows() != b.rows())
    throw ShapeMismatch("dense: W is " + std::to_string(W.rows()) + "x" +
                        std::to_string(W.cols()) + ", b has " + std::to_string(b.rows()) +
                        ", x has " + std::to_string(x.rows()));
  VecX<S> z = W * x + b;
  switch (act) {
    case Activation::Tanh: return z.array().tanh().matrix();
    case Activation::Sigmoid: return (S{1} / (S{1} + (-z.array()).exp())).matrix();
    case Activation::Identity: return z;
  }
  return z;
}

template <typename S>
struct AdamConfig {
  S lr = S{1e-4};
  S beta1 = S{0.9};
  S beta2 = S{0.999};
  S epsilon = S{1e-8};
  S clip_norm = S{2.0};  // global norm over all gradients; <= 0 disables
};

template <typename S>
struct AdamState {
  std::int64_t step = 0;
  ParamSet<S> m;
  ParamSet<S> v;

  static AdamState make(const ParamSet<S>& params) {
    AdamState st;
    st.m = params.zeros_like();
    st.v = params.zeros_like();
    return st;
  }
};

// Global-norm clipping followed by the standard bias-corrected Adam update.
// Gradients are scaled in place when the global norm exceeds the limit.
template <typename S>
void adam_step(AdamState<S>& state, ParamSet<S>& params, ParamSet<S>& grads,
               const AdamConfig<S>& cfg) {
  if (grads.size() != params.size())
    throw ShapeMismatch("adam_step: gradient set does not mirror parameters");

  double sq_sum = 0.0;
  for (std::size_t i = 0; i < grads.size(); ++i) {
    const auto& g = grads.entry(i).value;
    if (!g.allFinite())
      throw TrainingDiverged("adam_step: non-finite gradient in " + grads.entry(i).name);
    sq_sum += static_cast<double>(g.squaredNorm());
  }
  const double gnorm = std::sqrt(sq_sum);
  if (cfg.clip_norm > S{0} && gnorm > static_cast<double>(cfg.clip_norm)) {
    const S scale = static_cast<S>(static_cast<double>(cfg.clip_norm) / gnorm);
    for (std::size_t i = 0; i < grads.size(); ++i) grads.entry(i).value *= scale;
  }

  state.step += 1;
  const S bc1 = S{1} - static_cast<S>(std::pow(static_cast<double>(cfg.beta1),
                                               static_cast<double>(state.step)));
  const S bc2 = S{1} - static_cast<S>(std::pow(static_cast<double>(cfg.beta2),
                                               static_cast<double>(state.step)));
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto& p = params.entry(i).value;
    auto& m = state.m.entry(i).value;
    auto& v = state.v.entry(i).value;
    const auto& g = grads.entry(i).value;
    if (g.rows() != p.rows() || g.cols() != p.cols())
      throw ShapeMismatch("adam_step: gradient shape mismatch for " + params.entry(i).name);
    m = cfg.beta1 * m + (S{1} - cfg.beta1) * g;
    v = (cfg.beta2 * v.array() + (S{1} - cfg.beta2) * g.array().square()).matrix();
    p.array() -= cfg.lr * (m.array() / bc1) / ((v.array() / bc2).sqrt() + cfg.epsilon);
  }
}

// Loss callback for grad_check: returns the loss at `params`; when
// `grads_out` is non-null it must also be filled with analytic gradients.
using LossAndGradFn =
    std::function<double(const ParamSet<double>&, ParamSet<double>* grads_out)>;

struct GradCheckResult {
  double max_rel_err = 0.0;
  std::string worst_param;
  Eigen::Index worst_row = 0, worst_col = 0;
};

// Central finite differences (f(p+h) - f(p-h)) / 2h against the analytic
// gradient, elementwise; relative error uses max(|a|, |fd|, 1e-8) as the
// denominator. 64-bit only.
inline GradCheckResult grad_check(const LossAndGradFn& fn, const ParamSet<double>& at,
                                  double h = 1e-5) {
  ParamSet<double> analytic = at.zeros_like();
  const double base = fn(at, &analytic);
  if (!std::isfinite(base)) throw InvalidInput("grad_check: non-finite loss");

  GradCheckResult res;
  ParamSet<double> probe = at;
  for (std::size_t i = 0; i < probe.size(); ++i) {
    auto& p = probe.entry(i).value;
    for (Eigen::Index r = 0; r < p.rows(); ++r) {
      for (Eigen::Index c = 0; c < p.cols(); ++c) {
        const double saved = p(r, c);
        p(r, c) = saved + h;
        const double fp = fn(probe, nullptr);
        p(r, c) = saved - h;
        const double fm = fn(probe, nullptr);
        p(r, c) = saved;
        if (!std::isfinite(fp) || !std::isfinite(fm))
          throw InvalidInput("grad_check: non-finite loss at perturbed point");
        const double fd = (fp - fm) / (2.0 * h);
        const double a = analytic.entry(i).value(r, c);
        const double rel = std::abs(a - fd) / std::max({std::abs(a), std::abs(fd), 1e-8});
        if (rel > res.max_rel_err) {
          res.max_rel_err = rel;
          res.worst_param = probe.entry(i).name;
          res.worst_row = r;
          res.worst_col = c;
        }
      }
    }
  }
  return res;
}

}  // namespace s2sae

#endif  // S2SAE_NUMERICS_HPP
