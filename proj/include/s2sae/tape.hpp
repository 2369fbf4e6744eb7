// include/s2sae/tape.hpp
//
// Minimal reverse-mode autodiff over dense matrices. Nodes are created in
// topological order by construction; backward() walks them in reverse and
// calls a per-node closure that accumulates into parent gradients. Batch
// elements live in matrix columns, so one node holds one time step of a
// whole minibatch.
//
// Only the operations the two autoencoder families need are provided; this
// is not a general computation graph.

#ifndef S2SAE_TAPE_HPP
#define S2SAE_TAPE_HPP

#include <Eigen/Dense>
#include <functional>
#include <utility>
#include <vector>

#include "s2sae/errors.hpp"
#include "s2sae/param_set.hpp"

namespace s2sae {

template <typename S>
class Tape {
 public:
  using Mat = MatX<S>;
  using Arr = Eigen::Array<S, Eigen::Dynamic, Eigen::Dynamic>;

  struct Var {
    int id = -1;
    bool valid() const { return id >= 0; }
  };

  // --- node creation -------------------------------------------------------

  Var leaf(Mat value, bool requires_grad) {
    return push(std::move(value), requires_grad, nullptr);
  }

  Var constant(Mat value) { return leaf(std::move(value), false); }

  // --- access --------------------------------------------------------------

  const Mat& value(Var v) const { return nodes_[check(v)].value; }

  // Gradient of the last backward() target w.r.t. v; zeros if v was never
  // reached.
  Mat grad(Var v) const {
    const Node& n = nodes_[check(v)];
    if (n.grad.size() == 0) return Mat::Zero(n.value.rows(), n.value.cols());
    return n.grad;
  }

  std::size_t node_count() const { return nodes_.size(); }

  // --- ops -----------------------------------------------------------------

  Var matmul(Var a, Var b) {
    const Mat& A = value(a);
    const Mat& B = value(b);
    if (A.cols() != B.rows()) throw ShapeMismatch("matmul: inner dimensions differ");
    Mat out = A * B;
    return push(std::move(out), needs(a) || needs(b), [this, a, b](const Mat& g) {
      if (needs(a)) acc(a, g * value(b).transpose());
      if (needs(b)) acc(b, value(a).transpose() * g);
    });
  }

  Var add(Var a, Var b) {
    same_shape(a, b, "add");
    Mat out = value(a) + value(b);
    return push(std::move(out), needs(a) || needs(b), [this, a, b](const Mat& g) {
      if (needs(a)) acc(a, g);
      if (needs(b)) acc(b, g);
    });
  }

  Var sub(Var a, Var b) {
    same_shape(a, b, "sub");
    Mat out = value(a) - value(b);
    return push(std::move(out), needs(a) || needs(b), [this, a, b](const Mat& g) {
      if (needs(a)) acc(a, g);
      if (needs(b)) acc(b, Mat(-g));
    });
  }

  // a (m x n) plus column vector b (m x 1) broadcast over columns.
  Var add_colvec(Var a, Var b) {
    const Mat& A = value(a);
    const Mat& B = value(b);
    if (B.cols() != 1 || A.rows() != B.rows())
      throw ShapeMismatch("add_colvec: bias must be rows x 1");
    Mat out = A.colwise() + B.col(0);
    return push(std::move(out), needs(a) || needs(b), [this, a, b](const Mat& g) {
      if (needs(a)) acc(a, g);
      if (needs(b)) acc(b, Mat(g.rowwise().sum()));
    });
  }

  Var hadamard(Var a, Var b) {
    same_shape(a, b, "hadamard");
    Mat out = value(a).cwiseProduct(value(b));
    return push(std::move(out), needs(a) || needs(b), [this, a, b](const Mat& g) {
      if (needs(a)) acc(a, g.cwiseProduct(value(b)));
      if (needs(b)) acc(b, g.cwiseProduct(value(a)));
    });
  }

  // v (m x 1) broadcast over columns, times a (m x n) elementwise.
  // Used by the peephole terms p .* c.
  Var colvec_mul(Var v, Var a) {
    const Mat& V = value(v);
    const Mat& A = value(a);
    if (V.cols() != 1 || V.rows() != A.rows())
      throw ShapeMismatch("colvec_mul: vector must be rows x 1");
    Mat out = A.array().colwise() * V.col(0).array();
    return push(std::move(out), needs(v) || needs(a), [this, v, a](const Mat& g) {
      if (needs(a)) acc(a, Mat(g.array().colwise() * value(v).col(0).array()));
      if (needs(v)) acc(v, Mat(g.cwiseProduct(value(a)).rowwise().sum()));
    });
  }

  // alpha * a + beta, elementwise.
  Var affine(Var a, S alpha, S beta) {
    Mat out = (value(a).array() * alpha + beta).matrix();
    return push(std::move(out), needs(a), [this, a, alpha](const Mat& g) {
      if (needs(a)) acc(a, Mat(g * alpha));
    });
  }

  Var tanh_(Var a) {
    Mat out = value(a).array().tanh().matrix();
    Var r = push(std::move(out), needs(a), nullptr);
    nodes_[r.id].backward = [this, a, r](const Mat& g) {
      if (needs(a)) acc(a, Mat(g.array() * (S{1} - value(r).array().square())));
    };
    return r;
  }

  Var sigmoid(Var a) {
    Mat out = (S{1} / (S{1} + (-value(a).array()).exp())).matrix();
    Var r = push(std::move(out), needs(a), nullptr);
    nodes_[r.id].backward = [this, a, r](const Mat& g) {
      if (needs(a))
        acc(a, Mat(g.array() * value(r).array() * (S{1} - value(r).array())));
    };
    return r;
  }

  // Vertical stack [parts[0]; parts[1]; ...], all with equal column counts.
  Var concat_rows(const std::vector<Var>& parts) {
    if (parts.empty()) throw InvalidArgument("concat_rows: no parts");
    Eigen::Index rows = 0;
    const Eigen::Index cols = value(parts[0]).cols();
    bool any_grad = false;
    for (Var p : parts) {
      if (value(p).cols() != cols) throw ShapeMismatch("concat_rows: column mismatch");
      rows += value(p).rows();
      any_grad = any_grad || needs(p);
    }
    Mat out(rows, cols);
    Eigen::Index r = 0;
    for (Var p : parts) {
      out.middleRows(r, value(p).rows()) = value(p);
      r += value(p).rows();
    }
    std::vector<Var> ps = parts;
    return push(std::move(out), any_grad, [this, ps](const Mat& g) {
      Eigen::Index r = 0;
      for (Var p : ps) {
        const Eigen::Index h = value(p).rows();
        if (needs(p)) acc(p, g.middleRows(r, h));
        r += h;
      }
    });
  }

  Var slice_rows(Var a, Eigen::Index row0, Eigen::Index nrows) {
    const Mat& A = value(a);
    if (row0 < 0 || nrows < 1 || row0 + nrows > A.rows())
      throw ShapeMismatch("slice_rows: range outside matrix");
    Mat out = A.middleRows(row0, nrows);
    return push(std::move(out), needs(a), [this, a, row0, nrows](const Mat& g) {
      if (!needs(a)) return;
      Node& pa = nodes_[a.id];
      ensure_grad(pa);
      pa.grad.middleRows(row0, nrows) += g;
    });
  }

  // Per-column blend: column b of the output is taken from `on` where
  // mask(b) == 1 and from `off` where mask(b) == 0. Implements the
  // copy-through state update for padded batch elements.
  Var mask_blend(Var on, Var off, const Eigen::RowVectorX<S>& mask) {
    same_shape(on, off, "mask_blend");
    const Mat& A = value(on);
    if (mask.cols() != A.cols()) throw ShapeMismatch("mask_blend: mask width");
    Mat out = (A.array().rowwise() * mask.array()) +
              (value(off).array().rowwise() * (S{1} - mask.array()));
    return push(std::move(out), needs(on) || needs(off), [this, on, off, mask](const Mat& g) {
      if (needs(on)) acc(on, Mat(g.array().rowwise() * mask.array()));
      if (needs(off)) acc(off, Mat(g.array().rowwise() * (S{1} - mask.array())));
    });
  }

  // Scale each column by a constant weight (loss masking / normalisation).
  Var scale_cols(Var a, const Eigen::RowVectorX<S>& w) {
    const Mat& A = value(a);
    if (w.cols() != A.cols()) throw ShapeMismatch("scale_cols: weight width");
    Mat out = A.array().rowwise() * w.array();
    return push(std::move(out), needs(a), [this, a, w](const Mat& g) {
      if (needs(a)) acc(a, Mat(g.array().rowwise() * w.array()));
    });
  }

  // Softmax along rows, independently per column, with a constant additive
  // mask (0 for valid entries, a large negative number for padded ones).
  // Max subtraction keeps the exponentials in range.
  Var softmax_rows_per_col(Var scores, const Mat& add_mask) {
    const Mat& E = value(scores);
    if (add_mask.rows() != E.rows() || add_mask.cols() != E.cols())
      throw ShapeMismatch("softmax: mask shape");
    Mat shifted = E + add_mask;
    Eigen::RowVectorX<S> colmax = shifted.colwise().maxCoeff();
    Arr ex = (shifted.array().rowwise() - colmax.array()).exp();
    Eigen::RowVectorX<S> sums = ex.colwise().sum();
    Mat out = (ex.rowwise() / sums.array()).matrix();
    Var r = push(std::move(out), needs(scores), nullptr);
    nodes_[r.id].backward = [this, scores, r](const Mat& g) {
      if (!needs(scores)) return;
      const Mat& y = value(r);
      Eigen::RowVectorX<S> dots = (g.array() * y.array()).colwise().sum();
      acc(scores, Mat(y.array() * (g.array().rowwise() - dots.array())));
    };
    return r;
  }

  // Attention mixing: out.col(b) = sum_j alpha(j, b) * states[j].col(b).
  // states[j] are d x B, alpha is T x B.
  Var attend_mix(const std::vector<Var>& states, Var alpha) {
    const Mat& A = value(alpha);
    if (static_cast<Eigen::Index>(states.size()) != A.rows())
      throw ShapeMismatch("attend_mix: state count vs alpha rows");
    const Eigen::Index d = value(states[0]).rows();
    const Eigen::Index B = A.cols();
    bool any_grad = needs(alpha);
    Mat out = Mat::Zero(d, B);
    for (Eigen::Index j = 0; j < A.rows(); ++j) {
      const Mat& H = value(states[j]);
      if (H.rows() != d || H.cols() != B) throw ShapeMismatch("attend_mix: state shape");
      out.array() += H.array().rowwise() * A.row(j).array();
      any_grad = any_grad || needs(states[j]);
    }
    std::vector<Var> st = states;
    return push(std::move(out), any_grad, [this, st, alpha](const Mat& g) {
      const Mat& A = value(alpha);
      Mat galpha;
      if (needs(alpha)) galpha.setZero(A.rows(), A.cols());
      for (Eigen::Index j = 0; j < A.rows(); ++j) {
        if (needs(st[j]))
          acc(st[j], Mat(g.array().rowwise() * A.row(j).array()));
        if (needs(alpha))
          galpha.row(j) = (g.array() * value(st[j]).array()).colwise().sum();
      }
      if (needs(alpha)) acc(alpha, galpha);
    });
  }

  // Sum of all entries, as a 1 x 1 node.
  Var sum_all(Var a) {
    Mat out(1, 1);
    out(0, 0) = value(a).sum();
    return push(std::move(out), needs(a), [this, a](const Mat& g) {
      if (needs(a)) {
        Node& pa = nodes_[a.id];
        ensure_grad(pa);
        pa.grad.array() += g(0, 0);
      }
    });
  }

  // --- backward ------------------------------------------------------------

  // Reverse accumulation from a scalar node. Gradients of all reachable
  // differentiable nodes become available through grad().
  void backward(Var loss) {
    Node& top = nodes_[check(loss)];
    if (top.value.size() != 1) throw InvalidArgument("backward: target is not scalar");
    ensure_grad(top);
    top.grad(0, 0) = S{1};
    for (int i = loss.id; i >= 0; --i) {
      Node& n = nodes_[i];
      if (!n.backward || n.grad.size() == 0) continue;
      n.backward(n.grad);
    }
  }

 private:
  struct Node {
    Mat value;
    Mat grad;  // empty until first accumulation
    bool requires_grad = false;
    std::function<void(const Mat&)> backward;  // null for leaves
  };

  int check(Var v) const {
    if (!v.valid() || v.id >= static_cast<int>(nodes_.size()))
      throw InvalidArgument("tape: invalid var handle");
    return v.id;
  }

  bool needs(Var v) const { return nodes_[v.id].requires_grad; }

  void same_shape(Var a, Var b, const char* what) const {
    const Mat& A = value(a);
    const Mat& B = value(b);
    if (A.rows() != B.rows() || A.cols() != B.cols())
      throw ShapeMismatch(std::string(what) + ": operand shapes differ");
  }

  static void ensure_grad(Node& n) {
    if (n.grad.size() == 0) n.grad = Mat::Zero(n.value.rows(), n.value.cols());
  }

  template <typename Expr>
  void acc(Var v, const Expr& g) {
    Node& n = nodes_[v.id];
    ensure_grad(n);
    n.grad += g;
  }

  Var push(Mat value, bool requires_grad, std::function<void(const Mat&)> backward) {
    Node n;
    n.value = std::move(value);
    n.requires_grad = requires_grad;
    n.backward = std::move(backward);
    nodes_.push_back(std::move(n));
    return Var{static_cast<int>(nodes_.size()) - 1};
  }

  std::vector<Node> nodes_;
};

}  // namespace s2sae

#endif  // S2SAE_TAPE_HPP
