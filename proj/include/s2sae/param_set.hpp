// include/s2sae/param_set.hpp
//
// Named, shape-frozen parameter tensors. Insertion order is preserved and
// defines the (deterministic) iteration order used by the optimiser, the
// gradient checker and the checkpoint writer. Tensors are rank 1 or 2 and
// stored as Eigen matrices (vectors are n x 1).

#ifndef S2SAE_PARAM_SET_HPP
#define S2SAE_PARAM_SET_HPP

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <unordered_map>
#include <vector>

#include "s2sae/errors.hpp"
#include "s2sae/rng.hpp"

namespace s2sae {

template <typename S>
using MatX = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <typename S>
using VecX = Eigen::Matrix<S, Eigen::Dynamic, 1>;

template <typename S>
class ParamSet {
 public:
  struct Entry {
    std::string name;
    int rank = 2;  // 1: vector (cols == 1), 2: matrix
    MatX<S> value;
  };

  bool contains(const std::string& name) const { return index_.count(name) > 0; }

  MatX<S>& add(const std::string& name, MatX<S> value, int rank = 2) {
    if (contains(name)) throw InvalidArgument("duplicate parameter name: " + name);
    if (value.rows() == 0 || value.cols() == 0)
      throw InvalidArgument("zero-sized parameter: " + name);
    index_.emplace(name, entries_.size());
    entries_.push_back(Entry{name, rank, std::move(value)});
    return entries_.back().value;
  }

  MatX<S>& add_vector(const std::string& name, VecX<S> value) {
    return add(name, MatX<S>(std::move(value)), 1);
  }

  const MatX<S>& at(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw InvalidArgument("unknown parameter: " + name);
    return entries_[it->second].value;
  }

  MatX<S>& at(const std::string& name) {
    auto it = index_.find(name);
    if (it == index_.end()) throw InvalidArgument("unknown parameter: " + name);
    return entries_[it->second].value;
  }

  // Assign without changing the frozen shape.
  void set(const std::string& name, const MatX<S>& value) {
    MatX<S>& dst = at(name);
    if (dst.rows() != value.rows() || dst.cols() != value.cols())
      throw ShapeMismatch("shape change rejected for parameter: " + name);
    dst = value;
  }

  std::size_t size() const { return entries_.size(); }
  const Entry& entry(std::size_t i) const { return entries_[i]; }
  Entry& entry(std::size_t i) { return entries_[i]; }

  std::size_t total_values() const {
    std::size_t n = 0;
    for (const auto& e : entries_) n += static_cast<std::size_t>(e.value.size());
    return n;
  }

  bool all_finite() const {
    for (const auto& e : entries_)
      if (!e.value.allFinite()) return false;
    return true;
  }

  // Same names, ranks and shapes, all values zero.
  ParamSet<S> zeros_like() const {
    ParamSet<S> out;
    for (const auto& e : entries_)
      out.add(e.name, MatX<S>::Zero(e.value.rows(), e.value.cols()), e.rank);
    return out;
  }

  template <typename T>
  ParamSet<T> cast() const {
    ParamSet<T> out;
    for (const auto& e : entries_)
      out.add(e.name, e.value.template cast<T>().eval(), e.rank);
    return out;
  }

 private:
  std::vector<Entry> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Glorot-uniform initialisation: entries uniform in +-sqrt(6/(fan_in+fan_out)).
// fan_in = cols, fan_out = rows. Draw order is row-major so the stream of
// values is independent of Eigen's storage order.
template <typename S>
MatX<S> glorot_init(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  if (rows < 1 || cols < 1) throw InvalidArgument("glorot_init: zero dimension");
  const double bound = std::sqrt(6.0 / static_cast<double>(rows + cols));
  MatX<S> m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c)
      m(r, c) = static_cast<S>(rng.uniform(-bound, bound));
  return m;
}

}  // namespace s2sae

#endif  // S2SAE_PARAM_SET_HPP
