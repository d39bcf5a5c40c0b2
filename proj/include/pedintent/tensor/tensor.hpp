#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "pedintent/common.hpp"

namespace pedintent {

// Shapes are row-major. Rank is 1 or 2 for everything this library builds;
// scalars travel as shape {1}.
using Shape = std::vector<std::size_t>;

std::size_t shape_numel(const Shape& shape);
std::string shape_string(const Shape& shape);

class Tape;

// One value node on the computation tape. Nodes are owned by the tape and
// stay at a stable address for its lifetime, so backward closures may hold
// raw pointers to their parents.
struct TapeNode {
  Shape shape;
  std::vector<double> values;
  std::vector<double> grad;   // sized lazily, first time gradient arrives
  bool requires_grad = false;
  bool grad_seen = false;     // some child deposited gradient this pass
  std::function<void(TapeNode&)> backward;  // empty for leaves

  void ensure_grad() {
    if (grad.size() != values.size()) grad.assign(values.size(), 0.0);
    grad_seen = true;
  }
};

// Cheap copyable handle to a tape node. Valid while the owning tape lives;
// tapes are created per forward/backward pass and discarded afterwards.
class Tensor {
 public:
  Tensor() = default;
  Tensor(Tape* tape, TapeNode* node) : tape_(tape), node_(node) {}

  bool valid() const { return node_ != nullptr; }
  const Shape& shape() const { return node_->shape; }
  std::size_t numel() const { return node_->values.size(); }
  std::size_t rank() const { return node_->shape.size(); }

  // Row/column view of a rank-2 tensor; rank-1 tensors are treated as a
  // single row where convenient.
  std::size_t rows() const;
  std::size_t cols() const;

  const std::vector<double>& values() const { return node_->values; }
  const std::vector<double>& grad() const;
  bool requires_grad() const { return node_->requires_grad; }

  double at(std::size_t i) const { return node_->values.at(i); }
  double at(std::size_t r, std::size_t c) const;
  double scalar() const;

  Tape* tape() const { return tape_; }
  TapeNode* node() const { return node_; }

 private:
  Tape* tape_ = nullptr;
  TapeNode* node_ = nullptr;
};

// Records every operation in creation order (already a topological order)
// and replays the registered backward rules in reverse. Single-threaded by
// design: one tape per forward/backward pass.
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  // Leaf with externally supplied values. Trainable parameters are leaves
  // with requires_grad = true; inputs and constants leave it false.
  Tensor leaf(Shape shape, std::vector<double> values, bool requires_grad = false);
  Tensor constant(Shape shape, std::vector<double> values) {
    return leaf(std::move(shape), std::move(values), false);
  }
  Tensor scalar(double value) { return leaf({1}, {value}, false); }

  // Used by the operator library to append a derived node.
  Tensor record(Shape shape, std::vector<double> values, bool requires_grad,
                std::function<void(TapeNode&)> backward);

  // Seeds d(loss)/d(loss) = 1 and runs every reached backward rule once,
  // in reverse creation order. The seed must be scalar. Gradients from any
  // previous pass on this tape are discarded first.
  void backward(const Tensor& loss);

  std::size_t size() const { return nodes_.size(); }

 private:
  std::vector<std::unique_ptr<TapeNode>> nodes_;
};

// Throws NumericalError naming `op` if any entry is NaN or infinite.
void check_finite(const std::vector<double>& values, const char* op);

}  // namespace pedintent
