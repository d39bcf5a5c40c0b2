#include "pedintent/tensor/tensor.hpp"

#include <cmath>
#include <sstream>

namespace pedintent {

std::size_t shape_numel(const Shape& shape) {
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  return shape.empty() ? 0 : n;
}

std::string shape_string(const Shape& shape) {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) out << 'x';
    out << shape[i];
  }
  out << ']';
  return out.str();
}

std::size_t Tensor::rows() const {
  if (rank() == 2) return node_->shape[0];
  if (rank() == 1) return 1;
  throw DimensionError("rows(): tensor has rank " + std::to_string(rank()));
}

std::size_t Tensor::cols() const {
  if (rank() == 2) return node_->shape[1];
  if (rank() == 1) return node_->shape[0];
  throw DimensionError("cols(): tensor has rank " + std::to_string(rank()));
}

const std::vector<double>& Tensor::grad() const {
  if (node_->grad.size() != node_->values.size())
    throw ValidationError("grad(): no gradient has been computed for this tensor");
  return node_->grad;
}

double Tensor::at(std::size_t r, std::size_t c) const {
  return node_->values.at(r * cols() + c);
}

double Tensor::scalar() const {
  if (numel() != 1)
    throw DimensionError("scalar(): tensor has shape " + shape_string(shape()));
  return node_->values[0];
}

Tensor Tape::leaf(Shape shape, std::vector<double> values, bool requires_grad) {
  if (shape.empty())
    throw DimensionError("leaf: empty shape");
  if (shape_numel(shape) != values.size())
    throw DimensionError("leaf: shape " + shape_string(shape) + " expects " +
                         std::to_string(shape_numel(shape)) + " values, got " +
                         std::to_string(values.size()));
  check_finite(values, "leaf");
  auto node = std::make_unique<TapeNode>();
  node->shape = std::move(shape);
  node->values = std::move(values);
  node->requires_grad = requires_grad;
  nodes_.push_back(std::move(node));
  return Tensor(this, nodes_.back().get());
}

Tensor Tape::record(Shape shape, std::vector<double> values, bool requires_grad,
                    std::function<void(TapeNode&)> backward) {
  auto node = std::make_unique<TapeNode>();
  node->shape = std::move(shape);
  node->values = std::move(values);
  node->requires_grad = requires_grad;
  if (requires_grad) node->backward = std::move(backward);
  nodes_.push_back(std::move(node));
  return Tensor(this, nodes_.back().get());
}

void Tape::backward(const Tensor& loss) {
  if (!loss.valid() || loss.tape() != this)
    throw ValidationError("backward: seed tensor does not belong to this tape");
  if (loss.numel() != 1)
    throw ValidationError("backward: seed must be scalar, got shape " +
                          shape_string(loss.shape()));
  for (auto& node : nodes_) {
    node->grad.clear();
    node->grad_seen = false;
  }
  TapeNode* seed = loss.node();
  seed->ensure_grad();
  seed->grad[0] = 1.0;
  // Creation order is topological, so one reverse sweep distributes every
  // gradient exactly once.
  for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it) {
    TapeNode& node = **it;
    if (node.grad_seen && node.backward) node.backward(node);
  }
}

void check_finite(const std::vector<double>& values, const char* op) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i]))
      throw NumericalError(std::string(op) + ": non-finite value at flat index " +
                           std::to_string(i));
  }
}

}  // namespace pedintent
