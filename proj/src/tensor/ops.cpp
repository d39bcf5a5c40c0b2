#include "pedintent/tensor/ops.hpp"

#include <cmath>
#include <string>

namespace pedintent {

namespace {

void require_same_tape(const Tensor& a, const Tensor& b, const char* op) {
  if (a.tape() != b.tape())
    throw ValidationError(std::string(op) + ": operands live on different tapes");
}

void require_rank2(const Tensor& x, const char* op) {
  if (x.rank() != 2)
    throw DimensionError(std::string(op) + ": expected rank-2 tensor, got shape " +
                         shape_string(x.shape()));
}

void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (a.shape() != b.shape())
    throw DimensionError(std::string(op) + ": shape mismatch " +
                         shape_string(a.shape()) + " vs " + shape_string(b.shape()));
}

Tensor unary_elementwise(const Tensor& x, const char* op,
                         double (*fwd)(double), double (*dfdx)(double)) {
  const auto& xv = x.values();
  std::vector<double> out(xv.size());
  for (std::size_t i = 0; i < xv.size(); ++i) out[i] = fwd(xv[i]);
  check_finite(out, op);
  TapeNode* xn = x.node();
  return x.tape()->record(
      x.shape(), std::move(out), x.requires_grad(), [xn, dfdx](TapeNode& self) {
        xn->ensure_grad();
        for (std::size_t i = 0; i < self.values.size(); ++i)
          xn->grad[i] += self.grad[i] * dfdx(xn->values[i]);
      });
}

double sigmoid_scalar(double z) { return 1.0 / (1.0 + std::exp(-z)); }

constexpr double kInvSqrt2 = 0.7071067811865475244;
constexpr double kInvSqrt2Pi = 0.3989422804014326779;

}  // namespace

Tensor matmul(const Tensor& a, const Tensor& b) {
  require_same_tape(a, b, "matmul");
  require_rank2(a, "matmul");
  require_rank2(b, "matmul");
  const std::size_t m = a.rows(), k = a.cols(), p = b.cols();
  if (b.rows() != k)
    throw DimensionError("matmul: inner dimensions disagree, " +
                         shape_string(a.shape()) + " x " + shape_string(b.shape()));
  const auto& av = a.values();
  const auto& bv = b.values();
  std::vector<double> out(m * p, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t kk = 0; kk < k; ++kk) {
      const double aik = av[i * k + kk];
      for (std::size_t j = 0; j < p; ++j) out[i * p + j] += aik * bv[kk * p + j];
    }
  check_finite(out, "matmul");
  TapeNode* an = a.node();
  TapeNode* bn = b.node();
  const bool need = a.requires_grad() || b.requires_grad();
  const bool need_a = a.requires_grad(), need_b = b.requires_grad();
  return a.tape()->record(
      {m, p}, std::move(out), need, [an, bn, m, k, p, need_a, need_b](TapeNode& self) {
        // dA = dC * B^T, dB = A^T * dC
        if (need_a) {
          an->ensure_grad();
          for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < p; ++j) {
              const double g = self.grad[i * p + j];
              for (std::size_t kk = 0; kk < k; ++kk)
                an->grad[i * k + kk] += g * bn->values[kk * p + j];
            }
        }
        if (need_b) {
          bn->ensure_grad();
          for (std::size_t i = 0; i < m; ++i)
            for (std::size_t kk = 0; kk < k; ++kk) {
              const double av_ik = an->values[i * k + kk];
              for (std::size_t j = 0; j < p; ++j)
                bn->grad[kk * p + j] += av_ik * self.grad[i * p + j];
            }
        }
      });
}

Tensor transpose(const Tensor& a) {
  require_rank2(a, "transpose");
  const std::size_t m = a.rows(), n = a.cols();
  const auto& av = a.values();
  std::vector<double> out(m * n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) out[j * m + i] = av[i * n + j];
  TapeNode* an = a.node();
  return a.tape()->record(
      {n, m}, std::move(out), a.requires_grad(), [an, m, n](TapeNode& self) {
        an->ensure_grad();
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t j = 0; j < n; ++j)
            an->grad[i * n + j] += self.grad[j * m + i];
      });
}

namespace {

Tensor add_like(const Tensor& a, const Tensor& b, double sign_b, const char* op) {
  require_same_tape(a, b, op);
  require_same_shape(a, b, op);
  const auto& av = a.values();
  const auto& bv = b.values();
  std::vector<double> out(av.size());
  for (std::size_t i = 0; i < av.size(); ++i) out[i] = av[i] + sign_b * bv[i];
  check_finite(out, op);
  TapeNode* an = a.node();
  TapeNode* bn = b.node();
  const bool need_a = a.requires_grad(), need_b = b.requires_grad();
  return a.tape()->record(
      a.shape(), std::move(out), need_a || need_b,
      [an, bn, sign_b, need_a, need_b](TapeNode& self) {
        if (need_a) {
          an->ensure_grad();
          for (std::size_t i = 0; i < self.values.size(); ++i)
            an->grad[i] += self.grad[i];
        }
        if (need_b) {
          bn->ensure_grad();
          for (std::size_t i = 0; i < self.values.size(); ++i)
            bn->grad[i] += sign_b * self.grad[i];
        }
      });
}

}  // namespace

Tensor add(const Tensor& a, const Tensor& b) { return add_like(a, b, 1.0, "add"); }
Tensor sub(const Tensor& a, const Tensor& b) { return add_like(a, b, -1.0, "sub"); }

Tensor mul(const Tensor& a, const Tensor& b) {
  require_same_tape(a, b, "mul");
  require_same_shape(a, b, "mul");
  const auto& av = a.values();
  const auto& bv = b.values();
  std::vector<double> out(av.size());
  for (std::size_t i = 0; i < av.size(); ++i) out[i] = av[i] * bv[i];
  check_finite(out, "mul");
  TapeNode* an = a.node();
  TapeNode* bn = b.node();
  const bool need_a = a.requires_grad(), need_b = b.requires_grad();
  return a.tape()->record(
      a.shape(), std::move(out), need_a || need_b,
      [an, bn, need_a, need_b](TapeNode& self) {
        if (need_a) {
          an->ensure_grad();
          for (std::size_t i = 0; i < self.values.size(); ++i)
            an->grad[i] += self.grad[i] * bn->values[i];
        }
        if (need_b) {
          bn->ensure_grad();
          for (std::size_t i = 0; i < self.values.size(); ++i)
            bn->grad[i] += self.grad[i] * an->values[i];
        }
      });
}

Tensor affine(const Tensor& x, double scale, double shift) {
  const auto& xv = x.values();
  std::vector<double> out(xv.size());
  for (std::size_t i = 0; i < xv.size(); ++i) out[i] = scale * xv[i] + shift;
  check_finite(out, "affine");
  TapeNode* xn = x.node();
  return x.tape()->record(
      x.shape(), std::move(out), x.requires_grad(), [xn, scale](TapeNode& self) {
        xn->ensure_grad();
        for (std::size_t i = 0; i < self.values.size(); ++i)
          xn->grad[i] += scale * self.grad[i];
      });
}

Tensor add_row_bias(const Tensor& x, const Tensor& bias) {
  require_same_tape(x, bias, "add_row_bias");
  require_rank2(x, "add_row_bias");
  if (bias.rank() != 1 || bias.numel() != x.cols())
    throw DimensionError("add_row_bias: bias shape " + shape_string(bias.shape()) +
                         " does not match row width " + std::to_string(x.cols()));
  const std::size_t m = x.rows(), n = x.cols();
  const auto& xv = x.values();
  const auto& bv = bias.values();
  std::vector<double> out(xv.size());
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) out[i * n + j] = xv[i * n + j] + bv[j];
  check_finite(out, "add_row_bias");
  TapeNode* xn = x.node();
  TapeNode* bn = bias.node();
  const bool need_x = x.requires_grad(), need_b = bias.requires_grad();
  return x.tape()->record(
      x.shape(), std::move(out), need_x || need_b,
      [xn, bn, m, n, need_x, need_b](TapeNode& self) {
        if (need_x) {
          xn->ensure_grad();
          for (std::size_t i = 0; i < m * n; ++i) xn->grad[i] += self.grad[i];
        }
        if (need_b) {
          bn->ensure_grad();
          for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j) bn->grad[j] += self.grad[i * n + j];
        }
      });
}

Tensor add_n(const std::vector<Tensor>& xs) {
  if (xs.empty()) throw ValidationError("add_n: empty operand list");
  bool need = false;
  for (const auto& x : xs) {
    require_same_tape(xs.front(), x, "add_n");
    require_same_shape(xs.front(), x, "add_n");
    need = need || x.requires_grad();
  }
  std::vector<double> out(xs.front().numel(), 0.0);
  for (const auto& x : xs) {
    const auto& xv = x.values();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += xv[i];
  }
  check_finite(out, "add_n");
  std::vector<TapeNode*> nodes;
  std::vector<bool> needs;
  nodes.reserve(xs.size());
  for (const auto& x : xs) {
    nodes.push_back(x.node());
    needs.push_back(x.requires_grad());
  }
  return xs.front().tape()->record(
      xs.front().shape(), std::move(out), need,
      [nodes, needs](TapeNode& self) {
        for (std::size_t t = 0; t < nodes.size(); ++t) {
          if (!needs[t]) continue;
          nodes[t]->ensure_grad();
          for (std::size_t i = 0; i < self.values.size(); ++i)
            nodes[t]->grad[i] += self.grad[i];
        }
      });
}

Tensor concat(const std::vector<Tensor>& xs, int axis) {
  if (xs.empty()) throw ValidationError("concat: empty operand list");
  if (axis != 0 && axis != 1)
    throw DimensionError("concat: axis must be 0 or 1, got " + std::to_string(axis));
  const std::size_t rank = xs.front().rank();
  bool need = false;
  for (const auto& x : xs) {
    require_same_tape(xs.front(), x, "concat");
    if (x.rank() != rank)
      throw DimensionError("concat: mixed ranks among operands");
    need = need || x.requires_grad();
  }
  if (rank == 1) {
    if (axis != 0) throw DimensionError("concat: rank-1 tensors concatenate on axis 0");
    std::size_t total = 0;
    for (const auto& x : xs) total += x.numel();
    std::vector<double> out;
    out.reserve(total);
    for (const auto& x : xs)
      out.insert(out.end(), x.values().begin(), x.values().end());
    std::vector<TapeNode*> nodes;
    std::vector<bool> needs;
    for (const auto& x : xs) {
      nodes.push_back(x.node());
      needs.push_back(x.requires_grad());
    }
    return xs.front().tape()->record(
        {total}, std::move(out), need, [nodes, needs](TapeNode& self) {
          std::size_t base = 0;
          for (std::size_t t = 0; t < nodes.size(); ++t) {
            const std::size_t len = nodes[t]->values.size();
            if (needs[t]) {
              nodes[t]->ensure_grad();
              for (std::size_t i = 0; i < len; ++i)
                nodes[t]->grad[i] += self.grad[base + i];
            }
            base += len;
          }
        });
  }
  // rank 2
  const std::size_t other = axis == 0 ? xs.front().cols() : xs.front().rows();
  std::size_t joined = 0;
  for (const auto& x : xs) {
    require_rank2(x, "concat");
    const std::size_t keep = axis == 0 ? x.cols() : x.rows();
    if (keep != other)
      throw DimensionError("concat: non-concatenated extent mismatch, " +
                           shape_string(xs.front().shape()) + " vs " +
                           shape_string(x.shape()));
    joined += axis == 0 ? x.rows() : x.cols();
  }
  const std::size_t out_rows = axis == 0 ? joined : other;
  const std::size_t out_cols = axis == 0 ? other : joined;
  std::vector<double> out(out_rows * out_cols);
  if (axis == 0) {
    std::size_t base = 0;
    for (const auto& x : xs) {
      const auto& xv = x.values();
      std::copy(xv.begin(), xv.end(), out.begin() + static_cast<std::ptrdiff_t>(base));
      base += xv.size();
    }
  } else {
    std::size_t col_base = 0;
    for (const auto& x : xs) {
      const auto& xv = x.values();
      const std::size_t xc = x.cols();
      for (std::size_t i = 0; i < out_rows; ++i)
        for (std::size_t j = 0; j < xc; ++j)
          out[i * out_cols + col_base + j] = xv[i * xc + j];
      col_base += xc;
    }
  }
  std::vector<TapeNode*> nodes;
  std::vector<bool> needs;
  for (const auto& x : xs) {
    nodes.push_back(x.node());
    needs.push_back(x.requires_grad());
  }
  return xs.front().tape()->record(
      {out_rows, out_cols}, std::move(out), need,
      [nodes, needs, axis, out_cols, out_rows](TapeNode& self) {
        if (axis == 0) {
          std::size_t base = 0;
          for (std::size_t t = 0; t < nodes.size(); ++t) {
            const std::size_t len = nodes[t]->values.size();
            if (needs[t]) {
              nodes[t]->ensure_grad();
              for (std::size_t i = 0; i < len; ++i)
                nodes[t]->grad[i] += self.grad[base + i];
            }
            base += len;
          }
        } else {
          std::size_t col_base = 0;
          for (std::size_t t = 0; t < nodes.size(); ++t) {
            const std::size_t xc = nodes[t]->shape[1];
            if (needs[t]) {
              nodes[t]->ensure_grad();
              for (std::size_t i = 0; i < out_rows; ++i)
                for (std::size_t j = 0; j < xc; ++j)
                  nodes[t]->grad[i * xc + j] +=
                      self.grad[i * out_cols + col_base + j];
            }
            col_base += xc;
          }
        }
      });
}

Tensor slice_cols(const Tensor& x, std::size_t first, std::size_t count) {
  require_rank2(x, "slice_cols");
  const std::size_t m = x.rows(), n = x.cols();
  if (count == 0 || first + count > n)
    throw DimensionError("slice_cols: [" + std::to_string(first) + ", " +
                         std::to_string(first + count) + ") out of range for width " +
                         std::to_string(n));
  const auto& xv = x.values();
  std::vector<double> out(m * count);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < count; ++j) out[i * count + j] = xv[i * n + first + j];
  TapeNode* xn = x.node();
  return x.tape()->record(
      {m, count}, std::move(out), x.requires_grad(),
      [xn, m, n, first, count](TapeNode& self) {
        xn->ensure_grad();
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t j = 0; j < count; ++j)
            xn->grad[i * n + first + j] += self.grad[i * count + j];
      });
}

Tensor slice_rows(const Tensor& x, std::size_t first, std::size_t count) {
  require_rank2(x, "slice_rows");
  const std::size_t m = x.rows(), n = x.cols();
  if (count == 0 || first + count > m)
    throw DimensionError("slice_rows: [" + std::to_string(first) + ", " +
                         std::to_string(first + count) + ") out of range for " +
                         std::to_string(m) + " rows");
  const auto& xv = x.values();
  std::vector<double> out(xv.begin() + static_cast<std::ptrdiff_t>(first * n),
                          xv.begin() + static_cast<std::ptrdiff_t>((first + count) * n));
  TapeNode* xn = x.node();
  return x.tape()->record(
      {count, n}, std::move(out), x.requires_grad(),
      [xn, n, first, count](TapeNode& self) {
        xn->ensure_grad();
        for (std::size_t i = 0; i < count * n; ++i)
          xn->grad[first * n + i] += self.grad[i];
      });
}

Tensor row(const Tensor& x, std::size_t r) { return slice_rows(x, r, 1); }

Tensor softmax(const Tensor& x) {
  const std::size_t m = x.rows(), n = x.cols();
  const auto& xv = x.values();
  std::vector<double> out(xv.size());
  for (std::size_t i = 0; i < m; ++i) {
    double mx = xv[i * n];
    for (std::size_t j = 1; j < n; ++j) mx = std::max(mx, xv[i * n + j]);
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      out[i * n + j] = std::exp(xv[i * n + j] - mx);
      sum += out[i * n + j];
    }
    for (std::size_t j = 0; j < n; ++j) out[i * n + j] /= sum;
  }
  check_finite(out, "softmax");
  TapeNode* xn = x.node();
  return x.tape()->record(
      x.shape(), std::move(out), x.requires_grad(), [xn, m, n](TapeNode& self) {
        // dx = y * (dy - <dy, y>) per row
        xn->ensure_grad();
        for (std::size_t i = 0; i < m; ++i) {
          double dot = 0.0;
          for (std::size_t j = 0; j < n; ++j)
            dot += self.grad[i * n + j] * self.values[i * n + j];
          for (std::size_t j = 0; j < n; ++j)
            xn->grad[i * n + j] +=
                self.values[i * n + j] * (self.grad[i * n + j] - dot);
        }
      });
}

Tensor layernorm(const Tensor& x, const Tensor& gain, const Tensor& bias, double eps) {
  require_same_tape(x, gain, "layernorm");
  require_same_tape(x, bias, "layernorm");
  const std::size_t m = x.rows(), n = x.cols();
  if (gain.rank() != 1 || gain.numel() != n || bias.rank() != 1 || bias.numel() != n)
    throw DimensionError("layernorm: gain/bias must both have shape [" +
                         std::to_string(n) + "]");
  const auto& xv = x.values();
  const auto& gv = gain.values();
  const auto& bv = bias.values();
  std::vector<double> out(xv.size());
  std::vector<double> xhat(xv.size());
  std::vector<double> inv_sigma(m);
  for (std::size_t i = 0; i < m; ++i) {
    double mean = 0.0;
    for (std::size_t j = 0; j < n; ++j) mean += xv[i * n + j];
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double d = xv[i * n + j] - mean;
      var += d * d;
    }
    var /= static_cast<double>(n);
    inv_sigma[i] = 1.0 / std::sqrt(var + eps);
    for (std::size_t j = 0; j < n; ++j) {
      xhat[i * n + j] = (xv[i * n + j] - mean) * inv_sigma[i];
      out[i * n + j] = gv[j] * xhat[i * n + j] + bv[j];
    }
  }
  check_finite(out, "layernorm");
  TapeNode* xn = x.node();
  TapeNode* gn = gain.node();
  TapeNode* bn = bias.node();
  const bool need_x = x.requires_grad();
  const bool need_g = gain.requires_grad();
  const bool need_b = bias.requires_grad();
  return x.tape()->record(
      {m, n}, std::move(out), need_x || need_g || need_b,
      [xn, gn, bn, m, n, xhat = std::move(xhat), inv_sigma = std::move(inv_sigma),
       need_x, need_g, need_b](TapeNode& self) {
        if (need_g) gn->ensure_grad();
        if (need_b) bn->ensure_grad();
        if (need_x) xn->ensure_grad();
        for (std::size_t i = 0; i < m; ++i) {
          if (need_g || need_b) {
            for (std::size_t j = 0; j < n; ++j) {
              const double dy = self.grad[i * n + j];
              if (need_g) gn->grad[j] += dy * xhat[i * n + j];
              if (need_b) bn->grad[j] += dy;
            }
          }
          if (!need_x) continue;
          // dxhat = dy * gain; dx = (dxhat - mean(dxhat) - xhat*mean(dxhat*xhat)) / sigma
          double mean_dxhat = 0.0, mean_dxhat_xhat = 0.0;
          for (std::size_t j = 0; j < n; ++j) {
            const double dxhat = self.grad[i * n + j] * gn->values[j];
            mean_dxhat += dxhat;
            mean_dxhat_xhat += dxhat * xhat[i * n + j];
          }
          mean_dxhat /= static_cast<double>(n);
          mean_dxhat_xhat /= static_cast<double>(n);
          for (std::size_t j = 0; j < n; ++j) {
            const double dxhat = self.grad[i * n + j] * gn->values[j];
            xn->grad[i * n + j] +=
                (dxhat - mean_dxhat - xhat[i * n + j] * mean_dxhat_xhat) *
                inv_sigma[i];
          }
        }
      });
}

Tensor tanh(const Tensor& x) {
  return unary_elementwise(
      x, "tanh", [](double v) { return std::tanh(v); },
      [](double v) {
        const double t = std::tanh(v);
        return 1.0 - t * t;
      });
}

Tensor sigmoid(const Tensor& x) {
  return unary_elementwise(
      x, "sigmoid", [](double v) { return 1.0 / (1.0 + std::exp(-v)); },
      [](double v) {
        const double s = 1.0 / (1.0 + std::exp(-v));
        return s * (1.0 - s);
      });
}

Tensor leaky_relu(const Tensor& x, double negative_slope) {
  const auto& xv = x.values();
  std::vector<double> out(xv.size());
  for (std::size_t i = 0; i < xv.size(); ++i)
    out[i] = xv[i] > 0.0 ? xv[i] : negative_slope * xv[i];
  check_finite(out, "leaky_relu");
  TapeNode* xn = x.node();
  return x.tape()->record(
      x.shape(), std::move(out), x.requires_grad(),
      [xn, negative_slope](TapeNode& self) {
        xn->ensure_grad();
        for (std::size_t i = 0; i < self.values.size(); ++i)
          xn->grad[i] +=
              self.grad[i] * (xn->values[i] > 0.0 ? 1.0 : negative_slope);
      });
}

Tensor gelu(const Tensor& x) {
  return unary_elementwise(
      x, "gelu",
      [](double v) { return v * 0.5 * (1.0 + std::erf(v * kInvSqrt2)); },
      [](double v) {
        const double cdf = 0.5 * (1.0 + std::erf(v * kInvSqrt2));
        const double pdf = kInvSqrt2Pi * std::exp(-0.5 * v * v);
        return cdf + v * pdf;
      });
}

Tensor sum_all(const Tensor& x) {
  const auto& xv = x.values();
  double total = 0.0;
  for (double v : xv) total += v;
  std::vector<double> out{total};
  check_finite(out, "sum_all");
  TapeNode* xn = x.node();
  return x.tape()->record({1}, std::move(out), x.requires_grad(),
                          [xn](TapeNode& self) {
                            xn->ensure_grad();
                            for (std::size_t i = 0; i < xn->values.size(); ++i)
                              xn->grad[i] += self.grad[0];
                          });
}

Tensor mean_all(const Tensor& x) {
  const auto n = static_cast<double>(x.numel());
  return scale(sum_all(x), 1.0 / n);
}

Tensor bce_with_logits(const Tensor& logits, const Tensor& targets, double weight) {
  require_same_tape(logits, targets, "bce_with_logits");
  require_same_shape(logits, targets, "bce_with_logits");
  const auto& zv = logits.values();
  const auto& tv = targets.values();
  for (std::size_t i = 0; i < tv.size(); ++i)
    if (tv[i] != 0.0 && tv[i] != 1.0)
      throw ValidationError("bce_with_logits: target at flat index " +
                            std::to_string(i) + " is not 0 or 1");
  const auto n = static_cast<double>(zv.size());
  double total = 0.0;
  for (std::size_t i = 0; i < zv.size(); ++i) {
    const double z = zv[i];
    // max(z,0) - z*t + log(1 + exp(-|z|)), stable for large |z|
    total += std::max(z, 0.0) - z * tv[i] + std::log1p(std::exp(-std::abs(z)));
  }
  std::vector<double> out{weight * total / n};
  check_finite(out, "bce_with_logits");
  TapeNode* zn = logits.node();
  TapeNode* tn = targets.node();
  return logits.tape()->record(
      {1}, std::move(out), logits.requires_grad(),
      [zn, tn, weight, n](TapeNode& self) {
        zn->ensure_grad();
        const double g = self.grad[0] * weight / n;
        for (std::size_t i = 0; i < zn->values.size(); ++i)
          zn->grad[i] += g * (sigmoid_scalar(zn->values[i]) - tn->values[i]);
      });
}

}  // namespace pedintent
