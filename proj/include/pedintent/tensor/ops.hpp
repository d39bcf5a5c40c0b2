#pragma once

#include <vector>

#include "pedintent/tensor/tensor.hpp"

namespace pedintent {

// Differentiable operator library. Every function appends one node to the
// tape of its inputs, validates shapes up front (DimensionError) and checks
// the produced values for non-finite entries (NumericalError). Mixing
// tensors from different tapes is a ValidationError.

// [m,k] x [k,p] -> [m,p]
Tensor matmul(const Tensor& a, const Tensor& b);

// [m,n] -> [n,m]
Tensor transpose(const Tensor& a);

// Elementwise; shapes must match exactly.
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);

// scale * x + shift, elementwise with scalar coefficients.
Tensor affine(const Tensor& x, double scale, double shift);
inline Tensor scale(const Tensor& x, double s) { return affine(x, s, 0.0); }

// [m,n] + bias[n], added to every row.
Tensor add_row_bias(const Tensor& x, const Tensor& bias);

// Elementwise sum of one or more same-shaped tensors, accumulated in list
// order so results are reproducible.
Tensor add_n(const std::vector<Tensor>& xs);

// Concatenation of rank-2 tensors along axis 0 (rows) or 1 (columns);
// rank-1 tensors concatenate along axis 0.
Tensor concat(const std::vector<Tensor>& xs, int axis);

// Column block [m, count] starting at column `first`.
Tensor slice_cols(const Tensor& x, std::size_t first, std::size_t count);

// Row block [count, n] starting at row `first`.
Tensor slice_rows(const Tensor& x, std::size_t first, std::size_t count);

// Single row r as a [1, n] tensor.
Tensor row(const Tensor& x, std::size_t r);

// Row-wise softmax with max subtraction. Rank-1 input is one row.
Tensor softmax(const Tensor& x);

// Row-wise layer normalisation with learned gain and bias (both [n]).
// Uses population variance; eps sits inside the square root.
Tensor layernorm(const Tensor& x, const Tensor& gain, const Tensor& bias,
                 double eps = 1e-5);

// Elementwise nonlinearities.
Tensor tanh(const Tensor& x);
Tensor sigmoid(const Tensor& x);
Tensor leaky_relu(const Tensor& x, double negative_slope = 0.2);
// Exact GELU, x * Phi(x) with the Gaussian CDF via erf.
Tensor gelu(const Tensor& x);

// Scalar reductions.
Tensor sum_all(const Tensor& x);
Tensor mean_all(const Tensor& x);

// Mean over elements of max(z,0) - z*t + log(1 + exp(-|z|)), multiplied by
// `weight`. Targets must be exactly 0 or 1 and are treated as constants.
Tensor bce_with_logits(const Tensor& logits, const Tensor& targets,
                       double weight = 1.0);

}  // namespace pedintent
