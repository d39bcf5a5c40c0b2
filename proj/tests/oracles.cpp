#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace oracle {

std::vector<std::vector<double>> fd_gradients(const ScalarFn& f,
                                              std::vector<std::vector<double>> inputs,
                                              double h) {
  std::vector<std::vector<double>> grads(inputs.size());
  for (std::size_t t = 0; t < inputs.size(); ++t) {
    grads[t].assign(inputs[t].size(), 0.0);
    for (std::size_t i = 0; i < inputs[t].size(); ++i) {
      const double keep = inputs[t][i];
      inputs[t][i] = keep + h;
      const double up = f(inputs);
      inputs[t][i] = keep - h;
      const double down = f(inputs);
      inputs[t][i] = keep;
      grads[t][i] = (up - down) / (2.0 * h);
    }
  }
  return grads;
}

double max_rel_err(const std::vector<double>& a, const std::vector<double>& b,
                   double floor) {
  if (a.size() != b.size()) throw std::invalid_argument("max_rel_err: size mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double denom = std::max({floor, std::abs(a[i]), std::abs(b[i])});
    worst = std::max(worst, std::abs(a[i] - b[i]) / denom);
  }
  return worst;
}

double max_abs_err(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("max_abs_err: size mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

std::vector<double> softmax_rows(const std::vector<double>& x, std::size_t rows,
                                 std::size_t cols) {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < rows; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < cols; ++j) sum += std::exp(x[i * cols + j]);
    for (std::size_t j = 0; j < cols; ++j) out[i * cols + j] = std::exp(x[i * cols + j]) / sum;
  }
  return out;
}

std::vector<double> layernorm_rows(const std::vector<double>& x, std::size_t rows,
                                   std::size_t cols, const std::vector<double>& gain,
                                   const std::vector<double>& bias, double eps) {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < rows; ++i) {
    double mean = 0.0;
    for (std::size_t j = 0; j < cols; ++j) mean += x[i * cols + j];
    mean /= static_cast<double>(cols);
    double var = 0.0;
    for (std::size_t j = 0; j < cols; ++j) {
      const double d = x[i * cols + j] - mean;
      var += d * d;
    }
    var /= static_cast<double>(cols);
    for (std::size_t j = 0; j < cols; ++j)
      out[i * cols + j] =
          gain[j] * (x[i * cols + j] - mean) / std::sqrt(var + eps) + bias[j];
  }
  return out;
}

double gelu_value(double x) {
  return x * 0.5 * (1.0 + std::erf(x / std::sqrt(2.0)));
}

double bce_value(const std::vector<double>& logits, const std::vector<double>& targets,
                 double weight) {
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    const double z = logits[i];
    total += std::max(z, 0.0) - z * targets[i] + std::log1p(std::exp(-std::abs(z)));
  }
  return weight * total / static_cast<double>(logits.size());
}

std::vector<double> matmul(const std::vector<double>& a, std::size_t m, std::size_t k,
                           const std::vector<double>& b, std::size_t p) {
  std::vector<double> out(m * p, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t kk = 0; kk < k; ++kk)
      for (std::size_t j = 0; j < p; ++j)
        out[i * p + j] += a[i * k + kk] * b[kk * p + j];
  return out;
}

namespace {

void add_row_vector(std::vector<double>& x, std::size_t rows, std::size_t cols,
                    const std::vector<double>& b) {
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) x[i * cols + j] += b[j];
}

double leaky(double x, double slope) { return x >= 0.0 ? x : slope * x; }

}  // namespace

std::vector<double> encode_stream_by_hand(std::vector<double> x, std::size_t t,
                                          const pedintent::EncoderConfig& cfg,
                                          const pedintent::ParamStore& store,
                                          const std::string& prefix) {
  const std::size_t w = cfg.width;
  const std::size_t dh = cfg.head_dim();
  const auto& pos = store.at(prefix + ".pos").value;
  for (std::size_t i = 0; i < t; ++i)
    for (std::size_t j = 0; j < w; ++j) x[i * w + j] += pos[i * w + j];

  for (std::size_t l = 0; l < cfg.layers; ++l) {
    const auto name = [&](const char* part) {
      return prefix + ".l" + std::to_string(l + 1) + "." + part;
    };
    const auto norm1 =
        layernorm_rows(x, t, w, store.at(name("ln1.gain")).value,
                       store.at(name("ln1.bias")).value, cfg.layernorm_eps);
    auto q = matmul(norm1, t, w, store.at(name("attn.wq")).value, w);
    auto k = matmul(norm1, t, w, store.at(name("attn.wk")).value, w);
    auto v = matmul(norm1, t, w, store.at(name("attn.wv")).value, w);
    add_row_vector(q, t, w, store.at(name("attn.bq")).value);
    add_row_vector(k, t, w, store.at(name("attn.bk")).value);
    add_row_vector(v, t, w, store.at(name("attn.bv")).value);

    std::vector<double> ctx(t * w, 0.0);
    const double inv = 1.0 / std::sqrt(static_cast<double>(dh));
    for (std::size_t head = 0; head < cfg.heads; ++head) {
      const std::size_t off = head * dh;
      std::vector<double> scores(t * t, 0.0);
      for (std::size_t a = 0; a < t; ++a)
        for (std::size_t b = 0; b < t; ++b) {
          double s = 0.0;
          for (std::size_t d = 0; d < dh; ++d)
            s += q[a * w + off + d] * k[b * w + off + d];
          scores[a * t + b] = s * inv;
        }
      const auto att = softmax_rows(scores, t, t);
      for (std::size_t a = 0; a < t; ++a)
        for (std::size_t d = 0; d < dh; ++d) {
          double s = 0.0;
          for (std::size_t b = 0; b < t; ++b)
            s += att[a * t + b] * v[b * w + off + d];
          ctx[a * w + off + d] = s;
        }
    }
    auto msa = matmul(ctx, t, w, store.at(name("attn.wo")).value, w);
    add_row_vector(msa, t, w, store.at(name("attn.bo")).value);
    for (std::size_t i = 0; i < t * w; ++i) x[i] += msa[i];

    const auto norm2 =
        layernorm_rows(x, t, w, store.at(name("ln2.gain")).value,
                       store.at(name("ln2.bias")).value, cfg.layernorm_eps);
    auto hidden =
        matmul(norm2, t, w, store.at(name("mlp.w1")).value, cfg.mlp_hidden);
    add_row_vector(hidden, t, cfg.mlp_hidden, store.at(name("mlp.b1")).value);
    for (auto& h : hidden) h = gelu_value(h);
    auto mlp = matmul(hidden, t, cfg.mlp_hidden, store.at(name("mlp.w2")).value, w);
    add_row_vector(mlp, t, w, store.at(name("mlp.b2")).value);
    for (std::size_t i = 0; i < t * w; ++i) x[i] += mlp[i];
  }
  return x;
}

HandAttend attend_by_hand(const std::vector<double>& h, std::size_t t, std::size_t w,
                          const std::vector<double>& ws,
                          const std::vector<double>& wc) {
  std::vector<double> h_e(h.end() - static_cast<std::ptrdiff_t>(w), h.end());
  // scores_s = h_e^T W_s h_s
  const auto projected = matmul(h_e, 1, w, ws, w);
  std::vector<double> scores(t, 0.0);
  for (std::size_t s = 0; s < t; ++s)
    for (std::size_t j = 0; j < w; ++j) scores[s] += projected[j] * h[s * w + j];
  const auto alpha = softmax_rows(scores, 1, t);
  std::vector<double> h_c(w, 0.0);
  for (std::size_t s = 0; s < t; ++s)
    for (std::size_t j = 0; j < w; ++j) h_c[j] += alpha[s] * h[s * w + j];
  std::vector<double> cat(2 * w);
  std::copy(h_c.begin(), h_c.end(), cat.begin());
  std::copy(h_e.begin(), h_e.end(), cat.begin() + static_cast<std::ptrdiff_t>(w));
  auto f = matmul(cat, 1, 2 * w, wc, w);
  for (auto& v : f) v = std::tanh(v);
  return {f, alpha};
}

std::vector<double> gcn_chain_by_hand(const std::vector<double>& x0, std::size_t n,
                                      const std::vector<double>& a_hat,
                                      const std::vector<std::vector<double>>& weights,
                                      const std::vector<std::size_t>& widths,
                                      double slope) {
  std::vector<double> x = x0;
  std::size_t w_in = widths[0];
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    const std::size_t w_out = widths[l + 1];
    const auto mixed = matmul(a_hat, n, n, x, w_in);
    x = matmul(mixed, n, w_in, weights[l], w_out);
    if (l + 2 < widths.size())
      for (auto& v : x) v = leaky(v, slope);
    w_in = w_out;
  }
  return x;
}

pedintent::CooccurrenceStats count_cooccurrence_by_hand(
    const std::vector<std::vector<int>>& sets, std::size_t n) {
  pedintent::CooccurrenceStats stats;
  stats.n = n;
  stats.count.assign(n, 0);
  stats.pair_count.assign(n * n, 0);
  stats.total_records = static_cast<std::int64_t>(sets.size());
  for (const auto& set : sets) {
    for (int i : set) stats.count[static_cast<std::size_t>(i)] += 1;
    for (int i : set)
      for (int j : set)
        stats.pair_count[static_cast<std::size_t>(i) * n +
                         static_cast<std::size_t>(j)] += 1;
  }
  return stats;
}

double icc_by_hand(const pedintent::RaterMatrix& m, pedintent::IccModel model) {
  const auto n = static_cast<double>(m.subjects);
  const auto k = static_cast<double>(m.raters);
  double g = 0.0, sq = 0.0;
  std::vector<double> row_total(m.subjects, 0.0), col_total(m.raters, 0.0);
  for (std::size_t i = 0; i < m.subjects; ++i)
    for (std::size_t j = 0; j < m.raters; ++j) {
      const double v = m.at(i, j);
      g += v;
      sq += v * v;
      row_total[i] += v;
      col_total[j] += v;
    }
  const double correction = g * g / (n * k);
  double ss_rows = -correction, ss_cols = -correction;
  for (double t : row_total) ss_rows += t * t / k;
  for (double t : col_total) ss_cols += t * t / n;
  const double ss_total = sq - correction;
  const double bms = ss_rows / (n - 1.0);
  const double wms = (ss_total - ss_rows) / (n * (k - 1.0));
  const double jms = ss_cols / (k - 1.0);
  const double ems = (ss_total - ss_rows - ss_cols) / ((n - 1.0) * (k - 1.0));
  switch (model) {
    case pedintent::IccModel::Oneway:
      return (bms - wms) / (bms + (k - 1.0) * wms);
    case pedintent::IccModel::TwowayRandomConsistency:
      return (bms - ems) / (bms + (k - 1.0) * ems);
    case pedintent::IccModel::TwowayRandomAgreement:
      return (bms - ems) / (bms + (k - 1.0) * ems + (k / n) * (jms - ems));
  }
  return 0.0;
}

double auc_by_pairs(const std::vector<double>& scores, const std::vector<int>& labels) {
  double wins = 0.0;
  std::size_t positives = 0;
  std::size_t negatives = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] == 1)
      ++positives;
    else
      ++negatives;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[i] != 1 || labels[j] != 0) continue;
      if (scores[i] > scores[j]) wins += 1.0;
      if (scores[i] == scores[j]) wins += 0.5;
    }
  }
  return wins / (static_cast<double>(positives) * static_cast<double>(negatives));
}

HandCounts confusion_by_hand(const std::vector<int>& pred,
                             const std::vector<int>& truth) {
  HandCounts c;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (pred[i] == 1 && truth[i] == 1) ++c.tp;
    if (pred[i] == 1 && truth[i] == 0) ++c.fp;
    if (pred[i] == 0 && truth[i] == 1) ++c.fn;
    if (pred[i] == 0 && truth[i] == 0) ++c.tn;
  }
  return c;
}

double f1_from_counts(const HandCounts& c) {
  const std::int64_t denom = 2 * c.tp + c.fp + c.fn;
  if (denom == 0) return 1.0;
  return static_cast<double>(2 * c.tp) / static_cast<double>(denom);
}

}  // namespace oracle
