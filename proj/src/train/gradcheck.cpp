#include "pedintent/train/gradcheck.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace pedintent {

double gradcheck_rel_err(double analytic, double fd) {
  const double scale = std::max({std::abs(analytic), std::abs(fd), 1e-3});
  return std::abs(analytic - fd) / scale;
}

namespace {

ObservationSequence random_observation(Rng& rng, std::size_t t, std::size_t d_v) {
  ObservationSequence obs;
  obs.t = t;
  obs.d_v = d_v;
  for (std::size_t i = 0; i < t * d_v; ++i) {
    obs.local_feats.push_back(rng.uniform(-1.0, 1.0));
    obs.global_feats.push_back(rng.uniform(-1.0, 1.0));
  }
  for (std::size_t i = 0; i < t; ++i) {
    const double x1 = rng.uniform(0.0, 0.5);
    const double y1 = rng.uniform(0.0, 0.5);
    obs.boxes.insert(obs.boxes.end(), {x1, y1, x1 + rng.uniform(0.05, 0.45),
                                       y1 + rng.uniform(0.05, 0.45)});
  }
  return obs;
}

std::vector<WindowSample> random_batch(Rng& rng, const ModelConfig& config,
                                       std::size_t batch) {
  std::vector<WindowSample> samples(batch);
  for (std::size_t i = 0; i < batch; ++i) {
    samples[i].obs = random_observation(rng, config.t, config.d_v);
    samples[i].intent = rng.uniform_int(0, 1) == 1 ? Intent::Cross : Intent::NoCross;
    // One to three target reasons; ids only matter as 0/1 rows here, so any
    // ascending subset of [0, n) is a valid toy target.
    const std::size_t count = rng.uniform_int(1, 3);
    std::vector<int> reasons;
    while (reasons.size() < count) {
      const int id = static_cast<int>(
          rng.uniform_int(0, static_cast<std::uint64_t>(config.n - 1)));
      if (std::find(reasons.begin(), reasons.end(), id) == reasons.end())
        reasons.push_back(id);
    }
    std::sort(reasons.begin(), reasons.end());
    samples[i].reasons = std::move(reasons);
    samples[i].pedestrian_id = "toy_" + std::to_string(i);
  }
  return samples;
}

EmbeddingTable random_embeddings(Rng& rng, std::size_t n, std::size_t d) {
  EmbeddingTable table;
  table.width = d;
  table.provider_tag = "toy-hash";
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> v(d);
    for (double& x : v) x = rng.uniform(-1.0, 1.0);
    table.vectors.push_back(std::move(v));
  }
  return table;
}

std::vector<double> random_a_hat(Rng& rng, std::size_t n) {
  // Random rows normalized to sum to one, the same invariant the real
  // normalized adjacency satisfies.
  std::vector<double> a(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      a[i * n + j] = rng.uniform(0.0, 1.0);
      sum += a[i * n + j];
    }
    for (std::size_t j = 0; j < n; ++j) a[i * n + j] /= sum;
  }
  return a;
}

}  // namespace

GradCheckReport run_gradient_check(const GradCheckConfig& config) {
  validate_model_config(config.model);
  validate_loss_weights(config.weights);
  if (config.batch == 0) throw ConfigError("gradcheck: batch must be positive");
  if (!(config.step > 0.0)) throw ConfigError("gradcheck: step must be positive");

  const auto start = std::chrono::steady_clock::now();
  Rng rng(mix_seed(config.seed, 0));
  Model model(config.model, random_embeddings(rng, config.model.n, config.model.embed_dim),
              random_a_hat(rng, config.model.n), mix_seed(config.seed, 1));
  const std::vector<WindowSample> samples =
      random_batch(rng, config.model, config.batch);
  std::vector<const WindowSample*> batch;
  for (const WindowSample& s : samples) batch.push_back(&s);

  GradMap analytic;
  {
    Tape tape;
    BoundParams bound(tape, model.params(), true);
    Tensor loss = model.batch_loss(tape, bound, batch, config.weights);
    tape.backward(loss);
    analytic = bound.grads();
  }

  const auto loss_at = [&]() {
    Tape tape;
    BoundParams bound(tape, model.params(), false);
    return model.batch_loss(tape, bound, batch, config.weights).values()[0];
  };

  GradCheckReport report;
  for (Param& param : model.params().params()) {
    GradCheckGroup group;
    group.name = param.name;
    const auto it = analytic.find(param.name);
    // Every parameter of the variant must flow into the loss; a missing
    // gradient entry means a wiring bug, which the zero vector exposes.
    const std::vector<double> grad = it == analytic.end()
                                         ? std::vector<double>(param.value.size(), 0.0)
                                         : it->second;
    for (std::size_t i = 0; i < param.value.size(); ++i) {
      const double saved = param.value[i];
      param.value[i] = saved + config.step;
      const double up = loss_at();
      param.value[i] = saved - config.step;
      const double down = loss_at();
      param.value[i] = saved;
      const double fd = (up - down) / (2.0 * config.step);
      group.max_rel_err = std::max(group.max_rel_err, gradcheck_rel_err(grad[i], fd));
      ++group.checked;
    }
    report.max_rel_err = std::max(report.max_rel_err, group.max_rel_err);
    report.total_checked += group.checked;
    report.groups.push_back(std::move(group));
  }
  report.passed = report.max_rel_err <= config.tolerance;
  report.seconds = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  return report;
}

}  // namespace pedintent
