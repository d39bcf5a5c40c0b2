#include "pedintent/train/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "pedintent/graph/cooccurrence.hpp"
#include "pedintent/tensor/adam.hpp"
#include "pedintent/util/io.hpp"

namespace pedintent {

using nlohmann::json;

void validate_train_config(const TrainConfig& config) {
  validate_model_config(config.model);
  validate_loss_weights(config.weights);
  if (config.window.t != config.model.t)
    throw ConfigError("train: window length " + std::to_string(config.window.t) +
                      " does not match model window length " +
                      std::to_string(config.model.t));
  if (!(config.lr > 0.0) || !std::isfinite(config.lr))
    throw ConfigError("train: learning rate must be positive and finite");
  if (config.batch_size == 0) throw ConfigError("train: batch size must be positive");
  if (config.adjacency_threshold < 0.0 || config.adjacency_threshold >= 1.0)
    throw ConfigError("train: adjacency threshold must lie in [0, 1)");
}

EmbeddingTable default_embeddings(const ReasonVocabulary& vocab,
                                  const ModelConfig& config, std::uint64_t seed) {
  if (config.variant == ModelVariant::WordEmbed) {
    const WordVectors words = toy_word_vectors(vocab, config.embed_dim, seed);
    return word_average_embed(vocab, words);
  }
  return toy_embed(vocab, config.embed_dim, seed);
}

MetricsReport evaluate_model(Model& model, const std::vector<WindowSample>& samples) {
  if (samples.empty())
    throw ValidationError("evaluate_model on an empty window set");
  const std::size_t n = model.config().n;
  std::vector<double> intent_probs;
  std::vector<int> intent_labels;
  std::vector<std::vector<int>> reason_preds;
  std::vector<std::vector<int>> reason_targets;
  intent_probs.reserve(samples.size());
  intent_labels.reserve(samples.size());
  reason_preds.reserve(samples.size());
  reason_targets.reserve(samples.size());

  const auto start = std::chrono::steady_clock::now();
  for (const WindowSample& sample : samples) {
    const Model::Prediction p = model.predict(sample.obs);
    intent_probs.push_back(p.intent_probability);
    intent_labels.push_back(Model::intent_target(sample));
    std::vector<int> pred(n, 0);
    for (std::size_t c = 0; c < n; ++c)
      pred[c] = p.reason_probabilities[c] > 0.5 ? 1 : 0;
    reason_preds.push_back(std::move(pred));
    reason_targets.push_back(Model::reason_target_row(sample, n));
  }
  const auto stop = std::chrono::steady_clock::now();

  MetricsReport report;
  report.intent = intent_metrics(intent_probs, intent_labels);
  report.reason = reason_metrics(reason_preds, reason_targets);
  report.samples = samples.size();
  report.wall_clock_per_sample =
      std::chrono::duration<double>(stop - start).count() /
      static_cast<double>(samples.size());
  return report;
}

double evaluate_loss(Model& model, const std::vector<WindowSample>& samples,
                     const LossWeights& weights, std::size_t batch_size) {
  if (samples.empty()) throw ValidationError("evaluate_loss on an empty window set");
  if (batch_size == 0) throw ConfigError("evaluate_loss: batch size must be positive");
  double total = 0.0;
  for (std::size_t begin = 0; begin < samples.size(); begin += batch_size) {
    const std::size_t end = std::min(begin + batch_size, samples.size());
    std::vector<const WindowSample*> batch;
    batch.reserve(end - begin);
    for (std::size_t i = begin; i < end; ++i) batch.push_back(&samples[i]);
    Tape tape;
    BoundParams bound(tape, model.params(), false);
    total += model.batch_loss(tape, bound, batch, weights).values()[0] *
             static_cast<double>(batch.size());
  }
  return total / static_cast<double>(samples.size());
}

namespace {

json epoch_json(const EpochLog& entry) {
  // The log keeps only deterministic fields so reruns produce identical
  // bytes; timing stays in the standalone metrics reports.
  json val = metrics_json(entry.val_metrics);
  val.erase("wall_clock_per_sample");
  return json{{"epoch", entry.epoch},
              {"train_loss", entry.train_loss},
              {"val_loss", entry.val_loss},
              {"is_best", entry.is_best},
              {"val", std::move(val)}};
}

void append_log_line(const std::filesystem::path& path, const json& line) {
  if (path.empty()) return;
  std::ofstream out(path, std::ios::app | std::ios::binary);
  if (!out) throw IoError("cannot open epoch log '" + path.string() + "'");
  out << line.dump() << '\n';
  if (!out) throw IoError("failed writing epoch log '" + path.string() + "'");
}

// Written next to the epoch log when a non-finite value aborts training,
// so the failing configuration can be inspected afterwards.
void write_divergence_dump(const TrainConfig& config, std::size_t epoch,
                           std::size_t batch_index, double last_loss,
                           const ParamStore& store, const std::string& what) {
  if (config.log_path.empty()) return;
  json norms = json::object();
  for (const Param& p : store.params()) {
    double sq = 0.0;
    bool finite = true;
    for (double v : p.value) {
      sq += v * v;
      finite = finite && std::isfinite(v);
    }
    norms[p.name] = json{{"l2", std::sqrt(sq)}, {"finite", finite}};
  }
  const json dump{{"error", what},
                  {"epoch", epoch},
                  {"batch_index", batch_index},
                  {"last_finite_loss", last_loss},
                  {"lr", config.lr},
                  {"seed", config.seed},
                  {"param_norms", std::move(norms)}};
  std::filesystem::path path = config.log_path;
  path += ".diverged.json";
  atomic_write_text(path, dump.dump(2) + "\n");
}

std::vector<std::vector<int>> reason_sets(const std::vector<AnnotationRecord>& records) {
  std::vector<std::vector<int>> sets;
  sets.reserve(records.size());
  for (const auto& r : records) sets.push_back(r.reasons);
  return sets;
}

}  // namespace

TrainResult train_model(const TrainConfig& config, const TrainData& data,
                        const EmbeddingTable& embeddings) {
  validate_train_config(config);
  if (data.records == nullptr || data.local == nullptr || data.global == nullptr)
    throw ConfigError("train: records and both feature providers are required");

  const CorpusSplit split =
      split_corpus(*data.records, config.split, mix_seed(config.seed, 0));

  const WindowedCorpus train_w =
      window_corpus(split.train, config.window, *data.local, *data.global);
  const WindowedCorpus val_w =
      window_corpus(split.val, config.window, *data.local, *data.global);
  const WindowedCorpus test_w =
      window_corpus(split.test, config.window, *data.local, *data.global);
  if (train_w.samples.empty())
    throw ValidationError("train: the training split produced no windows");
  if (config.epochs > 0 && val_w.samples.empty())
    throw ValidationError(
        "train: the validation split produced no windows; cannot select a "
        "best epoch");

  // The reason graph is built from the training records only, so the
  // evaluation splits never leak statistics into the model.
  const CooccurrenceStats stats =
      count_cooccurrence(reason_sets(split.train), config.model.n);
  const std::vector<double> a_hat =
      normalize_adjacency(build_adjacency(stats, config.adjacency_threshold));

  Model model(config.model, embeddings, a_hat, mix_seed(config.seed, 1));
  Adam adam(AdamConfig{config.lr, 0.9, 0.999, 1e-8});

  TrainResult result{std::move(model)};
  result.train_windows = train_w.samples.size();
  result.val_windows = val_w.samples.size();
  result.test_windows = test_w.samples.size();
  result.skipped_records = train_w.skipped_records + val_w.skipped_records +
                           test_w.skipped_records;

  ParamStore best = result.model.params();
  result.best_val_loss = std::numeric_limits<double>::infinity();
  double best_score = -std::numeric_limits<double>::infinity();

  const std::size_t n_train = train_w.samples.size();
  std::vector<std::size_t> order(n_train);
  double last_loss = 0.0;
  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    Rng shuffle_rng(mix_seed(config.seed, 1000 + epoch));
    shuffle_rng.shuffle(order);

    double epoch_loss = 0.0;
    for (std::size_t begin = 0; begin < n_train; begin += config.batch_size) {
      const std::size_t end = std::min(begin + config.batch_size, n_train);
      std::vector<const WindowSample*> batch;
      batch.reserve(end - begin);
      for (std::size_t i = begin; i < end; ++i)
        batch.push_back(&train_w.samples[order[i]]);
      try {
        Tape tape;
        BoundParams bound(tape, result.model.params(), true);
        Tensor loss = result.model.batch_loss(tape, bound, batch, config.weights);
        tape.backward(loss);
        adam.step(result.model.params(), bound.grads());
        last_loss = loss.values()[0];
        epoch_loss += last_loss * static_cast<double>(batch.size());
      } catch (const NumericalError& e) {
        write_divergence_dump(config, epoch, begin / config.batch_size, last_loss,
                              result.model.params(), e.what());
        throw NumericalError("training diverged at epoch " + std::to_string(epoch) +
                             ", batch " + std::to_string(begin / config.batch_size) +
                             ": " + e.what());
      }
    }

    EpochLog entry;
    entry.epoch = epoch;
    entry.train_loss = epoch_loss / static_cast<double>(n_train);
    entry.val_loss =
        evaluate_loss(result.model, val_w.samples, config.weights, config.batch_size);
    entry.val_metrics = evaluate_model(result.model, val_w.samples);
    // Model selection goes by the validation task metrics rather than the
    // validation loss: with label noise the loss keeps growing on the
    // flipped examples as the model grows confident, even while both task
    // metrics improve. Ties keep the earliest epoch.
    const double score = 0.5 * (entry.val_metrics.intent.accuracy +
                                entry.val_metrics.reason.subset_accuracy);
    entry.is_best = score > best_score;
    if (entry.is_best) {
      best_score = score;
      result.best_val_loss = entry.val_loss;
      result.best_epoch = epoch;
      best = result.model.params();
      result.val_metrics = entry.val_metrics;
    }
    append_log_line(config.log_path, epoch_json(entry));
    result.log.push_back(std::move(entry));
  }

  result.model.params() = best;
  if (config.epochs == 0) {
    result.best_val_loss = val_w.samples.empty()
                               ? std::numeric_limits<double>::quiet_NaN()
                               : evaluate_loss(result.model, val_w.samples,
                                               config.weights, config.batch_size);
    if (!val_w.samples.empty())
      result.val_metrics = evaluate_model(result.model, val_w.samples);
  }
  if (!test_w.samples.empty())
    result.test_metrics = evaluate_model(result.model, test_w.samples);

  if (!config.checkpoint_stem.empty()) {
    const json extra{{"best_epoch", result.best_epoch},
                     {"epochs", config.epochs},
                     {"seed", config.seed},
                     {"lr", config.lr},
                     {"batch_size", config.batch_size},
                     {"loss_weights", json{{"reason", config.weights.reason},
                                           {"intent", config.weights.intent}}},
                     {"window_overlap", config.window.overlap},
                     {"split", json{{"train", config.split.train},
                                    {"val", config.split.val},
                                    {"test", config.split.test}}}};
    result.model.save(config.checkpoint_stem, extra);
  }
  return result;
}

}  // namespace pedintent
