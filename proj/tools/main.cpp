// Command-line front end for the crossing-intent toolkit. One subcommand per
// pipeline stage; every run echoes its fully resolved configuration as a
// single JSON line so any artifact can be reproduced from its log.
//
// Exit codes: 0 success, 1 validation/config/io failure, 2 numerical failure.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "pedintent/data/icc.hpp"
#include "pedintent/data/synthetic.hpp"
#include "pedintent/graph/cooccurrence.hpp"
#include "pedintent/train/ablation.hpp"
#include "pedintent/train/gradcheck.hpp"
#include "pedintent/train/trainer.hpp"
#include "pedintent/util/io.hpp"
#include "pedintent/util/plot.hpp"

namespace {

using namespace pedintent;
using nlohmann::json;
namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Config-file merge. Precedence: built-in defaults < config file < flags.
// The merge runs before CLI11 parses argv, so explicit flags always win, and
// every key the command does not know is rejected.

json preload_config(int argc, char** argv) {
  std::string path;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc)
      path = argv[i + 1];
    else if (arg.rfind("--config=", 0) == 0)
      path = arg.substr(9);
  }
  if (path.empty()) return json::object();
  json cfg;
  try {
    cfg = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw ConfigError("config '" + path + "': " + e.what());
  }
  if (!cfg.is_object())
    throw ConfigError("config '" + path + "' must hold a JSON object");
  return cfg;
}

class ConfigMerge {
 public:
  explicit ConfigMerge(json cfg) : cfg_(std::move(cfg)) {}

  template <typename T>
  void field(const std::string& key, T& slot) {
    known_.insert(key);
    if (!cfg_.contains(key)) return;
    try {
      slot = cfg_.at(key).get<T>();
    } catch (const json::exception& e) {
      throw ConfigError("config key '" + key + "': " + e.what());
    }
  }

  void finish(const std::string& command) const {
    for (const auto& item : cfg_.items())
      if (known_.count(item.key()) == 0)
        throw ConfigError("config: key '" + item.key() + "' is not a '" +
                          command + "' setting");
  }

 private:
  json cfg_;
  std::set<std::string> known_;
};

void echo_resolved(const std::string& command, const json& resolved) {
  std::cout << json{{"command", command}, {"resolved_config", resolved}}.dump()
            << "\n";
}

// Returns true when the command should run; fills exit_code when CLI11
// already finished the invocation itself (help text or a usage error).
bool parse_cli(CLI::App& cmd, std::vector<std::string> args, int& exit_code) {
  try {
    cmd.parse(std::move(args));
    return true;
  } catch (const CLI::ParseError& e) {
    const int code = cmd.exit(e);
    exit_code = code == 0 ? 0 : 1;
    return false;
  }
}

// corpus stem "c.jsonl" -> sidecar feature files "c.local.feats",
// "c.global.feats"; any other extension is treated the same way.
fs::path sidecar_path(const fs::path& corpus, const char* stream) {
  fs::path p = corpus;
  p.replace_extension();
  p += std::string(".") + stream + ".feats";
  return p;
}

void write_artifact(const fs::path& path, const std::string& content) {
  atomic_write_text(resolve_output_path(path), content);
}

// ---------------------------------------------------------------------------
// Shared model/training flag bundle used by train, eval, ablate, gradcheck.

struct ModelFlags {
  std::size_t t = 15;
  std::size_t d_v = 16;
  std::size_t embed_dim = 32;
  std::size_t gcn_hidden = 64;
  std::size_t layers = 2;
  std::size_t heads = 4;
  std::size_t box_heads = 2;
  std::string variant = "full";
  bool affine_reason_head = false;
};

void merge_model_flags(ConfigMerge& merge, ModelFlags& m) {
  merge.field("t", m.t);
  merge.field("d_v", m.d_v);
  merge.field("embed_dim", m.embed_dim);
  merge.field("gcn_hidden", m.gcn_hidden);
  merge.field("layers", m.layers);
  merge.field("heads", m.heads);
  merge.field("box_heads", m.box_heads);
  merge.field("variant", m.variant);
  merge.field("affine_reason_head", m.affine_reason_head);
}

void add_model_flags(CLI::App* cmd, ModelFlags& m) {
  cmd->add_option("--t", m.t, "observation window length")->capture_default_str();
  cmd->add_option("--d-v", m.d_v, "per-stream visual feature width")
      ->capture_default_str();
  cmd->add_option("--embed-dim", m.embed_dim, "reason-text embedding width")
      ->capture_default_str();
  cmd->add_option("--gcn-hidden", m.gcn_hidden, "graph-convolution hidden width")
      ->capture_default_str();
  cmd->add_option("--layers", m.layers, "transformer layers per stream")
      ->capture_default_str();
  cmd->add_option("--heads", m.heads, "attention heads for the visual streams")
      ->capture_default_str();
  cmd->add_option("--box-heads", m.box_heads, "attention heads for the box stream")
      ->capture_default_str();
  cmd->add_option("--variant", m.variant,
                  "full | no_crossmodal | word_embed | recurrent_backbone")
      ->capture_default_str();
  cmd->add_flag("--affine-reason-head", m.affine_reason_head,
                "extra affine layer on the reason logits");
}

ModelConfig to_model_config(const ModelFlags& m, std::size_t n) {
  ModelConfig config;
  config.t = m.t;
  config.d_v = m.d_v;
  config.n = n;
  config.embed_dim = m.embed_dim;
  config.gcn_hidden = m.gcn_hidden;
  config.layers = m.layers;
  config.heads = m.heads;
  config.box_heads = m.box_heads;
  config.variant = model_variant_from_string(m.variant);
  config.affine_reason_head = m.affine_reason_head;
  return config;
}

json model_flags_json(const ModelFlags& m) {
  return json{{"t", m.t},
              {"d_v", m.d_v},
              {"embed_dim", m.embed_dim},
              {"gcn_hidden", m.gcn_hidden},
              {"layers", m.layers},
              {"heads", m.heads},
              {"box_heads", m.box_heads},
              {"variant", m.variant},
              {"affine_reason_head", m.affine_reason_head}};
}

struct TrainFlags {
  ModelFlags model;
  double overlap = 0.6;
  double train_ratio = 0.7;
  double val_ratio = 0.1;
  double test_ratio = 0.2;
  double lr = 5e-5;
  std::size_t batch = 8;
  std::size_t epochs = 10;
  double gamma_reason = 1.0;
  double gamma_intent = 1.0;
  std::uint64_t seed = 1;
  double adjacency_threshold = 0.0;
};

void merge_train_flags(ConfigMerge& merge, TrainFlags& t) {
  merge_model_flags(merge, t.model);
  merge.field("overlap", t.overlap);
  merge.field("train_ratio", t.train_ratio);
  merge.field("val_ratio", t.val_ratio);
  merge.field("test_ratio", t.test_ratio);
  merge.field("lr", t.lr);
  merge.field("batch", t.batch);
  merge.field("epochs", t.epochs);
  merge.field("gamma_reason", t.gamma_reason);
  merge.field("gamma_intent", t.gamma_intent);
  merge.field("seed", t.seed);
  merge.field("adjacency_threshold", t.adjacency_threshold);
}

void add_train_flags(CLI::App* cmd, TrainFlags& t) {
  add_model_flags(cmd, t.model);
  cmd->add_option("--overlap", t.overlap, "fraction of t shared by windows")
      ->capture_default_str();
  cmd->add_option("--train-ratio", t.train_ratio, "pedestrian share for training")
      ->capture_default_str();
  cmd->add_option("--val-ratio", t.val_ratio, "pedestrian share for validation")
      ->capture_default_str();
  cmd->add_option("--test-ratio", t.test_ratio, "pedestrian share for testing")
      ->capture_default_str();
  cmd->add_option("--lr", t.lr, "Adam learning rate")->capture_default_str();
  cmd->add_option("--batch", t.batch, "batch size")->capture_default_str();
  cmd->add_option("--epochs", t.epochs, "training epochs")->capture_default_str();
  cmd->add_option("--gamma-reason", t.gamma_reason, "reason loss weight")
      ->capture_default_str();
  cmd->add_option("--gamma-intent", t.gamma_intent, "intent loss weight")
      ->capture_default_str();
  cmd->add_option("--seed", t.seed, "seed for split, init and batch order")
      ->capture_default_str();
  cmd->add_option("--adjacency-threshold", t.adjacency_threshold,
                  "zero adjacency entries below this probability")
      ->capture_default_str();
}

TrainConfig to_train_config(const TrainFlags& t, std::size_t n) {
  TrainConfig config;
  config.model = to_model_config(t.model, n);
  config.window = WindowConfig{t.model.t, t.overlap};
  config.split = SplitRatios{t.train_ratio, t.val_ratio, t.test_ratio};
  config.weights = LossWeights{t.gamma_reason, t.gamma_intent};
  config.lr = t.lr;
  config.batch_size = t.batch;
  config.epochs = t.epochs;
  config.seed = t.seed;
  config.adjacency_threshold = t.adjacency_threshold;
  return config;
}

json train_flags_json(const TrainFlags& t) {
  json j = model_flags_json(t.model);
  j["overlap"] = t.overlap;
  j["train_ratio"] = t.train_ratio;
  j["val_ratio"] = t.val_ratio;
  j["test_ratio"] = t.test_ratio;
  j["lr"] = t.lr;
  j["batch"] = t.batch;
  j["epochs"] = t.epochs;
  j["gamma_reason"] = t.gamma_reason;
  j["gamma_intent"] = t.gamma_intent;
  j["seed"] = t.seed;
  j["adjacency_threshold"] = t.adjacency_threshold;
  return j;
}

// Resolves the embedding table for a training run: an explicit file wins,
// otherwise the variant's default provider seeded from the run seed.
EmbeddingTable resolve_embeddings(const std::string& file, const ModelConfig& model,
                                  std::uint64_t seed, const ReasonVocabulary& vocab) {
  if (!file.empty()) {
    EmbeddingTable table = load_embeddings(file, vocab);
    if (table.width != model.embed_dim)
      throw ConfigError("embeddings '" + file + "' have width " +
                        std::to_string(table.width) + ", flags ask for " +
                        std::to_string(model.embed_dim));
    return table;
  }
  return default_embeddings(vocab, model, mix_seed(seed, 2));
}

// ---------------------------------------------------------------------------
// gen

int cmd_gen(const json& cfg, const std::vector<std::string>& args) {
  SyntheticConfig settings;
  std::string out = "corpus.jsonl";
  bool skip_features = false;

  ConfigMerge merge(cfg);
  merge.field("n", settings.n_records);
  merge.field("seed", settings.seed);
  merge.field("noise", settings.noise_rate);
  merge.field("min_frames", settings.min_frames);
  merge.field("max_frames", settings.max_frames);
  merge.field("width", settings.feature_width);
  merge.field("feature_noise", settings.feature_noise);
  merge.field("out", out);
  merge.field("skip_features", skip_features);
  merge.finish("gen");

  CLI::App cmd{"generate a planted synthetic corpus"};
  std::string config_path;
  cmd.add_option("--config", config_path, "JSON config file; flags override it");
  cmd.add_option("--n", settings.n_records, "number of records")
      ->capture_default_str();
  cmd.add_option("--seed", settings.seed, "corpus seed")->capture_default_str();
  cmd.add_option("--noise", settings.noise_rate, "label noise rate in [0, 0.5)")
      ->capture_default_str();
  cmd.add_option("--min-frames", settings.min_frames, "shortest track length")
      ->capture_default_str();
  cmd.add_option("--max-frames", settings.max_frames, "longest track length")
      ->capture_default_str();
  cmd.add_option("--width", settings.feature_width, "feature width per stream")
      ->capture_default_str();
  cmd.add_option("--feature-noise", settings.feature_noise,
                 "featurizer jitter sigma")
      ->capture_default_str();
  cmd.add_option("--out", out, "corpus JSONL path")->capture_default_str();
  cmd.add_flag("--skip-features", skip_features,
               "write only the corpus, no feature sidecars");
  int parse_code = 0;
  if (!parse_cli(cmd, args, parse_code)) return parse_code;

  const fs::path corpus_path = resolve_output_path(out);
  const fs::path local_path = sidecar_path(corpus_path, "local");
  const fs::path global_path = sidecar_path(corpus_path, "global");

  json resolved{{"n", settings.n_records},
                {"seed", settings.seed},
                {"noise", settings.noise_rate},
                {"min_frames", settings.min_frames},
                {"max_frames", settings.max_frames},
                {"width", settings.feature_width},
                {"feature_noise", settings.feature_noise},
                {"out", corpus_path.string()},
                {"skip_features", skip_features}};
  if (!skip_features) {
    resolved["local_feats"] = local_path.string();
    resolved["global_feats"] = global_path.string();
  }
  echo_resolved("gen", resolved);

  const ReasonVocabulary vocab = ReasonVocabulary::defaults();
  const GeneratedCorpus corpus = generate_synthetic(settings, vocab);
  save_corpus(corpus.records, corpus_path);
  if (!skip_features) {
    write_feature_file(corpus, StreamKind::Local, local_path);
    write_feature_file(corpus, StreamKind::Global, global_path);
  }
  std::cout << "wrote " << corpus.records.size() << " records to "
            << corpus_path.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// stats

int cmd_stats(const json& cfg, const std::vector<std::string>& args) {
  std::string corpus_path;
  std::string out;
  double threshold = 0.0;

  ConfigMerge merge(cfg);
  merge.field("corpus", corpus_path);
  merge.field("out", out);
  merge.field("threshold", threshold);
  merge.finish("stats");

  CLI::App cmd{"reason co-occurrence statistics and adjacency"};
  std::string config_path;
  cmd.add_option("--config", config_path, "JSON config file; flags override it");
  cmd.add_option("--corpus", corpus_path, "corpus JSONL path")
      ->required(corpus_path.empty());
  cmd.add_option("--threshold", threshold, "zero entries below this probability")
      ->capture_default_str();
  cmd.add_option("--out", out, "report JSON path (stdout when omitted)");
  int parse_code = 0;
  if (!parse_cli(cmd, args, parse_code)) return parse_code;

  echo_resolved("stats", json{{"corpus", corpus_path},
                              {"threshold", threshold},
                              {"out", out}});

  const ReasonVocabulary vocab = ReasonVocabulary::defaults();
  const auto records = load_corpus(corpus_path, vocab);
  const CooccurrenceStats stats = count_cooccurrence(records, vocab);
  const AdjacencyMatrix adjacency = build_adjacency(stats, threshold);
  const std::vector<double> normalized = normalize_adjacency(adjacency);

  const std::size_t n = stats.n;
  json pair_rows = json::array();
  json adj_rows = json::array();
  json norm_rows = json::array();
  for (std::size_t i = 0; i < n; ++i) {
    json pr = json::array(), ar = json::array(), nr = json::array();
    for (std::size_t j = 0; j < n; ++j) {
      pr.push_back(stats.pair(i, j));
      ar.push_back(adjacency.at(i, j));
      nr.push_back(normalized[i * n + j]);
    }
    pair_rows.push_back(std::move(pr));
    adj_rows.push_back(std::move(ar));
    norm_rows.push_back(std::move(nr));
  }
  const json report{{"records", stats.total_records},
                    {"reasons", n},
                    {"count", stats.count},
                    {"pair_count", std::move(pair_rows)},
                    {"adjacency", std::move(adj_rows)},
                    {"normalized", std::move(norm_rows)}};
  if (out.empty())
    std::cout << report.dump(2) << "\n";
  else {
    write_artifact(out, report.dump(2) + "\n");
    std::cout << "wrote statistics for " << stats.total_records << " records to "
              << resolve_output_path(out).string() << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// icc

int cmd_icc(const json& cfg, const std::vector<std::string>& args) {
  std::string ratings_path;
  std::string model_name = "twoway_random_agreement";
  std::string out;

  ConfigMerge merge(cfg);
  merge.field("ratings", ratings_path);
  merge.field("model", model_name);
  merge.field("out", out);
  merge.finish("icc");

  CLI::App cmd{"inter-rater agreement from a ratings table"};
  std::string config_path;
  cmd.add_option("--config", config_path, "JSON config file; flags override it");
  cmd.add_option("--ratings", ratings_path, "CSV, one subject per row")
      ->required(ratings_path.empty());
  cmd.add_option("--model", model_name,
                 "oneway | twoway_random_consistency | twoway_random_agreement "
                 "| all")
      ->capture_default_str();
  cmd.add_option("--out", out, "report JSON path (optional)");
  int parse_code = 0;
  if (!parse_cli(cmd, args, parse_code)) return parse_code;

  echo_resolved("icc", json{{"ratings", ratings_path},
                            {"model", model_name},
                            {"out", out}});

  const RaterMatrix ratings = load_ratings_csv(ratings_path);
  json report{{"subjects", ratings.subjects}, {"raters", ratings.raters}};
  if (model_name == "all") {
    for (IccModel model : {IccModel::Oneway, IccModel::TwowayRandomConsistency,
                           IccModel::TwowayRandomAgreement}) {
      const double value = icc(ratings, model);
      report[to_string(model)] = value;
      std::cout << to_string(model) << " " << json(value).dump() << "\n";
    }
  } else {
    const double value = icc(ratings, icc_model_from_string(model_name));
    report[model_name] = value;
    std::cout << json(value).dump() << "\n";
  }
  if (!out.empty()) write_artifact(out, report.dump(2) + "\n");
  return 0;
}

// ---------------------------------------------------------------------------
// embed

int cmd_embed(const json& cfg, const std::vector<std::string>& args) {
  std::string provider = "toy-hash";
  std::size_t dim = 32;
  std::uint64_t seed = 1;
  std::string words_path;
  std::string out = "embeddings.txt";

  ConfigMerge merge(cfg);
  merge.field("provider", provider);
  merge.field("dim", dim);
  merge.field("seed", seed);
  merge.field("words", words_path);
  merge.field("out", out);
  merge.finish("embed");

  CLI::App cmd{"write a reason-sentence embedding table"};
  std::string config_path;
  cmd.add_option("--config", config_path, "JSON config file; flags override it");
  cmd.add_option("--provider", provider, "toy-hash | word-average")
      ->capture_default_str();
  cmd.add_option("--dim", dim, "embedding width")->capture_default_str();
  cmd.add_option("--seed", seed, "provider seed")->capture_default_str();
  cmd.add_option("--words", words_path,
                 "word-vector file for word-average (toy vectors when omitted)");
  cmd.add_option("--out", out, "embedding table path")->capture_default_str();
  int parse_code = 0;
  if (!parse_cli(cmd, args, parse_code)) return parse_code;

  echo_resolved("embed", json{{"provider", provider},
                              {"dim", dim},
                              {"seed", seed},
                              {"words", words_path},
                              {"out", out}});

  const ReasonVocabulary vocab = ReasonVocabulary::defaults();
  EmbeddingTable table;
  if (provider == "toy-hash") {
    table = toy_embed(vocab, dim, seed);
  } else if (provider == "word-average") {
    const WordVectors words = words_path.empty()
                                  ? toy_word_vectors(vocab, dim, seed)
                                  : load_word_vectors(words_path);
    table = word_average_embed(vocab, words);
  } else {
    throw ConfigError("embed: unknown provider '" + provider +
                      "' (expected toy-hash or word-average)");
  }
  const fs::path path = resolve_output_path(out);
  save_embeddings(table, path);
  std::cout << "wrote " << table.vectors.size() << " vectors of width "
            << table.width << " to " << path.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// train

int cmd_train(const json& cfg, const std::vector<std::string>& args) {
  TrainFlags flags;
  std::string corpus_path;
  std::string local_path;
  std::string global_path;
  std::string embeddings_path;
  std::string checkpoint = "model";
  std::string log_path;      // default derived from the checkpoint stem
  std::string metrics_path;  // likewise

  ConfigMerge merge(cfg);
  merge_train_flags(merge, flags);
  merge.field("corpus", corpus_path);
  merge.field("local_feats", local_path);
  merge.field("global_feats", global_path);
  merge.field("embeddings", embeddings_path);
  merge.field("checkpoint", checkpoint);
  merge.field("log", log_path);
  merge.field("metrics", metrics_path);
  merge.finish("train");

  CLI::App cmd{"train a crossing-intent model"};
  std::string config_path;
  cmd.add_option("--config", config_path, "JSON config file; flags override it");
  cmd.add_option("--corpus", corpus_path, "corpus JSONL path")
      ->required(corpus_path.empty());
  cmd.add_option("--local-feats", local_path,
                 "local feature file (default: derived from the corpus path)");
  cmd.add_option("--global-feats", global_path,
                 "global feature file (default: derived from the corpus path)");
  cmd.add_option("--embeddings", embeddings_path,
                 "embedding table file (default: the variant's provider)");
  cmd.add_option("--checkpoint", checkpoint, "checkpoint stem")
      ->capture_default_str();
  cmd.add_option("--log", log_path, "epoch JSONL log (default <checkpoint>.epochs.jsonl)");
  cmd.add_option("--metrics", metrics_path,
                 "test metrics JSON (default <checkpoint>.metrics.json)");
  add_train_flags(&cmd, flags);
  int parse_code = 0;
  if (!parse_cli(cmd, args, parse_code)) return parse_code;

  if (local_path.empty()) local_path = sidecar_path(corpus_path, "local").string();
  if (global_path.empty())
    global_path = sidecar_path(corpus_path, "global").string();
  // Defaults derive from the unresolved stem; the output-directory override
  // is applied exactly once, at the point each path is used.
  if (log_path.empty()) log_path = checkpoint + ".epochs.jsonl";
  if (metrics_path.empty()) metrics_path = checkpoint + ".metrics.json";
  const fs::path checkpoint_stem = resolve_output_path(checkpoint);

  json resolved = train_flags_json(flags);
  resolved["corpus"] = corpus_path;
  resolved["local_feats"] = local_path;
  resolved["global_feats"] = global_path;
  resolved["embeddings"] = embeddings_path;
  resolved["checkpoint"] = checkpoint_stem.string();
  resolved["log"] = resolve_output_path(log_path).string();
  resolved["metrics"] = resolve_output_path(metrics_path).string();
  echo_resolved("train", resolved);

  const ReasonVocabulary vocab = ReasonVocabulary::defaults();
  const auto records = load_corpus(corpus_path, vocab);
  const FileFeatureProvider local(local_path);
  const FileFeatureProvider global(global_path);

  TrainConfig config = to_train_config(flags, vocab.size());
  config.checkpoint_stem = checkpoint_stem;
  config.log_path = resolve_output_path(log_path);
  std::filesystem::remove(config.log_path);  // the log is per-run, not appended

  const EmbeddingTable table =
      resolve_embeddings(embeddings_path, config.model, config.seed, vocab);
  const TrainData data{&records, &local, &global};
  const TrainResult result = train_model(config, data, table);

  json summary{{"best_epoch", result.best_epoch},
               {"best_val_loss", result.best_val_loss},
               {"train_windows", result.train_windows},
               {"val_windows", result.val_windows},
               {"test_windows", result.test_windows},
               {"skipped_records", result.skipped_records},
               {"val", metrics_json(result.val_metrics)},
               {"test", metrics_json(result.test_metrics)}};
  write_artifact(metrics_path, summary.dump(2) + "\n");

  std::cout << "best epoch " << result.best_epoch << ", val loss "
            << result.best_val_loss << "\n";
  if (result.test_metrics.samples > 0)
    std::cout << "test intent accuracy " << result.test_metrics.intent.accuracy
              << ", reason subset accuracy "
              << result.test_metrics.reason.subset_accuracy << "\n";
  std::cout << "checkpoint " << checkpoint_stem.string() << ".{json,bin}"
            << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// eval

int cmd_eval(const json& cfg, const std::vector<std::string>& args) {
  std::string checkpoint;
  std::string corpus_path;
  std::string local_path;
  std::string global_path;
  std::string split = "test";
  std::string out;
  double overlap = -1.0;      // negative: take the checkpoint's value
  std::int64_t seed = -1;     // likewise
  double train_ratio = -1.0;  // likewise (all three together)
  double val_ratio = -1.0;
  double test_ratio = -1.0;

  ConfigMerge merge(cfg);
  merge.field("checkpoint", checkpoint);
  merge.field("corpus", corpus_path);
  merge.field("local_feats", local_path);
  merge.field("global_feats", global_path);
  merge.field("split", split);
  merge.field("out", out);
  merge.field("overlap", overlap);
  merge.field("seed", seed);
  merge.field("train_ratio", train_ratio);
  merge.field("val_ratio", val_ratio);
  merge.field("test_ratio", test_ratio);
  merge.finish("eval");

  CLI::App cmd{"evaluate a checkpoint on a corpus split"};
  std::string config_path;
  cmd.add_option("--config", config_path, "JSON config file; flags override it");
  cmd.add_option("--checkpoint", checkpoint, "checkpoint stem")
      ->required(checkpoint.empty());
  cmd.add_option("--corpus", corpus_path, "corpus JSONL path")
      ->required(corpus_path.empty());
  cmd.add_option("--local-feats", local_path,
                 "local feature file (default: derived from the corpus path)");
  cmd.add_option("--global-feats", global_path,
                 "global feature file (default: derived from the corpus path)");
  cmd.add_option("--split", split, "train | val | test | all")
      ->capture_default_str();
  cmd.add_option("--overlap", overlap,
                 "window overlap (default: the checkpoint's trained value)");
  cmd.add_option("--seed", seed, "split seed (default: the checkpoint's)");
  cmd.add_option("--train-ratio", train_ratio, "split share (default: checkpoint)");
  cmd.add_option("--val-ratio", val_ratio, "split share (default: checkpoint)");
  cmd.add_option("--test-ratio", test_ratio, "split share (default: checkpoint)");
  cmd.add_option("--out", out, "metrics JSON path (stdout when omitted)");
  int parse_code = 0;
  if (!parse_cli(cmd, args, parse_code)) return parse_code;

  if (local_path.empty()) local_path = sidecar_path(corpus_path, "local").string();
  if (global_path.empty())
    global_path = sidecar_path(corpus_path, "global").string();

  LoadedModel loaded = Model::load(checkpoint);
  const json& extra = loaded.extra;
  if (seed < 0) seed = extra.value("seed", 1);
  if (overlap < 0.0) overlap = extra.value("window_overlap", 0.6);
  SplitRatios ratios;
  if (extra.contains("split")) {
    ratios.train = extra.at("split").value("train", ratios.train);
    ratios.val = extra.at("split").value("val", ratios.val);
    ratios.test = extra.at("split").value("test", ratios.test);
  }
  if (train_ratio >= 0.0) ratios.train = train_ratio;
  if (val_ratio >= 0.0) ratios.val = val_ratio;
  if (test_ratio >= 0.0) ratios.test = test_ratio;

  echo_resolved("eval", json{{"checkpoint", checkpoint},
                             {"corpus", corpus_path},
                             {"local_feats", local_path},
                             {"global_feats", global_path},
                             {"split", split},
                             {"overlap", overlap},
                             {"seed", seed},
                             {"train_ratio", ratios.train},
                             {"val_ratio", ratios.val},
                             {"test_ratio", ratios.test},
                             {"out", out}});

  const ReasonVocabulary vocab = ReasonVocabulary::defaults();
  const auto records = load_corpus(corpus_path, vocab);
  const FileFeatureProvider local(local_path);
  const FileFeatureProvider global(global_path);

  std::vector<AnnotationRecord> chosen;
  if (split == "all") {
    chosen = records;
  } else {
    CorpusSplit parts = split_corpus(records, ratios,
                                     mix_seed(static_cast<std::uint64_t>(seed), 0));
    if (split == "train")
      chosen = std::move(parts.train);
    else if (split == "val")
      chosen = std::move(parts.val);
    else if (split == "test")
      chosen = std::move(parts.test);
    else
      throw ConfigError("eval: unknown split '" + split +
                        "' (expected train, val, test or all)");
  }

  const WindowConfig window{loaded.model.config().t, overlap};
  const WindowedCorpus windows = window_corpus(chosen, window, local, global);
  if (windows.samples.empty())
    throw ValidationError("eval: split '" + split + "' produced no windows (" +
                          std::to_string(chosen.size()) + " records)");
  const MetricsReport report = evaluate_model(loaded.model, windows.samples);

  const std::string rendered = metrics_to_json(report);
  if (out.empty())
    std::cout << rendered << "\n";
  else {
    write_artifact(out, rendered + "\n");
    std::cout << "intent accuracy " << report.intent.accuracy
              << ", reason subset accuracy " << report.reason.subset_accuracy
              << " over " << report.samples << " windows\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// ablate

int cmd_ablate(const json& cfg, const std::vector<std::string>& args) {
  TrainFlags flags;
  flags.epochs = 10;
  std::string corpus_path;
  std::string local_path;
  std::string global_path;
  std::vector<std::uint64_t> seeds{1, 2, 3};
  std::vector<std::string> variants{"full", "no_crossmodal", "word_embed",
                                    "recurrent_backbone"};
  bool skip_weights = false;
  std::string out = "ablation.json";

  ConfigMerge merge(cfg);
  merge_train_flags(merge, flags);
  merge.field("corpus", corpus_path);
  merge.field("local_feats", local_path);
  merge.field("global_feats", global_path);
  merge.field("seeds", seeds);
  merge.field("variants", variants);
  merge.field("skip_weights", skip_weights);
  merge.field("out", out);
  merge.finish("ablate");

  CLI::App cmd{"train every variant and loss-weight setting over seeds"};
  std::string config_path;
  cmd.add_option("--config", config_path, "JSON config file; flags override it");
  cmd.add_option("--corpus", corpus_path, "corpus JSONL path")
      ->required(corpus_path.empty());
  cmd.add_option("--local-feats", local_path,
                 "local feature file (default: derived from the corpus path)");
  cmd.add_option("--global-feats", global_path,
                 "global feature file (default: derived from the corpus path)");
  cmd.add_option("--seeds", seeds, "three or more seeds")->capture_default_str();
  cmd.add_option("--variants", variants, "variant rows to train")
      ->capture_default_str();
  cmd.add_flag("--skip-weights", skip_weights, "drop the loss-weight grid rows");
  cmd.add_option("--out", out, "report JSON path")->capture_default_str();
  add_train_flags(&cmd, flags);
  int parse_code = 0;
  if (!parse_cli(cmd, args, parse_code)) return parse_code;

  if (local_path.empty()) local_path = sidecar_path(corpus_path, "local").string();
  if (global_path.empty())
    global_path = sidecar_path(corpus_path, "global").string();

  json resolved = train_flags_json(flags);
  resolved["corpus"] = corpus_path;
  resolved["local_feats"] = local_path;
  resolved["global_feats"] = global_path;
  resolved["seeds"] = seeds;
  resolved["variants"] = variants;
  resolved["skip_weights"] = skip_weights;
  resolved["out"] = out;
  echo_resolved("ablate", resolved);

  const ReasonVocabulary vocab = ReasonVocabulary::defaults();
  const auto records = load_corpus(corpus_path, vocab);
  const FileFeatureProvider local(local_path);
  const FileFeatureProvider global(global_path);

  AblationConfig config;
  config.base = to_train_config(flags, vocab.size());
  config.seeds = seeds;
  config.variants.clear();
  for (const std::string& name : variants)
    config.variants.push_back(model_variant_from_string(name));
  if (skip_weights) config.weight_grid.clear();

  const TrainData data{&records, &local, &global};
  const AblationReport report = run_ablation(config, data, vocab);
  write_artifact(out, ablation_report_json(report).dump(2) + "\n");

  const auto print_row = [](const AblationRow& row) {
    std::printf("%-24s intent acc %.4f +- %.4f   reason macro-F1 %.4f +- %.4f\n",
                row.name.c_str(), row.intent_accuracy.mean,
                row.intent_accuracy.stddev, row.reason_macro_f1.mean,
                row.reason_macro_f1.stddev);
  };
  for (const AblationRow& row : report.variant_rows) print_row(row);
  for (const AblationRow& row : report.weight_rows) print_row(row);
  if (!report.best_weights_by_intent_accuracy.empty())
    std::cout << "best weights by mean intent accuracy: "
              << report.best_weights_by_intent_accuracy << "\n";
  std::cout << "report " << resolve_output_path(out).string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// gradcheck

int cmd_gradcheck(const json& cfg, const std::vector<std::string>& args) {
  GradCheckConfig settings;
  settings.model.t = 3;
  settings.model.d_v = 8;
  settings.model.embed_dim = 8;
  settings.model.gcn_hidden = 8;
  settings.model.layers = 1;
  settings.model.heads = 2;
  settings.model.box_heads = 2;
  std::string variant = "full";
  std::string out;

  ConfigMerge merge(cfg);
  merge.field("t", settings.model.t);
  merge.field("d_v", settings.model.d_v);
  merge.field("embed_dim", settings.model.embed_dim);
  merge.field("gcn_hidden", settings.model.gcn_hidden);
  merge.field("layers", settings.model.layers);
  merge.field("heads", settings.model.heads);
  merge.field("box_heads", settings.model.box_heads);
  merge.field("variant", variant);
  merge.field("batch", settings.batch);
  merge.field("seed", settings.seed);
  merge.field("step", settings.step);
  merge.field("tol", settings.tolerance);
  merge.field("out", out);
  merge.finish("gradcheck");

  CLI::App cmd{"finite-difference check of every parameter gradient"};
  std::string config_path;
  cmd.add_option("--config", config_path, "JSON config file; flags override it");
  cmd.add_option("--t", settings.model.t, "window length")->capture_default_str();
  cmd.add_option("--d-v", settings.model.d_v, "stream width")->capture_default_str();
  cmd.add_option("--embed-dim", settings.model.embed_dim, "embedding width")
      ->capture_default_str();
  cmd.add_option("--gcn-hidden", settings.model.gcn_hidden, "graph hidden width")
      ->capture_default_str();
  cmd.add_option("--layers", settings.model.layers, "transformer layers")
      ->capture_default_str();
  cmd.add_option("--heads", settings.model.heads, "stream attention heads")
      ->capture_default_str();
  cmd.add_option("--box-heads", settings.model.box_heads, "box attention heads")
      ->capture_default_str();
  cmd.add_option("--variant", variant, "model variant to check")
      ->capture_default_str();
  cmd.add_option("--batch", settings.batch, "toy batch size")->capture_default_str();
  cmd.add_option("--seed", settings.seed, "toy data and init seed")
      ->capture_default_str();
  cmd.add_option("--step", settings.step, "finite-difference half-step")
      ->capture_default_str();
  cmd.add_option("--tol", settings.tolerance, "max allowed relative error")
      ->capture_default_str();
  cmd.add_option("--out", out, "report JSON path (optional)");
  int parse_code = 0;
  if (!parse_cli(cmd, args, parse_code)) return parse_code;
  settings.model.variant = model_variant_from_string(variant);

  echo_resolved("gradcheck", json{{"t", settings.model.t},
                                  {"d_v", settings.model.d_v},
                                  {"embed_dim", settings.model.embed_dim},
                                  {"gcn_hidden", settings.model.gcn_hidden},
                                  {"layers", settings.model.layers},
                                  {"heads", settings.model.heads},
                                  {"box_heads", settings.model.box_heads},
                                  {"variant", variant},
                                  {"batch", settings.batch},
                                  {"seed", settings.seed},
                                  {"step", settings.step},
                                  {"tol", settings.tolerance},
                                  {"out", out}});

  const GradCheckReport report = run_gradient_check(settings);

  const GradCheckGroup* worst = nullptr;
  for (const GradCheckGroup& group : report.groups)
    if (worst == nullptr || group.max_rel_err > worst->max_rel_err) worst = &group;
  std::printf("checked %zu values across %zu parameters in %.2f s\n",
              report.total_checked, report.groups.size(), report.seconds);
  if (worst != nullptr)
    std::printf("worst parameter %s, relative error %.3e\n", worst->name.c_str(),
                worst->max_rel_err);
  std::printf("max relative error %.3e (tolerance %.1e): %s\n", report.max_rel_err,
              settings.tolerance, report.passed ? "ok" : "FAILED");

  if (!out.empty()) {
    json groups = json::array();
    for (const GradCheckGroup& group : report.groups)
      groups.push_back(json{{"name", group.name},
                            {"max_rel_err", group.max_rel_err},
                            {"checked", group.checked}});
    write_artifact(out, json{{"max_rel_err", report.max_rel_err},
                             {"passed", report.passed},
                             {"seconds", report.seconds},
                             {"groups", std::move(groups)}}
                            .dump(2) +
                            "\n");
  }
  return report.passed ? 0 : 1;
}

// ---------------------------------------------------------------------------
// plot

int cmd_plot(const json& cfg, const std::vector<std::string>& args) {
  std::string in;
  std::string out = "chart.svg";
  std::string kind = "auto";
  std::string metric = "intent_accuracy";

  ConfigMerge merge(cfg);
  merge.field("in", in);
  merge.field("out", out);
  merge.field("kind", kind);
  merge.field("metric", metric);
  merge.finish("plot");

  CLI::App cmd{"render an ablation report or epoch log as SVG"};
  std::string config_path;
  cmd.add_option("--config", config_path, "JSON config file; flags override it");
  cmd.add_option("--in", in, "ablation report JSON or epoch log JSONL")
      ->required(in.empty());
  cmd.add_option("--out", out, "SVG path")->capture_default_str();
  cmd.add_option("--kind", kind, "auto | ablation | epochs")->capture_default_str();
  cmd.add_option("--metric", metric,
                 "bar metric: intent_accuracy | intent_f1 | intent_auc | "
                 "reason_subset_accuracy | reason_hamming_accuracy | "
                 "reason_macro_f1")
      ->capture_default_str();
  int parse_code = 0;
  if (!parse_cli(cmd, args, parse_code)) return parse_code;

  echo_resolved("plot", json{{"in", in},
                             {"out", out},
                             {"kind", kind},
                             {"metric", metric}});

  const std::string text = read_text_file(in);
  std::string resolved_kind = kind;
  if (resolved_kind == "auto") {
    json probe;
    try {
      probe = json::parse(text);
    } catch (const json::exception&) {
      probe = json();
    }
    resolved_kind = probe.is_object() && probe.contains("variants") ? "ablation"
                                                                    : "epochs";
  }

  std::string svg;
  if (resolved_kind == "ablation") {
    json report;
    try {
      report = json::parse(text);
    } catch (const json::exception& e) {
      throw IoError("plot: '" + in + "' is not JSON: " + e.what());
    }
    std::vector<Bar> bars;
    const auto add_rows = [&](const json& rows) {
      for (const auto& row : rows) {
        const json& stat = row.at("aggregate").at(metric);
        bars.push_back(Bar{row.at("name").get<std::string>(),
                           stat.at("mean").get<double>(),
                           stat.at("std").get<double>()});
      }
    };
    add_rows(report.at("variants"));
    add_rows(report.at("loss_weights"));
    svg = bar_chart_svg("ablation: " + metric, metric, bars);
  } else if (resolved_kind == "epochs") {
    Series train_series{"train loss", {}, {}};
    Series val_series{"val loss", {}, {}};
    std::istringstream lines(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(lines, line)) {
      ++line_no;
      if (line.empty()) continue;
      json entry;
      try {
        entry = json::parse(line);
      } catch (const json::exception& e) {
        throw IoError("plot: '" + in + "' line " + std::to_string(line_no) +
                      ": " + e.what());
      }
      const double epoch = entry.at("epoch").get<double>();
      train_series.x.push_back(epoch);
      train_series.y.push_back(entry.at("train_loss").get<double>());
      val_series.x.push_back(epoch);
      val_series.y.push_back(entry.at("val_loss").get<double>());
    }
    svg = line_chart_svg("training curve", "epoch", "loss",
                         {train_series, val_series});
  } else {
    throw ConfigError("plot: unknown kind '" + kind +
                      "' (expected auto, ablation or epochs)");
  }
  write_artifact(out, svg);
  std::cout << "wrote " << resolve_output_path(out).string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::string> commands{"gen",    "stats",     "icc",
                                          "embed",  "train",     "eval",
                                          "ablate", "gradcheck", "plot"};
  const auto usage = [&] {
    std::fprintf(stderr,
                 "usage: pedintent <command> [flags]\n"
                 "commands: gen stats icc embed train eval ablate gradcheck "
                 "plot\n"
                 "run 'pedintent <command> --help' for that command's flags\n");
  };
  if (argc < 2) {
    usage();
    return 1;
  }
  const std::string command = argv[1];
  if (command == "--help" || command == "-h" || command == "help") {
    usage();
    return 0;
  }
  if (std::find(commands.begin(), commands.end(), command) == commands.end()) {
    std::fprintf(stderr, "pedintent: unknown command '%s'\n", command.c_str());
    usage();
    return 1;
  }

  // CLI11 parses a reversed tail vector; build it once for the subcommand.
  std::vector<std::string> args;
  for (int i = argc - 1; i >= 2; --i) args.emplace_back(argv[i]);

  try {
    const json cfg = preload_config(argc, argv);
    if (command == "gen") return cmd_gen(cfg, args);
    if (command == "stats") return cmd_stats(cfg, args);
    if (command == "icc") return cmd_icc(cfg, args);
    if (command == "embed") return cmd_embed(cfg, args);
    if (command == "train") return cmd_train(cfg, args);
    if (command == "eval") return cmd_eval(cfg, args);
    if (command == "ablate") return cmd_ablate(cfg, args);
    if (command == "gradcheck") return cmd_gradcheck(cfg, args);
    if (command == "plot") return cmd_plot(cfg, args);
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "pedintent %s: numerical failure: %s\n", command.c_str(),
                 e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "pedintent %s: %s\n", command.c_str(), e.what());
    return 1;
  }
  return 1;
}
