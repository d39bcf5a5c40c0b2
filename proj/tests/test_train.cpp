#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "pedintent/data/synthetic.hpp"
#include "pedintent/train/ablation.hpp"
#include "pedintent/train/metrics.hpp"
#include "pedintent/train/model.hpp"
#include "pedintent/train/trainer.hpp"

using namespace pedintent;

namespace {

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

// A small planted corpus plus its in-memory featurizers, shared by the
// trainer tests. Feature width 8 is the smallest the featurizer accepts.
struct TrainFixture {
  GeneratedCorpus corpus;
  ReasonVocabulary vocab = ReasonVocabulary::defaults();
  ToyFeatureProvider local;
  ToyFeatureProvider global;

  explicit TrainFixture(std::size_t n_records, std::uint64_t seed = 11)
      : corpus(make_corpus(n_records, seed)),
        local(corpus, StreamKind::Local),
        global(corpus, StreamKind::Global) {}

  static GeneratedCorpus make_corpus(std::size_t n_records, std::uint64_t seed) {
    SyntheticConfig config;
    config.n_records = n_records;
    config.seed = seed;
    config.noise_rate = 0.05;
    config.feature_width = 8;
    config.feature_noise = 0.05;
    return generate_synthetic(config, ReasonVocabulary::defaults());
  }

  TrainData data() const {
    return TrainData{&corpus.records, &local, &global};
  }
};

TrainConfig small_train_config() {
  TrainConfig config;
  config.model.t = 8;
  config.model.d_v = 8;
  config.model.n = 17;
  config.model.embed_dim = 12;
  config.model.gcn_hidden = 12;
  config.model.layers = 1;
  config.model.heads = 2;
  config.model.box_heads = 2;
  config.window.t = 8;
  config.window.overlap = 0.5;
  config.lr = 1e-3;
  config.batch_size = 8;
  config.epochs = 2;
  config.seed = 5;
  return config;
}

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
    obs.boxes.insert(obs.boxes.end(),
                     {x1, y1, x1 + rng.uniform(0.05, 0.4), y1 + rng.uniform(0.05, 0.4)});
  }
  return obs;
}

Model small_model(ModelVariant variant, std::uint64_t seed = 3) {
  ModelConfig config;
  config.t = 4;
  config.d_v = 8;
  config.n = 17;
  config.embed_dim = 10;
  config.gcn_hidden = 8;
  config.layers = 1;
  config.heads = 2;
  config.box_heads = 2;
  config.variant = variant;
  const EmbeddingTable table =
      toy_embed(ReasonVocabulary::defaults(), config.embed_dim, 21);
  std::vector<double> a_hat(config.n * config.n, 0.0);
  for (std::size_t i = 0; i < config.n; ++i) a_hat[i * config.n + i] = 1.0;
  return Model(config, table, a_hat, seed);
}

}  // namespace

TEST_CASE("binary counts expose the documented degenerate conventions") {
  BinaryCounts empty_class;
  empty_class.tn = 10;
  CHECK(empty_class.f1() == 1.0);
  CHECK(empty_class.precision() == 0.0);
  CHECK(empty_class.accuracy() == 1.0);

  BinaryCounts mixed;
  mixed.tp = 3;
  mixed.fp = 1;
  mixed.fn = 2;
  mixed.tn = 4;
  CHECK(mixed.accuracy() == 0.7);
  CHECK(mixed.precision() == 0.75);
  CHECK(mixed.f1() == 6.0 / 9.0);

  BinaryCounts none;
  CHECK_THROWS_AS(none.accuracy(), ValidationError);
}

TEST_CASE("auc handles the frozen and degenerate cases") {
  CHECK(auc_score({0.9, 0.8, 0.3, 0.1}, {1, 1, 0, 0}) == 1.0);
  CHECK(auc_score({0.1, 0.2, 0.8, 0.9}, {1, 1, 0, 0}) == 0.0);
  CHECK(auc_score({0.5, 0.5, 0.5, 0.5}, {1, 1, 0, 0}) == 0.5);
  // Single-class splits score the uninformative 0.5 by convention.
  CHECK(auc_score({0.2, 0.9}, {1, 1}) == 0.5);
  CHECK(auc_score({0.2, 0.9}, {0, 0}) == 0.5);
  CHECK_THROWS_AS(auc_score({}, {}), ValidationError);
  CHECK_THROWS_AS(auc_score({0.5}, {2}), ValidationError);
  CHECK_THROWS_AS(auc_score({0.5, 0.5}, {1}), DimensionError);
}

TEST_CASE("auc equals the pair-counting oracle exactly") {
  Rng rng(91);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = rng.uniform_int(2, 50);
    std::vector<double> scores(n);
    std::vector<int> labels(n);
    bool has_pos = false;
    bool has_neg = false;
    for (std::size_t i = 0; i < n; ++i) {
      // A coarse score grid forces plenty of ties.
      scores[i] = static_cast<double>(rng.uniform_int(0, 8)) / 8.0;
      labels[i] = static_cast<int>(rng.uniform_int(0, 1));
      has_pos = has_pos || labels[i] == 1;
      has_neg = has_neg || labels[i] == 0;
    }
    if (!has_pos || !has_neg) continue;
    CHECK(auc_score(scores, labels) == oracle::auc_by_pairs(scores, labels));
  }
}

TEST_CASE("intent metrics match hand-counted confusion values exactly") {
  SUBCASE("frozen example") {
    const IntentMetrics m = intent_metrics({0.9, 0.8, 0.3, 0.1}, {1, 1, 0, 0});
    CHECK(m.accuracy == 1.0);
    CHECK(m.precision == 1.0);
    CHECK(m.f1 == 1.0);
    CHECK(m.auc == 1.0);
    CHECK(m.counts.tp == 2);
    CHECK(m.counts.tn == 2);
  }
  SUBCASE("random trials") {
    Rng rng(17);
    for (int trial = 0; trial < 40; ++trial) {
      const std::size_t n = rng.uniform_int(1, 50);
      std::vector<double> probs(n);
      std::vector<int> labels(n), preds(n);
      for (std::size_t i = 0; i < n; ++i) {
        probs[i] = rng.uniform(0.0, 1.0);
        labels[i] = static_cast<int>(rng.uniform_int(0, 1));
        preds[i] = probs[i] > 0.5 ? 1 : 0;
      }
      const oracle::HandCounts c = oracle::confusion_by_hand(preds, labels);
      const IntentMetrics m = intent_metrics(probs, labels);
      CHECK(m.counts.tp == c.tp);
      CHECK(m.counts.fp == c.fp);
      CHECK(m.counts.fn == c.fn);
      CHECK(m.counts.tn == c.tn);
      CHECK(m.accuracy ==
            static_cast<double>(c.tp + c.tn) / static_cast<double>(n));
      CHECK(m.f1 == oracle::f1_from_counts(c));
    }
  }
  SUBCASE("threshold is strict at one half") {
    const IntentMetrics m = intent_metrics({0.5}, {1});
    CHECK(m.counts.fn == 1);  // p == 0.5 predicts the negative class
  }
}

TEST_CASE("reason metrics match definitional loops exactly") {
  SUBCASE("perfect predictions") {
    const std::vector<std::vector<int>> y{{1, 0, 1}, {0, 0, 1}, {1, 1, 0}};
    const ReasonMetrics m = reason_metrics(y, y);
    CHECK(m.subset_accuracy == 1.0);
    CHECK(m.hamming_accuracy == 1.0);
    CHECK(m.macro_f1 == 1.0);
  }
  SUBCASE("hand-checked small case") {
    const std::vector<std::vector<int>> pred{{1, 0, 0}, {1, 1, 0}};
    const std::vector<std::vector<int>> truth{{1, 0, 0}, {0, 1, 1}};
    const ReasonMetrics m = reason_metrics(pred, truth);
    CHECK(m.subset_accuracy == 0.5);
    CHECK(m.hamming_accuracy == 4.0 / 6.0);
    // class 0: tp=1 fp=1 -> 2/3; class 1: tp=1 -> 1; class 2: fn=1 -> 0
    CHECK(m.per_class[0].f1 == 2.0 / 3.0);
    CHECK(m.per_class[1].f1 == 1.0);
    CHECK(m.per_class[2].f1 == 0.0);
    CHECK(m.macro_f1 == (2.0 / 3.0 + 1.0 + 0.0) / 3.0);
  }
  SUBCASE("random trials against per-class counting") {
    Rng rng(29);
    for (int trial = 0; trial < 30; ++trial) {
      const std::size_t samples = rng.uniform_int(1, 50);
      const std::size_t n = rng.uniform_int(1, 17);
      std::vector<std::vector<int>> pred(samples), truth(samples);
      for (std::size_t s = 0; s < samples; ++s)
        for (std::size_t c = 0; c < n; ++c) {
          pred[s].push_back(static_cast<int>(rng.uniform_int(0, 1)));
          truth[s].push_back(static_cast<int>(rng.uniform_int(0, 1)));
        }
      const ReasonMetrics m = reason_metrics(pred, truth);

      std::int64_t exact = 0, agree = 0;
      double f1_sum = 0.0;
      for (std::size_t c = 0; c < n; ++c) {
        std::vector<int> pc(samples), tc(samples);
        for (std::size_t s = 0; s < samples; ++s) {
          pc[s] = pred[s][c];
          tc[s] = truth[s][c];
        }
        f1_sum += oracle::f1_from_counts(oracle::confusion_by_hand(pc, tc));
      }
      for (std::size_t s = 0; s < samples; ++s) {
        bool all = true;
        for (std::size_t c = 0; c < n; ++c) {
          if (pred[s][c] == truth[s][c])
            ++agree;
          else
            all = false;
        }
        if (all) ++exact;
      }
      CHECK(m.subset_accuracy ==
            static_cast<double>(exact) / static_cast<double>(samples));
      CHECK(m.hamming_accuracy == static_cast<double>(agree) /
                                      (static_cast<double>(samples) *
                                       static_cast<double>(n)));
      CHECK(m.macro_f1 == f1_sum / static_cast<double>(n));
    }
  }
  SUBCASE("validation") {
    CHECK_THROWS_AS(reason_metrics({}, {}), ValidationError);
    CHECK_THROWS_AS(reason_metrics({{1}}, {{1}, {0}}), DimensionError);
    CHECK_THROWS_AS(reason_metrics({{1, 0}}, {{1}}), DimensionError);
    CHECK_THROWS_AS(reason_metrics({{2}}, {{1}}), ValidationError);
  }
}

TEST_CASE("metrics serialize with every reported field") {
  MetricsReport report;
  report.intent = intent_metrics({0.9, 0.1}, {1, 0});
  report.reason = reason_metrics({{1, 0}}, {{1, 1}});
  report.samples = 2;
  report.wall_clock_per_sample = 0.001;
  const auto j = nlohmann::json::parse(metrics_to_json(report));
  CHECK(j.at("samples") == 2);
  CHECK(j.at("intent").at("accuracy") == 1.0);
  CHECK(j.at("reason").at("per_class").size() == 2);
  CHECK(j.at("reason").at("subset_accuracy") == 0.0);
}

TEST_CASE("model variants register the expected parameters") {
  Model full = small_model(ModelVariant::Full);
  CHECK(full.params().contains("enc.local.pos"));
  CHECK(full.params().contains("gcn.w1"));
  CHECK(full.params().contains("gcn.w2"));
  CHECK(full.params().contains("fusion.ws"));
  CHECK(full.params().contains("head.intent.w"));
  CHECK_FALSE(full.params().contains("head.reason.w"));
  CHECK(full.params().at("head.intent.w").shape == Shape{17, 1});

  Model ablated = small_model(ModelVariant::NoCrossmodal);
  CHECK_FALSE(ablated.params().contains("gcn.w1"));
  CHECK(ablated.params().at("head.reason.w").shape == Shape{20, 17});
  CHECK(ablated.params().at("head.intent.w").shape == Shape{20, 1});

  Model recurrent = small_model(ModelVariant::RecurrentBackbone);
  CHECK(recurrent.params().contains("gru.local.wz"));
  CHECK(recurrent.params().contains("gru.box.uh"));
  CHECK_FALSE(recurrent.params().contains("enc.local.pos"));

  // The backbone is drawn before the head, so variants that share it start
  // from identical encoder weights under the same seed.
  CHECK(full.params().at("enc.local.pos").value ==
        ablated.params().at("enc.local.pos").value);
  CHECK(full.params().at("enc.global.l1.attn.wq").value ==
        ablated.params().at("enc.global.l1.attn.wq").value);
}

TEST_CASE("model variant names round-trip and reject junk") {
  for (ModelVariant v : {ModelVariant::Full, ModelVariant::NoCrossmodal,
                         ModelVariant::WordEmbed, ModelVariant::RecurrentBackbone})
    CHECK(model_variant_from_string(to_string(v)) == v);
  CHECK_THROWS_AS(model_variant_from_string("resnet"), ConfigError);
}

TEST_CASE("model forward produces heads of the documented shapes") {
  for (ModelVariant v : {ModelVariant::Full, ModelVariant::NoCrossmodal,
                         ModelVariant::RecurrentBackbone}) {
    CAPTURE(to_string(v));
    Model model = small_model(v);
    Rng rng(7);
    const ObservationSequence obs = random_observation(rng, 4, 8);
    Tape tape;
    BoundParams bound(tape, model.params(), false);
    const HeadOutputs out = model.forward(tape, bound, obs);
    CHECK(out.intent_logit.shape() == Shape{1, 1});
    CHECK(out.reason_logits.shape() == Shape{1, 17});

    const Model::Prediction p = model.predict(obs);
    CHECK(p.intent_probability > 0.0);
    CHECK(p.intent_probability < 1.0);
    CHECK(p.reason_probabilities.size() == 17);
  }
}

TEST_CASE("batch loss is the mean of the per-sample losses") {
  Model model = small_model(ModelVariant::Full);
  Rng rng(13);
  std::vector<WindowSample> samples(3);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    samples[i].obs = random_observation(rng, 4, 8);
    samples[i].intent = i % 2 == 0 ? Intent::Cross : Intent::NoCross;
    samples[i].reasons = i % 2 == 0 ? std::vector<int>{8, 9} : std::vector<int>{14, 16};
    samples[i].pedestrian_id = "ped_" + std::to_string(i);
  }
  const LossWeights weights{1.0, 1.0};

  double sum = 0.0;
  for (const WindowSample& s : samples) {
    Tape tape;
    BoundParams bound(tape, model.params(), false);
    const HeadOutputs out = model.forward(tape, bound, s.obs);
    sum += multitask_loss(out, Model::intent_target(s),
                          Model::reason_target_row(s, 17), weights)
               .values()[0];
  }

  Tape tape;
  BoundParams bound(tape, model.params(), true);
  std::vector<const WindowSample*> batch{&samples[0], &samples[1], &samples[2]};
  const Tensor loss = model.batch_loss(tape, bound, batch, weights);
  CHECK(loss.values()[0] == doctest::Approx(sum / 3.0).epsilon(1e-12));

  tape.backward(loss);
  const GradMap grads = bound.grads();
  CHECK(grads.count("enc.local.pos") == 1);
  CHECK(grads.count("gcn.w1") == 1);
}

TEST_CASE("reason target rows place ids and reject out-of-range ones") {
  WindowSample sample;
  sample.pedestrian_id = "ped_x";
  sample.reasons = {0, 5, 16};
  const std::vector<int> row = Model::reason_target_row(sample, 17);
  CHECK(row[0] == 1);
  CHECK(row[5] == 1);
  CHECK(row[16] == 1);
  CHECK(std::count(row.begin(), row.end(), 1) == 3);
  sample.reasons = {17};
  CHECK_THROWS_AS(Model::reason_target_row(sample, 17), ValidationError);
}

TEST_CASE("model checkpoints rebuild an identical predictor") {
  Model model = small_model(ModelVariant::Full, 31);
  Rng rng(5);
  const ObservationSequence obs = random_observation(rng, 4, 8);
  const Model::Prediction before = model.predict(obs);

  const auto stem = temp_path("pedintent_model_ckpt");
  model.save(stem, nlohmann::json{{"note", "round-trip"}});
  LoadedModel loaded = Model::load(stem);
  CHECK(loaded.extra.at("note") == "round-trip");
  CHECK(loaded.model.config().d_v == 8);
  CHECK(loaded.model.config().variant == ModelVariant::Full);
  CHECK(loaded.model.embeddings().provider_tag == model.embeddings().provider_tag);
  CHECK(loaded.model.a_hat() == model.a_hat());
  REQUIRE(loaded.model.params().size() == model.params().size());
  for (std::size_t i = 0; i < model.params().size(); ++i) {
    CHECK(loaded.model.params().params()[i].name == model.params().params()[i].name);
    CHECK(loaded.model.params().params()[i].value ==
          model.params().params()[i].value);
  }
  const Model::Prediction after = loaded.model.predict(obs);
  CHECK(after.intent_probability == before.intent_probability);
  CHECK(after.reason_probabilities == before.reason_probabilities);
  std::filesystem::remove(stem.string() + ".json");
  std::filesystem::remove(stem.string() + ".bin");
}

TEST_CASE("model construction validates the wiring") {
  ModelConfig config;
  config.t = 4;
  config.d_v = 8;
  config.heads = 2;
  config.box_heads = 2;
  config.embed_dim = 10;
  const EmbeddingTable table = toy_embed(ReasonVocabulary::defaults(), 10, 1);
  const std::vector<double> a_hat(17 * 17, 0.0);

  SUBCASE("embedding width must match") {
    config.embed_dim = 12;
    CHECK_THROWS_AS(Model(config, table, a_hat, 1), ConfigError);
  }
  SUBCASE("adjacency must be n by n") {
    CHECK_THROWS_AS(Model(config, table, std::vector<double>(16, 0.0), 1),
                    ConfigError);
  }
  SUBCASE("heads must divide the stream width") {
    config.heads = 3;
    CHECK_THROWS_AS(Model(config, table, a_hat, 1), ConfigError);
  }
  SUBCASE("observation width must match at forward time") {
    Model model(config, table, a_hat, 1);
    Rng rng(3);
    const ObservationSequence obs = random_observation(rng, 4, 6);
    Tape tape;
    BoundParams bound(tape, model.params(), false);
    CHECK_THROWS_AS(model.forward(tape, bound, obs), ConfigError);
  }
}

TEST_CASE("train config validation catches inconsistent settings") {
  TrainConfig config = small_train_config();
  SUBCASE("window length must match the model") {
    config.window.t = 9;
    CHECK_THROWS_AS(validate_train_config(config), ConfigError);
  }
  SUBCASE("learning rate must be positive") {
    config.lr = 0.0;
    CHECK_THROWS_AS(validate_train_config(config), ConfigError);
  }
  SUBCASE("batch size must be positive") {
    config.batch_size = 0;
    CHECK_THROWS_AS(validate_train_config(config), ConfigError);
  }
  SUBCASE("adjacency threshold must stay below one") {
    config.adjacency_threshold = 1.0;
    CHECK_THROWS_AS(validate_train_config(config), ConfigError);
  }
}

TEST_CASE("training runs deterministically end to end") {
  const TrainFixture fixture(48);
  TrainConfig config = small_train_config();

  TrainResult first = train_model(config, fixture.data(), default_embeddings(
      fixture.vocab, config.model, mix_seed(config.seed, 2)));
  TrainResult second = train_model(config, fixture.data(), default_embeddings(
      fixture.vocab, config.model, mix_seed(config.seed, 2)));

  REQUIRE(first.log.size() == 2);
  REQUIRE(second.log.size() == 2);
  CHECK(first.best_epoch == second.best_epoch);
  CHECK(first.best_val_loss == second.best_val_loss);
  for (std::size_t e = 0; e < first.log.size(); ++e) {
    CHECK(first.log[e].train_loss == second.log[e].train_loss);
    CHECK(first.log[e].val_loss == second.log[e].val_loss);
  }
  REQUIRE(first.model.params().size() == second.model.params().size());
  for (std::size_t i = 0; i < first.model.params().size(); ++i)
    CHECK(first.model.params().params()[i].value ==
          second.model.params().params()[i].value);
  CHECK(first.test_metrics.intent.accuracy == second.test_metrics.intent.accuracy);
  CHECK(first.test_metrics.reason.macro_f1 == second.test_metrics.reason.macro_f1);
  CHECK(first.train_windows == second.train_windows);
  CHECK(first.train_windows > 0);
}

TEST_CASE("the training loss falls over a few epochs") {
  const TrainFixture fixture(48);
  TrainConfig config = small_train_config();
  config.epochs = 4;
  const TrainResult result = train_model(config, fixture.data(), default_embeddings(
      fixture.vocab, config.model, mix_seed(config.seed, 2)));
  REQUIRE(result.log.size() == 4);
  CHECK(result.log.back().train_loss < result.log.front().train_loss);
  CHECK(result.best_epoch >= 1);
  CHECK(result.val_metrics.samples > 0);
  CHECK(result.test_metrics.samples > 0);
}

TEST_CASE("zero epochs returns the initial parameters and still checkpoints") {
  const TrainFixture fixture(30);
  TrainConfig config = small_train_config();
  config.epochs = 0;
  config.checkpoint_stem = temp_path("pedintent_init_ckpt");

  const TrainResult result = train_model(config, fixture.data(), default_embeddings(
      fixture.vocab, config.model, mix_seed(config.seed, 2)));
  CHECK(result.best_epoch == 0);
  CHECK(result.log.empty());
  CHECK(result.test_metrics.samples > 0);

  LoadedModel loaded = Model::load(config.checkpoint_stem);
  CHECK(loaded.extra.at("best_epoch") == 0);
  REQUIRE(loaded.model.params().size() == result.model.params().size());
  for (std::size_t i = 0; i < loaded.model.params().size(); ++i)
    CHECK(loaded.model.params().params()[i].value ==
          result.model.params().params()[i].value);
  std::filesystem::remove(config.checkpoint_stem.string() + ".json");
  std::filesystem::remove(config.checkpoint_stem.string() + ".bin");
}

TEST_CASE("training writes one log line per epoch") {
  const TrainFixture fixture(30);
  TrainConfig config = small_train_config();
  config.log_path = temp_path("pedintent_epochs.jsonl");
  std::filesystem::remove(config.log_path);

  train_model(config, fixture.data(),
              default_embeddings(fixture.vocab, config.model, 9));
  std::ifstream in(config.log_path);
  REQUIRE(in.good());
  std::string line;
  std::size_t lines = 0;
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line);
    CHECK(j.at("epoch") == lines + 1);
    CHECK(j.at("val").at("intent").contains("accuracy"));
    ++lines;
  }
  CHECK(lines == config.epochs);
  std::filesystem::remove(config.log_path);
}

TEST_CASE("evaluation is side-effect free and rejects empty splits") {
  const TrainFixture fixture(30);
  TrainConfig config = small_train_config();
  config.epochs = 1;
  TrainResult result = train_model(config, fixture.data(), default_embeddings(
      fixture.vocab, config.model, mix_seed(config.seed, 2)));

  const WindowedCorpus windows = window_corpus(
      fixture.corpus.records, config.window, fixture.local, fixture.global);
  REQUIRE_FALSE(windows.samples.empty());

  std::vector<std::vector<double>> before;
  for (const Param& p : result.model.params().params()) before.push_back(p.value);

  const MetricsReport one = evaluate_model(result.model, windows.samples);
  const MetricsReport two = evaluate_model(result.model, windows.samples);
  CHECK(one.intent.accuracy == two.intent.accuracy);
  CHECK(one.intent.auc == two.intent.auc);
  CHECK(one.reason.subset_accuracy == two.reason.subset_accuracy);
  CHECK(one.reason.macro_f1 == two.reason.macro_f1);
  CHECK(one.samples == windows.samples.size());

  for (std::size_t i = 0; i < before.size(); ++i)
    CHECK(result.model.params().params()[i].value == before[i]);

  CHECK_THROWS_AS(evaluate_model(result.model, {}), ValidationError);
  CHECK_THROWS_AS(evaluate_loss(result.model, {}, config.weights, 8),
                  ValidationError);
}

TEST_CASE("training requires a validation split when it must pick an epoch") {
  const TrainFixture fixture(12);
  TrainConfig config = small_train_config();
  config.split = SplitRatios{1.0, 0.0, 0.0};
  CHECK_THROWS_AS(train_model(config, fixture.data(), default_embeddings(
                      fixture.vocab, config.model, 9)),
                  ValidationError);
}

TEST_CASE("ablation insists on at least three seeds") {
  const TrainFixture fixture(12);
  AblationConfig config;
  config.base = small_train_config();
  config.seeds = {1, 2};
  CHECK_THROWS_AS(run_ablation(config, fixture.data(), fixture.vocab), ConfigError);
}

TEST_CASE("aggregate reports mean and sample spread") {
  const AggregateStat s = aggregate({0.5, 0.7, 0.9});
  CHECK(s.mean == doctest::Approx(0.7));
  CHECK(s.stddev == doctest::Approx(0.2));
  const AggregateStat single = aggregate({0.4});
  CHECK(single.mean == 0.4);
  CHECK(single.stddev == 0.0);
  CHECK_THROWS_AS(aggregate({}), ValidationError);
}

TEST_CASE("a small ablation produces one row per variant and weight pair") {
  const TrainFixture fixture(36);
  AblationConfig config;
  config.base = small_train_config();
  config.base.epochs = 1;
  config.variants = {ModelVariant::Full, ModelVariant::NoCrossmodal,
                     ModelVariant::RecurrentBackbone};
  config.weight_grid = {{1.0, 1.0}};
  config.seeds = {1, 2, 3};

  const AblationReport report = run_ablation(config, fixture.data(), fixture.vocab);
  REQUIRE(report.variant_rows.size() == 3);
  REQUIRE(report.weight_rows.size() == 1);
  CHECK(report.variant_rows[0].name == "full");
  CHECK(report.variant_rows[0].runs.size() == 3);
  CHECK(report.best_weights_by_intent_accuracy == report.weight_rows[0].name);
  CHECK_FALSE(report.notes.empty());

  // The ablation aggregates exactly the per-run test metrics.
  double mean = 0.0;
  for (const AblationRun& run : report.variant_rows[0].runs)
    mean += run.test.intent.accuracy;
  mean /= 3.0;
  CHECK(report.variant_rows[0].intent_accuracy.mean == doctest::Approx(mean));

  const auto j = ablation_report_json(report);
  CHECK(j.at("variants").size() == 3);
  CHECK(j.at("loss_weights").size() == 1);
  CHECK(j.at("seeds") == nlohmann::json(std::vector<std::uint64_t>{1, 2, 3}));
  CHECK(j.at("variants")[0].at("aggregate").at("intent_accuracy").contains("mean"));
}
