#include <doctest.h>

#include <bit>
#include <cmath>
#include <cstdint>
#include <filesystem>

#include "oracles.hpp"
#include "pedintent/rng.hpp"
#include "pedintent/tensor/adam.hpp"
#include "pedintent/tensor/checkpoint.hpp"
#include "pedintent/tensor/ops.hpp"
#include "pedintent/util/io.hpp"

using namespace pedintent;

namespace {

std::vector<double> random_values(Rng& rng, std::size_t n, double scale = 1.0) {
  std::vector<double> out(n);
  for (auto& v : out) v = rng.uniform(-scale, scale);
  return out;
}

// Weighted scalar readout: sum(out * w) with constant weights. Seeding every
// output element with a distinct weight catches transposed or misrouted
// gradient entries that a plain sum would mask.
Tensor weighted_sum(Tape& tape, const Tensor& out, const std::vector<double>& w) {
  Tensor weights = tape.constant(out.shape(), w);
  return sum_all(mul(out, weights));
}

// Builds the graph twice: once on a tape for analytic gradients, once as a
// plain function of the raw inputs for finite differences.
void check_gradients(const std::function<Tensor(Tape&, std::vector<Tensor>&)>& build,
                     const std::vector<Shape>& shapes,
                     std::uint64_t seed, double tol = 1e-6) {
  Rng rng(seed);
  std::vector<std::vector<double>> inputs;
  for (const auto& s : shapes) inputs.push_back(random_values(rng, shape_numel(s)));

  Tape tape;
  std::vector<Tensor> leaves;
  for (std::size_t i = 0; i < shapes.size(); ++i)
    leaves.push_back(tape.leaf(shapes[i], inputs[i], true));
  Tensor loss = build(tape, leaves);
  REQUIRE(loss.numel() == 1);
  tape.backward(loss);

  auto fd = oracle::fd_gradients(
      [&](const std::vector<std::vector<double>>& xs) {
        Tape t2;
        std::vector<Tensor> l2;
        for (std::size_t i = 0; i < shapes.size(); ++i)
          l2.push_back(t2.leaf(shapes[i], xs[i], false));
        return build(t2, l2).scalar();
      },
      inputs);

  for (std::size_t i = 0; i < leaves.size(); ++i) {
    INFO("input ", i, " shape ", shape_string(shapes[i]));
    CHECK(oracle::max_rel_err(leaves[i].grad(), fd[i]) < tol);
  }
}

}  // namespace

TEST_CASE("shape helpers") {
  CHECK(shape_numel({3, 4}) == 12);
  CHECK(shape_numel({7}) == 7);
  CHECK(shape_string({2, 5}) == "[2x5]");
}

TEST_CASE("leaf validation") {
  Tape tape;
  CHECK_THROWS_AS(tape.leaf({2, 2}, {1.0, 2.0, 3.0}), DimensionError);
  CHECK_THROWS_AS(tape.leaf({2}, {1.0, std::numeric_limits<double>::infinity()}),
                  NumericalError);
  CHECK_THROWS_AS(tape.leaf({2}, {1.0, std::nan("")}), NumericalError);
}

TEST_CASE("matmul forward") {
  Tape tape;
  Tensor a = tape.constant({2, 2}, {1, 2, 3, 4});
  Tensor b = tape.constant({2, 1}, {0, 1});
  Tensor c = matmul(a, b);
  CHECK(c.shape() == Shape{2, 1});
  CHECK(c.at(0) == doctest::Approx(2.0));
  CHECK(c.at(1) == doctest::Approx(4.0));

  SUBCASE("inner dimension mismatch") {
    Tensor bad = tape.constant({3, 1}, {1, 2, 3});
    CHECK_THROWS_AS(matmul(a, bad), DimensionError);
  }
  SUBCASE("matches plain triple loop on random sizes") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
      const auto m = static_cast<std::size_t>(rng.uniform_int(1, 6));
      const auto k = static_cast<std::size_t>(rng.uniform_int(1, 6));
      const auto p = static_cast<std::size_t>(rng.uniform_int(1, 6));
      auto av = random_values(rng, m * k);
      auto bv = random_values(rng, k * p);
      Tensor x = tape.constant({m, k}, av);
      Tensor y = tape.constant({k, p}, bv);
      CHECK(oracle::max_abs_err(matmul(x, y).values(),
                                oracle::matmul(av, m, k, bv, p)) < 1e-14);
    }
  }
}

TEST_CASE("transpose and slicing") {
  Tape tape;
  Tensor a = tape.constant({2, 3}, {1, 2, 3, 4, 5, 6});
  CHECK(transpose(a).values() == std::vector<double>{1, 4, 2, 5, 3, 6});
  CHECK(slice_cols(a, 1, 2).values() == std::vector<double>{2, 3, 5, 6});
  CHECK(slice_rows(a, 1, 1).values() == std::vector<double>{4, 5, 6});
  CHECK(row(a, 0).shape() == Shape{1, 3});
  CHECK_THROWS_AS(slice_cols(a, 2, 2), DimensionError);
  CHECK_THROWS_AS(slice_rows(a, 0, 3), DimensionError);
}

TEST_CASE("concat") {
  Tape tape;
  Tensor a = tape.constant({1, 2}, {1, 2});
  Tensor b = tape.constant({1, 2}, {3, 4});
  CHECK(concat({a, b}, 0).values() == std::vector<double>{1, 2, 3, 4});
  CHECK(concat({a, b}, 1).values() == std::vector<double>{1, 2, 3, 4});
  CHECK(concat({a, b}, 1).shape() == Shape{1, 4});

  Tensor c = tape.constant({2, 1}, {9, 8});
  Tensor d = tape.constant({2, 2}, {1, 2, 3, 4});
  CHECK(concat({c, d}, 1).values() == std::vector<double>{9, 1, 2, 8, 3, 4});
  CHECK_THROWS_AS(concat({c, d}, 0), DimensionError);

  Tensor v1 = tape.constant({2}, {1, 2});
  Tensor v2 = tape.constant({3}, {3, 4, 5});
  CHECK(concat({v1, v2}, 0).values() == std::vector<double>{1, 2, 3, 4, 5});
}

TEST_CASE("elementwise arithmetic") {
  Tape tape;
  Tensor a = tape.constant({3}, {1, -2, 3});
  Tensor b = tape.constant({3}, {4, 5, -6});
  CHECK(add(a, b).values() == std::vector<double>{5, 3, -3});
  CHECK(sub(a, b).values() == std::vector<double>{-3, -7, 9});
  CHECK(mul(a, b).values() == std::vector<double>{4, -10, -18});
  CHECK(affine(a, 2.0, 1.0).values() == std::vector<double>{3, -3, 7});
  CHECK(scale(a, -1.0).values() == std::vector<double>{-1, 2, -3});
  Tensor c = tape.constant({2}, {1, 2});
  CHECK_THROWS_AS(add(a, c), DimensionError);
}

TEST_CASE("softmax") {
  Tape tape;
  SUBCASE("rows sum to one and match the definition") {
    Rng rng(3);
    for (int trial = 0; trial < 25; ++trial) {
      const auto rows = static_cast<std::size_t>(rng.uniform_int(1, 4));
      const auto cols = static_cast<std::size_t>(rng.uniform_int(1, 7));
      auto xv = random_values(rng, rows * cols, 4.0);
      Tensor y = softmax(tape.constant({rows, cols}, xv));
      for (std::size_t i = 0; i < rows; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < cols; ++j) sum += y.at(i, j);
        CHECK(std::abs(sum - 1.0) < 1e-12);
      }
      CHECK(oracle::max_abs_err(y.values(), oracle::softmax_rows(xv, rows, cols)) <
            1e-12);
    }
  }
  SUBCASE("constant rows are uniform") {
    Tensor y = softmax(tape.constant({1, 4}, {2, 2, 2, 2}));
    for (std::size_t j = 0; j < 4; ++j) CHECK(y.at(j) == doctest::Approx(0.25));
  }
  SUBCASE("max subtraction keeps huge logits finite") {
    Tensor y = softmax(tape.constant({1, 2}, {1000.0, 999.0}));
    CHECK(y.at(0) > 0.7);
    CHECK(y.at(0) + y.at(1) == doctest::Approx(1.0));
  }
}

TEST_CASE("layernorm") {
  Tape tape;
  Rng rng(4);
  const std::size_t rows = 3, cols = 8;
  auto xv = random_values(rng, rows * cols, 2.0);
  auto gv = random_values(rng, cols);
  auto bv = random_values(rng, cols);
  Tensor y = layernorm(tape.constant({rows, cols}, xv), tape.constant({cols}, gv),
                       tape.constant({cols}, bv), 1e-5);
  CHECK(oracle::max_abs_err(y.values(),
                            oracle::layernorm_rows(xv, rows, cols, gv, bv, 1e-5)) <
        1e-12);

  SUBCASE("unit gain, zero bias gives zero-mean rows") {
    Tensor z = layernorm(tape.constant({rows, cols}, xv),
                         tape.constant({cols}, ones(cols)),
                         tape.constant({cols}, zeros(cols)), 1e-5);
    for (std::size_t i = 0; i < rows; ++i) {
      double mean = 0.0;
      for (std::size_t j = 0; j < cols; ++j) mean += z.at(i, j);
      CHECK(std::abs(mean / cols) < 1e-12);
    }
  }
  SUBCASE("gain shape must match width") {
    CHECK_THROWS_AS(layernorm(tape.constant({2, 4}, {1, 2, 3, 4, 5, 6, 7, 8}),
                              tape.constant({3}, {1, 1, 1}),
                              tape.constant({4}, {0, 0, 0, 0})),
                    DimensionError);
  }
}

TEST_CASE("nonlinearities match their definitions") {
  Tape tape;
  Tensor x = tape.constant({5}, {-2.0, -1.0, 0.0, 1.0, 2.0});
  Tensor g = gelu(x);
  for (std::size_t i = 0; i < 5; ++i)
    CHECK(g.at(i) == doctest::Approx(oracle::gelu_value(x.at(i))).epsilon(1e-12));
  CHECK(gelu(tape.constant({1}, {0.0})).at(0) == 0.0);

  Tensor s = sigmoid(x);
  CHECK(s.at(2) == doctest::Approx(0.5));
  CHECK(s.at(3) == doctest::Approx(1.0 / (1.0 + std::exp(-1.0))));

  Tensor t = pedintent::tanh(x);
  CHECK(t.at(4) == doctest::Approx(std::tanh(2.0)));

  Tensor l = leaky_relu(x, 0.2);
  CHECK(l.at(0) == doctest::Approx(-0.4));
  CHECK(l.at(4) == doctest::Approx(2.0));
}

TEST_CASE("bce with logits") {
  Tape tape;
  SUBCASE("zero logit against target one is log 2") {
    Tensor loss = bce_with_logits(tape.constant({1}, {0.0}), tape.constant({1}, {1.0}));
    CHECK(loss.scalar() == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  }
  SUBCASE("matches the direct formula on random batches") {
    Rng rng(5);
    for (int trial = 0; trial < 25; ++trial) {
      const auto n = static_cast<std::size_t>(rng.uniform_int(1, 9));
      auto zv = random_values(rng, n, 6.0);
      std::vector<double> tv(n);
      for (auto& v : tv) v = rng.uniform() < 0.5 ? 0.0 : 1.0;
      const double w = rng.uniform(0.1, 2.0);
      Tensor loss =
          bce_with_logits(tape.constant({n}, zv), tape.constant({n}, tv), w);
      CHECK(loss.scalar() ==
            doctest::Approx(oracle::bce_value(zv, tv, w)).epsilon(1e-12));
    }
  }
  SUBCASE("stays finite for extreme logits") {
    Tensor loss = bce_with_logits(tape.constant({2}, {700.0, -700.0}),
                                  tape.constant({2}, {0.0, 1.0}));
    CHECK(std::isfinite(loss.scalar()));
    CHECK(loss.scalar() == doctest::Approx(700.0));
  }
  SUBCASE("rejects non-binary targets") {
    CHECK_THROWS_AS(
        bce_with_logits(tape.constant({1}, {0.0}), tape.constant({1}, {0.5})),
        ValidationError);
  }
}

TEST_CASE("gradients match centered finite differences") {
  Rng wseed(99);

  SUBCASE("matmul") {
    auto w = random_values(wseed, 6);
    check_gradients(
        [&](Tape& t, std::vector<Tensor>& in) {
          return weighted_sum(t, matmul(in[0], in[1]), w);
        },
        {{2, 4}, {4, 3}}, 101);
  }
  SUBCASE("transpose") {
    auto w = random_values(wseed, 6);
    check_gradients(
        [&](Tape& t, std::vector<Tensor>& in) {
          return weighted_sum(t, transpose(in[0]), w);
        },
        {{2, 3}}, 102);
  }
  SUBCASE("add sub mul affine") {
    auto w = random_values(wseed, 8);
    check_gradients(
        [&](Tape& t, std::vector<Tensor>& in) {
          Tensor y = add(mul(in[0], in[1]), affine(sub(in[0], in[1]), 0.7, 0.3));
          return weighted_sum(t, y, w);
        },
        {{2, 4}, {2, 4}}, 103);
  }
  SUBCASE("add_row_bias") {
    auto w = random_values(wseed, 6);
    check_gradients(
        [&](Tape& t, std::vector<Tensor>& in) {
          return weighted_sum(t, add_row_bias(in[0], in[1]), w);
        },
        {{2, 3}, {3}}, 104);
  }
  SUBCASE("add_n") {
    auto w = random_values(wseed, 5);
    check_gradients(
        [&](Tape& t, std::vector<Tensor>& in) {
          return weighted_sum(t, add_n({in[0], in[1], in[2]}), w);
        },
        {{5}, {5}, {5}}, 105);
  }
  SUBCASE("concat axis 0") {
    auto w = random_values(wseed, 9);
    check_gradients(
        [&](Tape& t, std::vector<Tensor>& in) {
          return weighted_sum(t, concat({in[0], in[1]}, 0), w);
        },
        {{1, 3}, {2, 3}}, 106);
  }
  SUBCASE("concat axis 1") {
    auto w = random_values(wseed, 10);
    check_gradients(
        [&](Tape& t, std::vector<Tensor>& in) {
          return weighted_sum(t, concat({in[0], in[1]}, 1), w);
        },
        {{2, 2}, {2, 3}}, 107);
  }
  SUBCASE("slices") {
    auto w = random_values(wseed, 4);
    check_gradients(
        [&](Tape& t, std::vector<Tensor>& in) {
          Tensor a = slice_cols(in[0], 1, 2);
          Tensor b = slice_rows(a, 0, 2);
          return weighted_sum(t, b, w);
        },
        {{3, 4}}, 108);
  }
  SUBCASE("softmax") {
    auto w = random_values(wseed, 8);
    check_gradients(
        [&](Tape& t, std::vector<Tensor>& in) {
          return weighted_sum(t, softmax(in[0]), w);
        },
        {{2, 4}}, 109);
  }
  SUBCASE("layernorm") {
    auto w = random_values(wseed, 12);
    check_gradients(
        [&](Tape& t, std::vector<Tensor>& in) {
          return weighted_sum(t, layernorm(in[0], in[1], in[2], 1e-5), w);
        },
        {{2, 6}, {6}, {6}}, 110, 2e-5);
  }
  SUBCASE("nonlinearities") {
    auto w = random_values(wseed, 6);
    check_gradients(
        [&](Tape& t, std::vector<Tensor>& in) {
          Tensor y = gelu(in[0]);
          y = add(y, sigmoid(in[0]));
          y = add(y, pedintent::tanh(in[0]));
          y = add(y, leaky_relu(in[0], 0.2));
          return weighted_sum(t, y, w);
        },
        {{6}}, 111);
  }
  SUBCASE("bce with logits") {
    check_gradients(
        [&](Tape& t, std::vector<Tensor>& in) {
          Tensor targets = t.constant({6}, {1, 0, 0, 1, 1, 0});
          return bce_with_logits(in[0], targets, 1.3);
        },
        {{6}}, 112);
  }
  SUBCASE("mean_all") {
    check_gradients(
        [&](Tape& t, std::vector<Tensor>& in) {
          (void)t;
          return mean_all(mul(in[0], in[0]));
        },
        {{7}}, 113);
  }
  SUBCASE("small composite network") {
    check_gradients(
        [&](Tape& t, std::vector<Tensor>& in) {
          Tensor h = pedintent::tanh(add_row_bias(matmul(in[0], in[1]), in[2]));
          Tensor p = softmax(matmul(h, in[3]));
          Tensor targets = t.constant({2, 3}, {1, 0, 0, 0, 1, 0});
          return bce_with_logits(p, targets);
        },
        {{2, 4}, {4, 5}, {5}, {5, 3}}, 114, 1e-5);
  }
}

TEST_CASE("backward bookkeeping") {
  SUBCASE("non-scalar seed is rejected") {
    Tape tape;
    Tensor x = tape.leaf({2}, {1.0, 2.0}, true);
    CHECK_THROWS_AS(tape.backward(x), ValidationError);
  }
  SUBCASE("gradient is recomputed, not accumulated, across passes") {
    Tape tape;
    Tensor x = tape.leaf({2}, {3.0, -1.0}, true);
    Tensor loss = sum_all(mul(x, x));
    tape.backward(loss);
    const auto first = x.grad();
    tape.backward(loss);
    CHECK(x.grad() == first);
  }
  SUBCASE("constants never receive gradient") {
    Tape tape;
    Tensor x = tape.leaf({2}, {1.0, 2.0}, true);
    Tensor c = tape.constant({2}, {5.0, 6.0});
    tape.backward(sum_all(mul(x, c)));
    CHECK(x.grad() == std::vector<double>{5.0, 6.0});
    CHECK_THROWS_AS(c.grad(), ValidationError);
  }
  SUBCASE("two identical graphs produce bit-identical gradients") {
    auto run = [] {
      Rng rng(77);
      Tape tape;
      Tensor a = tape.leaf({3, 3}, random_values(rng, 9), true);
      Tensor b = tape.leaf({3, 3}, random_values(rng, 9), true);
      Tensor loss = mean_all(pedintent::tanh(matmul(a, b)));
      tape.backward(loss);
      auto g = a.grad();
      auto gb = b.grad();
      g.insert(g.end(), gb.begin(), gb.end());
      return g;
    };
    CHECK(run() == run());
  }
  SUBCASE("mixing tapes is rejected") {
    Tape t1, t2;
    Tensor a = t1.constant({2}, {1, 2});
    Tensor b = t2.constant({2}, {3, 4});
    CHECK_THROWS_AS(add(a, b), ValidationError);
  }
  SUBCASE("non-finite intermediate raises a numerical error") {
    Tape tape;
    Tensor x = tape.constant({1}, {1e308});
    CHECK_THROWS_AS(affine(x, 10.0, 0.0), NumericalError);
  }
}

TEST_CASE("adam") {
  SUBCASE("first step moves each weight by about lr in the gradient direction") {
    ParamStore store;
    store.add("w", {3}, {1.0, 2.0, 3.0});
    Adam adam(AdamConfig{.lr = 0.1});
    GradMap grads{{"w", {0.5, -2.0, 0.0}}};
    adam.step(store, grads);
    const auto& w = store.at("w").value;
    // With bias correction the first update is lr * g / (|g| + eps).
    CHECK(w[0] == doctest::Approx(1.0 - 0.1 * 0.5 / (0.5 + 1e-8)).epsilon(1e-12));
    CHECK(w[1] == doctest::Approx(2.0 + 0.1 * 2.0 / (2.0 + 1e-8)).epsilon(1e-12));
    CHECK(w[2] == doctest::Approx(3.0));
  }
  SUBCASE("matches a direct two-step reference") {
    const AdamConfig cfg{.lr = 0.01, .beta1 = 0.9, .beta2 = 0.999, .eps = 1e-8};
    ParamStore store;
    store.add("w", {1}, {0.4});
    Adam adam(cfg);
    const std::vector<double> gs{0.3, -0.7};
    double w = 0.4, m = 0.0, v = 0.0;
    for (int step = 1; step <= 2; ++step) {
      const double g = gs[static_cast<std::size_t>(step - 1)];
      adam.step(store, GradMap{{"w", {g}}});
      m = cfg.beta1 * m + (1 - cfg.beta1) * g;
      v = cfg.beta2 * v + (1 - cfg.beta2) * g * g;
      const double mhat = m / (1 - std::pow(cfg.beta1, step));
      const double vhat = v / (1 - std::pow(cfg.beta2, step));
      w -= cfg.lr * mhat / (std::sqrt(vhat) + cfg.eps);
      CHECK(store.at("w").value[0] == doctest::Approx(w).epsilon(1e-14));
    }
  }
  SUBCASE("parameters without gradients stay put") {
    ParamStore store;
    store.add("a", {1}, {1.0});
    store.add("b", {1}, {2.0});
    Adam adam(AdamConfig{});
    adam.step(store, GradMap{{"a", {1.0}}});
    CHECK(store.at("b").value[0] == 2.0);
    CHECK(store.at("a").value[0] != 1.0);
  }
  SUBCASE("shape drift is rejected") {
    ParamStore store;
    store.add("w", {2}, {1.0, 2.0});
    Adam adam(AdamConfig{});
    CHECK_THROWS_AS(adam.step(store, GradMap{{"w", {1.0}}}), DimensionError);
  }
}

TEST_CASE("param store") {
  ParamStore store;
  store.add("z_last", {2}, {1, 2});
  store.add("a_first", {1}, {3});
  CHECK_THROWS_AS(store.add("z_last", {1}, {0}), ValidationError);
  CHECK_THROWS_AS(store.at("missing"), ValidationError);
  // Iteration order is insertion order, not name order.
  CHECK(store.params()[0].name == "z_last");
  CHECK(store.params()[1].name == "a_first");
  CHECK(store.total_values() == 3);
}

TEST_CASE("bound params") {
  ParamStore store;
  store.add("w", {2}, {1.0, 2.0});
  Tape tape;
  BoundParams bind(tape, store, true);
  Tensor w1 = bind("w");
  Tensor w2 = bind("w");
  CHECK(w1.node() == w2.node());  // same leaf shared across uses
  tape.backward(sum_all(mul(w1, w2)));
  auto grads = bind.grads();
  CHECK(grads.at("w") == std::vector<double>{2.0, 4.0});

  SUBCASE("evaluation binding skips gradient tracking") {
    Tape eval_tape;
    BoundParams eval_bind(eval_tape, store, false);
    Tensor w = eval_bind("w");
    CHECK_FALSE(w.requires_grad());
  }
}

TEST_CASE("checkpoint round trip is bit exact") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "pedintent_ckpt_test";
  fs::create_directories(dir);
  const fs::path stem = dir / "model";

  ParamStore store;
  // Values chosen to stress exactness: non-representable fractions, tiny
  // and huge magnitudes, negative zero.
  store.add("enc.w", {2, 2}, {1.0 / 3.0, -0.0, 5e-324, 1.7976931348623157e308});
  store.add("head.b", {3}, {std::exp(1.0), -std::sqrt(2.0), 0.1});
  nlohmann::json extra{{"note", "round-trip"}, {"epoch", 3}};
  save_checkpoint(store, stem, extra);

  auto loaded = load_checkpoint(stem);
  CHECK(loaded.extra.at("note") == "round-trip");
  CHECK(loaded.store.size() == 2);
  CHECK(loaded.store.params()[0].name == "enc.w");
  for (std::size_t p = 0; p < store.size(); ++p) {
    const auto& a = store.params()[p];
    const auto& b = loaded.store.params()[p];
    CHECK(a.shape == b.shape);
    REQUIRE(a.value.size() == b.value.size());
    for (std::size_t i = 0; i < a.value.size(); ++i)
      CHECK(std::bit_cast<std::uint64_t>(a.value[i]) ==
            std::bit_cast<std::uint64_t>(b.value[i]));
  }

  SUBCASE("missing manifest is an io error") {
    CHECK_THROWS_AS(load_checkpoint(dir / "absent"), IoError);
  }
  SUBCASE("corrupt manifest is a validation error") {
    atomic_write_text(dir / "bad.json", "{not json");
    CHECK_THROWS_AS(load_checkpoint(dir / "bad"), ValidationError);
  }
}

TEST_CASE("rng determinism and distribution sanity") {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());

  Rng r(7);
  double sum = 0.0, sumsq = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double v = r.normal();
    sum += v;
    sumsq += v * v;
  }
  CHECK(std::abs(sum / n) < 0.03);
  CHECK(std::abs(sumsq / n - 1.0) < 0.05);

  Rng u(8);
  for (int i = 0; i < 1000; ++i) {
    const double v = u.uniform();
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
  }
  std::int64_t lo = 100, hi = -100;
  for (int i = 0; i < 2000; ++i) {
    const auto v = u.uniform_int(-3, 3);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(lo == -3);
  CHECK(hi == 3);

  CHECK(mix_seed(1, 0) != mix_seed(1, 1));
  CHECK(mix_seed(1, 0) != mix_seed(2, 0));
  CHECK(mix_seed(5, 9) == mix_seed(5, 9));
}
