#include <benchmark/benchmark.h>

#include <vector>

#include "vase/numkit/batch.hpp"
#include "vase/numkit/rng.hpp"
#include "vase/surprise/surprise.hpp"

using namespace vase;

namespace {

struct BatchFixture {
  numkit::MlpSpec spec{{4, 32, 3}, numkit::Activation::kRelu};
  std::vector<double> params;
  std::vector<double> inputs;
  std::vector<double> output_grads;
  std::size_t n;

  explicit BatchFixture(std::size_t rows) : n(rows) {
    numkit::Rng rng(7);
    params = numkit::mlp_init_params(spec, rng);
    inputs.resize(n * 4);
    output_grads.resize(n * 3);
    for (auto& v : inputs) v = rng.uniform(-1, 1);
    for (auto& v : output_grads) v = rng.uniform(-1, 1);
  }
};

struct SurpriseFixture {
  bnn::VariationalPosterior post;
  surprise::SurpriseConfig cfg;
  surprise::BayesScoreSettings settings;
  std::vector<double> states, actions, nexts;
  std::size_t n;
  numkit::Rng root{42};

  explicit SurpriseFixture(std::size_t rows, surprise::SurpriseMode mode) : n(rows) {
    post.spec = numkit::MlpSpec{{3, 32, 2}, numkit::Activation::kRelu};
    numkit::Rng rng(11);
    const auto dim = static_cast<std::size_t>(post.spec.param_count());
    post.mu.resize(dim);
    post.rho.assign(dim, bnn::softplus_inv(0.05));
    for (auto& m : post.mu) m = 0.1 * rng.normal();
    cfg.mode = mode;
    cfg.n_samples = 10;
    states.resize(n * 2);
    actions.resize(n);
    nexts.resize(n * 2);
    for (auto& v : states) v = rng.uniform(-1, 1);
    for (auto& v : actions) v = rng.uniform(-1, 1);
    for (auto& v : nexts) v = rng.uniform(-1, 1);
  }
};

void BM_forward_batch_serial(benchmark::State& state) {
  BatchFixture fx(static_cast<std::size_t>(state.range(0)));
  std::vector<double> out(fx.n * 3);
  for (auto _ : state) {
    numkit::serial::mlp_forward_batch(fx.spec, fx.params, fx.inputs, fx.n, out);
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_forward_batch_omp(benchmark::State& state) {
  BatchFixture fx(static_cast<std::size_t>(state.range(0)));
  std::vector<double> out(fx.n * 3);
  for (auto _ : state) {
    numkit::mlp_forward_batch(fx.spec, fx.params, fx.inputs, fx.n, out);
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_gradient_batch_serial(benchmark::State& state) {
  BatchFixture fx(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto g = numkit::serial::mlp_gradient_batch(fx.spec, fx.params, fx.inputs,
                                                fx.output_grads, fx.n);
    benchmark::DoNotOptimize(g.data());
  }
}

void BM_gradient_batch_omp(benchmark::State& state) {
  BatchFixture fx(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto g = numkit::mlp_gradient_batch(fx.spec, fx.params, fx.inputs,
                                        fx.output_grads, fx.n);
    benchmark::DoNotOptimize(g.data());
  }
}

void BM_surprise_batch_serial(benchmark::State& state) {
  SurpriseFixture fx(static_cast<std::size_t>(state.range(0)),
                     surprise::SurpriseMode::kVase);
  for (auto _ : state) {
    auto u = surprise::serial::score_transitions(fx.post, fx.states, fx.actions,
                                                 fx.nexts, fx.n, fx.cfg, fx.root, 0,
                                                 nullptr);
    benchmark::DoNotOptimize(u.data());
  }
}

void BM_surprise_batch_omp(benchmark::State& state) {
  SurpriseFixture fx(static_cast<std::size_t>(state.range(0)),
                     surprise::SurpriseMode::kVase);
  for (auto _ : state) {
    auto u = surprise::score_transitions(fx.post, fx.states, fx.actions, fx.nexts,
                                         fx.n, fx.cfg, fx.root, 0, nullptr);
    benchmark::DoNotOptimize(u.data());
  }
}

// per-mode cost of one reward computation (the wall-clock story behind the
// surprise-mode comparison)
void BM_surprise_mode(benchmark::State& state, surprise::SurpriseMode mode) {
  SurpriseFixture fx(64, mode);
  fx.settings.prior.sigma_m = 0.5;
  fx.settings.lr = 1e-3;
  fx.settings.kl_weight = 1e-4;
  for (auto _ : state) {
    auto u = surprise::score_transitions(fx.post, fx.states, fx.actions, fx.nexts,
                                         fx.n, fx.cfg, fx.root, 0, &fx.settings);
    benchmark::DoNotOptimize(u.data());
  }
  state.SetItemsProcessed(state.iterations() * fx.n);
}

}  // namespace

BENCHMARK(BM_forward_batch_serial)->Arg(256)->Arg(4096);
BENCHMARK(BM_forward_batch_omp)->Arg(256)->Arg(4096);
BENCHMARK(BM_gradient_batch_serial)->Arg(256)->Arg(4096);
BENCHMARK(BM_gradient_batch_omp)->Arg(256)->Arg(4096);
BENCHMARK(BM_surprise_batch_serial)->Arg(1024);
BENCHMARK(BM_surprise_batch_omp)->Arg(1024);
BENCHMARK_CAPTURE(BM_surprise_mode, vase, vase::surprise::SurpriseMode::kVase);
BENCHMARK_CAPTURE(BM_surprise_mode, nll, vase::surprise::SurpriseMode::kNll);
BENCHMARK_CAPTURE(BM_surprise_mode, bayes, vase::surprise::SurpriseMode::kBayes);

BENCHMARK_MAIN();
