#include <benchmark/benchmark.h>

#include "dialshape/belief.hpp"
#include "dialshape/environment.hpp"
#include "dialshape/features.hpp"
#include "dialshape/policies.hpp"
#include "dialshape/runner.hpp"

using namespace dialshape;

namespace {

void bench_episode(benchmark::State& state, const std::string& policy_name) {
  const auto ontology = default_ontology();
  const SystemActionSpace space(ontology);
  EnvConfig env_cfg;
  env_cfg.ser = 0.15;
  DialogueEnv env(ontology, env_cfg);
  const BeliefTracker tracker(ontology);
  const FeatureLayout layout(ontology);

  std::unique_ptr<DialoguePolicy> policy;
  if (policy_name == "scripted") {
    policy = std::make_unique<ScriptedPolicy>(ontology, space);
  } else {
    policy = std::make_unique<MixturePolicy>(ontology, space, 0.7, 99);
  }

  std::uint64_t seed = 1;
  std::int64_t turns = 0;
  for (auto _ : state) {
    const auto ep = run_dialogue(env, tracker, layout, *policy, seed++, 0);
    turns += static_cast<std::int64_t>(ep.turns.size());
    benchmark::DoNotOptimize(ep.return_label);
  }
  state.counters["turns_per_s"] =
      benchmark::Counter(static_cast<double>(turns), benchmark::Counter::kIsRate);
}

}  // namespace

BENCHMARK_CAPTURE(bench_episode, scripted, "scripted");
BENCHMARK_CAPTURE(bench_episode, mixed, "mixed");

BENCHMARK_MAIN();
