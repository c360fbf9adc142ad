#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "dialshape/csv.hpp"
#include "dialshape/features.hpp"
#include "dialshape/harness.hpp"
#include "doctest.h"

using namespace dialshape;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

std::vector<ReturnSequence> fake_corpus(const std::vector<double>& labels) {
  std::vector<ReturnSequence> out;
  Rng rng(1);
  for (const double label : labels) {
    ReturnSequence seq;
    for (int t = 0; t < 4; ++t) {
      Eigen::VectorXd f(3);
      f << rng.uniform01(), rng.uniform01(), rng.uniform01();
      seq.features.push_back(f);
    }
    seq.return_label = label;
    out.push_back(std::move(seq));
  }
  return out;
}

}  // namespace

TEST_CASE("balanced corpora split success and failure evenly") {
  const auto ont = default_ontology();
  CorpusGenConfig cfg;
  cfg.n = 60;
  cfg.ser = 0.15;
  cfg.balanced = true;
  cfg.seed = 3;
  const auto eps = generate_corpus(ont, cfg);
  REQUIRE(eps.size() == 60);
  int successes = 0;
  for (const auto& ep : eps) successes += ep.success ? 1 : 0;
  CHECK(successes == 30);
  for (size_t i = 0; i < eps.size(); ++i) {
    CHECK(eps[i].id == static_cast<int>(i));
    CHECK(eps[i].ser == 0.15);
  }
}

TEST_CASE("unreachable balance aborts with a diagnostic") {
  const auto ont = default_ontology();
  CorpusGenConfig cfg;
  cfg.n = 10;
  cfg.ser = 0.0;
  cfg.balanced = true;
  cfg.policy = "scripted";  // completes every dialogue under a clean channel
  cfg.attempt_factor = 5;
  CHECK_THROWS_AS(generate_corpus(ont, cfg), std::runtime_error);
}

TEST_CASE("constant-mean baseline on a balanced 14/-30 corpus is 22") {
  const auto data = fake_corpus({14.0, -30.0, 14.0, -30.0});
  CHECK(constant_baseline_rmse(data) == doctest::Approx(22.0));
}

TEST_CASE("evaluate_return_model reports model and baseline errors") {
  const auto data = fake_corpus({14.0, -30.0});
  Rng rng(2);
  auto model = RnnModel::init(CellKind::basic, 3, 4, rng);
  model.w_out.setZero();
  model.b_out = 0.0;
  const auto row = evaluate_return_model(model, "probe", data);
  CHECK(row.corpus == "probe");
  CHECK(row.n_dialogues == 2);
  CHECK(row.rmse == doctest::Approx(std::sqrt(548.0)));
  CHECK(row.baseline_rmse == doctest::Approx(22.0));
}

TEST_CASE("trained potentials rank successes above failures on unseen data") {
  const auto ont = default_ontology();
  CorpusGenConfig cfg;
  cfg.n = 200;
  cfg.ser = 0.15;
  cfg.balanced = true;
  cfg.seed = 41;
  const auto train_eps = generate_corpus(ont, cfg);
  cfg.seed = 42;
  const auto held_out = generate_corpus(ont, cfg);

  TrainConfig tc;
  tc.cell = CellKind::gru;
  tc.hidden_dim = 16;
  tc.max_epochs = 40;
  tc.seed = 7;
  // Empty validation split: held_out must not influence model selection.
  const auto trained = train(to_return_sequences(train_eps), {}, tc);

  const auto sum_outputs = [&](const ReturnSequence& seq) {
    RnnState state = trained.model.fresh_state();
    double sum = 0.0;
    for (const auto& f : seq.features) {
      auto [next, out] = step_forward(trained.model, state, f);
      state = std::move(next);
      sum += out;
    }
    return sum;
  };

  std::vector<double> success_sums;
  std::vector<double> failure_sums;
  const auto held_seqs = to_return_sequences(held_out);
  for (size_t i = 0; i < held_out.size(); ++i) {
    (held_out[i].success ? success_sums : failure_sums)
        .push_back(sum_outputs(held_seqs[i]));
  }
  REQUIRE(success_sums.size() == 100);
  REQUIRE(failure_sums.size() == 100);

  int ordered = 0;
  for (const double s : success_sums)
    for (const double f : failure_sums) ordered += s > f ? 1 : 0;
  const double fraction = ordered / 10000.0;
  CHECK(fraction >= 0.9);
}

TEST_CASE("aggregate_curves computes means and standard errors by hand") {
  std::vector<SeedCurveRow> rows = {
      {1, 50, 1.0, 0.4},
      {1, 100, 5.0, 0.6},
      {2, 50, 3.0, 0.8},
      {2, 100, 7.0, 1.0},
  };
  const auto curve = aggregate_curves(rows);
  REQUIRE(curve.aggregate.size() == 2);
  CHECK(curve.aggregate[0].dialogues == 50);
  CHECK(curve.aggregate[0].mean_reward == doctest::Approx(2.0));
  // sample sd of {1,3} is sqrt(2), stderr = sqrt(2)/sqrt(2) = 1
  CHECK(curve.aggregate[0].stderr_reward == doctest::Approx(1.0));
  CHECK(curve.aggregate[0].mean_success == doctest::Approx(0.6));
  CHECK(curve.aggregate[0].n_seeds == 2);
  CHECK(curve.aggregate[1].dialogues == 100);
  CHECK(curve.aggregate[1].mean_reward == doctest::Approx(6.0));

  const auto auc = curve.seed_auc();
  REQUIRE(auc.size() == 2);
  CHECK(auc[0] == doctest::Approx(3.0));  // seed 1: (1+5)/2
  CHECK(auc[1] == doctest::Approx(5.0));  // seed 2: (3+7)/2
  CHECK(curve.final_mean_reward() == doctest::Approx(6.0));
}

TEST_CASE("train_policy produces the expected checkpoint grid") {
  const auto ont = default_ontology();
  PolicyTrainConfig cfg;
  cfg.budget = 25;
  cfg.eval_every = 10;
  cfg.eval_n = 3;
  cfg.seeds = {1, 2};
  const auto curve = train_policy(ont, cfg, nullptr);

  REQUIRE(curve.per_seed.size() == 6);  // checkpoints {10, 20, 25} x 2 seeds
  REQUIRE(curve.aggregate.size() == 3);
  CHECK(curve.aggregate[0].dialogues == 10);
  CHECK(curve.aggregate[1].dialogues == 20);
  CHECK(curve.aggregate[2].dialogues == 25);
  for (const auto& row : curve.aggregate) CHECK(row.n_seeds == 2);
  for (const auto& row : curve.per_seed) {
    CHECK(row.mean_reward >= -30.0);
    CHECK(row.mean_reward <= 19.0);
    CHECK(row.success_rate >= 0.0);
    CHECK(row.success_rate <= 1.0);
  }
}

TEST_CASE("train_policy is deterministic per configuration") {
  const auto ont = default_ontology();
  PolicyTrainConfig cfg;
  cfg.budget = 12;
  cfg.eval_every = 6;
  cfg.eval_n = 4;
  cfg.seeds = {7};
  const auto a = train_policy(ont, cfg, nullptr);
  const auto b = train_policy(ont, cfg, nullptr);
  REQUIRE(a.per_seed.size() == b.per_seed.size());
  for (size_t i = 0; i < a.per_seed.size(); ++i) {
    CHECK(a.per_seed[i].mean_reward == b.per_seed[i].mean_reward);
    CHECK(a.per_seed[i].success_rate == b.per_seed[i].success_rate);
  }
}

TEST_CASE("shaping sources run end to end") {
  const auto ont = default_ontology();
  PolicyTrainConfig cfg;
  cfg.budget = 6;
  cfg.eval_every = 6;
  cfg.eval_n = 2;
  cfg.seeds = {4};

  cfg.shaping.source = PotentialSource::oracle_heuristic;
  CHECK_NOTHROW(train_policy(ont, cfg, nullptr));

  cfg.shaping.source = PotentialSource::rnn;
  CHECK_THROWS_AS(train_policy(ont, cfg, nullptr), std::invalid_argument);
  Rng rng(5);
  const auto model = RnnModel::init(CellKind::gru, FeatureLayout(ont).dim(), 4, rng);
  CHECK_NOTHROW(train_policy(ont, cfg, &model));
}

TEST_CASE("curve CSVs round-trip and regenerate byte-identically") {
  const auto ont = default_ontology();
  PolicyTrainConfig cfg;
  cfg.budget = 10;
  cfg.eval_every = 5;
  cfg.eval_n = 2;
  cfg.seeds = {1, 2};
  const auto curve = train_policy(ont, cfg, nullptr);

  const auto dir = std::filesystem::temp_directory_path();
  const auto seed_a = (dir / "curve_a.csv").string();
  const auto agg_a = (dir / "agg_a.csv").string();
  const auto seed_b = (dir / "curve_b.csv").string();
  const auto agg_b = (dir / "agg_b.csv").string();
  save_curve_csv(curve, seed_a, agg_a);
  save_curve_csv(curve, seed_b, agg_b);
  CHECK(slurp(seed_a) == slurp(seed_b));
  CHECK(slurp(agg_a) == slurp(agg_b));

  const auto back = load_curve_csv(seed_a);
  REQUIRE(back.per_seed.size() == curve.per_seed.size());
  for (size_t i = 0; i < back.per_seed.size(); ++i) {
    CHECK(back.per_seed[i].seed == curve.per_seed[i].seed);
    CHECK(back.per_seed[i].dialogues == curve.per_seed[i].dialogues);
    CHECK(back.per_seed[i].mean_reward == curve.per_seed[i].mean_reward);
    CHECK(back.per_seed[i].success_rate == curve.per_seed[i].success_rate);
  }
  for (const auto& p : {seed_a, agg_a, seed_b, agg_b}) std::filesystem::remove(p);
}

TEST_CASE("compare_arms wires the paired test through seed AUCs") {
  std::vector<SeedCurveRow> strong, weak;
  for (std::uint64_t s = 1; s <= 5; ++s) {
    strong.push_back({s, 50, 5.0 + static_cast<double>(s), 0.5});
    weak.push_back({s, 50, 1.0 + 0.1 * static_cast<double>(s), 0.3});
  }
  const auto cmp = compare_arms("shaped", aggregate_curves(strong), "plain",
                                aggregate_curves(weak));
  CHECK(cmp.arm == "shaped");
  CHECK(cmp.baseline == "plain");
  CHECK(cmp.mean_auc_arm > cmp.mean_auc_baseline);
  CHECK(cmp.p_value < 0.01);

  // Mismatched seed sets must fail rather than silently pair up.
  auto other = weak;
  other[0].seed = 99;
  CHECK_THROWS(compare_arms("shaped", aggregate_curves(strong), "plain",
                            aggregate_curves(other)));
}

TEST_CASE("write_report emits smoothed curves plus a summary table") {
  std::vector<SeedCurveRow> base_rows, arm_rows;
  for (std::uint64_t s = 1; s <= 3; ++s) {
    for (int d = 10; d <= 40; d += 10) {
      base_rows.push_back({s, d, static_cast<double>(d) / 10.0, 0.4});
      arm_rows.push_back({s, d, static_cast<double>(d) / 5.0, 0.6});
    }
  }
  const auto dir =
      (std::filesystem::temp_directory_path() / "report_test").string();
  std::filesystem::remove_all(dir);
  write_report({{"plain", aggregate_curves(base_rows)},
                {"shaped", aggregate_curves(arm_rows)}},
               1, dir);

  const auto summary = load_csv(dir + "/summary.csv");
  CHECK(summary.column("arm") >= 0);
  CHECK(summary.column("p_value_greater") >= 0);
  REQUIRE(summary.rows.size() == 1);  // one non-baseline arm
  CHECK(summary.rows[0][summary.column("arm")] == "shaped");

  const auto smoothed = load_csv(dir + "/curve_shaped_smoothed.csv");
  CHECK(smoothed.column("mean_reward_smoothed") >= 0);
  const int raw = smoothed.column("mean_reward");
  const int smooth = smoothed.column("mean_reward_smoothed");
  for (const auto& row : smoothed.rows) {
    CHECK(row[raw] == row[smooth]);  // window 1 is the identity
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("evaluate_policy is deterministic and bounded") {
  const auto ont = default_ontology();
  GpPosterior gp(FeatureLayout(ont).dim(), 20);
  const auto a = evaluate_policy(ont, gp, 0.15, 5, 42);
  const auto b = evaluate_policy(ont, gp, 0.15, 5, 42);
  CHECK(a.mean_reward == b.mean_reward);
  CHECK(a.success_rate == b.success_rate);
  CHECK(a.mean_reward >= -30.0);
  CHECK(a.mean_reward <= 19.0);
}
