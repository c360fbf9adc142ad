#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dialshape/corpus.hpp"
#include "dialshape/environment.hpp"
#include "dialshape/gpsarsa.hpp"
#include "dialshape/ontology.hpp"
#include "dialshape/rnn.hpp"
#include "dialshape/shaping.hpp"

namespace dialshape {

// ---------------------------------------------------------------------------
// Corpus generation

struct CorpusGenConfig {
  int n = 1000;
  double ser = 0.15;
  bool balanced = false;       // equal success/failure counts (n even) or
                               // off-by-one (n odd)
  uint64_t seed = 1;
  std::string policy = "mixed";  // mixed | scripted | random
  double mix = 0.7;              // P(scripted action) for the mixed policy
  int attempt_factor = 200;      // balanced mode aborts after n * factor tries
};

std::vector<Episode> generate_corpus(const Ontology& ontology,
                                     const CorpusGenConfig& cfg);

// ---------------------------------------------------------------------------
// Return-model evaluation

struct RnnEvalRow {
  std::string corpus;
  int n_dialogues = 0;
  double rmse = 0.0;
  double baseline_rmse = 0.0;  // best constant predictor (corpus mean return)
};

/// RMSE of the best constant whole-dialogue return predictor.
double constant_baseline_rmse(const std::vector<ReturnSequence>& data);

RnnEvalRow evaluate_return_model(const RnnModel& model,
                                 const std::string& corpus_name,
                                 const std::vector<ReturnSequence>& data);

// ---------------------------------------------------------------------------
// Policy training

struct PolicyTrainConfig {
  int budget = 1000;    // training dialogues per seed
  int eval_every = 50;  // checkpoint cadence; first checkpoint after
                        // eval_every dialogues, last at the budget
  int eval_n = 200;     // evaluation dialogues per checkpoint
  double ser = 0.15;
  std::vector<uint64_t> seeds = {1};
  ShapingConfig shaping;
  KernelConfig kernel;
  ExploreMode explore = ExploreMode::posterior_sample;
  double epsilon = 0.1;  // epsilon_greedy only
};

struct SeedCurveRow {
  uint64_t seed = 0;
  int dialogues = 0;
  double mean_reward = 0.0;
  double success_rate = 0.0;
};

struct CurveRow {
  int dialogues = 0;
  double mean_reward = 0.0;
  double stderr_reward = 0.0;
  double mean_success = 0.0;
  double stderr_success = 0.0;
  int n_seeds = 0;
};

struct LearningCurve {
  std::vector<SeedCurveRow> per_seed;
  std::vector<CurveRow> aggregate;  // mean over seeds per checkpoint

  /// Per-seed area under the curve: mean of that seed's checkpoint rewards.
  std::vector<double> seed_auc() const;
  /// Mean reward at the final checkpoint, averaged over seeds.
  double final_mean_reward() const;
};

LearningCurve aggregate_curves(const std::vector<SeedCurveRow>& per_seed);

/// Trains one GP-SARSA policy per seed and evaluates greedily every
/// `eval_every` training dialogues. Evaluation dialogues use their own
/// derived rng streams and do not consume training budget. Shaping rewards
/// affect learning only; curves report environment reward.
LearningCurve train_policy(const Ontology& ontology,
                           const PolicyTrainConfig& cfg,
                           const RnnModel* return_model);

/// Evaluates a trained posterior greedily for `n` dialogues.
SeedCurveRow evaluate_policy(const Ontology& ontology, const GpPosterior& gp,
                             double ser, int n, uint64_t stream_seed);

// ---------------------------------------------------------------------------
// CSV import/export and reporting

void save_curve_csv(const LearningCurve& curve, const std::string& per_seed_path,
                    const std::string& aggregate_path);
LearningCurve load_curve_csv(const std::string& per_seed_path);

struct ArmComparison {
  std::string arm;
  std::string baseline;
  double mean_auc_arm = 0.0;
  double mean_auc_baseline = 0.0;
  double p_value = 1.0;  // one-sided paired t-test, H1: arm > baseline
};

ArmComparison compare_arms(const std::string& arm_name, const LearningCurve& arm,
                           const std::string& baseline_name,
                           const LearningCurve& baseline);

/// Writes smoothed aggregate curves (trailing moving average over
/// checkpoints) plus a summary table of arm comparisons.
void write_report(const std::vector<std::pair<std::string, LearningCurve>>& arms,
                  int smoothing_window, const std::string& out_dir);

}  // namespace dialshape
