#include "dialshape/harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <memory>
#include <stdexcept>

#include "dialshape/belief.hpp"
#include "dialshape/csv.hpp"
#include "dialshape/features.hpp"
#include "dialshape/policies.hpp"
#include "dialshape/runner.hpp"
#include "dialshape/stats.hpp"

namespace dialshape {

namespace {

// Stream ids carving one seed into non-overlapping rng streams.
constexpr std::uint64_t kExploreStream = 0;           // exploration draws
constexpr std::uint64_t kPolicyStream = 1ULL << 33;   // behavior policy draws
constexpr std::uint64_t kEvalStreamBase = 1ULL << 32; // + checkpoint index

std::unique_ptr<DialoguePolicy> make_behavior_policy(const Ontology& ontology,
                                                     const SystemActionSpace& space,
                                                     const CorpusGenConfig& cfg) {
  if (cfg.policy == "mixed") {
    return std::make_unique<MixturePolicy>(ontology, space, cfg.mix,
                                           Rng::derive(cfg.seed, kPolicyStream));
  }
  if (cfg.policy == "scripted") {
    return std::make_unique<ScriptedPolicy>(ontology, space);
  }
  if (cfg.policy == "random") {
    return std::make_unique<RandomPolicy>(space, Rng::derive(cfg.seed, kPolicyStream));
  }
  throw std::invalid_argument("unknown behavior policy: " + cfg.policy);
}

/// Greedy policy over the collapsed linear posterior mean; ties break to
/// the lowest action index, matching GpPosterior::select_greedy.
class LinearGreedyPolicy : public DialoguePolicy {
 public:
  LinearGreedyPolicy(const FeatureLayout& layout, Eigen::MatrixXd weights)
      : layout_(&layout), w_(std::move(weights)) {}

  SystemAction act(const PolicyContext& ctx) override {
    std::optional<SystemAction> last;
    if (ctx.last_system_act != nullptr) last = ctx.last_system_act->action;
    const Eigen::VectorXd x = layout_->decision_state(
        *ctx.belief, ctx.last_observation, last, ctx.turn_index, ctx.max_turns);
    const Eigen::VectorXd scores = w_ * x;
    int best = 0;
    for (int a = 1; a < scores.size(); ++a) {
      if (scores[a] > scores[best]) best = a;
    }
    return SystemAction{best};
  }

 private:
  const FeatureLayout* layout_;
  Eigen::MatrixXd w_;
};

}  // namespace

std::vector<Episode> generate_corpus(const Ontology& ontology,
                                     const CorpusGenConfig& cfg) {
  if (cfg.n < 1) throw std::invalid_argument("corpus size must be positive");
  const SystemActionSpace space(ontology);
  const BeliefTracker tracker(ontology);
  const FeatureLayout layout(ontology);
  DialogueEnv env(ontology, EnvConfig{cfg.ser, {}});
  const auto policy = make_behavior_policy(ontology, space, cfg);

  const int want_success = cfg.balanced ? (cfg.n + 1) / 2 : 0;
  const int want_failure = cfg.balanced ? cfg.n / 2 : 0;
  int n_success = 0;
  int n_failure = 0;

  std::vector<Episode> episodes;
  episodes.reserve(cfg.n);
  const long long max_attempts =
      static_cast<long long>(cfg.n) * std::max(cfg.attempt_factor, 1);
  for (long long attempt = 1; static_cast<int>(episodes.size()) < cfg.n; ++attempt) {
    if (attempt > max_attempts) {
      throw std::runtime_error(
          "balanced corpus unreachable: " + std::to_string(n_success) +
          " successes / " + std::to_string(n_failure) + " failures after " +
          std::to_string(max_attempts) + " attempts");
    }
    Episode ep = run_dialogue(env, tracker, layout, *policy,
                              Rng::derive(cfg.seed, attempt),
                              static_cast<int>(episodes.size()));
    if (cfg.balanced) {
      if (ep.success && n_success >= want_success) continue;
      if (!ep.success && n_failure >= want_failure) continue;
    }
    (ep.success ? n_success : n_failure)++;
    episodes.push_back(std::move(ep));
  }
  return episodes;
}

double constant_baseline_rmse(const std::vector<ReturnSequence>& data) {
  if (data.empty()) throw std::invalid_argument("empty corpus");
  double m = 0.0;
  for (const auto& seq : data) m += seq.return_label;
  m /= static_cast<double>(data.size());
  double s = 0.0;
  for (const auto& seq : data) {
    s += (seq.return_label - m) * (seq.return_label - m);
  }
  return std::sqrt(s / static_cast<double>(data.size()));
}

RnnEvalRow evaluate_return_model(const RnnModel& model,
                                 const std::string& corpus_name,
                                 const std::vector<ReturnSequence>& data) {
  RnnEvalRow row;
  row.corpus = corpus_name;
  row.n_dialogues = static_cast<int>(data.size());
  row.rmse = rmse(model, data);
  row.baseline_rmse = constant_baseline_rmse(data);
  return row;
}

std::vector<double> LearningCurve::seed_auc() const {
  std::vector<std::uint64_t> order;
  std::map<std::uint64_t, std::pair<double, int>> acc;
  for (const auto& row : per_seed) {
    if (!acc.count(row.seed)) order.push_back(row.seed);
    auto& [sum, count] = acc[row.seed];
    sum += row.mean_reward;
    ++count;
  }
  std::vector<double> out;
  out.reserve(order.size());
  for (const auto seed : order) {
    out.push_back(acc[seed].first / acc[seed].second);
  }
  return out;
}

double LearningCurve::final_mean_reward() const {
  if (aggregate.empty()) throw std::logic_error("empty learning curve");
  return aggregate.back().mean_reward;
}

LearningCurve aggregate_curves(const std::vector<SeedCurveRow>& per_seed) {
  std::map<int, std::pair<std::vector<double>, std::vector<double>>> groups;
  for (const auto& row : per_seed) {
    groups[row.dialogues].first.push_back(row.mean_reward);
    groups[row.dialogues].second.push_back(row.success_rate);
  }
  LearningCurve curve;
  curve.per_seed = per_seed;
  for (const auto& [dialogues, series] : groups) {
    const auto& [rewards, successes] = series;
    CurveRow row;
    row.dialogues = dialogues;
    row.n_seeds = static_cast<int>(rewards.size());
    row.mean_reward = mean(rewards);
    row.mean_success = mean(successes);
    if (row.n_seeds >= 2) {
      row.stderr_reward = standard_error(rewards);
      row.stderr_success = standard_error(successes);
    }
    curve.aggregate.push_back(row);
  }
  return curve;
}

SeedCurveRow evaluate_policy(const Ontology& ontology, const GpPosterior& gp,
                             double ser, int n, std::uint64_t stream_seed) {
  if (n < 1) throw std::invalid_argument("evaluation size must be positive");
  const BeliefTracker tracker(ontology);
  const FeatureLayout layout(ontology);
  DialogueEnv env(ontology, EnvConfig{ser, {}});
  LinearGreedyPolicy policy(layout, gp.mean_weights());

  double reward_sum = 0.0;
  int successes = 0;
  for (int j = 0; j < n; ++j) {
    const Episode ep = run_dialogue(env, tracker, layout, policy,
                                    Rng::derive(stream_seed, j), j);
    reward_sum += ep.return_label;
    if (ep.success) ++successes;
  }
  SeedCurveRow row;
  row.mean_reward = reward_sum / n;
  row.success_rate = static_cast<double>(successes) / n;
  return row;
}

LearningCurve train_policy(const Ontology& ontology, const PolicyTrainConfig& cfg,
                           const RnnModel* return_model) {
  if (cfg.seeds.empty()) throw std::invalid_argument("seed list is empty");
  if (cfg.eval_every < 1) throw std::invalid_argument("eval cadence must be >= 1");
  if (cfg.budget < 1) throw std::invalid_argument("budget must be positive");
  if (cfg.shaping.source == PotentialSource::rnn && return_model == nullptr) {
    throw std::invalid_argument("rnn shaping requires a trained model");
  }

  const BeliefTracker tracker(ontology);
  const FeatureLayout layout(ontology);
  const SystemActionSpace space(ontology);
  if (return_model != nullptr && return_model->input_dim != layout.dim()) {
    throw std::invalid_argument("return model input dim does not match features");
  }
  const double gamma = cfg.shaping.gamma;

  std::vector<SeedCurveRow> rows;
  for (const auto seed : cfg.seeds) {
    DialogueEnv env(ontology, EnvConfig{cfg.ser, {}});
    GpPosterior gp(layout.dim(), space.size(), cfg.kernel);
    Rng explore(Rng::derive(seed, kExploreStream));

    int checkpoint = 0;
    for (int i = 1; i <= cfg.budget; ++i) {
      env.reset(Rng::derive(seed, static_cast<std::uint64_t>(i)));
      BeliefState belief = tracker.init();
      RnnState rnn_state =
          return_model != nullptr ? return_model->fresh_state() : RnnState{};
      double phi_prev = 0.0;

      Observation last_obs;
      DecodedSystemAct last_sys;
      bool have_last = false;
      bool pending = false;
      Eigen::VectorXd x_prev;
      int a_prev = 0;
      double r_prev = 0.0;

      while (!env.done()) {
        const int turn = env.turn_count() + 1;
        const Eigen::VectorXd x = layout.decision_state(
            belief, have_last ? &last_obs : nullptr,
            have_last ? std::optional<SystemAction>(last_sys.action) : std::nullopt,
            turn, ontology.max_turns);

        int a = 0;
        switch (cfg.explore) {
          case ExploreMode::posterior_sample:
            a = gp.select_posterior_sample(x, explore);
            break;
          case ExploreMode::greedy:
            a = gp.select_greedy(x);
            break;
          case ExploreMode::epsilon_greedy:
            a = gp.select_epsilon_greedy(x, cfg.epsilon, explore);
            break;
        }
        if (pending) {
          gp.observe(x_prev, a_prev, r_prev, x, a, false, gamma);
        }

        const StepResult step = env.step(SystemAction{a});
        belief = tracker.update(belief, step.observation, step.system_act);

        double phi = 0.0;
        if (cfg.shaping.source == PotentialSource::rnn) {
          const Eigen::VectorXd f =
              layout.extract(belief, step.observation, SystemAction{a},
                             env.turn_count(), ontology.max_turns);
          auto [next_state, out] = potential(*return_model, rnn_state, f);
          rnn_state = std::move(next_state);
          phi = out;
        } else if (cfg.shaping.source == PotentialSource::oracle_heuristic) {
          phi = oracle_heuristic_potential(env.progress());
        }
        const double f_shape =
            shape(phi_prev, phi, gamma, step.done, cfg.shaping);
        const double composite = step.reward + f_shape;
        phi_prev = phi;

        if (step.done) {
          gp.observe(x, a, composite, x, a, true, gamma);
          gp.end_episode();
        } else {
          pending = true;
          x_prev = x;
          a_prev = a;
          r_prev = composite;
        }
        last_obs = step.observation;
        last_sys = step.system_act;
        have_last = true;
      }

      if (i % cfg.eval_every == 0 || i == cfg.budget) {
        ++checkpoint;
        SeedCurveRow row = evaluate_policy(
            ontology, gp, cfg.ser, cfg.eval_n,
            Rng::derive(seed, kEvalStreamBase + static_cast<std::uint64_t>(checkpoint)));
        row.seed = seed;
        row.dialogues = i;
        rows.push_back(row);
      }
    }
  }
  return aggregate_curves(rows);
}

void save_curve_csv(const LearningCurve& curve, const std::string& per_seed_path,
                    const std::string& aggregate_path) {
  CsvWriter per_seed({"seed", "dialogues", "mean_reward", "success_rate"});
  for (const auto& row : curve.per_seed) {
    per_seed.add_row({CsvWriter::format(static_cast<long long>(row.seed)),
                      CsvWriter::format(row.dialogues),
                      CsvWriter::format(row.mean_reward),
                      CsvWriter::format(row.success_rate)});
  }
  per_seed.save(per_seed_path);

  CsvWriter agg({"dialogues", "mean_reward", "stderr_reward", "mean_success",
                 "stderr_success", "n_seeds"});
  for (const auto& row : curve.aggregate) {
    agg.add_row({CsvWriter::format(row.dialogues),
                 CsvWriter::format(row.mean_reward),
                 CsvWriter::format(row.stderr_reward),
                 CsvWriter::format(row.mean_success),
                 CsvWriter::format(row.stderr_success),
                 CsvWriter::format(row.n_seeds)});
  }
  agg.save(aggregate_path);
}

LearningCurve load_curve_csv(const std::string& per_seed_path) {
  const CsvTable table = load_csv(per_seed_path);
  const int c_seed = table.column("seed");
  const int c_dial = table.column("dialogues");
  const int c_rew = table.column("mean_reward");
  const int c_succ = table.column("success_rate");
  if (c_seed < 0 || c_dial < 0 || c_rew < 0 || c_succ < 0) {
    throw std::runtime_error("curve CSV missing columns: " + per_seed_path);
  }
  std::vector<SeedCurveRow> rows;
  for (const auto& r : table.rows) {
    SeedCurveRow row;
    row.seed = std::stoull(r[c_seed]);
    row.dialogues = std::stoi(r[c_dial]);
    row.mean_reward = std::stod(r[c_rew]);
    row.success_rate = std::stod(r[c_succ]);
    rows.push_back(row);
  }
  return aggregate_curves(rows);
}

ArmComparison compare_arms(const std::string& arm_name, const LearningCurve& arm,
                           const std::string& baseline_name,
                           const LearningCurve& baseline) {
  auto auc_by_seed = [](const LearningCurve& c) {
    std::map<std::uint64_t, std::pair<double, int>> acc;
    for (const auto& row : c.per_seed) {
      acc[row.seed].first += row.mean_reward;
      acc[row.seed].second += 1;
    }
    std::map<std::uint64_t, double> out;
    for (const auto& [seed, si] : acc) out[seed] = si.first / si.second;
    return out;
  };
  const auto a = auc_by_seed(arm);
  const auto b = auc_by_seed(baseline);
  if (a.size() != b.size()) {
    throw std::invalid_argument("arms have different seed sets");
  }
  std::vector<double> va, vb;
  for (const auto& [seed, auc] : a) {
    const auto it = b.find(seed);
    if (it == b.end()) {
      throw std::invalid_argument("arms have different seed sets");
    }
    va.push_back(auc);
    vb.push_back(it->second);
  }

  ArmComparison cmp;
  cmp.arm = arm_name;
  cmp.baseline = baseline_name;
  cmp.mean_auc_arm = mean(va);
  cmp.mean_auc_baseline = mean(vb);
  cmp.p_value = paired_t_pvalue_greater(va, vb);
  return cmp;
}

void write_report(const std::vector<std::pair<std::string, LearningCurve>>& arms,
                  int smoothing_window, const std::string& out_dir) {
  if (arms.empty()) throw std::invalid_argument("no runs to report");
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);

  for (const auto& [name, curve] : arms) {
    std::vector<double> rewards, successes;
    for (const auto& row : curve.aggregate) {
      rewards.push_back(row.mean_reward);
      successes.push_back(row.mean_success);
    }
    const auto sm_r = moving_average(rewards, smoothing_window);
    const auto sm_s = moving_average(successes, smoothing_window);

    CsvWriter smoothed({"dialogues", "mean_reward", "stderr_reward",
                        "mean_success", "stderr_success", "n_seeds",
                        "mean_reward_smoothed", "mean_success_smoothed"});
    for (size_t i = 0; i < curve.aggregate.size(); ++i) {
      const auto& row = curve.aggregate[i];
      smoothed.add_row({CsvWriter::format(row.dialogues),
                        CsvWriter::format(row.mean_reward),
                        CsvWriter::format(row.stderr_reward),
                        CsvWriter::format(row.mean_success),
                        CsvWriter::format(row.stderr_success),
                        CsvWriter::format(row.n_seeds),
                        CsvWriter::format(sm_r[i]),
                        CsvWriter::format(sm_s[i])});
    }
    smoothed.save((dir / ("curve_" + name + "_smoothed.csv")).string());
  }

  CsvWriter summary({"arm", "baseline", "mean_auc_arm", "mean_auc_baseline",
                     "p_value_greater"});
  for (size_t i = 1; i < arms.size(); ++i) {
    const ArmComparison cmp =
        compare_arms(arms[i].first, arms[i].second, arms[0].first, arms[0].second);
    summary.add_row({cmp.arm, cmp.baseline, CsvWriter::format(cmp.mean_auc_arm),
                     CsvWriter::format(cmp.mean_auc_baseline),
                     CsvWriter::format(cmp.p_value)});
  }
  summary.save((dir / "summary.csv").string());
}

}  // namespace dialshape
