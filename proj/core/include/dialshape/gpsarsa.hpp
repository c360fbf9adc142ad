#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "dialshape/rng.hpp"

namespace dialshape {

/// Kernel over (state features, action): a Kronecker delta on the action
/// index times a scaled linear inner product on the feature vectors,
///   k((x,a),(x',a')) = delta(a,a') * prior_scale * <x, x'>.
struct KernelConfig {
  double noise_variance = 25.0;   // sigma^2 of the TD residual
  double sparsify_threshold = 0.01;  // nu: residual needed to enter the dictionary
  double prior_scale = 25.0;      // kernel magnitude; sets the prior Q variance
  int dictionary_cap = 1000;      // new points are rejected once full
};

enum class ExploreMode { posterior_sample, greedy, epsilon_greedy };

/// Sparse online Gaussian-process SARSA over (feature, action) pairs.
///
/// The posterior is kept over the Q values at a dictionary of
/// representative points: mu (mean) and P (covariance), plus per-action
/// inverse Gram blocks for projecting queries onto the dictionary span.
/// This parametrizes the same predictive equations as the weight-space
/// form mean = k~' alpha, var = k - k~' C k~ (alpha and C are exposed as
/// views). Temporal-difference measurements
///   r = Q(z) - gamma Q(z') + eps      (eps ~ N(0, sigma^2))
/// are absorbed one transition at a time; a point joins the dictionary
/// only while its span residual exceeds nu and the cap is not reached.
class GpPosterior {
 public:
  GpPosterior(int feature_dim, int n_actions, KernelConfig cfg = {});

  int feature_dim() const { return feature_dim_; }
  int n_actions() const { return n_actions_; }
  int dictionary_size() const { return m_; }
  const KernelConfig& config() const { return cfg_; }

  /// Predictive mean and variance of Q at a query point. An empty
  /// dictionary (or no point with this action) yields the prior: mean 0,
  /// variance = k((x,a),(x,a)) with no observation noise added.
  std::pair<double, double> q(const Eigen::VectorXd& features, int action) const;

  /// Greedy argmax of the posterior mean; ties break to the lowest action
  /// index.
  int select_greedy(const Eigen::VectorXd& features) const;

  /// Draws one sample per action from its marginal posterior and returns
  /// the argmax. Deterministic given the rng state.
  int select_posterior_sample(const Eigen::VectorXd& features, Rng& rng) const;

  /// Uniform action with probability epsilon, otherwise greedy.
  int select_epsilon_greedy(const Eigen::VectorXd& features, double epsilon,
                            Rng& rng) const;

  /// Absorbs one SARSA transition. Non-terminal transitions bootstrap on
  /// (next_features, next_action); terminal ones measure Q(z) directly.
  /// A numerically unusable update (non-positive innovation variance) is
  /// rejected and counted, not applied.
  void observe(const Eigen::VectorXd& features, int action, double reward,
               const Eigen::VectorXd& next_features, int next_action,
               bool is_terminal, double gamma);

  /// Closes the current episode. Throws std::logic_error when no episode
  /// is open or the terminal transition has not been observed yet.
  void end_episode();

  bool episode_open() const { return episode_open_; }

  /// Weight-space views of the posterior (alpha = Kinv mu,
  /// C = Kinv - Kinv P Kinv), for inspection and tests.
  Eigen::VectorXd alpha() const;
  Eigen::MatrixXd cov_weights() const;
  const Eigen::VectorXd& dictionary_point(int i) const;
  int dictionary_action(int i) const;

  /// Linear-kernel collapse of the posterior mean: row a is the weight
  /// vector w_a with mean Q(x, a) = w_a . x. Greedy evaluation uses this
  /// instead of per-query projections.
  Eigen::MatrixXd mean_weights() const;

  // Diagnostics.
  std::int64_t query_count() const { return n_queries_; }
  std::int64_t variance_clamp_count() const { return n_clamps_; }
  std::int64_t rejected_update_count() const { return n_rejected_; }

  /// Snapshot persistence in the shared tensor text format; exact
  /// round-trip in double precision.
  void save(const std::string& path) const;
  static GpPosterior load(const std::string& path);

 private:
  struct Projection {
    Eigen::VectorXd coeffs;  // weights over the action block
    double residual = 0.0;   // prior variance unexplained by the span
  };
  struct SparseRep {
    std::vector<std::pair<int, double>> weights;  // global dictionary coords
    double residual = 0.0;  // unexplained prior variance, 0 if just added
  };

  double kernel(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
    return cfg_.prior_scale * a.dot(b);
  }
  Projection project(const Eigen::VectorXd& features, int action) const;
  /// Ensures the point is representable; grows the dictionary when the
  /// residual exceeds nu and the cap allows.
  SparseRep representation(const Eigen::VectorXd& features, int action);
  void add_point(const Eigen::VectorXd& features, int action,
                 const Projection& proj);

  int feature_dim_ = 0;
  int n_actions_ = 0;
  KernelConfig cfg_;

  int m_ = 0;                              // dictionary size
  std::vector<Eigen::VectorXd> points_;    // dictionary features
  std::vector<int> actions_;               // dictionary actions
  std::vector<std::vector<int>> blocks_;   // dictionary indices per action
  std::vector<Eigen::MatrixXd> block_kinv_;  // inverse Gram per action block

  Eigen::MatrixXd p_;    // posterior covariance over dictionary Q values
  Eigen::VectorXd mu_;   // posterior mean over dictionary Q values

  bool episode_open_ = false;
  bool terminal_seen_ = false;

  mutable std::int64_t n_queries_ = 0;
  mutable std::int64_t n_clamps_ = 0;
  std::int64_t n_rejected_ = 0;
};

}  // namespace dialshape
