#include "dialshape/gpsarsa.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "dialshape/tensor_io.hpp"

namespace dialshape {

GpPosterior::GpPosterior(int feature_dim, int n_actions, KernelConfig cfg)
    : feature_dim_(feature_dim), n_actions_(n_actions), cfg_(cfg) {
  if (feature_dim < 1 || n_actions < 1) {
    throw std::invalid_argument("posterior dimensions must be positive");
  }
  if (cfg_.noise_variance <= 0.0 || cfg_.prior_scale <= 0.0 ||
      cfg_.sparsify_threshold <= 0.0 || cfg_.dictionary_cap < 1) {
    throw std::invalid_argument("kernel configuration out of range");
  }
  blocks_.resize(n_actions_);
  block_kinv_.resize(n_actions_);
  p_.resize(0, 0);
  mu_.resize(0);
}

GpPosterior::Projection GpPosterior::project(const Eigen::VectorXd& features,
                                             int action) const {
  const auto& block = blocks_[action];
  Projection proj;
  if (block.empty()) {
    proj.residual = kernel(features, features);
    return proj;
  }
  const int b = static_cast<int>(block.size());
  Eigen::VectorXd k(b);
  for (int i = 0; i < b; ++i) k[i] = kernel(features, points_[block[i]]);
  proj.coeffs = block_kinv_[action] * k;
  proj.residual = kernel(features, features) - k.dot(proj.coeffs);
  if (proj.residual < 0.0) proj.residual = 0.0;
  return proj;
}

void GpPosterior::add_point(const Eigen::VectorXd& features, int action,
                            const Projection& proj) {
  // Conditional prior of the new Q value given the dictionary:
  // Q_new = a' Q_D + e with e ~ N(0, residual) independent of everything.
  Eigen::VectorXd a_glob = Eigen::VectorXd::Zero(m_);
  const auto& block = blocks_[action];
  for (size_t i = 0; i < block.size(); ++i) a_glob[block[i]] = proj.coeffs[i];

  const Eigen::VectorXd pa = p_ * a_glob;
  const double var_new = a_glob.dot(pa) + proj.residual;
  const double mu_new = a_glob.dot(mu_);

  p_.conservativeResize(m_ + 1, m_ + 1);
  p_.col(m_).head(m_) = pa;
  p_.row(m_).head(m_) = pa.transpose();
  p_(m_, m_) = var_new;
  mu_.conservativeResize(m_ + 1);
  mu_[m_] = mu_new;

  // Extend the action block's inverse Gram by the Schur complement.
  auto& kinv = block_kinv_[action];
  const int b = static_cast<int>(block.size());
  if (b == 0) {
    kinv.resize(1, 1);
    kinv(0, 0) = 1.0 / kernel(features, features);
  } else {
    const Eigen::VectorXd& u = proj.coeffs;
    const double d = proj.residual;
    Eigen::MatrixXd grown(b + 1, b + 1);
    grown.topLeftCorner(b, b) = kinv + (u * u.transpose()) / d;
    grown.col(b).head(b) = -u / d;
    grown.row(b).head(b) = (-u / d).transpose();
    grown(b, b) = 1.0 / d;
    kinv = std::move(grown);
  }

  points_.push_back(features);
  actions_.push_back(action);
  blocks_[action].push_back(m_);
  ++m_;
}

GpPosterior::SparseRep GpPosterior::representation(const Eigen::VectorXd& features,
                                                   int action) {
  Projection proj = project(features, action);
  SparseRep rep;
  if (proj.residual > cfg_.sparsify_threshold && m_ < cfg_.dictionary_cap) {
    add_point(features, action, proj);
    rep.weights.emplace_back(m_ - 1, 1.0);
    rep.residual = 0.0;
    return rep;
  }
  const auto& block = blocks_[action];
  for (size_t i = 0; i < block.size(); ++i) {
    rep.weights.emplace_back(block[i], proj.coeffs[i]);
  }
  rep.residual = proj.residual;
  return rep;
}

std::pair<double, double> GpPosterior::q(const Eigen::VectorXd& features,
                                         int action) const {
  if (features.size() != feature_dim_) {
    throw std::invalid_argument("feature dimension mismatch");
  }
  if (action < 0 || action >= n_actions_) {
    throw std::invalid_argument("action index out of range");
  }
  ++n_queries_;
  const Projection proj = project(features, action);
  const auto& block = blocks_[action];
  if (block.empty()) return {0.0, proj.residual};

  const int b = static_cast<int>(block.size());
  double mean = 0.0;
  Eigen::VectorXd pa = Eigen::VectorXd::Zero(b);
  for (int i = 0; i < b; ++i) {
    mean += proj.coeffs[i] * mu_[block[i]];
    for (int j = 0; j < b; ++j) {
      pa[i] += p_(block[i], block[j]) * proj.coeffs[j];
    }
  }
  double var = proj.coeffs.dot(pa) + proj.residual;
  if (var < 0.0) {
    var = 0.0;
    ++n_clamps_;
  }
  return {mean, var};
}

int GpPosterior::select_greedy(const Eigen::VectorXd& features) const {
  int best = 0;
  double best_mean = q(features, 0).first;
  for (int a = 1; a < n_actions_; ++a) {
    const double mean = q(features, a).first;
    if (mean > best_mean) {
      best_mean = mean;
      best = a;
    }
  }
  return best;
}

int GpPosterior::select_posterior_sample(const Eigen::VectorXd& features,
                                         Rng& rng) const {
  int best = 0;
  double best_draw = -std::numeric_limits<double>::infinity();
  for (int a = 0; a < n_actions_; ++a) {
    const auto [mean, var] = q(features, a);
    const double draw = mean + std::sqrt(var) * rng.normal();
    if (draw > best_draw) {
      best_draw = draw;
      best = a;
    }
  }
  return best;
}

int GpPosterior::select_epsilon_greedy(const Eigen::VectorXd& features,
                                       double epsilon, Rng& rng) const {
  if (rng.bernoulli(epsilon)) {
    return static_cast<int>(rng.uniform_index(n_actions_));
  }
  return select_greedy(features);
}

void GpPosterior::observe(const Eigen::VectorXd& features, int action,
                          double reward, const Eigen::VectorXd& next_features,
                          int next_action, bool is_terminal, double gamma) {
  if (features.size() != feature_dim_ ||
      (!is_terminal && next_features.size() != feature_dim_)) {
    throw std::invalid_argument("feature dimension mismatch");
  }
  if (action < 0 || action >= n_actions_ ||
      (!is_terminal && (next_action < 0 || next_action >= n_actions_))) {
    throw std::invalid_argument("action index out of range");
  }
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw std::invalid_argument("gamma must be in (0, 1]");
  }
  episode_open_ = true;

  const SparseRep rep_z = representation(features, action);
  double noise = cfg_.noise_variance + rep_z.residual;

  // h' Q_D approximates Q(z) - gamma Q(z'); span leftovers go into the
  // measurement noise.
  std::vector<std::pair<int, double>> h = rep_z.weights;
  if (!is_terminal) {
    const SparseRep rep_next = representation(next_features, next_action);
    noise += gamma * gamma * rep_next.residual;
    for (const auto& [idx, w] : rep_next.weights) {
      bool merged = false;
      for (auto& [hi, hw] : h) {
        if (hi == idx) {
          hw -= gamma * w;
          merged = true;
          break;
        }
      }
      if (!merged) h.emplace_back(idx, -gamma * w);
    }
  }
  if (h.empty()) {
    ++n_rejected_;
    if (is_terminal) terminal_seen_ = true;
    return;
  }

  Eigen::VectorXd ph = Eigen::VectorXd::Zero(m_);
  double hmu = 0.0;
  for (const auto& [idx, w] : h) {
    ph += w * p_.col(idx);
    hmu += w * mu_[idx];
  }
  double hph = 0.0;
  for (const auto& [idx, w] : h) hph += w * ph[idx];

  const double s = hph + noise;
  if (!(s > 1e-12) || !std::isfinite(s)) {
    ++n_rejected_;
    if (is_terminal) terminal_seen_ = true;
    return;
  }

  mu_ += ph * ((reward - hmu) / s);
  p_.noalias() -= (ph * ph.transpose()) / s;

  if (is_terminal) terminal_seen_ = true;
}

void GpPosterior::end_episode() {
  if (!episode_open_) throw std::logic_error("no open episode");
  if (!terminal_seen_) throw std::logic_error("episode not terminated");
  episode_open_ = false;
  terminal_seen_ = false;
}

Eigen::VectorXd GpPosterior::alpha() const {
  Eigen::VectorXd a = Eigen::VectorXd::Zero(m_);
  for (int act = 0; act < n_actions_; ++act) {
    const auto& block = blocks_[act];
    if (block.empty()) continue;
    const int b = static_cast<int>(block.size());
    Eigen::VectorXd mu_b(b);
    for (int i = 0; i < b; ++i) mu_b[i] = mu_[block[i]];
    const Eigen::VectorXd a_b = block_kinv_[act] * mu_b;
    for (int i = 0; i < b; ++i) a[block[i]] = a_b[i];
  }
  return a;
}

Eigen::MatrixXd GpPosterior::cov_weights() const {
  Eigen::MatrixXd kinv = Eigen::MatrixXd::Zero(m_, m_);
  for (int act = 0; act < n_actions_; ++act) {
    const auto& block = blocks_[act];
    const int b = static_cast<int>(block.size());
    for (int i = 0; i < b; ++i) {
      for (int j = 0; j < b; ++j) {
        kinv(block[i], block[j]) = block_kinv_[act](i, j);
      }
    }
  }
  return kinv - kinv * p_ * kinv;
}

const Eigen::VectorXd& GpPosterior::dictionary_point(int i) const {
  return points_.at(i);
}

int GpPosterior::dictionary_action(int i) const { return actions_.at(i); }

Eigen::MatrixXd GpPosterior::mean_weights() const {
  // mean(x, a) = sum_i alpha_i k(z, z_i) = prior_scale * x . sum alpha_i x_i
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n_actions_, feature_dim_);
  const Eigen::VectorXd a = alpha();
  for (int i = 0; i < m_; ++i) {
    w.row(actions_[i]) += cfg_.prior_scale * a[i] * points_[i].transpose();
  }
  return w;
}

void GpPosterior::save(const std::string& path) const {
  TensorFile tf;
  tf.set_meta("kind", "gp_posterior");
  tf.set_meta_int("feature_dim", feature_dim_);
  tf.set_meta_int("n_actions", n_actions_);
  tf.set_meta_int("m", m_);
  tf.set_meta_int("dictionary_cap", cfg_.dictionary_cap);
  tf.set_meta_int("episode_open", episode_open_ ? 1 : 0);
  tf.set_meta_int("terminal_seen", terminal_seen_ ? 1 : 0);
  tf.set_meta_int("n_queries", n_queries_);
  tf.set_meta_int("n_clamps", n_clamps_);
  tf.set_meta_int("n_rejected", n_rejected_);

  Eigen::VectorXd kcfg(3);
  kcfg << cfg_.noise_variance, cfg_.sparsify_threshold, cfg_.prior_scale;
  tf.add("kernel_config", kcfg);

  if (m_ > 0) {
    Eigen::MatrixXd pts(m_, feature_dim_);
    Eigen::VectorXd acts(m_);
    for (int i = 0; i < m_; ++i) {
      pts.row(i) = points_[i].transpose();
      acts[i] = actions_[i];
    }
    tf.add("points", pts);
    tf.add("actions", acts);
    tf.add("mu", mu_);
    tf.add("p", p_);
  }
  tf.save(path);
}

GpPosterior GpPosterior::load(const std::string& path) {
  const TensorFile tf = TensorFile::load(path);
  const Eigen::VectorXd kcfg = tf.vector("kernel_config");
  KernelConfig cfg;
  cfg.noise_variance = kcfg[0];
  cfg.sparsify_threshold = kcfg[1];
  cfg.prior_scale = kcfg[2];
  cfg.dictionary_cap = static_cast<int>(tf.meta_int("dictionary_cap"));

  GpPosterior gp(static_cast<int>(tf.meta_int("feature_dim")),
                 static_cast<int>(tf.meta_int("n_actions")), cfg);
  const int m = static_cast<int>(tf.meta_int("m"));
  if (m > 0) {
    const Eigen::MatrixXd pts = tf.matrix("points");
    const Eigen::VectorXd acts = tf.vector("actions");
    // Re-adding the points in insertion order reproduces the block inverse
    // Gram matrices exactly; the stored posterior then overwrites (mu, P).
    for (int i = 0; i < m; ++i) {
      const Eigen::VectorXd x = pts.row(i).transpose();
      const int a = static_cast<int>(acts[i]);
      const Projection proj = gp.project(x, a);
      gp.add_point(x, a, proj);
    }
    gp.mu_ = tf.vector("mu");
    gp.p_ = tf.matrix("p");
  }
  gp.episode_open_ = tf.meta_int("episode_open") != 0;
  gp.terminal_seen_ = tf.meta_int("terminal_seen") != 0;
  gp.n_queries_ = tf.meta_int("n_queries");
  gp.n_clamps_ = tf.meta_int("n_clamps");
  gp.n_rejected_ = tf.meta_int("n_rejected");
  return gp;
}

}  // namespace dialshape
