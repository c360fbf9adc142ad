#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "dialshape/rng.hpp"

namespace dialshape {

enum class CellKind { basic, lstm, gru };

const std::string& cell_kind_name(CellKind kind);
CellKind cell_kind_from_name(const std::string& name);

/// Recurrent hidden state for one dialogue. Fresh state is all zero with
/// the turn counter at 0; the cell memory is used by the LSTM only.
struct RnnState {
  Eigen::VectorXd h;
  Eigen::VectorXd c;
  int t = 0;
};

/// Recurrent return-decomposition model. Emits one unbounded scalar per
/// turn through a linear readout; the per-turn outputs are trained so that
/// their episode sum predicts the dialogue return.
///
/// Cells:
///   basic: h' = sigmoid(W_ih f + W_hh h + b_h)
///   lstm:  forget/input/output gates, tanh candidate, forget bias init 1
///   gru:   update/reset gates, h' = (1-z) .* h + z .* h_tilde
struct RnnModel {
  CellKind cell = CellKind::gru;
  int input_dim = 0;
  int hidden_dim = 0;

  // Gate/candidate parameters, one row block per gate in a fixed order:
  // basic -> {h}, lstm -> {i, f, o, g}, gru -> {z, r, h}.
  std::vector<Eigen::MatrixXd> w_in;   // each hidden_dim x input_dim
  std::vector<Eigen::MatrixXd> w_rec;  // each hidden_dim x hidden_dim
  std::vector<Eigen::VectorXd> bias;   // each hidden_dim

  Eigen::VectorXd w_out;  // hidden_dim
  double b_out = 0.0;

  int gate_count() const;
  RnnState fresh_state() const;
  bool finite() const;

  /// Uniform [-scale, scale] init; forget-gate bias set to 1 for the LSTM.
  /// When orthogonal_recurrent is set the recurrent matrices are replaced
  /// by deterministic orthogonal factors.
  static RnnModel init(CellKind cell, int input_dim, int hidden_dim, Rng& rng,
                       double scale = 0.1, bool orthogonal_recurrent = false);
};

/// Flat parameter-gradient container mirroring RnnModel's tensors.
struct RnnGradients {
  std::vector<Eigen::MatrixXd> w_in;
  std::vector<Eigen::MatrixXd> w_rec;
  std::vector<Eigen::VectorXd> bias;
  Eigen::VectorXd w_out;
  double b_out = 0.0;

  static RnnGradients zeros_like(const RnnModel& model);
  void axpy(double a, const RnnGradients& other);  // this += a * other
  double squared_norm() const;
  void scale(double a);
};

/// One recurrent step: consumes a feature vector, returns the updated state
/// and the scalar turn output. Throws std::invalid_argument on dimension
/// mismatch and std::runtime_error if the output is not finite.
std::pair<RnnState, double> step_forward(const RnnModel& model,
                                         const RnnState& state,
                                         const Eigen::VectorXd& features);

/// Same computation as step_forward, named for its role as the online
/// shaping potential stream. Reset the state at every dialogue start.
std::pair<RnnState, double> potential(const RnnModel& model,
                                      const RnnState& state,
                                      const Eigen::VectorXd& features);

/// Per-dialogue squared error of the summed turn outputs against the
/// return label: (R - sum_t r_t)^2. Throws on an empty sequence.
double dialogue_loss(const RnnModel& model,
                     const std::vector<Eigen::VectorXd>& features,
                     double return_label);

/// Exact loss gradient via backpropagation through time over the full
/// sequence. Throws std::runtime_error if any gradient entry is not finite.
RnnGradients gradient(const RnnModel& model,
                      const std::vector<Eigen::VectorXd>& features,
                      double return_label);

/// A supervised dialogue: the per-turn feature sequence plus the scalar
/// return label.
struct ReturnSequence {
  std::vector<Eigen::VectorXd> features;
  double return_label = 0.0;
};

struct TrainConfig {
  CellKind cell = CellKind::gru;
  int hidden_dim = 100;
  double learning_rate = 0.01;
  int max_epochs = 100;
  double grad_clip = 5.0;  // global L2 norm; <= 0 disables
  std::uint64_t seed = 1;
  double init_scale = 0.1;
  bool orthogonal_recurrent = false;
  /// Halve the learning rate after this many epochs without validation
  /// improvement.
  int lr_patience = 3;
};

struct EpochRecord {
  int epoch = 0;
  double train_mse = 0.0;
  double validation_rmse = 0.0;
  double learning_rate = 0.0;
  bool is_best = false;
};

struct TrainResult {
  RnnModel model;  // parameters at the best validation RMSE
  std::vector<EpochRecord> history;
  double best_validation_rmse = 0.0;
  int best_epoch = 0;
};

/// Per-dialogue SGD in shuffled order with early-stopping snapshot
/// selection on validation RMSE. Deterministic given cfg.seed. Throws
/// std::runtime_error if the validation RMSE becomes non-finite.
TrainResult train(const std::vector<ReturnSequence>& corpus,
                  const std::vector<ReturnSequence>& validation,
                  const TrainConfig& cfg);

/// sqrt(mean over dialogues of (R - sum_t r_t)^2).
double rmse(const RnnModel& model, const std::vector<ReturnSequence>& corpus);

/// Self-describing text persistence; round-trips exactly in double
/// precision.
void save_rnn(const RnnModel& model, const std::string& path);
RnnModel load_rnn(const std::string& path);

}  // namespace dialshape
