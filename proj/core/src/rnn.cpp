#include "dialshape/rnn.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "dialshape/tensor_io.hpp"

namespace dialshape {

namespace {

const std::string kCellNames[] = {"basic", "lstm", "gru"};

Eigen::VectorXd sigmoid(const Eigen::VectorXd& x) {
  return 1.0 / (1.0 + (-x.array()).exp());
}

Eigen::MatrixXd uniform_matrix(int rows, int cols, Rng& rng, double scale) {
  Eigen::MatrixXd m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) m(r, c) = rng.uniform(-scale, scale);
  }
  return m;
}

Eigen::MatrixXd orthogonal_matrix(int n, Rng& rng) {
  Eigen::MatrixXd a(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) a(r, c) = rng.normal();
  }
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the sign ambiguity so the factor is a deterministic function of a.
  for (int c = 0; c < n; ++c) {
    if (r(c, c) < 0) q.col(c) = -q.col(c);
  }
  return q;
}

struct StepTrace {
  Eigen::VectorXd h_prev, c_prev;
  Eigen::VectorXd h, c;
  std::vector<Eigen::VectorXd> gates;  // cell-specific activations
};

StepTrace traced_step(const RnnModel& m, const Eigen::VectorXd& h_prev,
                      const Eigen::VectorXd& c_prev, const Eigen::VectorXd& f) {
  StepTrace tr;
  tr.h_prev = h_prev;
  tr.c_prev = c_prev;
  switch (m.cell) {
    case CellKind::basic: {
      tr.h = sigmoid(m.w_in[0] * f + m.w_rec[0] * h_prev + m.bias[0]);
      break;
    }
    case CellKind::lstm: {
      const Eigen::VectorXd i = sigmoid(m.w_in[0] * f + m.w_rec[0] * h_prev + m.bias[0]);
      const Eigen::VectorXd fg = sigmoid(m.w_in[1] * f + m.w_rec[1] * h_prev + m.bias[1]);
      const Eigen::VectorXd o = sigmoid(m.w_in[2] * f + m.w_rec[2] * h_prev + m.bias[2]);
      const Eigen::VectorXd g =
          (m.w_in[3] * f + m.w_rec[3] * h_prev + m.bias[3]).array().tanh();
      tr.c = fg.cwiseProduct(c_prev) + i.cwiseProduct(g);
      tr.h = o.cwiseProduct(tr.c.array().tanh().matrix());
      tr.gates = {i, fg, o, g};
      break;
    }
    case CellKind::gru: {
      const Eigen::VectorXd z = sigmoid(m.w_in[0] * f + m.w_rec[0] * h_prev + m.bias[0]);
      const Eigen::VectorXd r = sigmoid(m.w_in[1] * f + m.w_rec[1] * h_prev + m.bias[1]);
      const Eigen::VectorXd cand =
          (m.w_in[2] * f + m.w_rec[2] * r.cwiseProduct(h_prev) + m.bias[2])
              .array()
              .tanh();
      tr.h = (1.0 - z.array()).matrix().cwiseProduct(h_prev) + z.cwiseProduct(cand);
      tr.gates = {z, r, cand};
      break;
    }
  }
  return tr;
}

}  // namespace

const std::string& cell_kind_name(CellKind kind) {
  return kCellNames[static_cast<int>(kind)];
}

CellKind cell_kind_from_name(const std::string& name) {
  for (int i = 0; i < 3; ++i) {
    if (name == kCellNames[i]) return static_cast<CellKind>(i);
  }
  throw std::invalid_argument("unknown cell kind: " + name);
}

int RnnModel::gate_count() const {
  switch (cell) {
    case CellKind::basic: return 1;
    case CellKind::lstm: return 4;
    case CellKind::gru: return 3;
  }
  return 0;
}

RnnState RnnModel::fresh_state() const {
  RnnState s;
  s.h = Eigen::VectorXd::Zero(hidden_dim);
  s.c = Eigen::VectorXd::Zero(hidden_dim);
  s.t = 0;
  return s;
}

bool RnnModel::finite() const {
  auto ok = [](const Eigen::MatrixXd& m) { return m.allFinite(); };
  for (const auto& m : w_in) {
    if (!ok(m)) return false;
  }
  for (const auto& m : w_rec) {
    if (!ok(m)) return false;
  }
  for (const auto& b : bias) {
    if (!b.allFinite()) return false;
  }
  return w_out.allFinite() && std::isfinite(b_out);
}

RnnModel RnnModel::init(CellKind cell, int input_dim, int hidden_dim, Rng& rng,
                        double scale, bool orthogonal_recurrent) {
  if (input_dim < 1 || hidden_dim < 1) {
    throw std::invalid_argument("model dimensions must be positive");
  }
  RnnModel m;
  m.cell = cell;
  m.input_dim = input_dim;
  m.hidden_dim = hidden_dim;
  const int gates = m.gate_count();
  for (int g = 0; g < gates; ++g) {
    m.w_in.push_back(uniform_matrix(hidden_dim, input_dim, rng, scale));
  }
  for (int g = 0; g < gates; ++g) {
    m.w_rec.push_back(orthogonal_recurrent
                          ? orthogonal_matrix(hidden_dim, rng)
                          : uniform_matrix(hidden_dim, hidden_dim, rng, scale));
  }
  for (int g = 0; g < gates; ++g) {
    m.bias.push_back(Eigen::VectorXd::Zero(hidden_dim));
  }
  if (cell == CellKind::lstm) m.bias[1].setConstant(1.0);  // forget gate open
  m.w_out = uniform_matrix(hidden_dim, 1, rng, scale).col(0);
  m.b_out = 0.0;
  return m;
}

RnnGradients RnnGradients::zeros_like(const RnnModel& model) {
  RnnGradients g;
  for (const auto& m : model.w_in) g.w_in.push_back(Eigen::MatrixXd::Zero(m.rows(), m.cols()));
  for (const auto& m : model.w_rec) g.w_rec.push_back(Eigen::MatrixXd::Zero(m.rows(), m.cols()));
  for (const auto& b : model.bias) g.bias.push_back(Eigen::VectorXd::Zero(b.size()));
  g.w_out = Eigen::VectorXd::Zero(model.w_out.size());
  g.b_out = 0.0;
  return g;
}

void RnnGradients::axpy(double a, const RnnGradients& other) {
  for (size_t i = 0; i < w_in.size(); ++i) w_in[i] += a * other.w_in[i];
  for (size_t i = 0; i < w_rec.size(); ++i) w_rec[i] += a * other.w_rec[i];
  for (size_t i = 0; i < bias.size(); ++i) bias[i] += a * other.bias[i];
  w_out += a * other.w_out;
  b_out += a * other.b_out;
}

double RnnGradients::squared_norm() const {
  double s = 0.0;
  for (const auto& m : w_in) s += m.squaredNorm();
  for (const auto& m : w_rec) s += m.squaredNorm();
  for (const auto& b : bias) s += b.squaredNorm();
  s += w_out.squaredNorm();
  s += b_out * b_out;
  return s;
}

void RnnGradients::scale(double a) {
  for (auto& m : w_in) m *= a;
  for (auto& m : w_rec) m *= a;
  for (auto& b : bias) b *= a;
  w_out *= a;
  b_out *= a;
}

std::pair<RnnState, double> step_forward(const RnnModel& model,
                                         const RnnState& state,
                                         const Eigen::VectorXd& features) {
  if (features.size() != model.input_dim) {
    throw std::invalid_argument("feature dimension does not match model");
  }
  if (state.h.size() != model.hidden_dim) {
    throw std::invalid_argument("state dimension does not match model");
  }
  const StepTrace tr = traced_step(model, state.h, state.c, features);
  RnnState next;
  next.h = tr.h;
  next.c = (model.cell == CellKind::lstm) ? tr.c : state.c;
  next.t = state.t + 1;
  const double out = model.w_out.dot(next.h) + model.b_out;
  if (!std::isfinite(out)) throw std::runtime_error("non-finite turn output");
  return {std::move(next), out};
}

std::pair<RnnState, double> potential(const RnnModel& model,
                                      const RnnState& state,
                                      const Eigen::VectorXd& features) {
  return step_forward(model, state, features);
}

double dialogue_loss(const RnnModel& model,
                     const std::vector<Eigen::VectorXd>& features,
                     double return_label) {
  if (features.empty()) throw std::invalid_argument("empty dialogue");
  RnnState state = model.fresh_state();
  double sum = 0.0;
  for (const auto& f : features) {
    auto [next, out] = step_forward(model, state, f);
    state = std::move(next);
    sum += out;
  }
  const double e = return_label - sum;
  return e * e;
}

RnnGradients gradient(const RnnModel& model,
                      const std::vector<Eigen::VectorXd>& features,
                      double return_label) {
  if (features.empty()) throw std::invalid_argument("empty dialogue");
  const int T = static_cast<int>(features.size());
  const int H = model.hidden_dim;

  std::vector<StepTrace> trace;
  trace.reserve(T);
  Eigen::VectorXd h = Eigen::VectorXd::Zero(H);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(H);
  double sum = 0.0;
  for (int t = 0; t < T; ++t) {
    trace.push_back(traced_step(model, h, c, features[t]));
    h = trace.back().h;
    if (model.cell == CellKind::lstm) c = trace.back().c;
    sum += model.w_out.dot(h) + model.b_out;
  }
  // L = (R - sum)^2, so dL/d(r_t) = 2 (sum - R) at every turn.
  const double dout = 2.0 * (sum - return_label);

  RnnGradients g = RnnGradients::zeros_like(model);
  for (int t = 0; t < T; ++t) {
    g.w_out += dout * trace[t].h;
  }
  g.b_out = dout * T;

  Eigen::VectorXd dh = Eigen::VectorXd::Zero(H);
  Eigen::VectorXd dc = Eigen::VectorXd::Zero(H);
  for (int t = T - 1; t >= 0; --t) {
    const StepTrace& tr = trace[t];
    const Eigen::VectorXd& f = features[t];
    dh += dout * model.w_out;

    switch (model.cell) {
      case CellKind::basic: {
        const Eigen::VectorXd da =
            dh.cwiseProduct(tr.h.cwiseProduct((1.0 - tr.h.array()).matrix()));
        g.w_in[0] += da * f.transpose();
        g.w_rec[0] += da * tr.h_prev.transpose();
        g.bias[0] += da;
        dh = model.w_rec[0].transpose() * da;
        break;
      }
      case CellKind::lstm: {
        const auto& i = tr.gates[0];
        const auto& fg = tr.gates[1];
        const auto& o = tr.gates[2];
        const auto& gv = tr.gates[3];
        const Eigen::VectorXd tc = tr.c.array().tanh();
        const Eigen::VectorXd da_o = dh.cwiseProduct(tc).cwiseProduct(
            o.cwiseProduct((1.0 - o.array()).matrix()));
        const Eigen::VectorXd dct =
            dc + dh.cwiseProduct(o).cwiseProduct(
                     (1.0 - tc.array().square()).matrix());
        const Eigen::VectorXd da_i = dct.cwiseProduct(gv).cwiseProduct(
            i.cwiseProduct((1.0 - i.array()).matrix()));
        const Eigen::VectorXd da_f = dct.cwiseProduct(tr.c_prev).cwiseProduct(
            fg.cwiseProduct((1.0 - fg.array()).matrix()));
        const Eigen::VectorXd da_g =
            dct.cwiseProduct(i).cwiseProduct((1.0 - gv.array().square()).matrix());

        g.w_in[0] += da_i * f.transpose();
        g.w_in[1] += da_f * f.transpose();
        g.w_in[2] += da_o * f.transpose();
        g.w_in[3] += da_g * f.transpose();
        g.w_rec[0] += da_i * tr.h_prev.transpose();
        g.w_rec[1] += da_f * tr.h_prev.transpose();
        g.w_rec[2] += da_o * tr.h_prev.transpose();
        g.w_rec[3] += da_g * tr.h_prev.transpose();
        g.bias[0] += da_i;
        g.bias[1] += da_f;
        g.bias[2] += da_o;
        g.bias[3] += da_g;

        dh = model.w_rec[0].transpose() * da_i + model.w_rec[1].transpose() * da_f +
             model.w_rec[2].transpose() * da_o + model.w_rec[3].transpose() * da_g;
        dc = dct.cwiseProduct(fg);
        break;
      }
      case CellKind::gru: {
        const auto& z = tr.gates[0];
        const auto& r = tr.gates[1];
        const auto& cand = tr.gates[2];
        const Eigen::VectorXd dz = dh.cwiseProduct(cand - tr.h_prev);
        const Eigen::VectorXd da_z =
            dz.cwiseProduct(z.cwiseProduct((1.0 - z.array()).matrix()));
        const Eigen::VectorXd dcand = dh.cwiseProduct(z);
        const Eigen::VectorXd da_c =
            dcand.cwiseProduct((1.0 - cand.array().square()).matrix());
        const Eigen::VectorXd back_c = model.w_rec[2].transpose() * da_c;
        const Eigen::VectorXd dr = back_c.cwiseProduct(tr.h_prev);
        const Eigen::VectorXd da_r =
            dr.cwiseProduct(r.cwiseProduct((1.0 - r.array()).matrix()));

        g.w_in[0] += da_z * f.transpose();
        g.w_in[1] += da_r * f.transpose();
        g.w_in[2] += da_c * f.transpose();
        g.w_rec[0] += da_z * tr.h_prev.transpose();
        g.w_rec[1] += da_r * tr.h_prev.transpose();
        g.w_rec[2] += da_c * r.cwiseProduct(tr.h_prev).transpose();
        g.bias[0] += da_z;
        g.bias[1] += da_r;
        g.bias[2] += da_c;

        dh = dh.cwiseProduct((1.0 - z.array()).matrix()) +
             model.w_rec[0].transpose() * da_z +
             model.w_rec[1].transpose() * da_r + back_c.cwiseProduct(r);
        break;
      }
    }
  }
  if (!std::isfinite(g.squared_norm())) {
    throw std::runtime_error("non-finite gradient");
  }
  return g;
}

double rmse(const RnnModel& model, const std::vector<ReturnSequence>& corpus) {
  if (corpus.empty()) throw std::invalid_argument("empty corpus");
  double s = 0.0;
  for (const auto& seq : corpus) {
    s += dialogue_loss(model, seq.features, seq.return_label);
  }
  return std::sqrt(s / static_cast<double>(corpus.size()));
}

TrainResult train(const std::vector<ReturnSequence>& corpus,
                  const std::vector<ReturnSequence>& validation,
                  const TrainConfig& cfg) {
  if (corpus.empty()) throw std::invalid_argument("empty training corpus");
  for (const auto& seq : corpus) {
    if (seq.features.empty()) throw std::invalid_argument("empty dialogue in corpus");
  }
  const auto& val = validation.empty() ? corpus : validation;
  const int input_dim = static_cast<int>(corpus.front().features.front().size());

  Rng rng(cfg.seed);
  RnnModel model = RnnModel::init(cfg.cell, input_dim, cfg.hidden_dim, rng,
                                  cfg.init_scale, cfg.orthogonal_recurrent);

  TrainResult result;
  result.model = model;
  result.best_validation_rmse = rmse(model, val);
  result.best_epoch = 0;

  double lr = cfg.learning_rate;
  int stall = 0;
  std::vector<size_t> order(corpus.size());
  std::iota(order.begin(), order.end(), size_t{0});

  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    rng.shuffle(order);
    for (const size_t idx : order) {
      RnnGradients g = gradient(model, corpus[idx].features, corpus[idx].return_label);
      if (cfg.grad_clip > 0.0) {
        const double norm = std::sqrt(g.squared_norm());
        if (norm > cfg.grad_clip) g.scale(cfg.grad_clip / norm);
      }
      for (size_t i = 0; i < model.w_in.size(); ++i) model.w_in[i] -= lr * g.w_in[i];
      for (size_t i = 0; i < model.w_rec.size(); ++i) model.w_rec[i] -= lr * g.w_rec[i];
      for (size_t i = 0; i < model.bias.size(); ++i) model.bias[i] -= lr * g.bias[i];
      model.w_out -= lr * g.w_out;
      model.b_out -= lr * g.b_out;
    }

    double train_sse = 0.0;
    for (const auto& seq : corpus) {
      train_sse += dialogue_loss(model, seq.features, seq.return_label);
    }
    const double train_mse = train_sse / static_cast<double>(corpus.size());
    const double val_rmse = rmse(model, val);
    if (!std::isfinite(val_rmse)) {
      throw std::runtime_error("validation error diverged");
    }

    EpochRecord rec{epoch, train_mse, val_rmse, lr, false};
    if (val_rmse < result.best_validation_rmse) {
      result.best_validation_rmse = val_rmse;
      result.best_epoch = epoch;
      result.model = model;
      rec.is_best = true;
      stall = 0;
    } else if (++stall >= cfg.lr_patience) {
      lr *= 0.5;
      stall = 0;
    }
    result.history.push_back(rec);
  }
  return result;
}

void save_rnn(const RnnModel& model, const std::string& path) {
  TensorFile tf;
  tf.set_meta("kind", "rnn_return_model");
  tf.set_meta("cell", cell_kind_name(model.cell));
  tf.set_meta_int("input_dim", model.input_dim);
  tf.set_meta_int("hidden_dim", model.hidden_dim);
  for (size_t i = 0; i < model.w_in.size(); ++i) {
    tf.add("w_in_" + std::to_string(i), model.w_in[i]);
  }
  for (size_t i = 0; i < model.w_rec.size(); ++i) {
    tf.add("w_rec_" + std::to_string(i), model.w_rec[i]);
  }
  for (size_t i = 0; i < model.bias.size(); ++i) {
    tf.add("bias_" + std::to_string(i), model.bias[i]);
  }
  tf.add("w_out", model.w_out);
  Eigen::VectorXd b(1);
  b[0] = model.b_out;
  tf.add("b_out", b);
  tf.save(path);
}

RnnModel load_rnn(const std::string& path) {
  const TensorFile tf = TensorFile::load(path);
  RnnModel m;
  m.cell = cell_kind_from_name(tf.meta("cell"));
  m.input_dim = static_cast<int>(tf.meta_int("input_dim"));
  m.hidden_dim = static_cast<int>(tf.meta_int("hidden_dim"));
  for (int i = 0; i < m.gate_count(); ++i) {
    m.w_in.push_back(tf.matrix("w_in_" + std::to_string(i)));
    m.w_rec.push_back(tf.matrix("w_rec_" + std::to_string(i)));
    m.bias.push_back(tf.vector("bias_" + std::to_string(i)));
  }
  m.w_out = tf.vector("w_out");
  m.b_out = tf.vector("b_out")[0];
  if (!m.finite()) throw std::runtime_error("non-finite model parameters in " + path);
  return m;
}

}  // namespace dialshape
