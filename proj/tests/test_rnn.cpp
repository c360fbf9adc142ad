#include <cmath>
#include <filesystem>
#include <vector>

#include "dialshape/rnn.hpp"
#include "doctest.h"
#include "fd_check.hpp"

using namespace dialshape;

namespace {

std::vector<Eigen::VectorXd> random_sequence(int len, int dim, Rng& rng) {
  std::vector<Eigen::VectorXd> out;
  for (int t = 0; t < len; ++t) {
    Eigen::VectorXd f(dim);
    for (int i = 0; i < dim; ++i) f[i] = rng.uniform01();
    out.push_back(f);
  }
  return out;
}

}  // namespace

TEST_CASE("init produces the right shapes per cell") {
  Rng rng(1);
  const auto basic = RnnModel::init(CellKind::basic, 5, 7, rng);
  CHECK(basic.gate_count() == 1);
  CHECK(basic.w_in[0].rows() == 7);
  CHECK(basic.w_in[0].cols() == 5);

  const auto lstm = RnnModel::init(CellKind::lstm, 5, 7, rng);
  CHECK(lstm.gate_count() == 4);
  // Forget-gate bias starts at 1 so early memories survive.
  CHECK(lstm.bias[1].minCoeff() == 1.0);
  CHECK(lstm.bias[0].maxCoeff() == 0.0);

  const auto gru = RnnModel::init(CellKind::gru, 5, 7, rng);
  CHECK(gru.gate_count() == 3);
  CHECK(gru.w_rec[2].rows() == 7);
  CHECK(gru.w_rec[2].cols() == 7);

  Rng r1(9), r2(9);
  const auto a = RnnModel::init(CellKind::gru, 4, 3, r1);
  const auto b = RnnModel::init(CellKind::gru, 4, 3, r2);
  CHECK(a.w_in[0] == b.w_in[0]);
  CHECK(a.w_out == b.w_out);
}

TEST_CASE("orthogonal recurrent init gives orthogonal factors") {
  Rng rng(2);
  const auto m = RnnModel::init(CellKind::gru, 4, 6, rng, 0.1, true);
  for (const auto& u : m.w_rec) {
    const Eigen::MatrixXd prod = u.transpose() * u;
    CHECK((prod - Eigen::MatrixXd::Identity(6, 6)).norm() < 1e-10);
  }
}

TEST_CASE("step_forward validates dimensions") {
  Rng rng(3);
  const auto m = RnnModel::init(CellKind::basic, 5, 4, rng);
  auto state = m.fresh_state();
  CHECK_THROWS(step_forward(m, state, Eigen::VectorXd::Zero(6)));
  const auto [next, out] = step_forward(m, state, Eigen::VectorXd::Zero(5));
  CHECK(next.t == 1);
  CHECK(std::isfinite(out));
}

TEST_CASE("loss of an all-zero readout against R=-30 is 900") {
  Rng rng(4);
  auto m = RnnModel::init(CellKind::gru, 6, 5, rng);
  m.w_out.setZero();
  m.b_out = 0.0;
  const auto seq = [&] {
    Rng r(5);
    return random_sequence(8, 6, r);
  }();
  CHECK(dialogue_loss(m, seq, -30.0) == doctest::Approx(900.0));
  CHECK(dialogue_loss(m, seq, 0.0) == doctest::Approx(0.0));
}

TEST_CASE("constant-zero predictor RMSE on returns {14, -30} is sqrt(548)") {
  Rng rng(6);
  auto m = RnnModel::init(CellKind::basic, 4, 3, rng);
  m.w_out.setZero();
  m.b_out = 0.0;
  Rng r(7);
  std::vector<ReturnSequence> corpus;
  corpus.push_back({random_sequence(5, 4, r), 14.0});
  corpus.push_back({random_sequence(9, 4, r), -30.0});
  CHECK(rmse(m, corpus) == doctest::Approx(std::sqrt((196.0 + 900.0) / 2.0)));
  CHECK(rmse(m, corpus) == doctest::Approx(23.41).epsilon(1e-3));
}

TEST_CASE("BPTT matches central finite differences for every cell") {
  Rng rng(8);
  for (const auto cell : {CellKind::basic, CellKind::lstm, CellKind::gru}) {
    for (int rep = 0; rep < 3; ++rep) {
      const int input = 3 + rep;
      const int hidden = 2 + rep;
      const auto m = RnnModel::init(cell, input, hidden, rng, 0.5);
      const auto seq = random_sequence(4 + rep, input, rng);
      const double label = rng.uniform(-30.0, 19.0);
      CHECK(fdcheck::max_relative_error(m, seq, label) < 1e-6);
    }
  }
}

TEST_CASE("gradient of the summed output is spread across every turn") {
  // dL/dr_t = 2(sum - R) at every t, so doubling the sequence length with
  // fixed features must not zero out early-turn gradients.
  Rng rng(10);
  const auto m = RnnModel::init(CellKind::gru, 3, 4, rng, 0.5);
  const auto seq = random_sequence(6, 3, rng);
  const auto g = gradient(m, seq, 5.0);
  CHECK(std::sqrt(g.squared_norm()) > 0.0);
}

TEST_CASE("a single dialogue can be memorized") {
  Rng rng(11);
  std::vector<ReturnSequence> corpus;
  corpus.push_back({random_sequence(6, 5, rng), 14.0});

  TrainConfig cfg;
  cfg.cell = CellKind::basic;
  cfg.hidden_dim = 8;
  cfg.learning_rate = 0.05;
  cfg.max_epochs = 500;  // one SGD step per epoch on a 1-dialogue corpus
  cfg.seed = 12;
  const auto result = train(corpus, corpus, cfg);
  CHECK(result.best_validation_rmse < 0.01);
}

TEST_CASE("training is deterministic and snapshots the best epoch") {
  Rng rng(13);
  std::vector<ReturnSequence> corpus, val;
  for (int i = 0; i < 12; ++i) {
    const int len = 3 + static_cast<int>(rng.uniform_index(5));
    corpus.push_back({random_sequence(len, 6, rng),
                      rng.uniform(-30.0, 19.0)});
  }
  for (int i = 0; i < 6; ++i) {
    val.push_back({random_sequence(4, 6, rng), rng.uniform(-30.0, 19.0)});
  }

  TrainConfig cfg;
  cfg.cell = CellKind::gru;
  cfg.hidden_dim = 5;
  cfg.max_epochs = 8;
  cfg.seed = 14;
  const auto a = train(corpus, val, cfg);
  const auto b = train(corpus, val, cfg);
  REQUIRE(a.history.size() == b.history.size());
  for (size_t i = 0; i < a.history.size(); ++i) {
    CHECK(a.history[i].train_mse == b.history[i].train_mse);
    CHECK(a.history[i].validation_rmse == b.history[i].validation_rmse);
  }
  CHECK(a.model.w_out == b.model.w_out);

  // The snapshot is the minimum over epochs, including the untrained start.
  Rng init_rng(cfg.seed);
  double min_rmse = rmse(RnnModel::init(cfg.cell, 6, cfg.hidden_dim, init_rng), val);
  for (const auto& rec : a.history) min_rmse = std::min(min_rmse, rec.validation_rmse);
  CHECK(a.best_validation_rmse == doctest::Approx(min_rmse));
  CHECK(rmse(a.model, val) == doctest::Approx(a.best_validation_rmse));
}

TEST_CASE("model files round-trip exactly") {
  Rng rng(15);
  for (const auto cell : {CellKind::basic, CellKind::lstm, CellKind::gru}) {
    const auto m = RnnModel::init(cell, 7, 4, rng, 0.3);
    const auto path = (std::filesystem::temp_directory_path() /
                       ("rnn_rt_" + cell_kind_name(cell) + ".txt")).string();
    save_rnn(m, path);
    const auto back = load_rnn(path);
    CHECK(back.cell == m.cell);
    CHECK(back.input_dim == m.input_dim);
    CHECK(back.hidden_dim == m.hidden_dim);
    for (int i = 0; i < m.gate_count(); ++i) {
      CHECK(back.w_in[i] == m.w_in[i]);
      CHECK(back.w_rec[i] == m.w_rec[i]);
      CHECK(back.bias[i] == m.bias[i]);
    }
    CHECK(back.w_out == m.w_out);
    CHECK(back.b_out == m.b_out);
    std::filesystem::remove(path);
  }
}

TEST_CASE("potential stream equals stepwise forward outputs") {
  Rng rng(16);
  const auto m = RnnModel::init(CellKind::gru, 5, 6, rng);
  const auto seq = random_sequence(7, 5, rng);
  auto s1 = m.fresh_state();
  auto s2 = m.fresh_state();
  for (const auto& f : seq) {
    const auto [n1, o1] = step_forward(m, s1, f);
    const auto [n2, o2] = potential(m, s2, f);
    CHECK(o1 == o2);
    s1 = n1;
    s2 = n2;
  }
}
