#include "dialshape/shaping.hpp"

#include <cmath>
#include <stdexcept>

namespace dialshape {

namespace {
const std::string kSourceNames[] = {"none", "rnn", "oracle"};
}

const std::string& potential_source_name(PotentialSource s) {
  return kSourceNames[static_cast<int>(s)];
}

PotentialSource potential_source_from_name(const std::string& name) {
  for (int i = 0; i < 3; ++i) {
    if (name == kSourceNames[i]) return static_cast<PotentialSource>(i);
  }
  if (name == "oracle_heuristic") return PotentialSource::oracle_heuristic;
  throw std::invalid_argument("unknown shaping source: " + name);
}

double shape(double phi_t, double phi_next, double gamma, bool is_terminal,
             const ShapingConfig& cfg) {
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw std::invalid_argument("gamma must be in (0, 1]");
  }
  if (!std::isfinite(phi_t) || !std::isfinite(phi_next)) {
    throw std::invalid_argument("non-finite potential");
  }
  if (is_terminal && cfg.terminal_potential_zero) phi_next = 0.0;
  return gamma * phi_next - phi_t;
}

std::vector<ShapedTransition> shaped_stream(const std::vector<double>& potentials,
                                            const std::vector<double>& env_rewards,
                                            double gamma, const ShapingConfig& cfg,
                                            double initial_potential) {
  if (potentials.size() != env_rewards.size()) {
    throw std::invalid_argument("potential and reward streams differ in length");
  }
  std::vector<ShapedTransition> out;
  out.reserve(env_rewards.size());
  double phi = initial_potential;
  for (size_t t = 0; t < env_rewards.size(); ++t) {
    const bool terminal = (t + 1 == env_rewards.size());
    ShapedTransition tr;
    tr.env_reward = env_rewards[t];
    tr.shaping_reward = shape(phi, potentials[t], gamma, terminal, cfg);
    tr.composite = tr.env_reward + tr.shaping_reward;
    out.push_back(tr);
    phi = potentials[t];
  }
  return out;
}

double oracle_heuristic_potential(const GoalProgress& progress) {
  if (progress.none_correctly_asserted) return 20.0;
  const double cf =
      progress.constraints_total > 0
          ? static_cast<double>(progress.constraints_grounded) / progress.constraints_total
          : 0.0;
  const double rf =
      progress.requests_total > 0
          ? static_cast<double>(progress.requests_informed) / progress.requests_total
          : 0.0;
  return 20.0 * (cf + rf) / 2.0;
}

}  // namespace dialshape
