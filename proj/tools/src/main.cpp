// Command line front end: corpus generation, return-model training and
// evaluation, policy optimization, and report generation. A JSON config
// file given with --config overrides any flags of the same name.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "dialshape/corpus.hpp"
#include "dialshape/csv.hpp"
#include "dialshape/features.hpp"
#include "dialshape/harness.hpp"
#include "dialshape/ontology.hpp"
#include "dialshape/rnn.hpp"

namespace {

using dialshape::Rng;
using nlohmann::json;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (const char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<std::uint64_t> parse_seeds(const std::string& s) {
  std::vector<std::uint64_t> out;
  for (const auto& part : split(s, ',')) {
    if (!part.empty()) out.push_back(std::stoull(part));
  }
  if (out.empty()) throw CLI::ValidationError("--seeds", "empty seed list");
  return out;
}

std::vector<double> parse_sers(const std::string& s) {
  std::vector<double> out;
  for (const auto& part : split(s, ',')) {
    if (!part.empty()) out.push_back(std::stod(part));
  }
  if (out.empty()) throw CLI::ValidationError("--ser", "empty error-rate list");
  return out;
}

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  json j;
  in >> j;
  return j;
}

/// Seeds may appear in config files as "1,2,3" or [1, 2, 3].
std::string seeds_from_json(const json& j, const std::string& fallback) {
  if (!j.contains("seeds")) return fallback;
  if (j["seeds"].is_string()) return j["seeds"].get<std::string>();
  std::string out;
  for (const auto& v : j["seeds"]) {
    if (!out.empty()) out += ',';
    out += std::to_string(v.get<std::uint64_t>());
  }
  return out;
}

dialshape::Ontology load_ontology_or_default(const std::string& path) {
  if (path.empty()) return dialshape::default_ontology();
  return dialshape::load_ontology(path);
}

// ---------------------------------------------------------------------------

struct GenOpts {
  std::string ontology, out, config;
  std::string ser = "0.15";
  std::string policy = "mixed";
  int n = 1000;
  bool balanced = false;
  std::uint64_t seed = 1;
  double mix = 0.7;
};

int run_gen(GenOpts o) {
  if (!o.config.empty()) {
    const json j = load_config(o.config);
    o.ontology = j.value("ontology", o.ontology);
    o.out = j.value("out", o.out);
    if (j.contains("ser")) {
      o.ser = j["ser"].is_string() ? j["ser"].get<std::string>()
                                   : std::to_string(j["ser"].get<double>());
    }
    o.policy = j.value("policy", o.policy);
    o.n = j.value("n", o.n);
    o.balanced = j.value("balanced", o.balanced);
    o.seed = j.value("seed", o.seed);
    o.mix = j.value("mix", o.mix);
  }
  const auto ontology = load_ontology_or_default(o.ontology);
  const auto sers = parse_sers(o.ser);

  std::vector<dialshape::Episode> all;
  dialshape::CsvWriter stats({"ser", "n", "success", "failure", "mean_return"});
  for (size_t i = 0; i < sers.size(); ++i) {
    dialshape::CorpusGenConfig cfg;
    cfg.n = o.n / static_cast<int>(sers.size()) +
            (static_cast<int>(i) < o.n % static_cast<int>(sers.size()) ? 1 : 0);
    cfg.ser = sers[i];
    cfg.balanced = o.balanced;
    cfg.seed = sers.size() == 1 ? o.seed : Rng::derive(o.seed, i + 1);
    cfg.policy = o.policy;
    cfg.mix = o.mix;
    auto batch = dialshape::generate_corpus(ontology, cfg);

    int successes = 0;
    double ret = 0.0;
    for (const auto& ep : batch) {
      successes += ep.success ? 1 : 0;
      ret += ep.return_label;
    }
    stats.add_row({dialshape::CsvWriter::format(cfg.ser),
                   dialshape::CsvWriter::format(cfg.n),
                   dialshape::CsvWriter::format(successes),
                   dialshape::CsvWriter::format(cfg.n - successes),
                   dialshape::CsvWriter::format(ret / cfg.n)});
    for (auto& ep : batch) {
      ep.id = static_cast<int>(all.size());
      all.push_back(std::move(ep));
    }
  }

  dialshape::save_corpus(all, o.out);
  dialshape::FeatureLayout(ontology).save_schema(o.out + ".schema.json");
  stats.save(o.out + ".stats.csv");
  std::cout << "wrote " << all.size() << " episodes to " << o.out << "\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct TrainRnnOpts {
  std::string ontology, corpus, val, out, config;
  std::string cell = "gru";
  int hidden = 100;
  double lr = 0.01;
  int epochs = 100;
  std::uint64_t seed = 1;
  double clip = 5.0;
};

int run_train_rnn(TrainRnnOpts o) {
  if (!o.config.empty()) {
    const json j = load_config(o.config);
    o.ontology = j.value("ontology", o.ontology);
    o.corpus = j.value("corpus", o.corpus);
    o.val = j.value("val", o.val);
    o.out = j.value("out", o.out);
    o.cell = j.value("cell", o.cell);
    o.hidden = j.value("hidden", o.hidden);
    o.lr = j.value("lr", o.lr);
    o.epochs = j.value("epochs", o.epochs);
    o.seed = j.value("seed", o.seed);
    o.clip = j.value("clip", o.clip);
  }
  const auto ontology = load_ontology_or_default(o.ontology);
  const auto train_seqs =
      dialshape::to_return_sequences(dialshape::load_corpus(o.corpus, ontology));
  std::vector<dialshape::ReturnSequence> val_seqs;
  if (!o.val.empty()) {
    val_seqs = dialshape::to_return_sequences(dialshape::load_corpus(o.val, ontology));
  }

  dialshape::TrainConfig cfg;
  cfg.cell = dialshape::cell_kind_from_name(o.cell);
  cfg.hidden_dim = o.hidden;
  cfg.learning_rate = o.lr;
  cfg.max_epochs = o.epochs;
  cfg.grad_clip = o.clip;
  cfg.seed = o.seed;

  const auto result = dialshape::train(train_seqs, val_seqs, cfg);
  dialshape::save_rnn(result.model, o.out);

  dialshape::CsvWriter history(
      {"epoch", "train_mse", "validation_rmse", "learning_rate", "is_best"});
  for (const auto& rec : result.history) {
    history.add_row({dialshape::CsvWriter::format(rec.epoch),
                     dialshape::CsvWriter::format(rec.train_mse),
                     dialshape::CsvWriter::format(rec.validation_rmse),
                     dialshape::CsvWriter::format(rec.learning_rate),
                     rec.is_best ? "1" : "0"});
  }
  history.save(o.out + ".history.csv");
  std::cout << "best validation rmse " << result.best_validation_rmse
            << " at epoch " << result.best_epoch << "\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct EvalRnnOpts {
  std::string ontology, model, out, config;
  std::vector<std::string> corpora;
};

int run_eval_rnn(EvalRnnOpts o) {
  if (!o.config.empty()) {
    const json j = load_config(o.config);
    o.ontology = j.value("ontology", o.ontology);
    o.model = j.value("model", o.model);
    o.out = j.value("out", o.out);
    if (j.contains("corpus")) {
      o.corpora = j["corpus"].get<std::vector<std::string>>();
    }
  }
  if (o.corpora.empty()) throw std::runtime_error("no corpora given");
  const auto ontology = load_ontology_or_default(o.ontology);
  const auto model = dialshape::load_rnn(o.model);

  dialshape::CsvWriter table(
      {"corpus", "n_dialogues", "rmse", "baseline_rmse", "rmse_ratio"});
  for (const auto& path : o.corpora) {
    const auto data =
        dialshape::to_return_sequences(dialshape::load_corpus(path, ontology));
    const auto row = dialshape::evaluate_return_model(
        model, std::filesystem::path(path).stem().string(), data);
    table.add_row({row.corpus, dialshape::CsvWriter::format(row.n_dialogues),
                   dialshape::CsvWriter::format(row.rmse),
                   dialshape::CsvWriter::format(row.baseline_rmse),
                   dialshape::CsvWriter::format(row.rmse / row.baseline_rmse)});
  }
  table.save(o.out);
  std::cout << "wrote " << o.out << "\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct TrainPolicyOpts {
  std::string ontology, model, out, config;
  std::string shaping = "none";
  std::string seeds = "1,2,3,4,5,6,7,8,9,10";
  std::string explore = "thompson";
  double gamma = 1.0;
  int budget = 1000;
  int eval_every = 50;
  int eval_n = 1000;
  double ser = 0.15;
  double noise = 25.0;
  double nu = 0.01;
  double prior_scale = 25.0;
  int cap = 1000;
  double epsilon = 0.1;
};

int run_train_policy(TrainPolicyOpts o) {
  if (!o.config.empty()) {
    const json j = load_config(o.config);
    o.ontology = j.value("ontology", o.ontology);
    o.model = j.value("model", o.model);
    o.out = j.value("out", o.out);
    o.shaping = j.value("shaping", o.shaping);
    o.seeds = seeds_from_json(j, o.seeds);
    o.explore = j.value("explore", o.explore);
    o.gamma = j.value("gamma", o.gamma);
    o.budget = j.value("budget", o.budget);
    o.eval_every = j.value("eval-every", o.eval_every);
    o.eval_n = j.value("eval-n", o.eval_n);
    o.ser = j.value("ser", o.ser);
    o.noise = j.value("noise", o.noise);
    o.nu = j.value("nu", o.nu);
    o.prior_scale = j.value("prior-scale", o.prior_scale);
    o.cap = j.value("cap", o.cap);
    o.epsilon = j.value("epsilon", o.epsilon);
  }
  const auto ontology = load_ontology_or_default(o.ontology);

  dialshape::PolicyTrainConfig cfg;
  cfg.budget = o.budget;
  cfg.eval_every = o.eval_every;
  cfg.eval_n = o.eval_n;
  cfg.ser = o.ser;
  cfg.seeds = parse_seeds(o.seeds);
  cfg.shaping.gamma = o.gamma;
  cfg.shaping.source = dialshape::potential_source_from_name(o.shaping);
  cfg.kernel.noise_variance = o.noise;
  cfg.kernel.sparsify_threshold = o.nu;
  cfg.kernel.prior_scale = o.prior_scale;
  cfg.kernel.dictionary_cap = o.cap;
  if (o.explore == "thompson") {
    cfg.explore = dialshape::ExploreMode::posterior_sample;
  } else if (o.explore == "greedy") {
    cfg.explore = dialshape::ExploreMode::greedy;
  } else if (o.explore == "epsilon") {
    cfg.explore = dialshape::ExploreMode::epsilon_greedy;
  } else {
    throw std::runtime_error("unknown exploration mode: " + o.explore);
  }
  cfg.epsilon = o.epsilon;

  std::optional<dialshape::RnnModel> model;
  if (cfg.shaping.source == dialshape::PotentialSource::rnn) {
    if (o.model.empty()) throw std::runtime_error("--shaping rnn requires --model");
    model = dialshape::load_rnn(o.model);
  }

  const auto curve =
      dialshape::train_policy(ontology, cfg, model ? &*model : nullptr);
  dialshape::save_curve_csv(curve, o.out + "_per_seed.csv",
                            o.out + "_aggregate.csv");
  std::cout << "final mean reward " << curve.final_mean_reward() << " over "
            << cfg.seeds.size() << " seeds\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct ReportOpts {
  std::vector<std::string> curves;  // name=per_seed.csv, first is the baseline
  std::string out, config;
  int window = 100;
};

int run_report(ReportOpts o) {
  if (!o.config.empty()) {
    const json j = load_config(o.config);
    o.out = j.value("out", o.out);
    o.window = j.value("window", o.window);
    if (j.contains("curves")) {
      o.curves = j["curves"].get<std::vector<std::string>>();
    }
  }
  if (o.curves.empty()) throw std::runtime_error("no curve files given");

  std::vector<std::pair<std::string, dialshape::LearningCurve>> arms;
  for (const auto& entry : o.curves) {
    const auto eq = entry.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("expected name=path, got: " + entry);
    }
    arms.emplace_back(entry.substr(0, eq),
                      dialshape::load_curve_csv(entry.substr(eq + 1)));
  }
  dialshape::write_report(arms, o.window, o.out);
  std::cout << "wrote report to " << o.out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dialogue policy optimization with learned reward shaping"};
  app.require_subcommand(1);

  GenOpts gen;
  auto* sub_gen = app.add_subcommand("gen-corpus", "simulate a dialogue corpus");
  sub_gen->add_option("--ontology", gen.ontology, "ontology JSON (default: built-in)");
  sub_gen->add_option("--n", gen.n, "number of episodes");
  sub_gen->add_option("--ser", gen.ser, "semantic error rate(s), comma separated");
  sub_gen->add_flag("--balanced", gen.balanced, "equalize success/failure counts");
  sub_gen->add_option("--seed", gen.seed, "corpus seed");
  sub_gen->add_option("--policy", gen.policy, "behavior policy: mixed|scripted|random");
  sub_gen->add_option("--mix", gen.mix, "scripted-action probability for mixed");
  sub_gen->add_option("--out", gen.out, "output corpus path")->required();
  sub_gen->add_option("--config", gen.config, "JSON config; overrides flags");

  TrainRnnOpts tr;
  auto* sub_tr = app.add_subcommand("train-rnn", "train the return-decomposition model");
  sub_tr->add_option("--ontology", tr.ontology, "ontology JSON (default: built-in)");
  sub_tr->add_option("--corpus", tr.corpus, "training corpus")->required();
  sub_tr->add_option("--val", tr.val, "validation corpus (default: training corpus)");
  sub_tr->add_option("--cell", tr.cell, "basic|lstm|gru");
  sub_tr->add_option("--hidden", tr.hidden, "hidden layer width");
  sub_tr->add_option("--lr", tr.lr, "learning rate");
  sub_tr->add_option("--epochs", tr.epochs, "max training epochs");
  sub_tr->add_option("--seed", tr.seed, "initialization/shuffle seed");
  sub_tr->add_option("--clip", tr.clip, "global gradient-norm clip");
  sub_tr->add_option("--out", tr.out, "model output path")->required();
  sub_tr->add_option("--config", tr.config, "JSON config; overrides flags");

  EvalRnnOpts ev;
  auto* sub_ev = app.add_subcommand("eval-rnn", "evaluate return prediction error");
  sub_ev->add_option("--ontology", ev.ontology, "ontology JSON (default: built-in)");
  sub_ev->add_option("--model", ev.model, "trained model path")->required();
  sub_ev->add_option("--corpus", ev.corpora, "test corpus (repeatable)");
  sub_ev->add_option("--out", ev.out, "output CSV path")->required();
  sub_ev->add_option("--config", ev.config, "JSON config; overrides flags");

  TrainPolicyOpts tp;
  auto* sub_tp = app.add_subcommand("train-policy", "optimize a dialogue policy");
  sub_tp->add_option("--ontology", tp.ontology, "ontology JSON (default: built-in)");
  sub_tp->add_option("--shaping", tp.shaping, "none|rnn|oracle");
  sub_tp->add_option("--model", tp.model, "trained return model (rnn shaping)");
  sub_tp->add_option("--gamma", tp.gamma, "discount/shaping gamma");
  sub_tp->add_option("--seeds", tp.seeds, "comma-separated seed list");
  sub_tp->add_option("--budget", tp.budget, "training dialogues per seed");
  sub_tp->add_option("--eval-every", tp.eval_every, "dialogues between evaluations");
  sub_tp->add_option("--eval-n", tp.eval_n, "evaluation dialogues per checkpoint");
  sub_tp->add_option("--ser", tp.ser, "semantic error rate");
  sub_tp->add_option("--noise", tp.noise, "TD measurement noise variance");
  sub_tp->add_option("--nu", tp.nu, "dictionary sparsification threshold");
  sub_tp->add_option("--prior-scale", tp.prior_scale, "kernel prior scale");
  sub_tp->add_option("--cap", tp.cap, "dictionary size cap");
  sub_tp->add_option("--explore", tp.explore, "thompson|greedy|epsilon");
  sub_tp->add_option("--epsilon", tp.epsilon, "epsilon for epsilon-greedy");
  sub_tp->add_option("--out", tp.out, "output CSV prefix")->required();
  sub_tp->add_option("--config", tp.config, "JSON config; overrides flags");

  ReportOpts rp;
  auto* sub_rp = app.add_subcommand("report", "summarize learning curves");
  sub_rp->add_option("--curves", rp.curves,
                     "name=per_seed.csv (repeatable; first is the baseline)");
  sub_rp->add_option("--window", rp.window, "moving-average window");
  sub_rp->add_option("--out", rp.out, "output directory")->required();
  sub_rp->add_option("--config", rp.config, "JSON config; overrides flags");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sub_gen) return run_gen(gen);
    if (*sub_tr) return run_train_rnn(tr);
    if (*sub_ev) return run_eval_rnn(ev);
    if (*sub_tp) return run_train_policy(tp);
    if (*sub_rp) return run_report(rp);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
