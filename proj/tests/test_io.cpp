#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "dialshape/corpus.hpp"
#include "dialshape/csv.hpp"
#include "dialshape/harness.hpp"
#include "dialshape/tensor_io.hpp"
#include "doctest.h"

using namespace dialshape;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("csv doubles print as shortest round-trip strings") {
  CHECK(CsvWriter::format(0.1) == "0.1");
  CHECK(CsvWriter::format(1.0) == "1");
  CHECK(CsvWriter::format(-30.0) == "-30");
  CHECK(CsvWriter::format(2.0 / 3.0) == "0.6666666666666666");
  const double tricky = 0.1 + 0.2;
  CHECK(std::stod(CsvWriter::format(tricky)) == tricky);
}

TEST_CASE("csv quoting round-trips awkward cells") {
  CsvWriter w({"name", "value"});
  w.add_row({"plain", "1"});
  w.add_row({"with,comma", "2"});
  w.add_row({"with \"quotes\"", "3"});
  const auto path = (std::filesystem::temp_directory_path() / "rt.csv").string();
  w.save(path);

  const auto table = load_csv(path);
  CHECK(table.header == std::vector<std::string>{"name", "value"});
  REQUIRE(table.rows.size() == 3);
  CHECK(table.rows[1][0] == "with,comma");
  CHECK(table.rows[2][0] == "with \"quotes\"");
  CHECK(table.column("value") == 1);
  CHECK(table.column("missing") == -1);
  std::filesystem::remove(path);
}

TEST_CASE("tensor files reload doubles exactly") {
  TensorFile tf;
  tf.set_meta("kind", "test");
  tf.set_meta_int("answer", 42);
  Eigen::MatrixXd m(2, 3);
  m << 0.1, -1.0 / 3.0, 1e-300, 2e17, 0.3333333333333333, -0.0;
  tf.add("m", m);
  Eigen::VectorXd v(4);
  v << 1.0, std::nextafter(1.0, 2.0), -5.5, 1e-17;
  tf.add("v", v);

  const auto path = (std::filesystem::temp_directory_path() / "tensors.txt").string();
  tf.save(path);
  const auto back = TensorFile::load(path);
  CHECK(back.meta("kind") == "test");
  CHECK(back.meta_int("answer") == 42);
  CHECK(back.matrix("m") == m);
  CHECK(back.vector("v") == v);
  CHECK(back.has("m"));
  CHECK(!back.has("nope"));
  std::filesystem::remove(path);
}

TEST_CASE("tensor files reject non-finite values") {
  TensorFile tf;
  Eigen::VectorXd v(1);
  v << std::numeric_limits<double>::quiet_NaN();
  tf.add("bad", v);
  const auto path = (std::filesystem::temp_directory_path() / "bad.txt").string();
  CHECK_THROWS(tf.save(path));
}

TEST_CASE("corpus JSONL round-trips episodes and rebuilds features") {
  const auto ont = default_ontology();
  CorpusGenConfig cfg;
  cfg.n = 20;
  cfg.ser = 0.2;
  cfg.seed = 5;
  const auto episodes = generate_corpus(ont, cfg);
  REQUIRE(episodes.size() == 20);

  const auto path = (std::filesystem::temp_directory_path() / "corpus.jsonl").string();
  save_corpus(episodes, path);
  const auto back = load_corpus(path, ont);
  REQUIRE(back.size() == episodes.size());
  for (size_t i = 0; i < episodes.size(); ++i) {
    CHECK(back[i].id == episodes[i].id);
    CHECK(back[i].ser == episodes[i].ser);
    CHECK(back[i].success == episodes[i].success);
    CHECK(back[i].return_label == episodes[i].return_label);
    REQUIRE(back[i].length() == episodes[i].length());
    for (int t = 0; t < episodes[i].length(); ++t) {
      CHECK(back[i].turns[t].system_act.action ==
            episodes[i].turns[t].system_act.action);
      CHECK(back[i].turns[t].observation.observed_act ==
            episodes[i].turns[t].observation.observed_act);
      CHECK(back[i].turns[t].observation.confidence ==
            episodes[i].turns[t].observation.confidence);
      CHECK(back[i].turns[t].reward == episodes[i].turns[t].reward);
      // Beliefs and features are recomputed, not stored; they must agree
      // bit for bit because the update is deterministic.
      CHECK(back[i].turns[t].features == episodes[i].turns[t].features);
    }
  }
  std::filesystem::remove(path);
}

TEST_CASE("corpus files are byte-identical across regenerations") {
  const auto ont = default_ontology();
  CorpusGenConfig cfg;
  cfg.n = 10;
  cfg.ser = 0.15;
  cfg.seed = 9;
  const auto a = (std::filesystem::temp_directory_path() / "det_a.jsonl").string();
  const auto b = (std::filesystem::temp_directory_path() / "det_b.jsonl").string();
  save_corpus(generate_corpus(ont, cfg), a);
  save_corpus(generate_corpus(ont, cfg), b);
  CHECK(slurp(a) == slurp(b));
  std::filesystem::remove(a);
  std::filesystem::remove(b);
}

TEST_CASE("loading a corpus against the wrong ontology fails loudly") {
  const auto ont = default_ontology();
  CorpusGenConfig cfg;
  cfg.n = 3;
  cfg.seed = 2;
  const auto path = (std::filesystem::temp_directory_path() / "mismatch.jsonl").string();
  save_corpus(generate_corpus(ont, cfg), path);

  auto clipped = ont;
  clipped.constraint_slots[0].values.resize(2);  // drops most food values
  clipped.venues.clear();
  for (const auto& v : ont.venues) {
    const auto food = v.attributes.at("food");
    if (food == clipped.constraint_slots[0].values[0] ||
        food == clipped.constraint_slots[0].values[1]) {
      clipped.venues.push_back(v);
    }
  }
  CHECK_THROWS(load_corpus(path, clipped));
  std::filesystem::remove(path);
}

TEST_CASE("to_return_sequences projects features and labels") {
  const auto ont = default_ontology();
  CorpusGenConfig cfg;
  cfg.n = 5;
  cfg.seed = 77;
  const auto eps = generate_corpus(ont, cfg);
  const auto seqs = to_return_sequences(eps);
  REQUIRE(seqs.size() == eps.size());
  for (size_t i = 0; i < seqs.size(); ++i) {
    CHECK(seqs[i].return_label == eps[i].return_label);
    REQUIRE(seqs[i].features.size() == static_cast<size_t>(eps[i].length()));
    CHECK(seqs[i].features[0] == eps[i].turns[0].features);
  }
}
