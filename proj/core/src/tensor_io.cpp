#include "dialshape/tensor_io.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace dialshape {

void TensorFile::set_meta(const std::string& key, const std::string& value) {
  meta_[key] = value;
}

void TensorFile::set_meta_int(const std::string& key, long long value) {
  meta_ints_[key] = value;
}

const std::string& TensorFile::meta(const std::string& key) const {
  const auto it = meta_.find(key);
  if (it == meta_.end()) throw std::out_of_range("missing metadata key: " + key);
  return it->second;
}

long long TensorFile::meta_int(const std::string& key) const {
  const auto it = meta_ints_.find(key);
  if (it == meta_ints_.end()) throw std::out_of_range("missing metadata key: " + key);
  return it->second;
}

bool TensorFile::has_meta(const std::string& key) const {
  return meta_.count(key) > 0 || meta_ints_.count(key) > 0;
}

void TensorFile::add(const std::string& name, const Eigen::MatrixXd& tensor) {
  tensors_.emplace_back(name, tensor);
}

void TensorFile::add(const std::string& name, const Eigen::VectorXd& tensor) {
  Eigen::MatrixXd m(tensor.size(), 1);
  m.col(0) = tensor;
  tensors_.emplace_back(name, std::move(m));
}

bool TensorFile::has(const std::string& name) const {
  for (const auto& [n, t] : tensors_) {
    if (n == name) return true;
  }
  return false;
}

Eigen::MatrixXd TensorFile::matrix(const std::string& name) const {
  for (const auto& [n, t] : tensors_) {
    if (n == name) return t;
  }
  throw std::out_of_range("missing tensor: " + name);
}

Eigen::VectorXd TensorFile::vector(const std::string& name) const {
  const Eigen::MatrixXd m = matrix(name);
  if (m.cols() != 1) throw std::invalid_argument("tensor is not a vector: " + name);
  return m.col(0);
}

void TensorFile::save(const std::string& path) const {
  nlohmann::json j;
  j["meta"] = meta_;
  j["meta_ints"] = meta_ints_;
  j["tensors"] = nlohmann::json::array();
  for (const auto& [name, t] : tensors_) {
    nlohmann::json values = nlohmann::json::array();
    for (Eigen::Index r = 0; r < t.rows(); ++r) {
      for (Eigen::Index c = 0; c < t.cols(); ++c) {
        const double v = t(r, c);
        if (!std::isfinite(v)) {
          throw std::invalid_argument("non-finite value in tensor " + name);
        }
        values.push_back(v);
      }
    }
    j["tensors"].push_back({{"name", name},
                            {"rows", t.rows()},
                            {"cols", t.cols()},
                            {"values", std::move(values)}});
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write tensor file: " + path);
  out << j.dump() << "\n";
}

TensorFile TensorFile::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open tensor file: " + path);
  nlohmann::json j;
  in >> j;

  TensorFile tf;
  tf.meta_ = j.at("meta").get<std::map<std::string, std::string>>();
  tf.meta_ints_ = j.at("meta_ints").get<std::map<std::string, long long>>();
  for (const auto& entry : j.at("tensors")) {
    const auto rows = entry.at("rows").get<Eigen::Index>();
    const auto cols = entry.at("cols").get<Eigen::Index>();
    const auto& values = entry.at("values");
    if (static_cast<Eigen::Index>(values.size()) != rows * cols) {
      throw std::runtime_error("tensor value count mismatch in " + path);
    }
    Eigen::MatrixXd m(rows, cols);
    Eigen::Index k = 0;
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) {
        m(r, c) = values.at(k++).get<double>();
      }
    }
    tf.tensors_.emplace_back(entry.at("name").get<std::string>(), std::move(m));
  }
  return tf;
}

}  // namespace dialshape
