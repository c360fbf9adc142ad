#pragma once

#include <Eigen/Core>
#include <map>
#include <string>
#include <vector>

namespace dialshape {

/// Self-describing text container for named numeric tensors plus string
/// and integer metadata. Values are stored row-major as JSON numbers with
/// shortest round-trip formatting, so doubles reload exactly. Non-finite
/// values are rejected at save time.
class TensorFile {
 public:
  void set_meta(const std::string& key, const std::string& value);
  void set_meta_int(const std::string& key, long long value);
  const std::string& meta(const std::string& key) const;
  long long meta_int(const std::string& key) const;
  bool has_meta(const std::string& key) const;

  void add(const std::string& name, const Eigen::MatrixXd& tensor);
  void add(const std::string& name, const Eigen::VectorXd& tensor);
  bool has(const std::string& name) const;
  Eigen::MatrixXd matrix(const std::string& name) const;
  Eigen::VectorXd vector(const std::string& name) const;

  void save(const std::string& path) const;
  static TensorFile load(const std::string& path);

 private:
  std::map<std::string, std::string> meta_;
  std::map<std::string, long long> meta_ints_;
  std::vector<std::pair<std::string, Eigen::MatrixXd>> tensors_;
};

}  // namespace dialshape
