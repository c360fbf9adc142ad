#include "dialshape/stats.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>

namespace dialshape {

double mean(const std::vector<double>& xs) {
  if (xs.empty()) throw std::invalid_argument("mean of empty sample");
  double s = 0.0;
  for (const double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double sample_stddev(const std::vector<double>& xs) {
  if (xs.size() < 2) throw std::invalid_argument("stddev needs >= 2 samples");
  const double m = mean(xs);
  double s = 0.0;
  for (const double x : xs) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

double standard_error(const std::vector<double>& xs) {
  return sample_stddev(xs) / std::sqrt(static_cast<double>(xs.size()));
}

double paired_t_pvalue_greater(const std::vector<double>& a,
                               const std::vector<double>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("unpaired samples");
  if (a.size() < 2) throw std::invalid_argument("paired test needs >= 2 pairs");
  const auto n = a.size();
  std::vector<double> diff(n);
  for (size_t i = 0; i < n; ++i) diff[i] = a[i] - b[i];
  const double d = mean(diff);
  const double sd = sample_stddev(diff);
  if (sd == 0.0) return d > 0.0 ? 0.0 : 1.0;
  const double t = d / (sd / std::sqrt(static_cast<double>(n)));
  const boost::math::students_t dist(static_cast<double>(n - 1));
  return boost::math::cdf(boost::math::complement(dist, t));
}

std::vector<double> moving_average(const std::vector<double>& xs, int window) {
  if (window < 1) throw std::invalid_argument("window must be >= 1");
  std::vector<double> out(xs.size());
  double running = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    running += xs[i];
    if (i >= static_cast<size_t>(window)) running -= xs[i - window];
    const auto count = std::min<size_t>(i + 1, static_cast<size_t>(window));
    out[i] = running / static_cast<double>(count);
  }
  return out;
}

}  // namespace dialshape
