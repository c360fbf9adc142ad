#pragma once

#include <vector>

namespace dialshape {

double mean(const std::vector<double>& xs);
double sample_stddev(const std::vector<double>& xs);  // n-1 denominator
/// sample stddev / sqrt(n)
double standard_error(const std::vector<double>& xs);

/// One-sided paired t-test p-value for H1: mean(a - b) > 0.
/// Requires |a| == |b| >= 2.
double paired_t_pvalue_greater(const std::vector<double>& a,
                               const std::vector<double>& b);

/// Trailing moving average; each output is the mean of the last
/// min(window, i+1) inputs. window = 1 is the identity.
std::vector<double> moving_average(const std::vector<double>& xs, int window);

}  // namespace dialshape
