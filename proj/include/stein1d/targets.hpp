#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>

#include "stein1d/numerics.hpp"

namespace stein1d {

enum class TargetFamily { normal, exponential, gamma, beta, student, erlangC_limit, custom };

std::string to_string(TargetFamily f);
TargetFamily target_family_from_string(const std::string& s);

// Coefficients of a quadratic Stein kernel tau(x) = alpha x^2 + beta x + gamma.
struct IpCoeffs {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double operator()(double x) const { return (alpha * x + beta) * x + gamma; }
};

namespace detail {
class TargetModel;
}

class ContinuousTarget {
 public:
  TargetFamily family = TargetFamily::custom;
  ParamMap params;
  double a = -kInf;
  double b = kInf;
  double mean = 0.0;
  std::optional<double> variance;
  std::optional<IpCoeffs> ip;

  double density(double x) const;
  double log_density(double x) const;
  // (log q)'(x)
  double dlog_density(double x) const;
  double cdf(double x) const;
  double sf(double x) const;
  // tau_q(x) = (1/q(x)) int_x^b (u - mean) q(u) du
  double stein_kernel(double x) const;
  bool in_interior(double x) const { return x > a && x < b; }
  bool in_closure(double x) const { return x >= a && x <= b; }
  double sd() const;
  std::string describe() const;

  std::shared_ptr<const detail::TargetModel> model;
};

ContinuousTarget make_target(TargetFamily family, const ParamMap& params);

// Unnormalised log density on (a, b); normalised, centred and checked by quadrature.
ContinuousTarget make_custom_target(double a, double b, std::function<double(double)> log_q,
                                    std::function<double(double)> dlog_q);

enum class WeightKind { stein_kernel, constant_one, custom };

struct WeightFunction {
  std::function<double(double)> w;
  std::function<double(double)> w_prime;
  std::function<double(double)> w_second;
  WeightKind kind = WeightKind::custom;
  // Set for constant weights; lets the piecewise path check its precondition.
  std::optional<double> constant;
};

WeightFunction stein_kernel_weight(const ContinuousTarget& target);
WeightFunction constant_weight(double c);

// s(x) = w'(x) + w(x) (log q)'(x); equals mean - x for the Stein kernel weight.
double eval_score(const ContinuousTarget& target, const WeightFunction& weight, double x);

// (int_a^x F, int_x^b (1 - F))
std::pair<double, double> gamma12(const ContinuousTarget& target, double x);

}  // namespace stein1d
