#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace stein1d {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class ErrorKind { invalid_parameter, domain, numerical, unsupported };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

using ParamMap = std::map<std::string, double>;

double param(const ParamMap& params, const std::string& key);
double param_or(const ParamMap& params, const std::string& key, double fallback);

// Neumaier variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

double compensated_sum(const std::vector<double>& xs);

struct QuadOptions {
  double abs_tol = 1e-10;
  double rel_tol = 0.0;
  int max_evals = 400000;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  int evals = 0;
  bool converged = false;
};

// Adaptive Gauss-Kronrod (7/15). Infinite endpoints go through t = x/(1+|x|).
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadOptions& opts = {});

// Same, but throws Error(numerical) when the tolerance is not met.
double integrate_or_throw(const std::function<double(double)>& f, double a, double b,
                          const QuadOptions& opts = {});

// Root of a monotone sign change on [lo, hi]. Requires f(lo) and f(hi) of opposite sign.
double bisect(const std::function<double(double)>& f, double lo, double hi, double x_tol = 0.0,
              int max_iter = 400);

double log_choose(double n, double k);
double normal_cdf(double x);
double normal_sf(double x);
double normal_pdf(double x);

}  // namespace stein1d
