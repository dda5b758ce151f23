#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace bogospec {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr double pi = 3.14159265358979323846264338327950288;

// Thrown on malformed input: bad config fields, mismatched bases, invalid
// parameter ranges. Maps to CLI exit code 1.
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when an algorithm fails to converge or a matrix violates a
// structural requirement (e.g. negative eigenvalue under a square root).
// Maps to CLI exit code 2.
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Compensated (Kahan) accumulator for sums whose result is a small residue
// of large cancelling terms.
class KahanSum {
 public:
  void add(double x) {
    double y = x - c_;
    double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

 private:
  double s_ = 0.0, c_ = 0.0;
};

inline double sq(double x) { return x * x; }

}  // namespace bogospec
