#ifndef ARCLP_VECTOR_OPS_HPP
#define ARCLP_VECTOR_OPS_HPP

#include <cmath>
#include <cstddef>
#include <vector>

// Small dense-vector kernels. All loops run in index order so that results
// are reproducible run to run.

namespace arclp {

using Index = std::ptrdiff_t;

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

inline double norm2(const std::vector<double>& a) {
  return std::sqrt(dot(a, a));
}

inline double norm_inf(const std::vector<double>& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

// Euclidean norm of the vertical concatenation (a, b).
inline double stacked_norm2(const std::vector<double>& a,
                            const std::vector<double>& b) {
  return std::sqrt(dot(a, a) + dot(b, b));
}

inline void axpy(double alpha, const std::vector<double>& x,
                 std::vector<double>& y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

inline std::vector<double> scaled(const std::vector<double>& x, double alpha) {
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = alpha * x[i];
  return y;
}

inline std::vector<double> hadamard(const std::vector<double>& a,
                                    const std::vector<double>& b) {
  std::vector<double> y(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) y[i] = a[i] * b[i];
  return y;
}

inline bool all_positive(const std::vector<double>& a) {
  for (double v : a)
    if (!(v > 0.0)) return false;
  return true;
}

inline bool all_finite(const std::vector<double>& a) {
  for (double v : a)
    if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace arclp

#endif
