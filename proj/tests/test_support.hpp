#pragma once

// Shared helpers for the unit and acceptance suites: seeded random data and
// a central finite-difference oracle for network gradients.

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "vpnn/network.hpp"
#include "vpnn/vecmat.hpp"

namespace vpnn::test {

inline Matrix random_matrix(Index rows, Index cols, std::mt19937_64& rng,
                            double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = dist(rng);
  return m;
}

inline VecMatrix random_vecmatrix(Index rows, Index cols, std::mt19937_64& rng,
                                  double lo = -1.0, double hi = 1.0) {
  Matrix p1 = random_matrix(rows, cols, rng, lo, hi);
  Matrix p2 = random_matrix(rows, cols, rng, lo, hi);
  Matrix p3 = random_matrix(rows, cols, rng, lo, hi);
  return VecMatrix(std::move(p1), std::move(p2), std::move(p3));
}

inline Vec3 random_vec3(std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> dist(-scale, scale);
  const double a = dist(rng), b = dist(rng), c = dist(rng);
  return {a, b, c};
}

/// Fills every parameter with fresh uniform values, biases included, so
/// gradient checks exercise nonzero biases.
template <class Net>
void randomize(Net& net, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> dist(-scale, scale);
  for (Matrix* p : parameter_planes(net)) {
    for (Index j = 0; j < p->cols(); ++j)
      for (Index i = 0; i < p->rows(); ++i) (*p)(i, j) = dist(rng);
  }
}

struct GradientCheck {
  double max_relative_error = 0.0;
  std::size_t parameters = 0;
};

inline double relative_error(double analytic, double numeric) {
  const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-4});
  return std::abs(analytic - numeric) / denom;
}

/// Central differences of `loss` with respect to every entry of every plane
/// in `params`, compared against `analytic` (same plane order).
inline GradientCheck finite_difference_check(
    const std::vector<Matrix*>& params,
    const std::vector<const Matrix*>& analytic,
    const std::function<double()>& loss, double eps = 1e-6) {
  GradientCheck result;
  for (std::size_t k = 0; k < params.size(); ++k) {
    Matrix& p = *params[k];
    for (Index j = 0; j < p.cols(); ++j) {
      for (Index i = 0; i < p.rows(); ++i) {
        const double saved = p(i, j);
        p(i, j) = saved + eps;
        const double up = loss();
        p(i, j) = saved - eps;
        const double down = loss();
        p(i, j) = saved;
        const double numeric = (up - down) / (2.0 * eps);
        result.max_relative_error = std::max(
            result.max_relative_error, relative_error((*analytic[k])(i, j), numeric));
        ++result.parameters;
      }
    }
  }
  return result;
}

/// J on a joint [source 1; source 2] prediction, computed directly from the
/// definition (sum of squared differences over every plane).
inline double direct_j(const VecMatrix& pred, const VecMatrix& target) {
  double j = 0.0;
  for (int k = 0; k < 3; ++k) j += (pred.plane(k) - target.plane(k)).squaredNorm();
  return j;
}

inline double direct_j(const Matrix& pred, const Matrix& target) {
  return (pred - target).squaredNorm();
}

inline GradientCheck check_vp_network(VPNetwork& net, const VecMatrix& input,
                                      const VecMatrix& target) {
  VPForward fwd = vp_forward(net, input);
  StackedVPLoss loss = stacked_loss(fwd.output, target);
  VPGradients grads = vp_backward(net, fwd.cache, loss.grad);
  return finite_difference_check(
      parameter_planes(net), gradient_planes(grads),
      [&] { return direct_j(vp_forward(net, input).output, target); });
}

inline GradientCheck check_real_network(RealNetwork& net, const Matrix& input,
                                        const Matrix& target) {
  RealForward fwd = real_forward(net, input);
  StackedRealLoss loss = stacked_loss(fwd.output, target);
  RealGradients grads = real_backward(net, fwd.cache, loss.grad);
  return finite_difference_check(
      parameter_planes(net), gradient_planes(grads),
      [&] { return direct_j(real_forward(net, input).output, target); });
}

}  // namespace vpnn::test
