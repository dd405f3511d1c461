#pragma once

// Three-dimensional vector algebra and the vector-valued matrix product.
//
// A VecMatrix stores a rows x cols grid of 3-vectors as three real component
// planes, so the product of two VecMatrix values is six ordinary matrix
// products (see vec_matmul).

#include <array>
#include <Eigen/Dense>

namespace vpnn {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;

struct Vec3 {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;

  friend bool operator==(const Vec3&, const Vec3&) = default;
};

inline Vec3 operator+(const Vec3& a, const Vec3& b) {
  return {a.c1 + b.c1, a.c2 + b.c2, a.c3 + b.c3};
}
inline Vec3 operator-(const Vec3& a, const Vec3& b) {
  return {a.c1 - b.c1, a.c2 - b.c2, a.c3 - b.c3};
}
inline Vec3 operator-(const Vec3& a) { return {-a.c1, -a.c2, -a.c3}; }
inline Vec3 operator*(double s, const Vec3& a) {
  return {s * a.c1, s * a.c2, s * a.c3};
}

/// x × y = [x2y3 - x3y2, x3y1 - x1y3, x1y2 - x2y1]
inline Vec3 cross(const Vec3& x, const Vec3& y) {
  return {x.c2 * y.c3 - x.c3 * y.c2,
          x.c3 * y.c1 - x.c1 * y.c3,
          x.c1 * y.c2 - x.c2 * y.c1};
}

inline double dot(const Vec3& x, const Vec3& y) {
  return x.c1 * y.c1 + x.c2 * y.c2 + x.c3 * y.c3;
}

inline double norm_sq(const Vec3& x) { return dot(x, x); }

class VecMatrix {
 public:
  VecMatrix() = default;
  /// Zero-filled.
  VecMatrix(Index rows, Index cols);
  /// Throws ShapeMismatch unless the three planes share one shape.
  VecMatrix(Matrix p1, Matrix p2, Matrix p3);

  static VecMatrix Constant(Index rows, Index cols, const Vec3& value);

  Index rows() const { return planes_[0].rows(); }
  Index cols() const { return planes_[0].cols(); }

  // Plane k in {0,1,2}. Callers that write through the mutable overload must
  // keep the three shapes identical.
  const Matrix& plane(int k) const { return planes_[k]; }
  Matrix& plane(int k) { return planes_[k]; }
  const Matrix& p1() const { return planes_[0]; }
  const Matrix& p2() const { return planes_[1]; }
  const Matrix& p3() const { return planes_[2]; }

  Vec3 at(Index i, Index j) const {
    return {planes_[0](i, j), planes_[1](i, j), planes_[2](i, j)};
  }
  void set(Index i, Index j, const Vec3& v) {
    planes_[0](i, j) = v.c1;
    planes_[1](i, j) = v.c2;
    planes_[2](i, j) = v.c3;
  }

  bool same_shape(const VecMatrix& other) const {
    return rows() == other.rows() && cols() == other.cols();
  }

  friend bool operator==(const VecMatrix& a, const VecMatrix& b);

 private:
  std::array<Matrix, 3> planes_;
};

/// P ⊗ Q = [p2 q3 - p3 q2, p3 q1 - p1 q3, p1 q2 - p2 q1] with juxtaposition
/// meaning real matrix multiplication. Entry (i,k) equals Σ_j P(i,j) × Q(j,k).
VecMatrix vec_matmul(const VecMatrix& p, const VecMatrix& q);

/// Entry-by-entry Σ_j cross(P(i,j), Q(j,k)), ascending j. Reference for
/// vec_matmul; O(rows·inner·cols) scalar cross products.
VecMatrix vec_matmul_naive(const VecMatrix& p, const VecMatrix& q);

VecMatrix vm_add(const VecMatrix& a, const VecMatrix& b);
VecMatrix vm_sub(const VecMatrix& a, const VecMatrix& b);
VecMatrix vm_scale(const VecMatrix& a, double s);
/// Sum of squares over every entry of all three planes.
double vm_frob_sq(const VecMatrix& a);
/// Plane-wise transpose.
VecMatrix vm_transpose(const VecMatrix& a);

/// Stack `top` above `bottom` (same column count).
VecMatrix vm_vstack(const VecMatrix& top, const VecMatrix& bottom);
/// Rows [first, first + count).
VecMatrix vm_rows(const VecMatrix& a, Index first, Index count);

}  // namespace vpnn
