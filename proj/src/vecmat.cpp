#include "vpnn/vecmat.hpp"

#include <string>

#include "vpnn/error.hpp"

namespace vpnn {

namespace {

std::string shape_str(const VecMatrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_product_shapes(const VecMatrix& p, const VecMatrix& q,
                            const char* op) {
  if (p.cols() != q.rows()) {
    throw Error(ErrorKind::ShapeMismatch,
                std::string(op) + ": cannot multiply " + shape_str(p) +
                    " by " + shape_str(q));
  }
}

void require_same_shape(const VecMatrix& a, const VecMatrix& b,
                        const char* op) {
  if (!a.same_shape(b)) {
    throw Error(ErrorKind::ShapeMismatch, std::string(op) + ": " +
                                              shape_str(a) + " vs " +
                                              shape_str(b));
  }
}

}  // namespace

VecMatrix::VecMatrix(Index rows, Index cols)
    : planes_{Matrix::Zero(rows, cols), Matrix::Zero(rows, cols),
              Matrix::Zero(rows, cols)} {}

VecMatrix::VecMatrix(Matrix p1, Matrix p2, Matrix p3)
    : planes_{std::move(p1), std::move(p2), std::move(p3)} {
  for (int k = 1; k < 3; ++k) {
    if (planes_[k].rows() != planes_[0].rows() ||
        planes_[k].cols() != planes_[0].cols()) {
      throw Error(ErrorKind::ShapeMismatch,
                  "VecMatrix: component planes differ in shape");
    }
  }
}

VecMatrix VecMatrix::Constant(Index rows, Index cols, const Vec3& value) {
  return VecMatrix(Matrix::Constant(rows, cols, value.c1),
                   Matrix::Constant(rows, cols, value.c2),
                   Matrix::Constant(rows, cols, value.c3));
}

bool operator==(const VecMatrix& a, const VecMatrix& b) {
  if (!a.same_shape(b)) return false;
  for (int k = 0; k < 3; ++k) {
    if (a.planes_[k] != b.planes_[k]) return false;
  }
  return true;
}

VecMatrix vec_matmul(const VecMatrix& p, const VecMatrix& q) {
  require_product_shapes(p, q, "vec_matmul");
  const Index rows = p.rows();
  const Index cols = q.cols();
  Matrix r1(rows, cols), r2(rows, cols), r3(rows, cols);
  r1.noalias() = p.p2() * q.p3();
  r1.noalias() -= p.p3() * q.p2();
  r2.noalias() = p.p3() * q.p1();
  r2.noalias() -= p.p1() * q.p3();
  r3.noalias() = p.p1() * q.p2();
  r3.noalias() -= p.p2() * q.p1();
  return VecMatrix(std::move(r1), std::move(r2), std::move(r3));
}

VecMatrix vec_matmul_naive(const VecMatrix& p, const VecMatrix& q) {
  require_product_shapes(p, q, "vec_matmul_naive");
  VecMatrix out(p.rows(), q.cols());
  for (Index i = 0; i < p.rows(); ++i) {
    for (Index k = 0; k < q.cols(); ++k) {
      Vec3 acc;
      for (Index j = 0; j < p.cols(); ++j) {
        acc = acc + cross(p.at(i, j), q.at(j, k));
      }
      out.set(i, k, acc);
    }
  }
  return out;
}

VecMatrix vm_add(const VecMatrix& a, const VecMatrix& b) {
  require_same_shape(a, b, "vm_add");
  return VecMatrix(a.p1() + b.p1(), a.p2() + b.p2(), a.p3() + b.p3());
}

VecMatrix vm_sub(const VecMatrix& a, const VecMatrix& b) {
  require_same_shape(a, b, "vm_sub");
  return VecMatrix(a.p1() - b.p1(), a.p2() - b.p2(), a.p3() - b.p3());
}

VecMatrix vm_scale(const VecMatrix& a, double s) {
  return VecMatrix(a.p1() * s, a.p2() * s, a.p3() * s);
}

double vm_frob_sq(const VecMatrix& a) {
  return a.p1().squaredNorm() + a.p2().squaredNorm() + a.p3().squaredNorm();
}

VecMatrix vm_transpose(const VecMatrix& a) {
  return VecMatrix(a.p1().transpose(), a.p2().transpose(),
                   a.p3().transpose());
}

VecMatrix vm_vstack(const VecMatrix& top, const VecMatrix& bottom) {
  if (top.cols() != bottom.cols()) {
    throw Error(ErrorKind::ShapeMismatch, "vm_vstack: " + shape_str(top) +
                                              " over " + shape_str(bottom));
  }
  VecMatrix out(top.rows() + bottom.rows(), top.cols());
  for (int k = 0; k < 3; ++k) {
    out.plane(k) << top.plane(k), bottom.plane(k);
  }
  return out;
}

VecMatrix vm_rows(const VecMatrix& a, Index first, Index count) {
  if (first < 0 || count < 0 || first + count > a.rows()) {
    throw Error(ErrorKind::ShapeMismatch, "vm_rows: range out of bounds");
  }
  return VecMatrix(a.p1().middleRows(first, count),
                   a.p2().middleRows(first, count),
                   a.p3().middleRows(first, count));
}

}  // namespace vpnn
