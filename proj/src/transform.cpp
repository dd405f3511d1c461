#include "vpnn/transform.hpp"

#include <algorithm>
#include <array>
#include <string>

#include "vpnn/error.hpp"

namespace vpnn {

MagnitudeMatrix normalize(const Matrix& mag) {
  const double peak = mag.size() > 0 ? mag.maxCoeff() : 0.0;
  return normalize(mag, std::max(peak, kNormalizationFloor));
}

MagnitudeMatrix normalize(const Matrix& mag, double scale) {
  if (!(scale > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "normalize: scale must be > 0");
  }
  if (mag.size() > 0 && mag.minCoeff() < 0.0) {
    throw Error(ErrorKind::InvalidArgument,
                "normalize: magnitudes must be nonnegative");
  }
  return {(mag / scale).cwiseMin(1.0), scale};
}

Matrix denormalize(const MagnitudeMatrix& s) { return s.data * s.scale; }

std::string_view to_string(TransformKind kind) {
  switch (kind) {
    case TransformKind::None: return "none";
    case TransformKind::Window: return "window";
    case TransformKind::Color: return "color";
  }
  return "?";
}

TransformKind parse_transform_kind(std::string_view name) {
  for (TransformKind k :
       {TransformKind::None, TransformKind::Window, TransformKind::Color}) {
    if (name == to_string(k)) return k;
  }
  throw Error(ErrorKind::Config, "unknown transform '" + std::string(name) +
                                     "' (expected none, window or color)");
}

// ---------------------------------------------------------------------------

namespace {

void require_frames(const Matrix& frames, const char* op) {
  if (frames.rows() == 0 || frames.cols() == 0) {
    throw Error(ErrorKind::InvalidArgument,
                std::string(op) + ": empty magnitude matrix");
  }
}

// Column t-1 / t+1 with edge replication.
Matrix shift_previous(const Matrix& s) {
  Matrix out(s.rows(), s.cols());
  out.col(0) = s.col(0);
  out.rightCols(s.cols() - 1) = s.leftCols(s.cols() - 1);
  return out;
}

Matrix shift_subsequent(const Matrix& s) {
  Matrix out(s.rows(), s.cols());
  out.leftCols(s.cols() - 1) = s.rightCols(s.cols() - 1);
  out.col(s.cols() - 1) = s.col(s.cols() - 1);
  return out;
}

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

VecMatrix window_encode(const Matrix& frames) {
  require_frames(frames, "window_encode");
  return VecMatrix(shift_previous(frames), frames, shift_subsequent(frames));
}

Matrix window_decode(const VecMatrix& v) {
  return v.p2().cwiseMax(0.0).cwiseMin(1.0);
}

Matrix context_stack(const Matrix& frames) {
  require_frames(frames, "context_stack");
  Matrix out(3 * frames.rows(), frames.cols());
  out << shift_previous(frames), frames, shift_subsequent(frames);
  return out;
}

// ---------------------------------------------------------------------------

void ColorParams::validate() const {
  if (!(n > 0.0 && n < 0.5)) {
    throw Error(ErrorKind::InvalidArgument,
                "color transform parameter n must satisfy 0 < n < 0.5, got " +
                    std::to_string(n));
  }
}

Vec3 color_encode(double x, const ColorParams& p) {
  const double n = p.n;
  return {clamp01(x / n), clamp01((x - n) / n),
          clamp01((x - 2.0 * n) / (1.0 - 2.0 * n))};
}

double color_decode(const Vec3& rgb, const ColorParams& p) {
  const double n = p.n;
  // The ramp is three unit segments, each moving along one axis:
  //   red   (0,0,0) -> (1,0,0)  for x in [0, n]
  //   green (1,0,0) -> (1,1,0)  for x in [n, 2n]
  //   blue  (1,1,0) -> (1,1,1)  for x in [2n, 1]
  // Projecting onto a segment clamps the moving coordinate to [0,1].
  struct Candidate {
    double dist_sq;
    double x;
  };
  const double ur = clamp01(rgb.c1);
  const double ug = clamp01(rgb.c2);
  const double ub = clamp01(rgb.c3);
  auto sq = [](double v) { return v * v; };
  const std::array<Candidate, 3> candidates{{
      {sq(rgb.c1 - ur) + sq(rgb.c2) + sq(rgb.c3), ur * n},
      {sq(rgb.c1 - 1.0) + sq(rgb.c2 - ug) + sq(rgb.c3), n + ug * n},
      {sq(rgb.c1 - 1.0) + sq(rgb.c2 - 1.0) + sq(rgb.c3 - ub),
       2.0 * n + ub * (1.0 - 2.0 * n)},
  }};
  const Candidate* best = &candidates[0];
  for (const auto& c : candidates) {
    if (c.dist_sq < best->dist_sq) best = &c;
  }
  return clamp01(best->x);
}

VecMatrix color_encode(const Matrix& s, const ColorParams& p) {
  p.validate();
  VecMatrix out(s.rows(), s.cols());
  for (Index j = 0; j < s.cols(); ++j) {
    for (Index i = 0; i < s.rows(); ++i) {
      const double x = s(i, j);
      if (!(x >= 0.0 && x <= 1.0)) {
        throw Error(ErrorKind::InvalidArgument,
                    "color_encode: entry " + std::to_string(x) +
                        " outside [0,1]");
      }
      out.set(i, j, color_encode(x, p));
    }
  }
  return out;
}

Matrix color_decode(const VecMatrix& v, const ColorParams& p) {
  p.validate();
  Matrix out(v.rows(), v.cols());
  for (Index j = 0; j < v.cols(); ++j) {
    for (Index i = 0; i < v.rows(); ++i) out(i, j) = color_decode(v.at(i, j), p);
  }
  return out;
}

}  // namespace vpnn
