#pragma once

// Real magnitude <-> 3-vector encodings: a context window of neighbouring
// frames, and a piecewise-linear "hot" colour ramp.

#include <string_view>

#include "vpnn/vecmat.hpp"

namespace vpnn {

/// Normalized magnitudes in [0,1] plus the factor that maps them back.
struct MagnitudeMatrix {
  Matrix data;  // bins x frames
  double scale = 1.0;
};

inline constexpr double kNormalizationFloor = 1e-12;

/// scale = max(max entry, floor); data = mag / scale, clamped to [0,1].
MagnitudeMatrix normalize(const Matrix& mag);
/// Normalize with an externally chosen scale (the mixture's), so stems
/// louder than the mixture peak clamp at 1.
MagnitudeMatrix normalize(const Matrix& mag, double scale);
Matrix denormalize(const MagnitudeMatrix& s);

enum class TransformKind { None, Window, Color };

std::string_view to_string(TransformKind kind);
TransformKind parse_transform_kind(std::string_view name);

// ---------------------------------------------------------------------------
// Context window: (previous, current, subsequent) frame per t-f unit. Edge
// frames are replicated.

VecMatrix window_encode(const Matrix& frames);
/// Plane 2, clamped to [0,1].
Matrix window_decode(const VecMatrix& v);

/// Real-valued stacking of the same three frames, [previous; current;
/// subsequent] along rows (3F x T).
Matrix context_stack(const Matrix& frames);

// ---------------------------------------------------------------------------
// Colour ramp:
//   r = clamp(x / n), g = clamp((x - n) / n), b = clamp((x - 2n) / (1 - 2n))

struct ColorParams {
  double n = 0.0938;

  /// Throws InvalidArgument unless 0 < n < 0.5.
  void validate() const;
};

Vec3 color_encode(double x, const ColorParams& p);
/// Nearest point of the ramp to `rgb` (Euclidean), as the x in [0,1] that
/// produces it. Exact inverse for points on the ramp.
double color_decode(const Vec3& rgb, const ColorParams& p);

/// Throws InvalidArgument if an entry falls outside [0,1].
VecMatrix color_encode(const Matrix& s, const ColorParams& p);
Matrix color_decode(const VecMatrix& v, const ColorParams& p);

}  // namespace vpnn
