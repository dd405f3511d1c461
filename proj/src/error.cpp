#include "vpnn/error.hpp"

namespace vpnn {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ShapeMismatch: return "shape-mismatch";
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Io: return "io";
    case ErrorKind::Checksum: return "checksum";
    case ErrorKind::Version: return "version";
    case ErrorKind::Config: return "config";
    case ErrorKind::Divergence: return "divergence";
    case ErrorKind::EmptySplit: return "empty-split";
    case ErrorKind::Degenerate: return "degenerate";
  }
  return "unknown";
}

}  // namespace vpnn
