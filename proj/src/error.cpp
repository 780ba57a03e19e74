#include "firmbreak/error.hpp"

namespace firmbreak {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Io: return "io";
    case ErrorKind::MalformedInput: return "malformed-input";
    case ErrorKind::DuplicateBin: return "duplicate-bin";
    case ErrorKind::NonContiguous: return "non-contiguous";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Range: return "range";
    case ErrorKind::InvalidSpec: return "invalid-spec";
    case ErrorKind::ZeroCount: return "zero-count";
    case ErrorKind::Underdetermined: return "underdetermined";
    case ErrorKind::DegenerateDesign: return "degenerate-design";
    case ErrorKind::NoIntersection: return "no-intersection";
    case ErrorKind::ExtrapolatedBreak: return "extrapolated-break";
    case ErrorKind::DegenerateFit: return "degenerate-fit";
    case ErrorKind::NoSolution: return "no-solution";
    case ErrorKind::DegenerateAnchor: return "degenerate-anchor";
    case ErrorKind::Instability: return "instability";
    case ErrorKind::Unsupported: return "unsupported-combination";
  }
  return "unknown";
}

}  // namespace firmbreak
