#ifndef TSINFO_ERROR_HPP
#define TSINFO_ERROR_HPP

#include <stdexcept>
#include <string>

namespace tsinfo {

/// Typed failure conditions. Degenerate inputs surface as one of these,
/// never as NaN/Inf results or crashes.
enum class Errc {
  ZeroVariance,
  OutOfRange,
  EmptyAlignment,
  DomainError,
  SingularCovariance,
  DegenerateGeometry,
  EmptyNeighborhood,
  PerfectCorrelation,
  RankDeficient,
  NonStationary,
  UnsupportedOrder,
  UnsupportedMeasure,
  ParseError,
  RaggedRows,
  DuplicateHeader,
  InvalidArgument,
};

const char* to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

inline const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::ZeroVariance: return "ZeroVariance";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::EmptyAlignment: return "EmptyAlignment";
    case Errc::DomainError: return "DomainError";
    case Errc::SingularCovariance: return "SingularCovariance";
    case Errc::DegenerateGeometry: return "DegenerateGeometry";
    case Errc::EmptyNeighborhood: return "EmptyNeighborhood";
    case Errc::PerfectCorrelation: return "PerfectCorrelation";
    case Errc::RankDeficient: return "RankDeficient";
    case Errc::NonStationary: return "NonStationary";
    case Errc::UnsupportedOrder: return "UnsupportedOrder";
    case Errc::UnsupportedMeasure: return "UnsupportedMeasure";
    case Errc::ParseError: return "ParseError";
    case Errc::RaggedRows: return "RaggedRows";
    case Errc::DuplicateHeader: return "DuplicateHeader";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "UnknownError";
}

}  // namespace tsinfo

#endif  // TSINFO_ERROR_HPP
