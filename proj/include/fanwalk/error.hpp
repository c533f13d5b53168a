#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fanwalk {

enum class Errc {
  SingularMatrix,
  NotUnitVector,
  ZeroRow,
  ZeroObjective,
  RankDeficient,
  InvalidInput,
  NonIntegerEntries,
  TooLarge,
  InfeasibleBasis,
  UnboundedEdge,
  DegeneratePivot,
  UnboundedLP,
  IterationLimit,
  NoLargeCoefficient,
  ObjectiveVanishes,
  RetriesExhausted,
  CertificationFailed,
};

inline std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::SingularMatrix: return "SingularMatrix";
    case Errc::NotUnitVector: return "NotUnitVector";
    case Errc::ZeroRow: return "ZeroRow";
    case Errc::ZeroObjective: return "ZeroObjective";
    case Errc::RankDeficient: return "RankDeficient";
    case Errc::InvalidInput: return "InvalidInput";
    case Errc::NonIntegerEntries: return "NonIntegerEntries";
    case Errc::TooLarge: return "TooLarge";
    case Errc::InfeasibleBasis: return "InfeasibleBasis";
    case Errc::UnboundedEdge: return "UnboundedEdge";
    case Errc::DegeneratePivot: return "DegeneratePivot";
    case Errc::UnboundedLP: return "UnboundedLP";
    case Errc::IterationLimit: return "IterationLimit";
    case Errc::NoLargeCoefficient: return "NoLargeCoefficient";
    case Errc::ObjectiveVanishes: return "ObjectiveVanishes";
    case Errc::RetriesExhausted: return "RetriesExhausted";
    case Errc::CertificationFailed: return "CertificationFailed";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace fanwalk
