#pragma once

#include <stdexcept>
#include <string>

namespace bpn {

enum class ErrorCode {
  LengthMismatch,
  NegativeEntry,
  DuplicateVariable,
  UnknownName,
  ValueSetMismatch,
  ZeroMass,
  ParseError,
  IllTyped,
  NonAtomic,
  Incorrect,
  NotASubnet,
  PreconditionViolation,
  StaleRedex,
  NonAtomicEdge,
  WouldBreakCorrectness,
  NotNormal,
  SkeletonNotTree,
  NotAPartition,
  BadOrder,
  NotProper,
  NotBayesian,
  ZeroEvidence,
  InvalidCpt,
  CyclicGraph,
  Unsupported,
};

const char* error_name(ErrorCode code);

// Every domain failure in the library is reported through this type.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_name(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::NegativeEntry: return "NegativeEntry";
    case ErrorCode::DuplicateVariable: return "DuplicateVariable";
    case ErrorCode::UnknownName: return "UnknownName";
    case ErrorCode::ValueSetMismatch: return "ValueSetMismatch";
    case ErrorCode::ZeroMass: return "ZeroMass";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IllTyped: return "IllTyped";
    case ErrorCode::NonAtomic: return "NonAtomic";
    case ErrorCode::Incorrect: return "Incorrect";
    case ErrorCode::NotASubnet: return "NotASubnet";
    case ErrorCode::PreconditionViolation: return "PreconditionViolation";
    case ErrorCode::StaleRedex: return "StaleRedex";
    case ErrorCode::NonAtomicEdge: return "NonAtomicEdge";
    case ErrorCode::WouldBreakCorrectness: return "WouldBreakCorrectness";
    case ErrorCode::NotNormal: return "NotNormal";
    case ErrorCode::SkeletonNotTree: return "SkeletonNotTree";
    case ErrorCode::NotAPartition: return "NotAPartition";
    case ErrorCode::BadOrder: return "BadOrder";
    case ErrorCode::NotProper: return "NotProper";
    case ErrorCode::NotBayesian: return "NotBayesian";
    case ErrorCode::ZeroEvidence: return "ZeroEvidence";
    case ErrorCode::InvalidCpt: return "InvalidCpt";
    case ErrorCode::CyclicGraph: return "CyclicGraph";
    case ErrorCode::Unsupported: return "Unsupported";
  }
  return "Error";
}

}  // namespace bpn
