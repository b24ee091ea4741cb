#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace milne {

enum class ErrorKind {
  // special functions
  PoleError,
  NonConvergence,
  ConnectionFormulaPole,
  // ode
  StepUnderflow,
  DomainError,
  NonPositiveAmplitude,
  ZeroEnergy,
  // milne core
  ZeroWronskian,
  AmplitudeVanishes,
  ImaginaryPartTooLarge,
  QuadratureFailure,
  NoAllowedRegion,
  GridTooCoarse,
  PhaseUnwrapFailure,
  // models
  ParameterOutOfRange,
  ComplexBranch,
  DegenerateDenominator,
  NoClosedForm,
  LevelOutOfRange,
  ZeroCrossing,
  BranchPoint,
  AsymmetricGrid,
  // quantize / oracle
  InvalidBracket,
  MaxIterations,
  BracketNotFound,
  IntegrationFailure,
  // cli
  ConfigError,
};

constexpr std::string_view to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::PoleError: return "PoleError";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::ConnectionFormulaPole: return "ConnectionFormulaPole";
    case ErrorKind::StepUnderflow: return "StepUnderflow";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::NonPositiveAmplitude: return "NonPositiveAmplitude";
    case ErrorKind::ZeroEnergy: return "ZeroEnergy";
    case ErrorKind::ZeroWronskian: return "ZeroWronskian";
    case ErrorKind::AmplitudeVanishes: return "AmplitudeVanishes";
    case ErrorKind::ImaginaryPartTooLarge: return "ImaginaryPartTooLarge";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
    case ErrorKind::NoAllowedRegion: return "NoAllowedRegion";
    case ErrorKind::GridTooCoarse: return "GridTooCoarse";
    case ErrorKind::PhaseUnwrapFailure: return "PhaseUnwrapFailure";
    case ErrorKind::ParameterOutOfRange: return "ParameterOutOfRange";
    case ErrorKind::ComplexBranch: return "ComplexBranch";
    case ErrorKind::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorKind::NoClosedForm: return "NoClosedForm";
    case ErrorKind::LevelOutOfRange: return "LevelOutOfRange";
    case ErrorKind::ZeroCrossing: return "ZeroCrossing";
    case ErrorKind::BranchPoint: return "BranchPoint";
    case ErrorKind::AsymmetricGrid: return "AsymmetricGrid";
    case ErrorKind::InvalidBracket: return "InvalidBracket";
    case ErrorKind::MaxIterations: return "MaxIterations";
    case ErrorKind::BracketNotFound: return "BracketNotFound";
    case ErrorKind::IntegrationFailure: return "IntegrationFailure";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

/// Single exception type for the library; `kind()` tells callers what failed.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace milne
