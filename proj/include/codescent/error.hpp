#ifndef CODESCENT_ERROR_HPP
#define CODESCENT_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace codescent {

enum class ErrorKind {
  MissingComposite,
  NonAssociative,
  BadIdentity,
  BadCategory,
  BadShapeParams,
  UnknownObject,
  UnknownMorphism,
  NotAComplex,
  ShapeMismatch,
  PrimeMismatch,
  NotAFunctor,
  NotNatural,
  NonCommutingSquare,
  InvalidWitness,
  DNotFull,
  DNotDiscrete,
  FocusInD,
  NotACover,
  Parse,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MissingComposite: return "MissingComposite";
    case ErrorKind::NonAssociative: return "NonAssociative";
    case ErrorKind::BadIdentity: return "BadIdentity";
    case ErrorKind::BadCategory: return "BadCategory";
    case ErrorKind::BadShapeParams: return "BadShapeParams";
    case ErrorKind::UnknownObject: return "UnknownObject";
    case ErrorKind::UnknownMorphism: return "UnknownMorphism";
    case ErrorKind::NotAComplex: return "NotAComplex";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::PrimeMismatch: return "PrimeMismatch";
    case ErrorKind::NotAFunctor: return "NotAFunctor";
    case ErrorKind::NotNatural: return "NotNatural";
    case ErrorKind::NonCommutingSquare: return "NonCommutingSquare";
    case ErrorKind::InvalidWitness: return "InvalidWitness";
    case ErrorKind::DNotFull: return "DNotFull";
    case ErrorKind::DNotDiscrete: return "DNotDiscrete";
    case ErrorKind::FocusInD: return "FocusInD";
    case ErrorKind::NotACover: return "NotACover";
    case ErrorKind::Parse: return "Parse";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a kind so callers (and the CLI
/// exit-code mapping) can dispatch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace codescent

#endif  // CODESCENT_ERROR_HPP
