#include "nctopos/error.hpp"

namespace nctopos {

  std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
      case ErrorKind::MissingComposite: return "MissingComposite";
      case ErrorKind::NonAssociative: return "NonAssociative";
      case ErrorKind::BadIdentity: return "BadIdentity";
      case ErrorKind::BadComposite: return "BadComposite";
      case ErrorKind::UnknownObject: return "UnknownObject";
      case ErrorKind::UnknownArrow: return "UnknownArrow";
      case ErrorKind::UnknownElement: return "UnknownElement";
      case ErrorKind::CodMismatch: return "CodMismatch";
      case ErrorKind::SiteMismatch: return "SiteMismatch";
      case ErrorKind::NotAPresheaf: return "NotAPresheaf";
      case ErrorKind::NotNatural: return "NotNatural";
      case ErrorKind::EmptyP: return "EmptyP";
      case ErrorKind::NotACongruence: return "NotACongruence";
      case ErrorKind::BadEmbedding: return "BadEmbedding";
      case ErrorKind::NoGlobalSection: return "NoGlobalSection";
      case ErrorKind::TargetMismatch: return "TargetMismatch";
      case ErrorKind::NotAClassifier: return "NotAClassifier";
      case ErrorKind::AxiomFailure: return "AxiomFailure";
      case ErrorKind::PreconditionViolated: return "PreconditionViolated";
      case ErrorKind::NotStable: return "NotStable";
      case ErrorKind::BoundTooLarge: return "BoundTooLarge";
      case ErrorKind::TooLarge: return "TooLarge";
      case ErrorKind::Parse: return "Parse";
      case ErrorKind::Unsupported: return "Unsupported";
    }
    return "Unknown";
  }

}  // namespace nctopos
