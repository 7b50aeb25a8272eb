#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace nctopos {

  // Element, object and arrow ids are dense indices into the owning table.
  using Index = std::uint32_t;
  inline constexpr Index kNone = ~Index{0};

  enum class ErrorKind {
    MissingComposite,
    NonAssociative,
    BadIdentity,
    BadComposite,
    UnknownObject,
    UnknownArrow,
    UnknownElement,
    CodMismatch,
    SiteMismatch,
    NotAPresheaf,
    NotNatural,
    EmptyP,
    NotACongruence,
    BadEmbedding,
    NoGlobalSection,
    TargetMismatch,
    NotAClassifier,
    AxiomFailure,
    PreconditionViolated,
    NotStable,
    BoundTooLarge,
    TooLarge,
    Parse,
    Unsupported,
  };

  std::string_view to_string(ErrorKind kind) noexcept;

  // Every failure raised by the library carries a kind and a message that
  // names the offending ids.
  class Error : public std::runtime_error {
   public:
    Error(ErrorKind kind, std::string const& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what),
          _kind(kind) {}

    ErrorKind kind() const noexcept {
      return _kind;
    }

   private:
    ErrorKind _kind;
  };

}  // namespace nctopos
