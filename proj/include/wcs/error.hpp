#ifndef WCS_ERROR_HPP
#define WCS_ERROR_HPP

#include <stdexcept>
#include <string>

namespace wcs {

// Base for every error raised by the engine. The CLI maps subclasses to
// distinct exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "error"; }
};

#define WCS_DEFINE_ERROR(Name, tag)                     \
  class Name : public Error {                           \
   public:                                              \
    using Error::Error;                                 \
    const char* kind() const noexcept override { return tag; } \
  };

WCS_DEFINE_ERROR(ModelError, "model-invalid")
WCS_DEFINE_ERROR(IncompleteAssignment, "incomplete-assignment")
WCS_DEFINE_ERROR(ZeroEvidence, "zero-evidence")
WCS_DEFINE_ERROR(WidthGuard, "width-guard")
WCS_DEFINE_ERROR(TrappedState, "trapped-state")
WCS_DEFINE_ERROR(ParameterError, "parameter")
WCS_DEFINE_ERROR(FormatError, "format")
WCS_DEFINE_ERROR(InsufficientChains, "insufficient-chains")
WCS_DEFINE_ERROR(KeyMismatch, "key-mismatch")
WCS_DEFINE_ERROR(ZeroBelief, "zero-belief")

#undef WCS_DEFINE_ERROR

}  // namespace wcs

#endif  // WCS_ERROR_HPP
