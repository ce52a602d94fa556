#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qsd {

/// Base of every error raised by the library.  `code()` is module-qualified,
/// e.g. "specfun.NonConvergenceError", and is what the CLI prints in its error record.
class Error : public std::runtime_error {
 public:
  Error(std::string_view module, std::string_view kind, const std::string& what)
      : std::runtime_error(what), code_(std::string(module) + "." + std::string(kind)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

#define QSD_DEFINE_ERROR(Name)                                         \
  class Name : public Error {                                          \
   public:                                                             \
    Name(std::string_view module, const std::string& what)             \
        : Error(module, #Name, what) {}                                \
  };

QSD_DEFINE_ERROR(PoleError)
QSD_DEFINE_ERROR(DenominatorPoleError)
QSD_DEFINE_ERROR(ParameterPoleError)
QSD_DEFINE_ERROR(NonConvergenceError)
QSD_DEFINE_ERROR(EvaluationDomainError)
QSD_DEFINE_ERROR(DivergenceError)
QSD_DEFINE_ERROR(DomainError)
QSD_DEFINE_ERROR(ImaginaryResidueError)
QSD_DEFINE_ERROR(InvalidBracketError)
QSD_DEFINE_ERROR(BracketFailure)
QSD_DEFINE_ERROR(ConfigError)
QSD_DEFINE_ERROR(AllAbsorbedError)
QSD_DEFINE_ERROR(MismatchedAError)

#undef QSD_DEFINE_ERROR

}  // namespace qsd
