#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace pursuit {

/// Base class for all library errors. `kind()` is a stable machine-readable
/// tag used e.g. to key per-trial failure counters in experiment sweeps.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define PURSUIT_DEFINE_ERROR(Name)                          \
  class Name : public Error {                               \
   public:                                                  \
    explicit Name(const std::string& what = #Name)          \
        : Error(#Name, what) {}                             \
  }

PURSUIT_DEFINE_ERROR(DimensionMismatch);
PURSUIT_DEFINE_ERROR(RankDeficient);
PURSUIT_DEFINE_ERROR(InvalidSpec);
PURSUIT_DEFINE_ERROR(InvalidSparsity);
PURSUIT_DEFINE_ERROR(ZeroSignal);
PURSUIT_DEFINE_ERROR(NotEnoughCandidates);
PURSUIT_DEFINE_ERROR(DegenerateCandidates);
PURSUIT_DEFINE_ERROR(ConfigInvalid);
PURSUIT_DEFINE_ERROR(BudgetExceeded);
PURSUIT_DEFINE_ERROR(InvalidParams);
PURSUIT_DEFINE_ERROR(NoGuarantee);
PURSUIT_DEFINE_ERROR(GroundTruthRequired);
PURSUIT_DEFINE_ERROR(NotModeled);
PURSUIT_DEFINE_ERROR(IoError);

#undef PURSUIT_DEFINE_ERROR

}  // namespace pursuit
