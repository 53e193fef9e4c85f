#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace netsync {

// Every domain failure carries a stable name so the CLI can report it on the
// diagnostic stream and tests can match on it.
class Error : public std::runtime_error {
 public:
  Error(std::string_view name, const std::string& what)
      : std::runtime_error(what), name_(name) {}

  std::string_view name() const noexcept { return name_; }

 private:
  std::string_view name_;
};

#define NETSYNC_DEFINE_ERROR(Type)                                   \
  class Type : public Error {                                        \
   public:                                                           \
    explicit Type(const std::string& what) : Error(#Type, what) {}   \
  };

NETSYNC_DEFINE_ERROR(InvalidTopology)
NETSYNC_DEFINE_ERROR(InvalidLaplacian)
NETSYNC_DEFINE_ERROR(EigensolverFailure)
NETSYNC_DEFINE_ERROR(DefectiveMatrix)
NETSYNC_DEFINE_ERROR(PreconditionViolation)
NETSYNC_DEFINE_ERROR(ArgumentMarginViolation)
NETSYNC_DEFINE_ERROR(RealizationResidue)
NETSYNC_DEFINE_ERROR(DimensionMismatch)
NETSYNC_DEFINE_ERROR(RankDeficient)
NETSYNC_DEFINE_ERROR(ZeroGain)

#undef NETSYNC_DEFINE_ERROR

}  // namespace netsync
