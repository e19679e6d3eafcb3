#pragma once

#include <stdexcept>
#include <string>

namespace mpflux {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UndefinedCombination : Error { using Error::Error; };
struct IndexOutOfRange : Error { using Error::Error; };

struct NonConforming : Error { using Error::Error; };
struct InvertedCell : Error { using Error::Error; };
struct NonAffineCell : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct UnknownFamily : Error { using Error::Error; };

struct SingularConductivity : Error { using Error::Error; };
struct NonSPDBlock : Error { using Error::Error; };
struct NoConvergence : Error { using Error::Error; };
struct SingularSystem : Error { using Error::Error; };
struct SingularLocalSystem : Error { using Error::Error; };
struct DegenerateSequence : Error { using Error::Error; };
struct InvalidInput : Error { using Error::Error; };

}  // namespace mpflux
