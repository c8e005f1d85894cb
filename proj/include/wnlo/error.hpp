#ifndef WNLO_ERROR_HPP
#define WNLO_ERROR_HPP

#include <stdexcept>
#include <string>

namespace wnlo {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

struct ParityError : Error {
  using Error::Error;
};

struct SequenceExhausted : Error {
  using Error::Error;
};

/// Wave speed reached the CFL speed; `lambda_needed` is the smallest admissible Λ seen.
struct CflError : Error {
  CflError(const std::string& what, long step_, double lambda_needed_)
      : Error(what), step(step_), lambda_needed(lambda_needed_) {}
  long step;
  double lambda_needed;
};

struct NonFiniteError : Error {
  NonFiniteError(const std::string& what, long step_) : Error(what), step(step_) {}
  long step;
};

struct MissingDataError : Error {
  using Error::Error;
};

struct GeometryError : Error {
  using Error::Error;
};

/// Jacobian of a characteristic ensemble reached zero inside (t_lo, t_hi].
struct BlowupSignal : Error {
  BlowupSignal(const std::string& what, double lo, double hi)
      : Error(what), t_lo(lo), t_hi(hi) {}
  double t_lo;
  double t_hi;
};

}  // namespace wnlo

#endif
