#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace latbv {

enum class Err {
  WindowMismatch,
  NotInvertible,
  ParityMismatch,
  GradingMismatch,
  MixedParity,
  TooSmall,
  CurrentNotConserved,
  SingularLeadingBlock,
  SupportViolation,
  LaurentOverflow,
  SupportsNotOrdered,
  QMENotVerified,
  ProfileOutOfBulk,
  KernelNotBisolution,
  HypothesisFailed,
  FreeQMEFailed,
  AnomalyPresent,
  CMEDefect,
  ConfigInvalid,
  EigenFailure,
};

class Error : public std::runtime_error {
 public:
  Error(Err code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Err code() const { return code_; }

 private:
  Err code_;
};

[[noreturn]] inline void fail(Err code, const std::string& what) { throw Error(code, what); }

// Deterministic 64-bit generator (splitmix64). Used for randomized property
// checks; avoids std::uniform_* so the stream is identical across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // uniform in [0, n)
  std::uint64_t below(std::uint64_t n) { return next() % n; }

  // small signed integer in [-range, range]
  long small(long range) { return static_cast<long>(below(2 * range + 1)) - range; }

 private:
  std::uint64_t state_;
};

}  // namespace latbv
