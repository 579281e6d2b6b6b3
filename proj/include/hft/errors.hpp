#pragma once

#include <stdexcept>
#include <string>

namespace hft {

// Base class for everything this library throws on purpose. The CLI maps
// these to exit code 2 (bad input) or 1 (verification failure) as appropriate.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Surgery slopes p/q need gcd(p,q) = 1; everything downstream assumes it.
struct NotCoprime : Error {
  NotCoprime(long long p, long long q)
      : Error("p and q must be coprime positive integers, got p=" +
              std::to_string(p) + " q=" + std::to_string(q)) {}
};

// Truncation orders below 16 leave no room for the guard bands.
struct TruncationTooSmall : Error {
  explicit TruncationTooSmall(int n)
      : Error("truncation order must be at least 16, got " + std::to_string(n)) {}
};

// Kernel extraction needs exactly one Smith diagonal entry that vanishes to
// working precision.
struct NoKernel : Error {
  explicit NoKernel(const std::string& msg) : Error("no kernel: " + msg) {}
};

struct AmbiguousKernel : Error {
  explicit AmbiguousKernel(const std::string& msg)
      : Error("ambiguous kernel: " + msg) {}
};

// sdiv(f, d) is only defined when val(d) <= val(f).
struct NotDivisible : Error {
  NotDivisible(int vd, int vf)
      : Error("division needs val(divisor)=" + std::to_string(vd) +
              " <= val(dividend)=" + std::to_string(vf)) {}
};

// A torsion exponent too close to the truncation order cannot be told apart
// from an artifact of truncation.
struct UnstableTorsion : Error {
  explicit UnstableTorsion(const std::string& msg)
      : Error("torsion order not stable under truncation: " + msg) {}
};

struct NotChainMap : Error {
  explicit NotChainMap(const std::string& msg)
      : Error("not a chain map: " + msg) {}
};

struct NotNullhomotopy : Error {
  explicit NotNullhomotopy(const std::string& msg)
      : Error("H0 is not a nullhomotopy of f1*f0: " + msg) {}
};

// Malformed input files / JSON payloads.
struct BadInput : Error {
  explicit BadInput(const std::string& msg) : Error("bad input: " + msg) {}
};

}  // namespace hft
