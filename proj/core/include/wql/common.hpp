#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace wql {

enum class ErrKind {
  Argument,           // bad parameter values
  Resolution,         // grid too fine / too coarse for the operation
  Budget,             // problem size exceeds configured limits
  DegenerateSupport,  // restriction produced an (effectively) empty measure
  Precondition,       // operation-specific precondition violated
  Io,                 // file / parse problems
  Numerical,          // solver infeasibility and friends
};

class Error : public std::runtime_error {
 public:
  Error(ErrKind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
  ErrKind kind() const { return kind_; }

 private:
  ErrKind kind_;
};

/// Volume of the d-dimensional Euclidean unit ball.
inline double unit_ball_volume(int d) {
  return std::pow(M_PI, d / 2.0) / std::tgamma(d / 2.0 + 1.0);
}

/// Deterministic 64-bit generator (splitmix64 update). All point-set
/// randomness goes through this so runs reproduce bit-identically.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1).
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

/// Shortest decimal string that parses back to exactly `v`.
std::string format_double(double v);

}  // namespace wql
