#ifndef CAUCHYCR_UTIL_HPP
#define CAUCHYCR_UTIL_HPP

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cauchycr {

/// Bad user input (mesh parameters, config values, incompatible spaces...).
class ValidationError : public std::runtime_error {
public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Linear solver breakdown (singular factorization, stagnated iteration).
class SolverError : public std::runtime_error {
public:
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

/// Scalar field R^2 -> R.
using ScalarField = std::function<double(double, double)>;

/// splitmix64 finalizer; the basis of every deterministic pseudo-random
/// stream in the project (mesh jitter, seeded noise, test generators).
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

/// Hash of (seed, index, salt) mapped to [-1, 1].
inline double hash_unit(std::uint64_t seed, std::uint64_t index, std::uint64_t salt) {
  const std::uint64_t h = splitmix64(seed ^ splitmix64(index ^ splitmix64(salt)));
  // 53 high bits -> [0,1) -> [-1,1)
  return 2.0 * static_cast<double>(h >> 11) * 0x1.0p-53 - 1.0;
}

/// FNV-1a over a byte string; used for config digests.
inline std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

double dot(const std::vector<double>& a, const std::vector<double>& b);
double norm2(const std::vector<double>& a);

/// printf("%.17g") formatting; round-trips doubles exactly and is
/// byte-stable across runs, which the CSV determinism contract needs.
std::string format_g17(double v);

} // namespace cauchycr

#endif
