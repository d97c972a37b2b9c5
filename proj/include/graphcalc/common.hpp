// Shared plumbing: error taxonomy, deterministic RNG, stable hashing.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

namespace graphcalc {

enum class ErrorCode {
  DisconnectedGraph,
  ZeroMassVertex,
  NegativeWeight,
  AsymmetricInput,
  SizeOverflow,
  GraphMismatch,
  NotAnEdge,
  NotAntisymmetric,
  NotMeanZero,
  SingularFunction,
  EigensolverFailure,
  EmptySample,
  QuadratureUnderResolved,
  TailNotCertified,
  EmptyOmega,
  OmegaIsEverything,
  CoverDoesNotCover,
  TOutOfRange,
  DescentDiverged,
  DegenerateBall,
  StrategyUnsupported,
  NoInteriorVertices,
  EmptyAnnulus,
  SingularSystem,
  EmptyInterior,
  BallTooLarge,
  SpectralGap,
  BadInput,
  IoError,
};

inline const char* error_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::DisconnectedGraph: return "DisconnectedGraph";
    case ErrorCode::ZeroMassVertex: return "ZeroMassVertex";
    case ErrorCode::NegativeWeight: return "NegativeWeight";
    case ErrorCode::AsymmetricInput: return "AsymmetricInput";
    case ErrorCode::SizeOverflow: return "SizeOverflow";
    case ErrorCode::GraphMismatch: return "GraphMismatch";
    case ErrorCode::NotAnEdge: return "NotAnEdge";
    case ErrorCode::NotAntisymmetric: return "NotAntisymmetric";
    case ErrorCode::NotMeanZero: return "NotMeanZero";
    case ErrorCode::SingularFunction: return "SingularFunction";
    case ErrorCode::EigensolverFailure: return "EigensolverFailure";
    case ErrorCode::EmptySample: return "EmptySample";
    case ErrorCode::QuadratureUnderResolved: return "QuadratureUnderResolved";
    case ErrorCode::TailNotCertified: return "TailNotCertified";
    case ErrorCode::EmptyOmega: return "EmptyOmega";
    case ErrorCode::OmegaIsEverything: return "OmegaIsEverything";
    case ErrorCode::CoverDoesNotCover: return "CoverDoesNotCover";
    case ErrorCode::TOutOfRange: return "TOutOfRange";
    case ErrorCode::DescentDiverged: return "DescentDiverged";
    case ErrorCode::DegenerateBall: return "DegenerateBall";
    case ErrorCode::StrategyUnsupported: return "StrategyUnsupported";
    case ErrorCode::NoInteriorVertices: return "NoInteriorVertices";
    case ErrorCode::EmptyAnnulus: return "EmptyAnnulus";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::EmptyInterior: return "EmptyInterior";
    case ErrorCode::BallTooLarge: return "BallTooLarge";
    case ErrorCode::SpectralGap: return "SpectralGap";
    case ErrorCode::BadInput: return "BadInput";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

// FNV-1a; used to derive per-check seeds so that suites are reproducible
// independently of std::hash.
inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::uint64_t mix_seed(std::uint64_t master, std::string_view tag) {
  std::uint64_t h = fnv1a64(tag);
  h ^= master + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  return h;
}

// mt19937_64 is fully pinned by the standard; the Gaussian transform is done
// by hand because std::normal_distribution is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform() {  // [0, 1)
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  std::uint64_t next_u64() { return eng_(); }

  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(static_cast<double>(hi - lo + 1) * uniform());
  }

  double normal() {  // Box-Muller, cached pair
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    while (u1 <= 0.0) u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::mt19937_64 eng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

inline double sq(double x) { return x * x; }

}  // namespace graphcalc
