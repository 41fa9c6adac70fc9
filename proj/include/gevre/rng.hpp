#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace gevre {

// Deterministic random stream on top of mt19937_64. Uniform and normal
// variates are generated from the raw 64-bit output so that draws are
// reproducible across platforms, not just across runs of the same binary
// (std::normal_distribution is implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed), seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  // Derive an independent child stream; splitmix64 mixing keeps streams
  // well separated even for adjacent ids.
  Rng child(std::uint64_t stream_id) const {
    std::uint64_t z = seed_ + 0x9e3779b97f4a7c15ULL * (stream_id + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return Rng(z ^ (z >> 31));
  }

  // Uniform on the open interval (0, 1).
  double uniform01() {
    std::uint64_t v = engine_() >> 11;  // 53 random bits
    return (static_cast<double>(v) + 0.5) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; the spare is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform01();
    double u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  double normal(double mean, double sd) { return mean + sd * normal(); }

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace gevre
