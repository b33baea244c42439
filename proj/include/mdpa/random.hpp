#pragma once

#include <cstdint>
#include <vector>

namespace mdpa {

/// Small deterministic generator (splitmix64). Used wherever reproducible
/// streams matter (random test suites, CLI --seed): the standard library
/// distributions are not bit-stable across implementations, so we map raw
/// 64-bit outputs to doubles ourselves.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in {0, ..., n-1}.
    int uniform_int(int n) { return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n)); }

    /// Random probability vector of length n (normalized positive entries,
    /// rounding residual folded into the largest entry so sums are exact).
    std::vector<double> simplex(int n) {
        std::vector<double> p(n);
        double total = 0.0;
        for (auto& x : p) {
            x = 1e-3 + uniform();
            total += x;
        }
        int top = 0;
        for (int i = 0; i < n; ++i) {
            p[i] /= total;
            if (p[i] > p[top]) top = i;
        }
        // Fold the rounding residual into the largest entry until the
        // left-to-right sum is exactly 1.0 (converges in a pass or two).
        for (int pass = 0; pass < 64; ++pass) {
            double sum = 0.0;
            for (double x : p) sum += x;
            if (sum == 1.0) break;
            p[top] += 1.0 - sum;
        }
        return p;
    }

  private:
    std::uint64_t state_;
};

}  // namespace mdpa
