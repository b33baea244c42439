#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mdpa/types.hpp"

namespace mdpa {

struct SuiteConfig {
    int instances = 200;
    std::uint64_t seed = 7;
    int max_states = 8;
    int max_actions = 4;
    /// Random (f, p, q) duality triples per metric family per instance.
    int duality_samples = 5;
    SolveOptions solve{};
};

struct SuiteReport {
    int instances = 0;
    long checks = 0;
    long violations = 0;
    /// First violation descriptions (capped), for diagnostics.
    std::vector<std::string> failures;

    bool ok() const { return violations == 0; }
};

/// Randomized soundness battery over small finite model pairs with a
/// model-level stability certificate: every bound family must dominate its
/// realized quantity, distance surrogates must dominate the exact mismatch
/// functionals they replace, cost-transformed bounds must be consistent with
/// transforming the model, and each metric family must satisfy the duality
/// inequality and the metric axioms. Deterministic in (instances, seed).
SuiteReport run_random_suite(const SuiteConfig& cfg = {});

struct LqrSuiteConfig {
    int instances = 100;
    std::uint64_t seed = 11;
};

/// Randomized scalar and 2-D linear-quadratic pairs whose stability
/// certificate passes: the closed-form loss bound must dominate the realized
/// weighted gap, the auto shift must not lose to the zero shift, and the
/// approximate Riccati solution must be self-consistent.
SuiteReport run_lqr_suite(const LqrSuiteConfig& cfg = {});

}  // namespace mdpa
