#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace mdpa {

/// Values and costs are plain doubles indexed by state; a value function is a
/// vector with one entry per state.
using ValueVec = std::vector<double>;

/// Affine rescaling of the per-step cost: c(s,a) -> scale * c(s,a) + shift.
/// The identity transform (scale 1, shift 0) leaves a model unchanged.
/// Rescaling does not change which policies are optimal; values move by
/// v -> scale * v + shift / (1 - discount).
struct AffineTransform {
    double scale = 1.0;
    double shift = 0.0;

    bool is_identity() const { return scale == 1.0 && shift == 0.0; }
};

inline void require_valid(const AffineTransform& t) {
    if (!(t.scale > 0.0) || !std::isfinite(t.scale) || !std::isfinite(t.shift))
        throw std::invalid_argument("cost transform needs finite shift and scale > 0");
}

/// Thrown when an iterative solver fails to reach its tolerance within the
/// iteration budget. Carries the last observed residual for diagnostics.
class SolveError : public std::runtime_error {
  public:
    SolveError(const std::string& what, double residual, long iterations)
        : std::runtime_error(what + " (residual " + std::to_string(residual) + " after " +
                             std::to_string(iterations) + " iterations)"),
          residual_(residual),
          iterations_(iterations) {}

    double residual() const { return residual_; }
    long iterations() const { return iterations_; }

  private:
    double residual_;
    long iterations_;
};

/// Controls for the iterative solvers. `tol` is the certified sup-norm
/// distance to the exact fixed point of the returned value function.
/// `parallel = false` forces the serial reference kernels; results agree with
/// the parallel kernels up to floating-point summation order.
struct SolveOptions {
    double tol = 1e-9;
    long max_iter = 100000;
    bool parallel = true;
};

/// Strictness margin for the certificate gate discount * kappa < 1. Kappa
/// values are compared exactly; only this gate carries a tolerance.
inline constexpr double kCertGateMargin = 1e-12;

inline bool cert_gate_ok(double discount, double kappa) {
    return discount * kappa < 1.0 - kCertGateMargin;
}

}  // namespace mdpa
