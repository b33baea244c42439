#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mdpa/model_pair.hpp"
#include "mdpa/weighting.hpp"

namespace mdpa {

enum class IpmFamily {
    total_variation,           // d = sum |p - q|,      gauge = (max v - min v) / 2
    wasserstein,               // d = optimal transport, gauge = Lipschitz constant
    weighted_total_variation,  // d = sum w |p - q|,    gauge = sup |v_i - v_j| / (w_i + w_j)
};

/// A probability metric of the form d(p, q) = sup_{f in F} |sum_i f_i (p_i - q_i)|
/// over a unit ball F of test vectors, paired with the gauge
/// rho(v) = inf { r > 0 : v / r in F }, so that for every v
///
///     | sum_i v_i (p_i - q_i) |  <=  gauge(v) * distance(p, q).
///
/// Three balls are supported: span <= 2 (total variation), Lipschitz <= 1
/// for a ground metric on the points (Wasserstein; the reported distance is
/// the exact optimal-transport cost, an upper bound on the sup over the ball
/// restricted to weight-bounded vectors), and oscillation-relative-to-a-weight
/// <= 1 (weighted total variation, whose distance has the closed form
/// sum w |p - q|).
class IpmKind {
  public:
    static IpmKind total_variation();

    /// Wasserstein on points living at 1-D positions with ground metric
    /// |x_i - x_j|. Strictly increasing positions get the exact
    /// cumulative-difference formula; otherwise the positions are expanded
    /// into an explicit ground matrix solved by exact transport.
    static IpmKind wasserstein(std::vector<double> positions);

    /// Wasserstein with an explicit ground metric (row-major n x n, exact
    /// zero diagonal, symmetric, positive off the diagonal, triangle
    /// inequality up to rounding). Distances solve an exact transport
    /// problem on the support of p - q.
    static IpmKind wasserstein(std::vector<double> metric, int n);

    static IpmKind weighted_total_variation(WeightFn w);

    IpmFamily family() const { return family_; }
    /// Required length of distributions/vectors; 0 means any length.
    int dimension() const { return dim_; }
    /// Short tag used in bound-report rule strings: "tv", "w1", "wtv".
    const std::string& name() const { return name_; }

    double distance(std::span<const double> p, std::span<const double> q) const;
    /// Distance between two sparse rows (sorted by destination, as stored
    /// in FiniteMdp).
    double distance(std::span<const Transition> p, std::span<const Transition> q) const;

    /// Gauge of v: +infinity when no rescaling of v fits in the ball (only
    /// possible for degenerate ground metrics with coincident points).
    double gauge(std::span<const double> v) const;

  private:
    IpmKind() = default;

    IpmFamily family_ = IpmFamily::total_variation;
    int dim_ = 0;
    std::string name_;
    std::vector<double> positions_;    // wasserstein (1-D form)
    std::vector<double> metric_;       // wasserstein (explicit form)
    std::optional<WeightFn> weight_;   // weighted total variation
};

/// Weighted distances between the two models of a pair along a pair of
/// deterministic policies (pi acts in the true model, pi_hat in the
/// approximate one):
///
///   cost_gap   = sup_s |scale * c_pi(s) + shift - chat_pihat(s)| / w(s)
///   kernel_gap = sup_s d(P_pi(.|s), Phat_pihat(.|s)) / w(s)
struct ModelDistance {
    double cost_gap = 0.0;
    double kernel_gap = 0.0;
    int arg_cost = -1;    // state attaining cost_gap
    int arg_kernel = -1;  // state attaining kernel_gap
};

ModelDistance model_distance(const ModelPair& pair, const Policy& pi, const Policy& pi_hat,
                             const WeightFn& w, const IpmKind& kind, AffineTransform t = {});

/// Same gaps taken over every state-action pair instead of along policies.
ModelDistance model_distance_max(const ModelPair& pair, const WeightFn& w, const IpmKind& kind,
                                 AffineTransform t = {});

/// Uniform surrogate for a mismatch functional evaluated at a vector with
/// the given gauge: cost_gap + discount * gauge_v * kernel_gap.
double mismatch_from_distance(const ModelDistance& dist, double gauge_v, double discount);

/// Free-function forms of the metric and its gauge.
inline double ipm_distance(std::span<const double> p, std::span<const double> q,
                           const IpmKind& kind) {
    return kind.distance(p, q);
}
inline double minkowski(std::span<const double> v, const IpmKind& kind) { return kind.gauge(v); }

}  // namespace mdpa
