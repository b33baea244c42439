#pragma once

#include <Eigen/Dense>
#include <optional>

#include "mdpa/types.hpp"

namespace mdpa {

using Matrix = Eigen::MatrixXd;

/// Discounted linear-quadratic model
///
///   s' = A s + B u + noise,   cost(s, u) = s^T Q s + u^T R u,
///
/// with zero-mean noise of covariance noise_cov. Policies are linear,
/// u = -K s, and value functions quadratic, V(s) = s^T P s + q.
struct LqrModel {
    Matrix a_mat;      // n_s x n_s
    Matrix b_mat;      // n_s x n_a
    Matrix q_mat;      // n_s x n_s, symmetric PSD
    Matrix r_mat;      // n_a x n_a, symmetric PD
    Matrix noise_cov;  // n_s x n_s, symmetric PSD
    double discount = 0.9;

    int state_dim() const { return static_cast<int>(a_mat.rows()); }
    int action_dim() const { return static_cast<int>(b_mat.cols()); }
};

/// Shape, symmetry (1e-10), definiteness (Q, noise_cov eigenvalues >=
/// -1e-10; R >= 1e-10), discount in (0,1), plus numeric rank tests:
/// (A, B) stabilizable and (A, Q^{1/2}) detectable.
void require_valid(const LqrModel& m);

/// Positive-semidefinite fixed point of the discounted Riccati map
///   P = Q + g A^T P A - g^2 A^T P B (R + g B^T P B)^{-1} B^T P A
/// found by fixed-point iteration from P_0 = Q, with the optimal gain
/// K = g (R + g B^T P B)^{-1} B^T P A and offset q = g Tr(noise_cov P)/(1-g),
/// so the optimal value is s^T P s + q and the optimal policy u = -K s.
struct RiccatiSolution {
    Matrix value;     // P
    Matrix gain;      // K
    double offset;    // q
    long iterations;
    double residual;  // spectral norm of the final map step
};

RiccatiSolution solve_riccati(const LqrModel& m, double tol = 1e-12, long max_iter = 100000);

/// Value of the linear policy u = -K s: the Lyapunov fixed point
/// P = (Q + K^T R K) + g (A - BK)^T P (A - BK), offset as above. Throws
/// SolveError when the closed loop diverges (residual growing for 20
/// consecutive iterations) or the iteration budget runs out.
struct LinearPolicyValue {
    Matrix value;
    double offset;
    long iterations;
    double residual;
};

LinearPolicyValue evaluate_linear_policy(const LqrModel& m, const Matrix& gain,
                                         double tol = 1e-12, long max_iter = 100000);

/// Stability certificate for the weight w(s) = 1 + ell s^T s: every relevant
/// closed loop must expand w by at most kappa = max(b_cov, b_gain), where
///   b_cov  = max over both models of 1 + ell Tr(noise_cov),
///   b_gain = max squared top singular value over the four closed loops
///            A - B K*, A - B Khat*, Ahat - Bhat Khat*, A - B K_greedy,
/// and K_greedy is the one-step greedy gain in the true model against the
/// approximate model's quadratic optimum. `valid` additionally requires the
/// strict gate discount * kappa < 1.
struct LqStabilityCert {
    double kappa = 0.0;
    double b_cov = 0.0;
    double b_gain = 0.0;
    double ell = 0.0;
    bool valid = false;
};

LqStabilityCert certify_lq_stability(const LqrModel& m, const LqrModel& m_hat, double ell,
                                     double tol = 1e-12);

/// Closed-form deployment-loss bound for a pair of LQR models under the
/// weight 1 + ell s^T s. With P_hat the approximate Riccati solution:
///
///   d_star  = (true Riccati map applied at P_hat) - P_hat
///   d_pihat = (Q + Khat^T R Khat + g (A - B Khat)^T P_hat (A - B Khat)) - P_hat
///   d_sigma = g Tr((noise_cov - noise_cov_hat) P_hat)
///   bound   = [ max(rho(d_star)/ell, |d_sigma + alpha2|)
///             + max(rho(d_pihat)/ell, |d_sigma + alpha2|) ] / (1 - g kappa)
///
/// where rho is the spectral radius. alpha2 = nullopt picks the minimizing
/// shift alpha2 = -d_sigma, collapsing the bound to
/// [rho(d_star) + rho(d_pihat)] / (ell (1 - g kappa)). Invalid certificates
/// yield certified = false and bound = +infinity.
struct LqrBoundReport {
    Matrix d_star;
    Matrix d_pihat;
    Matrix k_hat;
    double rho_d_star = 0.0;
    double rho_d_pihat = 0.0;
    double d_sigma = 0.0;
    double alpha2 = 0.0;  // the shift actually used
    double bound = 0.0;
    LqStabilityCert cert;
    bool certified = false;
};

LqrBoundReport lqr_performance_bound(const LqrModel& m, const LqrModel& m_hat, double ell,
                                     std::optional<double> alpha2 = std::nullopt,
                                     double tol = 1e-12);

/// Largest singular value.
double spectral_norm(const Matrix& a);
/// Largest absolute eigenvalue of a symmetric matrix (symmetrized first to
/// absorb rounding).
double spectral_radius_symmetric(const Matrix& d);
/// Exact supremum over states of |s^T D s + c| / (1 + ell s^T s) for
/// symmetric D and ell > 0: equals max(|c|, rho(D)/ell). This is the
/// weighted norm of the quadratic s^T D s + c, used for realized LQR gaps.
double weighted_quadratic_sup(const Matrix& d, double c, double ell);

}  // namespace mdpa
