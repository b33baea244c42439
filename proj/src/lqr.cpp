#include "mdpa/lqr.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace mdpa {
namespace {

constexpr double kSymTol = 1e-10;
constexpr double kPsdTol = 1e-10;

bool is_symmetric(const Matrix& a, double tol) {
    return a.rows() == a.cols() && (a - a.transpose()).cwiseAbs().maxCoeff() <= tol;
}

Matrix symmetrized(const Matrix& a) { return 0.5 * (a + a.transpose()); }

double min_eigenvalue(const Matrix& sym) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrized(sym), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

Matrix psd_sqrt(const Matrix& sym) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrized(sym));
    Eigen::VectorXd vals = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * vals.asDiagonal() * es.eigenvectors().transpose();
}

long numeric_rank(const Eigen::MatrixXcd& a) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0) return 0;
    double thresh = static_cast<double>(std::max(a.rows(), a.cols())) *
                    std::numeric_limits<double>::epsilon() * sv(0);
    long rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > thresh) ++rank;
    return rank;
}

// PBH tests: every eigenvalue of A on or outside the unit circle must be
// controllable (rank [A - lambda I, B] = n) and observable through Q^{1/2}
// (rank [A - lambda I; Q^{1/2}] = n).
void require_stabilizable_detectable(const LqrModel& m) {
    const long n = m.state_dim();
    Eigen::EigenSolver<Matrix> es(m.a_mat);
    Eigen::MatrixXcd a_c = m.a_mat.cast<std::complex<double>>();
    Eigen::MatrixXcd b_c = m.b_mat.cast<std::complex<double>>();
    Eigen::MatrixXcd q_sqrt_c = psd_sqrt(m.q_mat).cast<std::complex<double>>();
    for (Eigen::Index i = 0; i < n; ++i) {
        std::complex<double> lambda = es.eigenvalues()(i);
        if (std::abs(lambda) < 1.0 - 1e-9) continue;
        Eigen::MatrixXcd shifted = a_c - lambda * Eigen::MatrixXcd::Identity(n, n);
        Eigen::MatrixXcd ctrl(n, n + m.action_dim());
        ctrl << shifted, b_c;
        if (numeric_rank(ctrl) < n)
            throw std::invalid_argument(
                "LqrModel: dynamics have an unstabilizable mode (|eigenvalue| = " +
                std::to_string(std::abs(lambda)) + ")");
        Eigen::MatrixXcd obs(2 * n, n);
        obs << shifted, q_sqrt_c;
        if (numeric_rank(obs) < n)
            throw std::invalid_argument(
                "LqrModel: state cost cannot observe an unstable mode (|eigenvalue| = " +
                std::to_string(std::abs(lambda)) + ")");
    }
}

// g (R + g B^T P B)^{-1} B^T P A; throws when the regularized curvature
// R + g B^T P B fails to be positive definite.
Matrix greedy_gain(const Matrix& a, const Matrix& b, const Matrix& r, const Matrix& p,
                   double discount) {
    Matrix btp = b.transpose() * p;
    Matrix curvature = symmetrized(r + discount * btp * b);
    Eigen::LLT<Matrix> llt(curvature);
    if (llt.info() != Eigen::Success)
        throw SolveError("quadratic action curvature lost positive definiteness",
                         std::numeric_limits<double>::quiet_NaN(), 0);
    return discount * llt.solve(btp * a);
}

// One application of the discounted Riccati map of (a, b, q, r) at p.
Matrix riccati_map(const Matrix& a, const Matrix& b, const Matrix& q, const Matrix& r,
                   double discount, const Matrix& p) {
    Matrix k = greedy_gain(a, b, r, p, discount);
    return symmetrized(q + discount * a.transpose() * p * (a - b * k));
}

double noise_offset(const LqrModel& m, const Matrix& p) {
    return m.discount * (m.noise_cov * p).trace() / (1.0 - m.discount);
}

double sq_spectral_norm(const Matrix& a) {
    double s = spectral_norm(a);
    return s * s;
}

void require_pair_compatible(const LqrModel& m, const LqrModel& m_hat) {
    if (m.state_dim() != m_hat.state_dim() || m.action_dim() != m_hat.action_dim())
        throw std::invalid_argument("LQR pair: mismatched state or action dimensions");
    if (m.discount != m_hat.discount)
        throw std::invalid_argument("LQR pair: discount factors must match exactly");
}

}  // namespace

void require_valid(const LqrModel& m) {
    const long n = m.a_mat.rows();
    const long na = m.b_mat.cols();
    if (n < 1 || m.a_mat.cols() != n)
        throw std::invalid_argument("LqrModel: A must be square and non-empty");
    if (na < 1 || m.b_mat.rows() != n)
        throw std::invalid_argument("LqrModel: B must be state_dim x action_dim");
    if (m.q_mat.rows() != n || m.q_mat.cols() != n)
        throw std::invalid_argument("LqrModel: Q must be state_dim x state_dim");
    if (m.r_mat.rows() != na || m.r_mat.cols() != na)
        throw std::invalid_argument("LqrModel: R must be action_dim x action_dim");
    if (m.noise_cov.rows() != n || m.noise_cov.cols() != n)
        throw std::invalid_argument("LqrModel: noise_cov must be state_dim x state_dim");
    if (!m.a_mat.allFinite() || !m.b_mat.allFinite() || !m.q_mat.allFinite() ||
        !m.r_mat.allFinite() || !m.noise_cov.allFinite())
        throw std::invalid_argument("LqrModel: matrices must be finite");
    if (!(m.discount > 0.0) || !(m.discount < 1.0))
        throw std::invalid_argument("LqrModel: discount must lie in (0, 1)");
    if (!is_symmetric(m.q_mat, kSymTol))
        throw std::invalid_argument("LqrModel: Q must be symmetric");
    if (!is_symmetric(m.r_mat, kSymTol))
        throw std::invalid_argument("LqrModel: R must be symmetric");
    if (!is_symmetric(m.noise_cov, kSymTol))
        throw std::invalid_argument("LqrModel: noise_cov must be symmetric");
    if (min_eigenvalue(m.q_mat) < -kPsdTol)
        throw std::invalid_argument("LqrModel: Q must be positive semidefinite");
    if (min_eigenvalue(m.r_mat) < kPsdTol)
        throw std::invalid_argument("LqrModel: R must be positive definite");
    if (min_eigenvalue(m.noise_cov) < -kPsdTol)
        throw std::invalid_argument("LqrModel: noise_cov must be positive semidefinite");
    require_stabilizable_detectable(m);
}

RiccatiSolution solve_riccati(const LqrModel& m, double tol, long max_iter) {
    require_valid(m);
    if (!(tol > 0.0)) throw std::invalid_argument("solve_riccati: tol must be positive");
    if (max_iter < 1) throw std::invalid_argument("solve_riccati: max_iter must be positive");

    Matrix p = symmetrized(m.q_mat);
    double residual = std::numeric_limits<double>::infinity();
    for (long iter = 1; iter <= max_iter; ++iter) {
        Matrix next = riccati_map(m.a_mat, m.b_mat, m.q_mat, m.r_mat, m.discount, p);
        // Frobenius dominates the spectral norm, so stopping on it is sound.
        residual = (next - p).norm();
        p = next;
        if (residual <= tol) {
            if (min_eigenvalue(p) < -1e-9)
                throw SolveError("Riccati fixed point lost positive semidefiniteness",
                                 residual, iter);
            Matrix gain = greedy_gain(m.a_mat, m.b_mat, m.r_mat, p, m.discount);
            double final_residual = spectral_norm(
                riccati_map(m.a_mat, m.b_mat, m.q_mat, m.r_mat, m.discount, p) - p);
            double offset = noise_offset(m, p);
            return RiccatiSolution{std::move(p), std::move(gain), offset, iter, final_residual};
        }
    }
    throw SolveError("Riccati iteration did not converge", residual, max_iter);
}

LinearPolicyValue evaluate_linear_policy(const LqrModel& m, const Matrix& gain, double tol,
                                         long max_iter) {
    require_valid(m);
    if (gain.rows() != m.action_dim() || gain.cols() != m.state_dim())
        throw std::invalid_argument("evaluate_linear_policy: gain must be action_dim x state_dim");
    if (!gain.allFinite())
        throw std::invalid_argument("evaluate_linear_policy: gain must be finite");
    if (!(tol > 0.0)) throw std::invalid_argument("evaluate_linear_policy: tol must be positive");
    if (max_iter < 1)
        throw std::invalid_argument("evaluate_linear_policy: max_iter must be positive");

    Matrix stage = symmetrized(m.q_mat + gain.transpose() * m.r_mat * gain);
    Matrix loop = m.a_mat - m.b_mat * gain;
    Matrix p = stage;
    double residual = std::numeric_limits<double>::infinity();
    double prev_residual = std::numeric_limits<double>::infinity();
    int growth_streak = 0;
    for (long iter = 1; iter <= max_iter; ++iter) {
        Matrix next = symmetrized(stage + m.discount * loop.transpose() * p * loop);
        residual = (next - p).norm();
        p = next;
        if (residual <= tol) {
            double final_residual =
                spectral_norm(stage + m.discount * loop.transpose() * p * loop - p);
            double offset = noise_offset(m, p);
            return LinearPolicyValue{std::move(p), offset, iter, final_residual};
        }
        growth_streak = residual > prev_residual ? growth_streak + 1 : 0;
        prev_residual = residual;
        if (growth_streak >= 20)
            throw SolveError("closed loop is unstable: policy evaluation diverges", residual,
                             iter);
    }
    throw SolveError("policy evaluation did not converge", residual, max_iter);
}

namespace {

LqStabilityCert make_cert(const LqrModel& m, const LqrModel& m_hat, double ell,
                          const Matrix& gain_true, const Matrix& p_hat,
                          const Matrix& gain_hat) {
    Matrix gain_greedy = greedy_gain(m.a_mat, m.b_mat, m.r_mat, p_hat, m.discount);
    double b_cov = 1.0 + ell * std::max(m.noise_cov.trace(), m_hat.noise_cov.trace());
    double b_gain = std::max(
        std::max(sq_spectral_norm(m.a_mat - m.b_mat * gain_true),
                 sq_spectral_norm(m.a_mat - m.b_mat * gain_hat)),
        std::max(sq_spectral_norm(m_hat.a_mat - m_hat.b_mat * gain_hat),
                 sq_spectral_norm(m.a_mat - m.b_mat * gain_greedy)));
    LqStabilityCert cert;
    cert.kappa = std::max(b_cov, b_gain);
    cert.b_cov = b_cov;
    cert.b_gain = b_gain;
    cert.ell = ell;
    cert.valid = cert_gate_ok(m.discount, cert.kappa);
    return cert;
}

}  // namespace

LqStabilityCert certify_lq_stability(const LqrModel& m, const LqrModel& m_hat, double ell,
                                     double tol) {
    require_pair_compatible(m, m_hat);
    if (!(ell > 0.0))
        throw std::invalid_argument("certify_lq_stability: ell must be positive");
    RiccatiSolution rt = solve_riccati(m, tol);
    RiccatiSolution rh = solve_riccati(m_hat, tol);
    return make_cert(m, m_hat, ell, rt.gain, rh.value, rh.gain);
}

LqrBoundReport lqr_performance_bound(const LqrModel& m, const LqrModel& m_hat, double ell,
                                     std::optional<double> alpha2, double tol) {
    require_pair_compatible(m, m_hat);
    if (!(ell > 0.0))
        throw std::invalid_argument("lqr_performance_bound: ell must be positive");
    if (alpha2 && !std::isfinite(*alpha2))
        throw std::invalid_argument("lqr_performance_bound: alpha2 must be finite");

    RiccatiSolution rt = solve_riccati(m, tol);
    RiccatiSolution rh = solve_riccati(m_hat, tol);
    const Matrix& p_hat = rh.value;

    LqrBoundReport rep;
    rep.cert = make_cert(m, m_hat, ell, rt.gain, p_hat, rh.gain);
    rep.k_hat = rh.gain;
    rep.d_star =
        riccati_map(m.a_mat, m.b_mat, m.q_mat, m.r_mat, m.discount, p_hat) - p_hat;
    Matrix loop_hat = m.a_mat - m.b_mat * rh.gain;
    rep.d_pihat = symmetrized(m.q_mat + rh.gain.transpose() * m.r_mat * rh.gain +
                              m.discount * loop_hat.transpose() * p_hat * loop_hat) -
                  p_hat;
    rep.rho_d_star = spectral_radius_symmetric(rep.d_star);
    rep.rho_d_pihat = spectral_radius_symmetric(rep.d_pihat);
    rep.d_sigma = m.discount * ((m.noise_cov - m_hat.noise_cov) * p_hat).trace();
    rep.alpha2 = alpha2 ? *alpha2 : -rep.d_sigma;
    rep.certified = rep.cert.valid;
    if (rep.certified) {
        double shift = std::abs(rep.d_sigma + rep.alpha2);
        double denom = 1.0 - m.discount * rep.cert.kappa;
        rep.bound = (std::max(rep.rho_d_star / ell, shift) +
                     std::max(rep.rho_d_pihat / ell, shift)) /
                    denom;
    } else {
        rep.bound = std::numeric_limits<double>::infinity();
    }
    return rep;
}

double spectral_norm(const Matrix& a) {
    if (a.size() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(a);
    return svd.singularValues()(0);
}

double spectral_radius_symmetric(const Matrix& d) {
    if (d.size() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrized(d), Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

double weighted_quadratic_sup(const Matrix& d, double c, double ell) {
    if (!(ell > 0.0))
        throw std::invalid_argument("weighted_quadratic_sup: ell must be positive");
    return std::max(std::abs(c), spectral_radius_symmetric(d) / ell);
}

}  // namespace mdpa
