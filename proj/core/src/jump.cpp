#include "diffhmm/jump.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

#include "diffhmm/errors.hpp"
#include "diffhmm/rng.hpp"

namespace diffhmm {

JumpGenerator jump_generator(const KernelMatrix& Rk, double kappa) {
    if (!(kappa > 0.0)) throw PreconditionError("kappa must be positive");
    if (Rk.kind != KernelKind::Resolvent || std::abs(Rk.alpha - kappa) > 1e-12 * kappa)
        throw PreconditionError("resolvent parameter does not match kappa");

    JumpGenerator out;
    out.kappa = kappa;
    out.sourceResolvent = Rk;
    Eigen::MatrixXd& R = out.sourceResolvent.entries;
    for (Eigen::Index i = 0; i < R.rows(); ++i) {
        const double rowSum = R.row(i).sum();
        if (!(rowSum > 0.0)) throw NumericError("nonpositive resolvent row sum");
        R.row(i) *= (1.0 / kappa) / rowSum;
    }
    out.entries = kappa * (kappa * R - Eigen::MatrixXd::Identity(R.rows(), R.cols()));
    return out;
}

KernelMatrix jump_resolvent_direct(const JumpGenerator& Dk, double alpha) {
    if (!(alpha > 0.0)) throw PreconditionError("alpha must be positive");
    const Eigen::Index n = Dk.entries.rows();
    const Eigen::MatrixXd A = alpha * Eigen::MatrixXd::Identity(n, n) - Dk.entries;
    KernelMatrix out;
    out.entries =
        Eigen::PartialPivLU<Eigen::MatrixXd>(A).solve(Eigen::MatrixXd::Identity(n, n));
    out.alpha = alpha;
    out.kind = KernelKind::JumpResolvent;
    return out;
}

JumpResolventResult jump_resolvent_series(const KernelMatrix& Rk, double kappa,
                                          double alpha, double tol,
                                          const GridSpace& grid) {
    if (!(alpha > 0.0)) throw PreconditionError("alpha must be positive");
    const JumpGenerator Dk = jump_generator(Rk, kappa);
    const Eigen::Index n = Dk.entries.rows();

    const Eigen::MatrixXd P = kappa * Dk.sourceResolvent.entries;  // kappa R_kappa
    const double ratio = 1.0 / (1.0 + alpha / kappa);
    const double lead = kappa / ((kappa + alpha) * (kappa + alpha));

    // term(n) = lead * ratio^n * (kappa R_kappa)^{n+1}, n = -1, 0, 1, ...
    Eigen::MatrixXd power = Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(n, n);
    double weight = lead / ratio;
    int terms = 0;
    constexpr int kMaxTerms = 10000;
    for (;; ++terms) {
        if (terms > kMaxTerms)
            throw NumericError("jump resolvent series did not converge within 10^4 terms");
        sum += weight * power;
        weight *= ratio;
        power = power * P;
        if (weight * operator_norm_v(power, grid) < tol) break;
    }
    sum += weight * power;  // fold in the first sub-tolerance term
    ++terms;

    JumpResolventResult out;
    out.kernel = jump_resolvent_direct(Dk, alpha);
    out.seriesGap = operator_norm_v(sum - out.kernel.entries, grid);
    out.terms = terms;
    return out;
}

JumpBoundCheck verify_rrapprox_bound(const KernelMatrix& Ra, const KernelMatrix& Rka,
                                     double bPrime, double kappa, const GridSpace& grid) {
    if (std::abs(Ra.alpha - Rka.alpha) > 1e-12 * std::max(1.0, Ra.alpha))
        throw PreconditionError("resolvent parameters differ");
    if (Ra.alpha > kappa)
        throw PreconditionError("alpha > kappa lies outside the bound's hypothesis");
    JumpBoundCheck out;
    out.measured = operator_norm_v(Rka.entries - Ra.entries, grid);
    out.bound = 4.0 * (1.0 + bPrime) / kappa;
    out.passed = out.measured <= out.bound + 1e-9;
    return out;
}

KernelMatrix jump_semigroup(const JumpGenerator& Dk, double t) {
    if (t < 0.0) throw PreconditionError("time must be nonnegative");
    KernelMatrix out;
    out.entries = (t * Dk.entries).exp();
    out.kind = KernelKind::Semigroup;
    return out;
}

KernelMatrix jump_semigroup_uniformized(const JumpGenerator& Dk, double t, double tol) {
    if (t < 0.0) throw PreconditionError("time must be nonnegative");
    const Eigen::Index n = Dk.entries.rows();
    const Eigen::MatrixXd P = Dk.kappa * Dk.sourceResolvent.entries;
    const double mean = Dk.kappa * t;

    Eigen::MatrixXd power = Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(n, n);
    double w = std::exp(-mean);  // Poisson(mean) weights, built iteratively
    if (w == 0.0) throw NumericError("kappa*t too large for uniformization weights");
    double mass = 0.0;
    for (int k = 0; mass < 1.0 - tol; ++k) {
        sum += w * power;
        mass += w;
        power = power * P;
        w *= mean / (k + 1);
        if (k > 100000) throw NumericError("uniformization did not converge");
    }
    KernelMatrix out;
    out.entries = std::move(sum);
    out.kind = KernelKind::Semigroup;
    return out;
}

JumpPath simulate_jump(const JumpGenerator& Dk, Eigen::Index x0, double T,
                       std::uint64_t seed) {
    if (!(T > 0.0)) throw PreconditionError("horizon must be positive");
    const Eigen::MatrixXd& R = Dk.sourceResolvent.entries;
    const auto n = static_cast<int>(R.cols());

    Rng rng(seed, 0);
    JumpPath path;
    path.times.push_back(0.0);
    path.nodes.push_back(static_cast<int>(x0));
    double t = 0.0;
    Eigen::Index x = x0;
    for (;;) {
        t += rng.exponential(Dk.kappa);
        if (t > T) break;
        x = rng.discrete(R.row(x), n);
        path.times.push_back(t);
        path.nodes.push_back(static_cast<int>(x));
    }
    return path;
}

JumpDriftCertificate jump_drift_certificate(double delta, double b, double kappa,
                                            const JumpGenerator& Dk, const GridSpace& grid,
                                            double tol) {
    if (!(delta > 0.0) || !(b > 0.0) || !(kappa > 0.0))
        throw PreconditionError("delta, b, kappa must all be positive");
    JumpDriftCertificate cert;
    cert.deltaKappa = delta * kappa / (delta + kappa);
    cert.bKappa = kappa * b / (delta + kappa);

    const Eigen::VectorXd lhs = Dk.entries * grid.weights();
    const Eigen::VectorXd slack =
        lhs + cert.deltaKappa * grid.weights() -
        Eigen::VectorXd::Constant(grid.size(), cert.bKappa);
    Eigen::Index worst;
    cert.worstSlack = slack.maxCoeff(&worst);
    cert.worstNode = static_cast<int>(worst);
    cert.verified = cert.worstSlack <= tol * std::max(1.0, lhs.cwiseAbs().maxCoeff());
    return cert;
}

}  // namespace diffhmm
