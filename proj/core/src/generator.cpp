#include "diffhmm/generator.hpp"

#include <cmath>

#include "diffhmm/errors.hpp"

namespace diffhmm {

namespace {

// Apply a 1-d stencil along `axis` at every node. Stencil(i, n) returns
// (offsets, weights) for position i of a line with n nodes.
template <typename StencilFn>
Eigen::VectorXd apply_axis_stencil(const Eigen::VectorXd& f, const GridSpace& grid,
                                   int axis, StencilFn&& stencil) {
    const int n = grid.resolution()[axis];
    Eigen::VectorXd out(grid.size());
    for (Eigen::Index node = 0; node < grid.size(); ++node) {
        auto ix = grid.unflatten(node);
        const int i = ix[axis];
        double acc = 0.0;
        for (const auto& [off, w] : stencil(i, n)) {
            auto jx = ix;
            jx[axis] = i + off;
            acc += w * f[grid.flatten(jx)];
        }
        out[node] = acc;
    }
    return out;
}

using Stencil = std::vector<std::pair<int, double>>;

}  // namespace

Eigen::VectorXd axis_first_derivative(const Eigen::VectorXd& f, const GridSpace& grid,
                                      int axis) {
    const double h = grid.spacing(axis);
    return apply_axis_stencil(f, grid, axis, [h](int i, int n) -> Stencil {
        if (i == 0) return {{0, -1.5 / h}, {1, 2.0 / h}, {2, -0.5 / h}};
        if (i == n - 1) return {{0, 1.5 / h}, {-1, -2.0 / h}, {-2, 0.5 / h}};
        return {{1, 0.5 / h}, {-1, -0.5 / h}};
    });
}

Eigen::VectorXd axis_second_derivative(const Eigen::VectorXd& f, const GridSpace& grid,
                                       int axis) {
    const double h = grid.spacing(axis);
    const double h2 = h * h;
    return apply_axis_stencil(f, grid, axis, [h2](int i, int n) -> Stencil {
        if (i == 0) {
            if (n >= 4) return {{0, 2.0 / h2}, {1, -5.0 / h2}, {2, 4.0 / h2}, {3, -1.0 / h2}};
            return {{0, 1.0 / h2}, {1, -2.0 / h2}, {2, 1.0 / h2}};
        }
        if (i == n - 1) {
            if (n >= 4)
                return {{0, 2.0 / h2}, {-1, -5.0 / h2}, {-2, 4.0 / h2}, {-3, -1.0 / h2}};
            return {{0, 1.0 / h2}, {-1, -2.0 / h2}, {-2, 1.0 / h2}};
        }
        return {{1, 1.0 / h2}, {0, -2.0 / h2}, {-1, 1.0 / h2}};
    });
}

FunctionVector generator_apply(const DiffusionModel& model, const FunctionVector& h,
                               const GridSpace& grid) {
    if (h.size() != grid.size()) throw PreconditionError("function/grid size mismatch");
    const int d = grid.dim();

    std::vector<Eigen::VectorXd> grad(d), hess(d);
    for (int k = 0; k < d; ++k) {
        grad[k] = axis_first_derivative(h.values, grid, k);
        hess[k] = axis_second_derivative(h.values, grid, k);
    }
    Eigen::VectorXd cross;
    if (d == 2) cross = axis_first_derivative(grad[1], grid, 0);

    Eigen::VectorXd out(grid.size());
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
        const Eigen::VectorXd x = grid.node(i);
        const Eigen::VectorXd u = model.drift_at(x);
        const Eigen::MatrixXd S = model.sigma_at(x);
        double acc = 0.0;
        for (int k = 0; k < d; ++k) acc += u[k] * grad[k][i] + 0.5 * S(k, k) * hess[k][i];
        if (d == 2) acc += S(0, 1) * cross[i];
        out[i] = acc;
    }
    return FunctionVector(std::move(out), "D(" + h.label + ")");
}

FunctionVector nonlinear_generator(const DiffusionModel& model, const FunctionVector& F,
                                   const GridSpace& grid) {
    if (F.size() != grid.size()) throw PreconditionError("function/grid size mismatch");
    for (Eigen::Index i = 0; i < F.size(); ++i)
        if (!std::isfinite(F[i])) throw PreconditionError("F is not finite on the grid");

    const int d = grid.dim();
    std::vector<Eigen::VectorXd> grad(d), hess(d);
    for (int k = 0; k < d; ++k) {
        grad[k] = axis_first_derivative(F.values, grid, k);
        hess[k] = axis_second_derivative(F.values, grid, k);
    }
    Eigen::VectorXd cross;
    if (d == 2) cross = axis_first_derivative(grad[1], grid, 0);

    Eigen::VectorXd out(grid.size());
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
        const Eigen::VectorXd x = grid.node(i);
        const Eigen::VectorXd u = model.drift_at(x);
        const Eigen::MatrixXd S = model.sigma_at(x);
        Eigen::VectorXd g(d);
        for (int k = 0; k < d; ++k) g[k] = grad[k][i];
        double acc = u.dot(g) + 0.5 * g.dot(S * g);
        for (int k = 0; k < d; ++k) acc += 0.5 * S(k, k) * hess[k][i];
        if (d == 2) acc += S(0, 1) * cross[i];
        out[i] = acc;
    }
    return FunctionVector(std::move(out), "H(" + F.label + ")");
}

double default_dv3_tol(const FunctionVector& HV, const GridSpace& grid) {
    double h2 = 0.0;
    for (int k = 0; k < grid.dim(); ++k) h2 = std::max(h2, grid.spacing(k) * grid.spacing(k));
    const double scale = std::max(1.0, HV.values.cwiseAbs().maxCoeff());
    return 10.0 * h2 * scale;
}

LyapunovCertificate certify_dv3(const DiffusionModel& model, const FunctionVector& V,
                                const FunctionVector& W, double delta, double b,
                                const std::vector<int>& C, const GridSpace& grid,
                                double tol, double supCv) {
    if (W.size() != grid.size() || V.size() != grid.size())
        throw PreconditionError("V/W size mismatch with grid");
    if (C.empty()) throw PreconditionError("compact set C is empty");
    for (Eigen::Index i = 0; i < W.size(); ++i)
        if (W[i] < 1.0)
            throw PreconditionError("W must map into [1, inf); W < 1 at node " +
                                    std::to_string(i));

    LyapunovCertificate cert;
    cert.V = V;
    cert.W = W;
    cert.delta = delta;
    cert.b = b;
    cert.C = C;

    const FunctionVector HV = nonlinear_generator(model, V, grid);
    cert.tol = tol >= 0.0 ? tol : default_dv3_tol(HV, grid);

    Eigen::VectorXd slack = HV.values + delta * W.values;
    for (int i : C) slack[i] -= b;
    cert.worstSlack = slack.maxCoeff(&cert.worstNode);
    cert.passed = cert.worstSlack <= cert.tol;
    cert.slack = FunctionVector(std::move(slack), "dv3_slack");

    const double vmin = V.values.minCoeff();
    double supC = 0.0;
    for (int i : C) supC = std::max(supC, std::exp(V[i] - vmin));
    if (supCv > 0.0) supC = std::max(supC, supCv);
    cert.bPrime = b * supC;
    return cert;
}

}  // namespace diffhmm
