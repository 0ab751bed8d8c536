#include "diffhmm/model.hpp"

#include <cmath>

#include "diffhmm/errors.hpp"

namespace diffhmm {

double poly_eval(const Polynomial& p, const Eigen::VectorXd& x) {
    double acc = 0.0;
    for (const auto& m : p) {
        double term = m.coeff;
        for (std::size_t k = 0; k < m.powers.size(); ++k) {
            for (int e = 0; e < m.powers[k]; ++e) term *= x[static_cast<Eigen::Index>(k)];
        }
        acc += term;
    }
    return acc;
}

DiffusionModel::DiffusionModel(int dim, int noiseDim, std::vector<Polynomial> drift,
                               std::vector<Polynomial> diffusion, std::string presetName)
    : dim_(dim),
      noiseDim_(noiseDim),
      drift_(std::move(drift)),
      diffusion_(std::move(diffusion)),
      preset_(std::move(presetName)) {
    if (dim_ < 1 || dim_ > 2) throw PreconditionError("model dimension must be 1 or 2");
    if (noiseDim_ < 1) throw PreconditionError("noise dimension must be >= 1");
    if (drift_.size() != static_cast<std::size_t>(dim_))
        throw PreconditionError("drift needs one polynomial per component");
    if (diffusion_.size() != static_cast<std::size_t>(dim_ * noiseDim_))
        throw PreconditionError("diffusion needs dim*noiseDim polynomials");
}

DiffusionModel DiffusionModel::preset(const std::string& name) {
    const double s2 = std::sqrt(2.0);
    if (name == "ou1d") {
        return DiffusionModel(1, 1, {{{-1.0, {1}}}}, {{{s2, {0}}}}, name);
    }
    if (name == "doublewell1d") {
        return DiffusionModel(1, 1, {{{1.0, {1}}, {-1.0, {3}}}}, {{{s2, {0}}}}, name);
    }
    if (name == "ou2d") {
        std::vector<Polynomial> drift = {{{-1.0, {1, 0}}}, {{-1.0, {0, 1}}}};
        std::vector<Polynomial> diff = {{{s2, {0, 0}}}, {}, {}, {{s2, {0, 0}}}};
        return DiffusionModel(2, 2, std::move(drift), std::move(diff), name);
    }
    throw ConfigError("unknown model preset: " + name);
}

Eigen::VectorXd DiffusionModel::drift_at(const Eigen::VectorXd& x) const {
    Eigen::VectorXd u(dim_);
    for (int i = 0; i < dim_; ++i) u[i] = poly_eval(drift_[i], x);
    return u;
}

Eigen::MatrixXd DiffusionModel::M_at(const Eigen::VectorXd& x) const {
    Eigen::MatrixXd M(dim_, noiseDim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < noiseDim_; ++j)
            M(i, j) = poly_eval(diffusion_[static_cast<std::size_t>(i * noiseDim_ + j)], x);
    return M;
}

Eigen::MatrixXd DiffusionModel::sigma_at(const Eigen::VectorXd& x) const {
    const Eigen::MatrixXd M = M_at(x);
    return M * M.transpose();
}

}  // namespace diffhmm
