#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace diffhmm {

/// One polynomial term: coeff * x_0^powers[0] * ... * x_{d-1}^powers[d-1].
struct Monomial {
    double coeff = 0.0;
    std::vector<int> powers;
};

using Polynomial = std::vector<Monomial>;

double poly_eval(const Polynomial& p, const Eigen::VectorXd& x);

/// Diffusion dX = u(X) dt + M(X) dB with polynomial coefficient fields.
/// Sigma = M M^T must be positive semidefinite wherever it is evaluated
/// (automatic from the product form).
class DiffusionModel {
public:
    DiffusionModel(int dim, int noiseDim, std::vector<Polynomial> drift,
                   std::vector<Polynomial> diffusion, std::string presetName = "");

    /// Named presets:
    ///   ou1d         u = -x,      M = sqrt(2)
    ///   doublewell1d u = x - x^3, M = sqrt(2)
    ///   ou2d         u = -x,      M = sqrt(2) I
    static DiffusionModel preset(const std::string& name);

    int dim() const { return dim_; }
    int noiseDim() const { return noiseDim_; }
    const std::string& presetName() const { return preset_; }
    const std::vector<Polynomial>& driftPolys() const { return drift_; }
    const std::vector<Polynomial>& diffusionPolys() const { return diffusion_; }

    Eigen::VectorXd drift_at(const Eigen::VectorXd& x) const;
    /// Noise matrix M(x), dim x noiseDim.
    Eigen::MatrixXd M_at(const Eigen::VectorXd& x) const;
    /// Sigma(x) = M(x) M(x)^T.
    Eigen::MatrixXd sigma_at(const Eigen::VectorXd& x) const;

private:
    int dim_;
    int noiseDim_;
    std::vector<Polynomial> drift_;      // dim entries
    std::vector<Polynomial> diffusion_;  // dim*noiseDim entries, row-major
    std::string preset_;
};

}  // namespace diffhmm
