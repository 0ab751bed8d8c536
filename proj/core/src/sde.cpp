#include "diffhmm/sde.hpp"

#include <cmath>

#include "diffhmm/errors.hpp"

namespace diffhmm {

namespace {

void reflect_into(Eigen::VectorXd& x, const std::vector<Interval>& box) {
    for (std::size_t k = 0; k < box.size(); ++k) {
        double& xi = x[static_cast<Eigen::Index>(k)];
        // fold until inside; the box is wide relative to one step
        while (xi < box[k].lo || xi > box[k].hi) {
            if (xi < box[k].lo) xi = 2.0 * box[k].lo - xi;
            if (xi > box[k].hi) xi = 2.0 * box[k].hi - xi;
        }
    }
}

Eigen::VectorXd em_step(const DiffusionModel& model, const Eigen::VectorXd& x, double dt,
                        Rng& rng) {
    Eigen::VectorXd z(model.noiseDim());
    for (int j = 0; j < model.noiseDim(); ++j) z[j] = rng.normal();
    return x + model.drift_at(x) * dt + model.M_at(x) * (std::sqrt(dt) * z);
}

}  // namespace

SdePath simulate_sde(const DiffusionModel& model, const Eigen::VectorXd& x0, double dt,
                     double T, std::uint64_t seed, const std::vector<Interval>& box) {
    if (!(dt > 0.0) || T < dt) throw PreconditionError("need dt > 0 and T >= dt");
    const auto nFull = static_cast<std::int64_t>(std::floor(T / dt));
    const double rem = T - static_cast<double>(nFull) * dt;
    const std::int64_t nSteps = nFull + (rem > 1e-12 * dt ? 1 : 0);

    Rng rng(seed, 0);
    SdePath path;
    path.times.resize(static_cast<std::size_t>(nSteps) + 1);
    path.states.resize(nSteps + 1, model.dim());
    Eigen::VectorXd x = x0;
    path.times[0] = 0.0;
    path.states.row(0) = x.transpose();
    for (std::int64_t s = 0; s < nSteps; ++s) {
        const double step = (s < nFull) ? dt : rem;
        x = em_step(model, x, step, rng);
        reflect_into(x, box);
        if (!x.allFinite())
            throw NumericError("non-finite state at step " + std::to_string(s + 1));
        path.times[static_cast<std::size_t>(s) + 1] =
            (s < nFull) ? static_cast<double>(s + 1) * dt : T;
        path.states.row(s + 1) = x.transpose();
    }
    return path;
}

Eigen::VectorXd sde_endpoint(const DiffusionModel& model, const Eigen::VectorXd& x0,
                             double dt, double T, Rng& rng,
                             const std::vector<Interval>& box) {
    Eigen::VectorXd x = x0;
    double t = 0.0;
    std::int64_t s = 0;
    while (t < T - 1e-12 * dt) {
        const double step = std::min(dt, T - t);
        x = em_step(model, x, step, rng);
        reflect_into(x, box);
        if (!x.allFinite())
            throw NumericError("non-finite state at step " + std::to_string(s + 1));
        t += step;
        ++s;
    }
    return x;
}

}  // namespace diffhmm
