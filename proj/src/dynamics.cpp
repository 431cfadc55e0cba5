#include "saari/dynamics.hpp"

#include <cmath>
#include <vector>

#include "saari/kernels.hpp"

namespace saari {

namespace {

void check_shape(const Configuration& cfg, const MassSystem& ms) {
    if (cfg.size() != ms.size()) throw DimensionMismatch("position count differs from mass count");
    if (cfg.dim() != ms.dim()) throw DimensionMismatch("configuration dimension differs from mass system");
}

struct PairSums {
    double potential = 0.0;
    double min_dist2 = 0.0;
};

// Single-configuration call: with one sample the batch layout coincides with
// the Configuration layout.
PairSums pair_sums(const Configuration& cfg, const MassSystem& ms, std::span<double> accel) {
    double pot = 0.0;
    double dmin = 0.0;
    kernels::GravityBatch b;
    b.dim = cfg.dim();
    b.bodies = cfg.size();
    b.samples = 1;
    b.masses = ms.masses();
    b.positions = cfg.coords();
    b.potential = {&pot, 1};
    b.accel = accel;
    b.min_dist2 = {&dmin, 1};
    kernels::gravity(b);
    return {pot, dmin};
}

}  // namespace

double force_function(const Configuration& cfg, const MassSystem& ms) {
    check_shape(cfg, ms);
    const PairSums s = pair_sums(cfg, ms, {});
    if (s.min_dist2 == 0.0) throw CollisionError("force function undefined at a collision");
    return s.potential;
}

double moment_of_inertia(const Configuration& cfg, const MassSystem& ms) {
    check_shape(cfg, ms);
    double I = 0.0;
    for (std::size_t i = 0; i < cfg.size(); ++i) {
        double r2 = 0.0;
        for (int a = 0; a < cfg.dim(); ++a) r2 += cfg(i, a) * cfg(i, a);
        I += ms.mass(i) * r2;
    }
    return I;
}

Configuration newton_rhs(const Configuration& cfg, const MassSystem& ms) {
    check_shape(cfg, ms);
    Configuration acc = Configuration::zeros(cfg.size(), cfg.dim());
    const PairSums s = pair_sums(cfg, ms, acc.coords());
    if (s.min_dist2 == 0.0) throw CollisionError("accelerations undefined at a collision");
    return acc;
}

EnergyBreakdown energies(const Configuration& cfg, const Configuration& velocities, const MassSystem& ms) {
    check_shape(velocities, ms);
    EnergyBreakdown e;
    e.kinetic = 0.5 * moment_of_inertia(velocities, ms);
    e.potential = force_function(cfg, ms);
    e.lagrangian = e.kinetic + e.potential;
    e.total = e.kinetic - e.potential;
    return e;
}

double angular_momentum(const Configuration& cfg, const Configuration& velocities, const MassSystem& ms) {
    if (cfg.dim() != 2) throw InvalidArgument("scalar angular momentum needs d = 2");
    check_shape(cfg, ms);
    check_shape(velocities, ms);
    double L = 0.0;
    for (std::size_t i = 0; i < cfg.size(); ++i)
        L += ms.mass(i) * (cfg(i, 0) * velocities(i, 1) - cfg(i, 1) * velocities(i, 0));
    return L;
}

TrajectorySample integrate(const Configuration& cfg, const Configuration& velocities, const MassSystem& ms,
                           const IntegrateOptions& opts) {
    check_shape(cfg, ms);
    check_shape(velocities, ms);
    if (!(opts.dt > 0.0)) throw InvalidArgument("time step must be positive");
    if (opts.record_every == 0) throw InvalidArgument("record_every must be positive");

    const double d0 = min_pairwise_distance(cfg);
    if (d0 == 0.0) throw CollisionError("initial configuration has a collision");
    const double floor2 = (opts.collision_floor * d0) * (opts.collision_floor * d0);

    Configuration q = cfg;
    Configuration v = velocities;
    Configuration a = Configuration::zeros(cfg.size(), cfg.dim());
    pair_sums(q, ms, a.coords());

    TrajectorySample out;
    out.times.push_back(0.0);
    out.states.push_back({q, v});

    auto verlet = [&](double h) {
        auto qc = q.coords();
        auto vc = v.coords();
        auto ac = a.coords();
        for (std::size_t k = 0; k < vc.size(); ++k) vc[k] += 0.5 * h * ac[k];
        for (std::size_t k = 0; k < qc.size(); ++k) qc[k] += h * vc[k];
        const PairSums s = pair_sums(q, ms, ac);
        if (s.min_dist2 < floor2) throw CollisionApproach("pair distance fell below the collision floor");
        for (std::size_t k = 0; k < vc.size(); ++k) vc[k] += 0.5 * h * ac[k];
    };

    const double cbrt2 = std::cbrt(2.0);
    const double w1 = 1.0 / (2.0 - cbrt2);
    const double w0 = -cbrt2 / (2.0 - cbrt2);

    for (std::size_t step = 1; step <= opts.steps; ++step) {
        if (opts.scheme == Integrator::Verlet) {
            verlet(opts.dt);
        } else {
            verlet(w1 * opts.dt);
            verlet(w0 * opts.dt);
            verlet(w1 * opts.dt);
        }
        if (step % opts.record_every == 0 || step == opts.steps) {
            out.times.push_back(static_cast<double>(step) * opts.dt);
            out.states.push_back({q, v});
        }
    }
    return out;
}

MonitorReport saari_monitor(const TrajectorySample& traj, const MassSystem& ms, const Tolerances& tol) {
    traj.validate();
    if (traj.size() == 0) throw EmptyInput("trajectory has no samples");
    std::vector<double> I(traj.size());
    std::vector<double> U(traj.size());
    for (std::size_t k = 0; k < traj.size(); ++k) {
        I[k] = moment_of_inertia(traj.states[k].positions, ms);
        U[k] = force_function(traj.states[k].positions, ms);
    }
    MonitorReport r;
    r.defect_I = constancy_defect(I);
    r.defect_U = constancy_defect(U);
    r.saari_candidate = r.defect_I < tol.constant;
    r.jacobi_consistent = !r.saari_candidate || r.defect_U < tol.constant;
    return r;
}

}  // namespace saari
