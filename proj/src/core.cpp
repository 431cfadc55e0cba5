#include "saari/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace saari {

void Tolerances::validate() const {
    for (double v : {com, constant, residual, series}) {
        if (!(v > 0.0 && v < 1.0)) throw InvalidArgument("tolerances must lie in (0, 1)");
    }
}

MassSystem::MassSystem(std::vector<double> masses, int dim) : masses_(std::move(masses)), dim_(dim) {
    if (masses_.size() < 2) throw InvalidArgument("a mass system needs at least two bodies");
    if (dim_ < 1 || dim_ > 3) throw InvalidArgument("dimension must be 1, 2 or 3");
    for (double m : masses_) {
        if (!(m > 0.0) || !std::isfinite(m)) throw InvalidArgument("masses must be positive and finite");
    }
}

double MassSystem::total_mass() const { return std::accumulate(masses_.begin(), masses_.end(), 0.0); }

Configuration::Configuration(int dim, std::vector<double> coords, bool com_zero)
    : dim_(dim), coords_(std::move(coords)), com_zero_(com_zero) {
    if (dim_ < 1) throw InvalidArgument("dimension must be positive");
    if (coords_.size() % static_cast<std::size_t>(dim_) != 0)
        throw DimensionMismatch("coordinate count is not a multiple of the dimension");
}

Configuration Configuration::zeros(std::size_t n, int dim) {
    return Configuration(dim, std::vector<double>(n * static_cast<std::size_t>(dim), 0.0));
}

Configuration Configuration::scaled(double s) const {
    Configuration out = *this;
    for (double& c : out.coords_) c *= s;
    return out;
}

Configuration Configuration::centered(const MassSystem& ms) const {
    if (ms.size() != size()) throw DimensionMismatch("mass count differs from body count");
    Configuration out = *this;
    const double total = ms.total_mass();
    for (int a = 0; a < dim_; ++a) {
        double c = 0.0;
        for (std::size_t i = 0; i < size(); ++i) c += ms.mass(i) * (*this)(i, a);
        c /= total;
        for (std::size_t i = 0; i < size(); ++i) out(i, a) -= c;
    }
    out.com_zero_ = true;
    return out;
}

void TrajectorySample::validate() const {
    if (times.size() != states.size()) throw InvalidArgument("times and states differ in length");
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (!(times[i] > times[i - 1])) throw InvalidArgument("trajectory times must be strictly increasing");
    }
}

double min_pairwise_distance(const Configuration& cfg) {
    double best = std::numeric_limits<double>::infinity();
    const std::size_t n = cfg.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double r2 = 0.0;
            for (int a = 0; a < cfg.dim(); ++a) {
                const double d = cfg(i, a) - cfg(j, a);
                r2 += d * d;
            }
            best = std::min(best, r2);
        }
    }
    return std::sqrt(best);
}

ValidatedConfiguration validate_configuration(const Configuration& cfg, const MassSystem& ms,
                                              const Tolerances& tol) {
    if (cfg.size() != ms.size()) throw DimensionMismatch("position count differs from mass count");
    if (cfg.dim() != ms.dim()) throw DimensionMismatch("configuration dimension differs from mass system");

    const double dmin = min_pairwise_distance(cfg);
    if (dmin == 0.0) throw CollisionError("two bodies occupy the same position");

    if (cfg.com_zero()) {
        double extent = 0.0;
        double com2 = 0.0;
        for (int a = 0; a < cfg.dim(); ++a) {
            double c = 0.0;
            for (std::size_t i = 0; i < cfg.size(); ++i) c += ms.mass(i) * cfg(i, a);
            com2 += c * c;
        }
        for (std::size_t i = 0; i < cfg.size(); ++i) {
            double r2 = 0.0;
            for (int a = 0; a < cfg.dim(); ++a) r2 += cfg(i, a) * cfg(i, a);
            extent = std::max(extent, std::sqrt(r2));
        }
        if (std::sqrt(com2) > tol.com * ms.total_mass() * extent)
            throw CenterOfMassError("center of mass is not at the origin");
    }
    return {cfg, dmin};
}

double constancy_defect(std::span<const double> samples) {
    if (samples.empty()) throw EmptyInput("constancy_defect needs at least one sample");
    const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
    double mean = 0.0;
    for (double s : samples) mean += s;
    mean /= static_cast<double>(samples.size());
    return (*hi - *lo) / std::max(1.0, std::abs(mean));
}

}  // namespace saari
