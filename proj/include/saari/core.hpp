#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace saari {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define SAARI_DEFINE_ERROR(Name)              \
    class Name : public Error {               \
    public:                                   \
        using Error::Error;                   \
    };

SAARI_DEFINE_ERROR(InvalidArgument)
SAARI_DEFINE_ERROR(DimensionMismatch)
SAARI_DEFINE_ERROR(CollisionError)
SAARI_DEFINE_ERROR(CollisionApproach)
SAARI_DEFINE_ERROR(CollisionOnGrid)
SAARI_DEFINE_ERROR(CollisionStall)
SAARI_DEFINE_ERROR(PermanentCollision)
SAARI_DEFINE_ERROR(CenterOfMassError)
SAARI_DEFINE_ERROR(EmptyInput)
SAARI_DEFINE_ERROR(NonConvergence)
SAARI_DEFINE_ERROR(NotCentral)
SAARI_DEFINE_ERROR(SeriesNotConverged)
SAARI_DEFINE_ERROR(AmbiguousPartition)
SAARI_DEFINE_ERROR(WindowTooShort)
SAARI_DEFINE_ERROR(ParseError)
SAARI_DEFINE_ERROR(IoError)

#undef SAARI_DEFINE_ERROR

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

/// Relative tolerances shared by the verdict operations.
struct Tolerances {
    double com = 1e-12;
    double constant = 1e-8;
    double residual = 1e-9;
    double series = 1e-10;

    /// Throws InvalidArgument unless every field lies in (0, 1).
    void validate() const;
};

/// Positive point masses in R^dim (G = 1 units).
class MassSystem {
public:
    MassSystem() = default;
    explicit MassSystem(std::vector<double> masses, int dim = 2);

    std::size_t size() const { return masses_.size(); }
    int dim() const { return dim_; }
    double mass(std::size_t i) const { return masses_[i]; }
    std::span<const double> masses() const { return masses_; }
    double total_mass() const;

private:
    std::vector<double> masses_;
    int dim_ = 2;
};

/// N positions in R^dim, stored body-major: coords[i*dim + axis].
class Configuration {
public:
    Configuration() = default;
    Configuration(int dim, std::vector<double> coords, bool com_zero = false);

    static Configuration zeros(std::size_t n, int dim);

    std::size_t size() const { return dim_ > 0 ? coords_.size() / dim_ : 0; }
    int dim() const { return dim_; }
    bool com_zero() const { return com_zero_; }
    void set_com_zero(bool flag) { com_zero_ = flag; }

    std::span<const double> position(std::size_t i) const {
        return {coords_.data() + i * dim_, static_cast<std::size_t>(dim_)};
    }
    std::span<double> position(std::size_t i) {
        return {coords_.data() + i * dim_, static_cast<std::size_t>(dim_)};
    }
    double operator()(std::size_t i, int axis) const { return coords_[i * dim_ + axis]; }
    double& operator()(std::size_t i, int axis) { return coords_[i * dim_ + axis]; }

    std::span<const double> coords() const { return coords_; }
    std::span<double> coords() { return coords_; }

    /// Multiplies every coordinate by s.
    Configuration scaled(double s) const;
    /// Translates so that sum_i m_i q_i = 0 and sets the com_zero flag.
    Configuration centered(const MassSystem& ms) const;

private:
    int dim_ = 0;
    std::vector<double> coords_;
    bool com_zero_ = false;
};

/// Sampled phase-space trajectory; positions and velocities share the
/// Configuration layout.
struct TrajectorySample {
    struct State {
        Configuration positions;
        Configuration velocities;
    };

    std::vector<double> times;
    std::vector<State> states;

    std::size_t size() const { return times.size(); }
    /// Throws InvalidArgument if times are not strictly increasing or the
    /// lengths disagree.
    void validate() const;
};

struct ValidatedConfiguration {
    Configuration cfg;
    double min_distance = 0.0;
};

/// Checks shape, collisions (exact coincidence), and the center-of-mass
/// invariant when the configuration carries the com_zero flag.
ValidatedConfiguration validate_configuration(const Configuration& cfg, const MassSystem& ms,
                                              const Tolerances& tol = {});

/// Smallest pairwise distance. Returns +inf for a single body.
double min_pairwise_distance(const Configuration& cfg);

/// (max - min) / max(1, |mean|); zero iff all samples are equal.
double constancy_defect(std::span<const double> samples);

}  // namespace saari
