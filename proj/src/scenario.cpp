#include "saari/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "saari/action.hpp"
#include "saari/bessel.hpp"
#include "saari/central_config.hpp"
#include "saari/dynamics.hpp"
#include "saari/elliptic.hpp"
#include "saari/kepler.hpp"
#include "saari/kernels.hpp"
#include "saari/kronecker.hpp"
#include "saari/planetary.hpp"

namespace saari {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Typed access to scenario parameters; errors name the offending field.
class Params {
public:
    explicit Params(const Json& j) : j_(j) {}

    bool has(const std::string& key) const { return j_.contains(key) && !j_.at(key).is_null(); }

    double number(const std::string& key) const {
        const Json& v = at(key);
        if (!v.is_number()) fail(key, "expected a number");
        return v.get<double>();
    }
    double number(const std::string& key, double fallback) const { return has(key) ? number(key) : fallback; }

    std::uint64_t count(const std::string& key) const {
        const Json& v = at(key);
        if (v.is_number_unsigned()) return v.get<std::uint64_t>();
        if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
        if (v.is_number_float()) {
            const double d = v.get<double>();
            if (d >= 0.0 && d == std::floor(d) && d < 9.0e15) return static_cast<std::uint64_t>(d);
        }
        fail(key, "expected a non-negative integer");
    }
    std::uint64_t count(const std::string& key, std::uint64_t fallback) const {
        return has(key) ? count(key) : fallback;
    }

    bool flag(const std::string& key, bool fallback) const {
        if (!has(key)) return fallback;
        const Json& v = at(key);
        if (!v.is_boolean()) fail(key, "expected true or false");
        return v.get<bool>();
    }

    std::string text(const std::string& key, const std::string& fallback) const {
        if (!has(key)) return fallback;
        const Json& v = at(key);
        if (!v.is_string()) fail(key, "expected a string");
        return v.get<std::string>();
    }

    std::vector<double> numbers(const std::string& key) const {
        const Json& v = at(key);
        if (v.is_number()) return {v.get<double>()};
        if (!v.is_array()) fail(key, "expected an array of numbers");
        std::vector<double> out;
        for (const auto& x : v) {
            if (!x.is_number()) fail(key, "expected an array of numbers");
            out.push_back(x.get<double>());
        }
        return out;
    }

    /// Points as [[x, y], ...] or a flat array of N * dim numbers.
    std::vector<double> points(const std::string& key, int dim) const {
        const Json& v = at(key);
        if (!v.is_array()) fail(key, "expected an array of points");
        std::vector<double> out;
        for (const auto& p : v) {
            if (p.is_number()) {
                out.push_back(p.get<double>());
            } else if (p.is_array()) {
                if (p.size() != static_cast<std::size_t>(dim)) fail(key, "point has the wrong dimension");
                for (const auto& x : p) {
                    if (!x.is_number()) fail(key, "expected numeric coordinates");
                    out.push_back(x.get<double>());
                }
            } else {
                fail(key, "expected numeric coordinates");
            }
        }
        if (out.size() % static_cast<std::size_t>(dim) != 0) fail(key, "coordinate count is not a multiple of dim");
        return out;
    }

    const Json& at(const std::string& key) const {
        if (!has(key)) fail(key, "required parameter is missing");
        return j_.at(key);
    }

    [[noreturn]] static void fail(const std::string& key, const std::string& why) {
        throw ParseError("parameters." + key + ": " + why);
    }

private:
    const Json& j_;
};

Json points_json(const Configuration& c) {
    Json out = Json::array();
    for (std::size_t i = 0; i < c.size(); ++i) {
        Json p = Json::array();
        for (int a = 0; a < c.dim(); ++a) p.push_back(c(i, a));
        out.push_back(p);
    }
    return out;
}

std::vector<double> sorted_distances(const Configuration& c) {
    std::vector<double> d;
    for (std::size_t i = 0; i < c.size(); ++i)
        for (std::size_t j = i + 1; j < c.size(); ++j) {
            double s = 0.0;
            for (int a = 0; a < c.dim(); ++a) s += (c(i, a) - c(j, a)) * (c(i, a) - c(j, a));
            d.push_back(std::sqrt(s));
        }
    std::sort(d.begin(), d.end());
    return d;
}

Json series_json(const Series& s) {
    Json cols = Json::object();
    for (std::size_t c = 0; c < s.columns.size(); ++c) cols[s.columns[c]] = s.data[c];
    return Json{{"name", s.name}, {"rows", s.rows()}, {"columns", cols}};
}

MassSystem masses_of(const Params& p) {
    const int dim = static_cast<int>(p.count("dim", 2));
    return MassSystem(p.numbers("masses"), dim);
}

struct Context {
    const Params& p;
    const Tolerances& tol;
    std::mt19937_64& rng;
    unsigned threads;
    Json results = Json::object();
    Json verdicts = Json::object();
    std::vector<Series> series;
};

CentralConfigResult central_for(Context& ctx, const MassSystem& ms, std::uint64_t restarts) {
    MinimizeIU2Options o;
    o.restarts = restarts;
    o.seed = ctx.rng();
    o.tol_residual = ctx.tol.residual;
    o.threads = ctx.threads;
    o.max_iterations = ctx.p.count("max_iterations", o.max_iterations);
    return minimize_IU2(ms, o);
}

void run_central(Context& ctx) {
    const MassSystem ms = masses_of(ctx.p);
    MinimizeIU2Options o;
    o.restarts = ctx.p.count("restarts", o.restarts);
    o.seed = ctx.rng();
    o.max_iterations = ctx.p.count("max_iterations", o.max_iterations);
    o.tol_residual = ctx.tol.residual;
    o.threads = ctx.threads;
    std::optional<Configuration> init;
    if (ctx.p.has("init")) init = Configuration(ms.dim(), ctx.p.points("init", ms.dim()));
    const CentralConfigResult r = minimize_IU2(ms, o, init);
    ctx.results["value_IU2"] = r.value_IU2;
    ctx.results["lambda"] = r.lambda;
    ctx.results["residual_norm"] = r.residual_norm;
    ctx.results["restarts_used"] = r.restarts_used;
    ctx.results["restarts_converged"] = r.restarts_converged;
    ctx.results["positions"] = points_json(r.cfg);
    ctx.results["sorted_distances"] = sorted_distances(r.cfg);
    ctx.verdicts["central"] = r.residual_norm < ctx.tol.residual;
}

void run_rigidity(Context& ctx) {
    const MassSystem ms = masses_of(ctx.p);
    EllipticMotionSpec spec;
    spec.dim = ms.dim();
    spec.a = ctx.p.points("a", ms.dim());
    spec.b = ctx.p.points("b", ms.dim());
    spec.theta_law = UniformTheta{ctx.p.number("period", 1.0)};
    spec.validate();
    if (spec.size() != ms.size()) Params::fail("a", "body count differs from masses");
    const std::size_t n_max = ctx.p.count("n_max", 10);
    const PairCoefficients pc = pair_coefficients(spec);
    const RigidityVerdict v = rigidity_verdict(spec, ms, ctx.tol.constant);

    Json pairs = Json::array();
    for (std::size_t j = 0; j < pc.n; ++j)
        for (std::size_t k = j + 1; k < pc.n; ++k) {
            Json d = Json::array();
            for (std::size_t n = 1; n <= n_max; ++n)
                d.push_back(d_coefficient(pc, ms, j, k, n, ctx.tol.series).value);
            pairs.push_back(Json{{"j", j}, {"k", k}, {"A", pc.a(j, k)}, {"B", pc.b(j, k)}, {"C", pc.c(j, k)},
                                 {"phase", pc.theta(j, k)}, {"D", d}});
        }
    ctx.results["max_C"] = v.max_C;
    ctx.results["pairs"] = pairs;
    const std::size_t samples = ctx.p.count("samples", 4096);
    ctx.results["fourier_U"] = fourier_of_U(spec, ms, n_max, samples);

    // Pair distances along one period of the angle.
    constexpr std::size_t kAngles = 256;
    Series s;
    s.name = "pair_distances";
    s.columns.push_back("theta");
    s.data.emplace_back();
    for (std::size_t j = 0; j < pc.n; ++j)
        for (std::size_t k = j + 1; k < pc.n; ++k) {
            s.columns.push_back("d_" + std::to_string(j) + "_" + std::to_string(k));
            s.data.emplace_back();
        }
    double worst = 0.0;
    for (std::size_t a = 0; a < kAngles; ++a) {
        const double th = kTwoPi * static_cast<double>(a) / kAngles;
        s.data[0].push_back(th);
        const Configuration q = spec.at_angle(th);
        std::size_t col = 1;
        for (std::size_t j = 0; j < pc.n; ++j)
            for (std::size_t k = j + 1; k < pc.n; ++k) {
                double d2 = 0.0;
                for (int x = 0; x < spec.dim; ++x) d2 += (q(j, x) - q(k, x)) * (q(j, x) - q(k, x));
                s.data[col++].push_back(std::sqrt(d2));
            }
    }
    for (std::size_t c = 1; c < s.data.size(); ++c) worst = std::max(worst, constancy_defect(s.data[c]));
    ctx.results["max_distance_defect"] = worst;
    ctx.verdicts["rigid"] = v.rigid;
    ctx.verdicts["distances_constant"] = worst < ctx.tol.constant;
    ctx.verdicts["witness"] = v.witness ? Json::array({v.witness->first, v.witness->second}) : Json();
    ctx.series.push_back(std::move(s));
}

void run_kronecker(Context& ctx) {
    const std::vector<double> thetas = ctx.p.numbers("thetas");
    const double eps = ctx.p.number("eps");
    const std::uint64_t k_max = ctx.p.count("k_max", 1'000'000);
    const std::size_t count = ctx.p.count("count", 1);
    const HitSearch hs = simultaneous_hits(thetas, eps, k_max, count, ctx.threads);
    Json hits = Json::array();
    for (const auto& h : hs.hits) {
        Json side = Json::array();
        for (auto sd : h.side) side.push_back(sd == HitSide::NearZero ? "near-0" : "near-1");
        hits.push_back(Json{{"k", h.k}, {"fracs", h.fracs}, {"side", side}});
    }
    ctx.results["hits"] = hits;
    ctx.results["scanned"] = Json{{"k_first", hs.k_first}, {"k_last", hs.k_last}};
    ctx.verdicts["found"] = !hs.hits.empty();
    if (ctx.p.has("phase")) {
        const double window = ctx.p.number("window", 0.25);
        const std::uint64_t n_max = ctx.p.count("n_max", 1'000'000);
        try {
            const PhaseWitness w = phase_witness(ctx.p.number("phase"), window, n_max);
            ctx.results["phase_witness"] = Json{{"n", w.n}, {"phi", w.phi}};
            ctx.verdicts["phase_witness_found"] = true;
        } catch (const NotFound& e) {
            ctx.results["phase_witness"] = Json{{"best_n", e.best_n}, {"best_phi", e.best_phi}};
            ctx.verdicts["phase_witness_found"] = false;
        }
    }
}

void run_kepler(Context& ctx) {
    const double e = ctx.p.number("e");
    const std::size_t n_max = ctx.p.count("n_max", 30);
    const std::size_t points = std::max<std::uint64_t>(1, ctx.p.count("points", 256));
    const std::vector<double> coeffs = inverse_radius_expansion(e, n_max);
    Series s;
    s.name = "inverse_radius";
    s.columns = {"tau", "E", "exact", "series"};
    s.data.assign(4, {});
    double worst = 0.0;
    for (std::size_t k = 0; k < points; ++k) {
        const double tau = kTwoPi * static_cast<double>(k) / static_cast<double>(points);
        const double E = solve_kepler(e, tau);
        const double exact = 1.0 / (1.0 - e * std::cos(E));
        const double approx = evaluate_cosine_series(coeffs, tau);
        worst = std::max(worst, std::abs(exact - approx));
        s.data[0].push_back(tau);
        s.data[1].push_back(E);
        s.data[2].push_back(exact);
        s.data[3].push_back(approx);
    }
    ctx.results["coefficients"] = coeffs;
    ctx.results["max_error"] = worst;
    if (e > 0.0 && ctx.p.has("asymptotic_n")) {
        const int n = static_cast<int>(ctx.p.count("asymptotic_n"));
        ctx.results["asymptotic_ratio"] = bessel_J(n, n * e) / debye_leading_term(n, e);
    }
    ctx.verdicts["reconstruction_ok"] = worst < ctx.tol.series;
    ctx.series.push_back(std::move(s));
}

PlanetarySystem planetary_of(const Params& p) {
    PlanetarySystem ps;
    ps.m0 = p.number("m0", 1.0);
    ps.m_tilde = p.numbers("m_tilde");
    ps.epsilon = p.number("epsilon", 0.0);
    const Json& orbits = p.at("orbits");
    if (!orbits.is_array()) Params::fail("orbits", "expected an array of orbit objects");
    std::size_t idx = 0;
    for (const auto& o : orbits) {
        const std::string key = "orbits[" + std::to_string(idx++) + "]";
        if (!o.is_object()) Params::fail(key, "expected an object");
        const Params op(o);
        try {
            const double e = op.number("e", 0.0);
            const double iota = op.number("iota", 0.0);
            if (op.has("period"))
                ps.orbits.push_back(KeplerOrbit::from_period(op.number("period"), e, iota));
            else
                ps.orbits.push_back(KeplerOrbit{op.number("a"), e, iota, 1.0});
        } catch (const ParseError& err) {
            throw ParseError(std::string(err.what()).replace(0, 11, "parameters." + key + "."));
        }
    }
    ps.validate();
    return ps;
}

void run_planetary(Context& ctx) {
    const PlanetarySystem ps = planetary_of(ctx.p);
    PlanetaryVerdictOptions o;
    o.n_probe = ctx.p.count("n_probe", o.n_probe);
    o.tol_const = ctx.tol.constant;
    o.q_max = static_cast<std::int64_t>(ctx.p.count("q_max", static_cast<std::uint64_t>(o.q_max)));
    const PlanetaryVerdict v = saari_planetary_verdict(ps, o);
    const RescaledParams rp = compute_rescaled_params(ps.m0, ps.m_tilde, ps.epsilon);

    Json classes = Json::array();
    for (const auto& c : v.classes) {
        Json w{{"members", c.members}, {"period", c.period}, {"eccentric", c.eccentric}};
        w["n"] = c.n ? Json(*c.n) : Json();
        w["coeff_cos"] = c.coeff_cos;
        w["coeff_sin"] = c.coeff_sin;
        w["quadrature_cos"] = c.quadrature_cos;
        w["reduce_defect"] = c.reduce_defect;
        w["flagged"] = c.flagged;
        classes.push_back(w);
    }
    ctx.results["M"] = rp.M;
    ctx.results["mu"] = rp.mu;
    ctx.results["varrho"] = rp.varrho;
    ctx.results["time_scale"] = ps.time_scale();
    ctx.results["defect_I0"] = v.defect_I0;
    ctx.results["defect_U0"] = v.defect_U0;
    ctx.results["classes"] = classes;
    ctx.verdicts["verdict"] = v.verdict;
    ctx.verdicts["is_constant_I0"] = v.is_constant_I0;
    ctx.verdicts["consistent"] = v.consistent;
    ctx.verdicts["eccentricity_flags"] = v.eccentricity_flags;

    double longest = 0.0;
    for (const auto& o2 : ps.orbits) longest = std::max(longest, o2.period());
    constexpr std::size_t kRows = 512;
    Series s;
    s.name = "planetary_I0_U0";
    s.columns = {"t", "I0", "U0"};
    s.data.assign(3, {});
    for (std::size_t k = 0; k < kRows; ++k) {
        const double t = longest * static_cast<double>(k) / kRows;
        const PlanetaryIU iu = planetary_I0_U0(ps, t);
        s.data[0].push_back(t);
        s.data[1].push_back(iu.I0);
        s.data[2].push_back(iu.U0);
    }
    ctx.series.push_back(std::move(s));
}

void run_action(Context& ctx) {
    const MassSystem ms = masses_of(ctx.p);
    const double T = ctx.p.number("T", kTwoPi);
    const std::size_t M = ctx.p.count("harmonics", 8);
    double inf_iu2 = 0.0;
    if (ctx.p.has("inf_IU2")) {
        inf_iu2 = ctx.p.number("inf_IU2");
    } else {
        inf_iu2 = central_for(ctx, ms, ctx.p.count("iu2_restarts", 32)).value_IU2;
    }
    MinimizeActionOptions o;
    o.restarts = ctx.p.count("restarts", o.restarts);
    o.seed = ctx.rng();
    o.max_iterations = ctx.p.count("max_iterations", o.max_iterations);
    o.flag_tol = ctx.p.number("flag_tol", o.flag_tol);
    o.threads = ctx.threads;
    const ActionMinimum r = minimize_action(ms, T, M, inf_iu2, o);
    const BoundReport& b = r.report;
    ctx.results["action"] = b.action_value;
    ctx.results["lower_bound"] = b.lower_bound;
    ctx.results["gap"] = b.gap;
    ctx.results["relative_gap"] = b.relative_gap;
    ctx.results["inf_IU2_used"] = b.inf_IU2_used;
    ctx.results["gradient_norm"] = r.gradient_norm;
    ctx.results["iterations"] = r.iterations;
    ctx.results["restarts_converged"] = r.restarts_converged;
    ctx.results["defects"] = Json{{"first_harmonic_only", b.first_harmonic_only.defect},
                                  {"balanced", b.balanced.defect},
                                  {"minimizes_IU2", b.minimizes_IU2.defect}};
    ctx.results["center_of_mass_drift"] = b.center_of_mass_drift;
    ctx.results["sorted_distances_t0"] = sorted_distances(r.loop.position(0.0));
    ctx.results["coefficients"] = r.loop.coeffs();
    ctx.verdicts["first_harmonic_only"] = b.first_harmonic_only.set;
    ctx.verdicts["balanced"] = b.balanced.set;
    ctx.verdicts["minimizes_IU2"] = b.minimizes_IU2.set;
    ctx.verdicts["success"] = r.success;
    ctx.verdicts["rigid"] = rigidity_verdict(to_elliptic_spec(r.loop), ms, ctx.tol.constant).rigid;
}

void run_integrate(Context& ctx) {
    const MassSystem ms = masses_of(ctx.p);
    Configuration q0, v0;
    IntegrateOptions o;
    if (ctx.p.flag("relative_equilibrium", false)) {
        if (ms.dim() != 2) Params::fail("relative_equilibrium", "needs dim = 2");
        const CentralConfigResult cc = central_for(ctx, ms, ctx.p.count("iu2_restarts", 32));
        const EllipticMotionSpec spec = build_relative_equilibrium(cc, ms, ctx.tol.residual);
        const double period = std::get<UniformTheta>(spec.theta_law).period;
        q0 = spec.at_angle(0.0);
        const double w = kTwoPi / period;
        v0 = Configuration::zeros(ms.size(), 2);
        for (std::size_t i = 0; i < ms.size(); ++i) {
            v0(i, 0) = w * spec.b[2 * i];
            v0(i, 1) = w * spec.b[2 * i + 1];
        }
        const std::size_t per = ctx.p.count("steps_per_period", 4096);
        const double periods = ctx.p.number("periods", 1.0);
        o.dt = period / static_cast<double>(per);
        o.steps = static_cast<std::size_t>(std::llround(periods * static_cast<double>(per)));
        ctx.results["period"] = period;
    } else {
        q0 = Configuration(ms.dim(), ctx.p.points("positions", ms.dim()));
        v0 = Configuration(ms.dim(), ctx.p.points("velocities", ms.dim()));
        o.dt = ctx.p.number("dt", o.dt);
        o.steps = ctx.p.count("steps", o.steps);
    }
    o.record_every = ctx.p.count("record_every", std::max<std::size_t>(1, o.steps / 1024));
    const std::string scheme = ctx.p.text("scheme", "yoshida4");
    if (scheme == "verlet")
        o.scheme = Integrator::Verlet;
    else if (scheme == "yoshida4")
        o.scheme = Integrator::Yoshida4;
    else
        Params::fail("scheme", "expected \"verlet\" or \"yoshida4\"");

    const TrajectorySample traj = integrate(q0, v0, ms, o);
    const MonitorReport mon = saari_monitor(traj, ms, ctx.tol);
    Series s;
    s.name = "integrate";
    s.columns = {"t", "I", "U", "E"};
    s.data.assign(4, {});
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const auto& st = traj.states[k];
        s.data[0].push_back(traj.times[k]);
        s.data[1].push_back(moment_of_inertia(st.positions, ms));
        const EnergyBreakdown e = energies(st.positions, st.velocities, ms);
        s.data[2].push_back(e.potential);
        s.data[3].push_back(e.total);
    }
    const double e0 = s.data[3].front();
    double drift = 0.0;
    for (double e : s.data[3]) drift = std::max(drift, std::abs(e - e0) / std::abs(e0));
    ctx.results["dt"] = o.dt;
    ctx.results["steps"] = o.steps;
    ctx.results["energy_drift"] = drift;
    ctx.results["defect_I"] = mon.defect_I;
    ctx.results["defect_U"] = mon.defect_U;
    ctx.results["final_positions"] = points_json(traj.states.back().positions);
    if (ms.dim() == 2) {
        const double L0 = angular_momentum(traj.states.front().positions, traj.states.front().velocities, ms);
        const double L1 = angular_momentum(traj.states.back().positions, traj.states.back().velocities, ms);
        ctx.results["angular_momentum_drift"] = std::abs(L1 - L0) / std::max(1.0, std::abs(L0));
    }
    ctx.verdicts["saari_candidate"] = mon.saari_candidate;
    ctx.verdicts["jacobi_consistent"] = mon.jacobi_consistent;
    ctx.series.push_back(std::move(s));
}

template <class E>
bool rethrow_as(const std::exception_ptr& p, const std::string& prefix) {
    try {
        std::rethrow_exception(p);
    } catch (const E& e) {
        throw E(prefix + e.what());
    } catch (...) {
    }
    return false;
}

[[noreturn]] void rethrow_with_context(const std::string& kind) {
    const auto p = std::current_exception();
    const std::string prefix = kind + ": ";
    rethrow_as<ParseError>(p, prefix);
    rethrow_as<InvalidArgument>(p, prefix);
    rethrow_as<DimensionMismatch>(p, prefix);
    rethrow_as<CollisionError>(p, prefix);
    rethrow_as<CollisionApproach>(p, prefix);
    rethrow_as<CollisionOnGrid>(p, prefix);
    rethrow_as<CollisionStall>(p, prefix);
    rethrow_as<PermanentCollision>(p, prefix);
    rethrow_as<CenterOfMassError>(p, prefix);
    rethrow_as<EmptyInput>(p, prefix);
    rethrow_as<NonConvergence>(p, prefix);
    rethrow_as<NotCentral>(p, prefix);
    rethrow_as<SeriesNotConverged>(p, prefix);
    rethrow_as<AmbiguousPartition>(p, prefix);
    rethrow_as<WindowTooShort>(p, prefix);
    rethrow_as<IoError>(p, prefix);
    std::rethrow_exception(p);
}

Tolerances tolerances_of(const Json& j) {
    Tolerances t;
    if (j.is_null()) return t;
    if (!j.is_object()) throw ParseError("tolerances: expected an object");
    auto read = [&](const char* key, double& field) {
        if (!j.contains(key)) return;
        if (!j.at(key).is_number()) throw ParseError(std::string("tolerances.") + key + ": expected a number");
        field = j.at(key).get<double>();
    };
    read("com", t.com);
    read("constant", t.constant);
    read("residual", t.residual);
    read("series", t.series);
    for (const auto& [key, _] : j.items())
        if (key != "com" && key != "constant" && key != "residual" && key != "series")
            throw ParseError("tolerances." + key + ": unknown tolerance");
    try {
        t.validate();
    } catch (const InvalidArgument& e) {
        throw ParseError(std::string("tolerances: ") + e.what());
    }
    return t;
}

}  // namespace

const std::vector<std::string>& scenario_kinds() {
    static const std::vector<std::string> kinds{"central-config", "rigidity",   "kronecker", "kepler-expand",
                                                "planetary-saari", "action-min", "integrate"};
    return kinds;
}

Scenario parse_scenario(const std::string& text, const std::string& source) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        std::size_t line = 1, col = 1;
        const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        for (std::size_t i = 0; i < end; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ParseError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON");
    }
    if (!j.is_object()) throw ParseError(source + ": scenario must be a JSON object");
    Scenario s;
    if (!j.contains("kind") || !j.at("kind").is_string()) throw ParseError(source + ": kind: required string");
    s.kind = j.at("kind").get<std::string>();
    const auto& kinds = scenario_kinds();
    if (std::find(kinds.begin(), kinds.end(), s.kind) == kinds.end())
        throw ParseError(source + ": kind: unknown kind '" + s.kind + "'");
    if (j.contains("parameters")) {
        if (!j.at("parameters").is_object()) throw ParseError(source + ": parameters: expected an object");
        s.parameters = j.at("parameters");
    }
    if (j.contains("seed")) {
        if (!j.at("seed").is_number_integer() || j.at("seed").get<std::int64_t>() < 0)
            throw ParseError(source + ": seed: expected a non-negative integer");
        s.seed = j.at("seed").get<std::uint64_t>();
    }
    try {
        s.tolerances = tolerances_of(j.contains("tolerances") ? j.at("tolerances") : Json());
    } catch (const ParseError& e) {
        throw ParseError(source + ": " + e.what());
    }
    for (const auto& [key, _] : j.items())
        if (key != "kind" && key != "parameters" && key != "seed" && key != "tolerances")
            throw ParseError(source + ": " + key + ": unknown field");
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open scenario " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str(), path);
}

Json scenario_to_json(const Scenario& s) {
    return Json{{"kind", s.kind},
                {"seed", s.seed},
                {"tolerances",
                 {{"com", s.tolerances.com},
                  {"constant", s.tolerances.constant},
                  {"residual", s.tolerances.residual},
                  {"series", s.tolerances.series}}},
                {"parameters", s.parameters}};
}

Report run_scenario(const Scenario& scenario, const RunOptions& opts) {
    Scenario sc = scenario;
    if (opts.seed) sc.seed = *opts.seed;
    std::mt19937_64 rng(sc.seed);
    const Params params(sc.parameters);
    Context ctx{params, sc.tolerances, rng, std::max(1u, opts.threads), Json::object(), Json::object(), {}};

    const auto start = std::chrono::steady_clock::now();
    try {
        if (sc.kind == "central-config")
            run_central(ctx);
        else if (sc.kind == "rigidity")
            run_rigidity(ctx);
        else if (sc.kind == "kronecker")
            run_kronecker(ctx);
        else if (sc.kind == "kepler-expand")
            run_kepler(ctx);
        else if (sc.kind == "planetary-saari")
            run_planetary(ctx);
        else if (sc.kind == "action-min")
            run_action(ctx);
        else if (sc.kind == "integrate")
            run_integrate(ctx);
        else
            throw ParseError("kind: unknown kind '" + sc.kind + "'");
    } catch (const Error&) {
        rethrow_with_context(sc.kind);
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    Report rep;
    rep.json["scenario"] = scenario_to_json(sc);
    rep.json["results"] = ctx.results;
    rep.json["verdicts"] = ctx.verdicts;
    Json tables = Json::array();
    for (const auto& s : ctx.series) tables.push_back(series_json(s));
    rep.json["tables"] = tables;
    rep.json["provenance"] = Json{{"version", kVersion},
                                  {"seed", sc.seed},
                                  {"threads", ctx.threads},
                                  {"isa", kernels::isa_name(kernels::active_isa())},
                                  {"timing_seconds", seconds}};
    rep.series = std::move(ctx.series);
    return rep;
}

}  // namespace saari
