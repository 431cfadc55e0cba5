#include "saari/kronecker.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <thread>

#include "saari/kernels.hpp"

namespace saari {

namespace {

constexpr std::uint64_t kMaxK = std::uint64_t{1} << 53;
constexpr std::uint64_t kBlock = std::uint64_t{1} << 20;

double signed_offset(double f) { return f < 0.5 ? f : f - 1.0; }

std::vector<std::uint64_t> scan_block(const std::vector<double>& reduced, double eps, std::uint64_t first,
                                      std::uint64_t last, std::size_t max_hits) {
    std::vector<std::uint64_t> hits;
    kernels::FracScan s;
    s.thetas = reduced;
    s.eps = eps;
    s.k_first = first;
    s.k_last = last;
    s.max_hits = max_hits;
    kernels::frac_scan(s, hits);
    return hits;
}

}  // namespace

double fractional_part(double t) {
    if (!std::isfinite(t)) throw InvalidArgument("fractional part of a non-finite value");
    const double f = t - std::floor(t);
    return f < 1.0 ? f : std::nextafter(1.0, 0.0);
}

HitSearch simultaneous_hits(const std::vector<double>& thetas, double eps, std::uint64_t k_max, std::size_t count,
                            unsigned threads) {
    if (!(eps > 0.0 && eps < 0.5)) throw InvalidArgument("eps must lie in (0, 0.5)");
    if (k_max < 1) throw InvalidArgument("k_max must be at least 1");
    if (k_max >= kMaxK) throw InvalidArgument("k_max must stay below 2^53");
    if (thetas.empty()) throw EmptyInput("no angles to scan");

    std::vector<double> reduced;
    for (double t : thetas) reduced.push_back(fractional_part(t));

    HitSearch out;
    out.k_last = k_max;
    std::vector<std::uint64_t> ks;
    if (count > 0) {
        const unsigned workers = std::max(1u, threads);
        std::uint64_t next = 1;
        // Rounds of consecutive blocks, one per worker, merged in block order.
        while (next <= k_max && ks.size() < count) {
            std::vector<std::pair<std::uint64_t, std::uint64_t>> ranges;
            for (unsigned w = 0; w < workers && next <= k_max; ++w) {
                const std::uint64_t last = std::min(k_max, next + kBlock - 1);
                ranges.emplace_back(next, last);
                next = last + 1;
            }
            const std::size_t need = count - ks.size();
            std::vector<std::vector<std::uint64_t>> found(ranges.size());
            if (ranges.size() == 1) {
                found[0] = scan_block(reduced, eps, ranges[0].first, ranges[0].second, need);
            } else {
                std::vector<std::exception_ptr> errors(ranges.size());
                std::vector<std::thread> pool;
                for (std::size_t r = 0; r < ranges.size(); ++r) {
                    pool.emplace_back([&, r] {
                        try {
                            found[r] = scan_block(reduced, eps, ranges[r].first, ranges[r].second, need);
                        } catch (...) {
                            errors[r] = std::current_exception();
                        }
                    });
                }
                for (auto& t : pool) t.join();
                for (auto& e : errors)
                    if (e) std::rethrow_exception(e);
            }
            for (const auto& f : found)
                for (std::uint64_t k : f)
                    if (ks.size() < count) ks.push_back(k);
        }
        if (ks.size() == count) out.k_last = ks.back();
    }

    for (std::uint64_t k : ks) {
        SimultaneousHit h;
        h.k = k;
        for (double t : reduced) {
            const double f = kernels::frac_of_product(k, t);
            h.fracs.push_back(f);
            h.side.push_back(f < eps ? HitSide::NearZero : HitSide::NearOne);
        }
        out.hits.push_back(std::move(h));
    }
    return out;
}

PhaseWitness phase_witness(double phase, double window, std::uint64_t n_max) {
    if (!(window > 0.0 && window <= 0.25)) throw InvalidArgument("window must lie in (0, 0.25]");
    if (n_max < 1 || n_max >= kMaxK) throw InvalidArgument("n_max out of range");
    if (!std::isfinite(phase)) throw InvalidArgument("phase must be finite");
    const double turns = fractional_part(phase / (2.0 * std::numbers::pi));
    PhaseWitness best{0, 1.0};
    for (std::uint64_t n = 1; n <= n_max; ++n) {
        const double phi = signed_offset(kernels::frac_of_product(n, turns));
        if (std::abs(phi) < window) return {n, phi};
        if (std::abs(phi) < std::abs(best.phi)) best = {n, phi};
    }
    throw NotFound("no harmonic index within n_max", best.n, best.phi);
}

MultiPhaseWitness phase_witness(const std::vector<double>& phases, double window, std::uint64_t n_max,
                                std::uint64_t stride) {
    if (!(window > 0.0 && window <= 0.25)) throw InvalidArgument("window must lie in (0, 0.25]");
    if (stride < 1) throw InvalidArgument("stride must be positive");
    if (phases.empty()) throw EmptyInput("no phases");
    if (n_max < stride) throw NotFound("n_max is below the stride", 0, 1.0);

    std::vector<double> thetas;
    for (double p : phases) {
        if (!std::isfinite(p)) throw InvalidArgument("phase must be finite");
        const double turns = fractional_part(p / (2.0 * std::numbers::pi));
        thetas.push_back(kernels::frac_of_product(stride, turns));
    }
    const HitSearch hs = simultaneous_hits(thetas, window, n_max / stride, 1);
    if (hs.hits.empty()) throw NotFound("no common harmonic index within n_max", 0, 1.0);
    MultiPhaseWitness w;
    w.n = hs.hits.front().k * stride;
    for (double f : hs.hits.front().fracs) w.phi.push_back(signed_offset(f));
    return w;
}

}  // namespace saari
