#include "kemosim/hypothesis.hpp"

#include <algorithm>
#include <cmath>

#include "kemosim/errors.hpp"

namespace kemosim {

namespace {

constexpr int kDyadicLevels = 2;
constexpr double kInvPhi = 0.6180339887498949;

struct Sample {
    double v;
    double F;
};

Sample sample_F(const MotilityFamily& fam, const ModelParams& params, double v, AuditReport& rep) {
    const MotilityPoint m = evaluate(fam, v);
    if (!(m.gamma > 0.0)) throw NegativeMotility("gamma(v) <= 0 at sampled v");
    if (!(eval_phi(fam, v) >= 0.0)) rep.h2_ok = false;
    return {v, eval_F(m, params.d)};
}

}  // namespace

std::vector<double> log_grid(double v_min, double v_max, int points) {
    std::vector<double> grid(static_cast<std::size_t>(points));
    const double a = std::log(v_min);
    const double b = std::log(v_max);
    for (int i = 0; i < points; ++i) {
        const double s = static_cast<double>(i) / (points - 1);
        grid[static_cast<std::size_t>(i)] = std::exp(a + s * (b - a));
    }
    grid.front() = v_min;
    grid.back() = v_max;
    return grid;
}

AuditReport audit(const MotilityFamily& fam, const ModelParams& params, double v_min, double v_max,
                  int grid_points) {
    if (!(v_min > 0.0) || !(v_max > v_min) || !std::isfinite(v_max))
        throw DomainError("audit range must satisfy 0 < v_min < v_max < inf");
    if (grid_points < 64) throw DomainError("audit needs at least 64 grid points");
    if (!(params.d > 0.0)) throw DomainError("d must be positive");

    AuditReport rep;
    rep.h1_ok = true;  // a failure throws
    rep.h2_ok = true;
    rep.v_min = v_min;
    rep.v_max = v_max;
    rep.grid_points = grid_points;
    rep.refinement_levels = kDyadicLevels;

    const auto grid = log_grid(v_min, v_max, grid_points);
    std::vector<Sample> samples;
    samples.reserve(grid.size());
    for (double v : grid) samples.push_back(sample_F(fam, params, v, rep));

    // First minimum in fixed index order, so ties resolve deterministically.
    auto argmin = [](const std::vector<Sample>& s) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < s.size(); ++i)
            if (s[i].F < s[best].F) best = i;
        return best;
    };

    std::size_t best = argmin(samples);
    Sample best_sample = samples[best];
    rep.tail_F = samples.back().F;

    // Bracket in log v around the grid minimizer.
    double lo = std::log(samples[best == 0 ? 0 : best - 1].v);
    double hi = std::log(samples[std::min(best + 1, samples.size() - 1)].v);

    for (int level = 0; level < kDyadicLevels && hi > lo; ++level) {
        const int n = 9;
        std::vector<Sample> local;
        for (int k = 0; k < n; ++k) {
            const double x = lo + (hi - lo) * k / (n - 1);
            local.push_back(sample_F(fam, params, std::clamp(std::exp(x), v_min, v_max), rep));
        }
        const std::size_t j = argmin(local);
        if (local[j].F < best_sample.F) best_sample = local[j];
        const double step = (hi - lo) / (n - 1);
        const double centre = std::log(local[j].v);
        lo = std::max(std::log(v_min), centre - step);
        hi = std::min(std::log(v_max), centre + step);
    }

    if (std::isfinite(best_sample.F) && hi > lo) {
        auto F_at = [&](double x) {
            return sample_F(fam, params, std::clamp(std::exp(x), v_min, v_max), rep);
        };
        double a = lo;
        double b = hi;
        double x1 = b - kInvPhi * (b - a);
        double x2 = a + kInvPhi * (b - a);
        Sample s1 = F_at(x1);
        Sample s2 = F_at(x2);
        for (int it = 0; it < 200 && (b - a) > 1e-13 * (1.0 + std::abs(a)); ++it) {
            if (s1.F <= s2.F) {
                b = x2;
                x2 = x1;
                s2 = s1;
                x1 = b - kInvPhi * (b - a);
                s1 = F_at(x1);
            } else {
                a = x1;
                x1 = x2;
                s1 = s2;
                x2 = a + kInvPhi * (b - a);
                s2 = F_at(x2);
            }
        }
        for (const Sample& s : {s1, s2, F_at(a), F_at(b)})
            if (s.F < best_sample.F) best_sample = s;
    }

    rep.inf_F = best_sample.F;
    rep.inf_F_location = best_sample.v;
    const std::size_t n = samples.size();
    rep.tail_limited = best == n - 1 && samples[n - 1].F < samples[n - 2].F;
    rep.h3_margin = rep.inf_F - params.half_dim();
    rep.h3_ok = rep.inf_F > params.half_dim();
    return rep;
}

ThresholdResult algebraic_threshold(double sigma, double lambda, double alpha, double d, double eta,
                                    int n_dim) {
    if (!(sigma > 0.0) || !(lambda > 0.0) || !(d > 0.0) || !(eta > 0.0))
        throw DomainError("sigma, lambda, d and eta must be positive");
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");

    ThresholdResult r;
    const double k = lambda * (1.0 - alpha);
    r.large_lambda_case = lambda > 1.0 / (1.0 - alpha);
    if (r.large_lambda_case) {
        const double bracket = std::max((k - 1.0) * sigma / std::pow(eta, lambda) + d, 0.0);
        r.inf_F_closed = bracket > 0.0 ? d / (k * bracket) : kInfinity;
    } else {
        r.inf_F_closed = 1.0 / k;
    }
    r.bounded_claim = r.inf_F_closed > 0.5 * n_dim;
    return r;
}

ExponentChoice choose_exponents(const MotilityFamily& fam, const ModelParams& params, double v_min,
                                double v_max, int grid_points) {
    const AuditReport rep = audit(fam, params, v_min, v_max, std::max(grid_points, 64));
    const double half = params.half_dim();

    ExponentChoice choice;
    const double gap = rep.inf_F - half;
    choice.p = half + (gap > 0.0 ? std::min(0.25, 0.5 * gap) : 0.25);
    if (!(choice.p > 1.0)) {
        // N = 1 with small margin; the quadratic needs p > 1.
        choice.feasible = false;
        return choice;
    }

    const auto grid = log_grid(v_min, v_max, std::max(grid_points, 64));
    double lower = 0.0;
    double upper = kInfinity;
    bool b_positive = true;
    for (double v : grid) {
        const auto c = coeff_ABC(evaluate(fam, v), params.d, choice.p);
        if (!(c.B > 0.0)) {
            b_positive = false;
            break;
        }
        lower = std::max(lower, 2.0 * c.C / c.B);
        upper = std::min(upper, c.B / (2.0 * c.A));
    }
    if (!b_positive) {
        choice.interval_used.empty = true;
        choice.interval_used.reason = QInterval::Reason::NonPositiveB;
        return choice;
    }
    choice.interval_used = make_q_interval(lower, upper, std::min(half, choice.p));
    if (choice.interval_used.empty || !(gap > 0.0)) return choice;

    choice.q = choice.interval_used.midpoint();
    choice.feasible = true;
    for (double v : grid) {
        if (!(eval_g(evaluate(fam, v), params.d, choice.p, choice.q) < 0.0)) {
            choice.feasible = false;
            break;
        }
    }
    return choice;
}

}  // namespace kemosim
