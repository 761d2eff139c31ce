#pragma once

/// @file hypothesis.hpp
/// @brief Audit of the structural hypotheses on (gamma, phi) over a finite
/// signal range, closed-form thresholds for the algebraic family, and the
/// choice of a uniform exponent pair (p, q) for the weighted functional.

#include "kemosim/motility.hpp"

namespace kemosim {

struct AuditReport {
    bool h1_ok = false;   ///< gamma > 0 at every sample
    bool h2_ok = false;   ///< phi >= 0 at every sample
    double inf_F = kInfinity;
    double inf_F_location = 0.0;
    bool tail_limited = false;  ///< minimizer sits at v_max with F still decreasing
    double tail_F = kInfinity;  ///< F(v_max)
    bool h3_ok = false;
    double h3_margin = kInfinity;  ///< inf_F - N/2
    double v_min = 0.0;
    double v_max = 0.0;
    int grid_points = 0;
    int refinement_levels = 0;
};

/// Scans a log-spaced grid of `grid_points` values on [v_min, v_max], refines
/// twice dyadically around the smallest F sample and finishes with a
/// golden-section search in log v.
///
/// Throws NegativeMotility if gamma <= 0 at any sample, DomainError on an
/// invalid range or grid_points < 64.
AuditReport audit(const MotilityFamily& fam, const ModelParams& params, double v_min, double v_max,
                  int grid_points = 2048);

struct ThresholdResult {
    double inf_F_closed = 0.0;
    bool bounded_claim = false;  ///< inf_F_closed > N/2
    bool large_lambda_case = false;  ///< lambda (1 - alpha) > 1, infimum attained at eta
};

/// Closed-form infimum of F for gamma = sigma / v^lambda, phi = (alpha-1) gamma'
/// over v >= eta.
ThresholdResult algebraic_threshold(double sigma, double lambda, double alpha, double d, double eta,
                                    int n_dim);

struct ExponentChoice {
    double p = 0.0;
    double q = 0.0;
    bool feasible = false;
    QInterval interval_used;
};

/// p = N/2 + min(0.25, (inf F - N/2)/2); q = midpoint of the intersection of
/// the per-v admissible intervals over the audit grid. Infeasibility is
/// reported, never thrown.
ExponentChoice choose_exponents(const MotilityFamily& fam, const ModelParams& params, double v_min,
                                double v_max, int grid_points = 512);

/// log-spaced samples on [v_min, v_max], both ends included exactly.
std::vector<double> log_grid(double v_min, double v_max, int points);

}  // namespace kemosim
