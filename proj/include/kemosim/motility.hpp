#pragma once

/// @file motility.hpp
/// @brief Signal-dependent motility pairs (gamma, phi) and the structural
/// quantities built from them.
///
/// The cell equation is u_t = div(gamma(v) grad u - u phi(v) grad v). Every
/// boundedness condition is phrased through gamma and the combination
/// phi_bar(v) = v phi(v), so most functions here accept either a family and
/// a signal value, or an already evaluated MotilityPoint.

#include <limits>
#include <string>
#include <variant>
#include <vector>

namespace kemosim {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// gamma = gamma0, phi = phi0.
struct ConstantMotility {
    double gamma0 = 1.0;
    double phi0 = 0.0;

    bool operator==(const ConstantMotility&) const = default;
};

/// gamma = 1, phi = chi / v (the logarithmic-sensitivity model).
struct SingularMotility {
    double chi = 1.0;

    bool operator==(const SingularMotility&) const = default;
};

/// gamma = sigma / v^lambda, phi = (alpha - 1) gamma'.
struct AlgebraicMotility {
    double sigma = 1.0;
    double lambda = 1.0;
    double alpha = 0.5;

    bool operator==(const AlgebraicMotility&) const = default;
};

/// Tabulated gamma and phi, interpolated with a monotone (Fritsch-Carlson)
/// cubic and held constant outside the table.
class TabulatedMotility {
public:
    TabulatedMotility(std::vector<double> v, std::vector<double> gamma, std::vector<double> phi);

    double gamma(double v) const;
    double gamma_prime(double v) const;
    double phi(double v) const;

    const std::vector<double>& nodes() const noexcept { return v_; }
    const std::vector<double>& gamma_values() const noexcept { return gamma_; }
    const std::vector<double>& phi_values() const noexcept { return phi_; }

    bool operator==(const TabulatedMotility& other) const {
        return v_ == other.v_ && gamma_ == other.gamma_ && phi_ == other.phi_;
    }

private:
    std::vector<double> v_;
    std::vector<double> gamma_;
    std::vector<double> phi_;
    std::vector<double> gamma_slope_;
    std::vector<double> phi_slope_;
};

using MotilityFamily =
    std::variant<ConstantMotility, SingularMotility, AlgebraicMotility, TabulatedMotility>;

/// Short lowercase tag: "constant", "singular", "algebraic" or "custom".
std::string family_kind(const MotilityFamily& fam);

/// True when gamma or phi is undefined at v = 0.
bool singular_at_zero(const MotilityFamily& fam);

/// Throws DomainError unless the family's own parameters are admissible
/// (gamma0 > 0, chi > 0, sigma > 0, lambda > 0, alpha in (0,1), ...).
void validate(const MotilityFamily& fam);

/// Model constants that enter the structural conditions.
struct ModelParams {
    double d = 1.0;                      ///< chemical diffusivity
    int n_dim = 2;                       ///< spatial dimension used in N/2 thresholds
    std::vector<double> domain_lengths;  ///< may be empty for pure algebra

    double half_dim() const noexcept { return 0.5 * n_dim; }
    bool operator==(const ModelParams&) const = default;
};

/// gamma and phi_bar = v phi at one signal value.
struct MotilityPoint {
    double gamma = 1.0;
    double phi_bar = 0.0;
};

double eval_gamma(const MotilityFamily& fam, double v);
double eval_gamma_prime(const MotilityFamily& fam, double v);
double eval_phi(const MotilityFamily& fam, double v);
double phi_bar(const MotilityFamily& fam, double v);
MotilityPoint evaluate(const MotilityFamily& fam, double v);

/// d gamma / (phi_bar (phi_bar + d - gamma)_+), +inf when the denominator
/// vanishes.
double eval_F(const MotilityPoint& m, double d);
double eval_F(const MotilityFamily& fam, const ModelParams& params, double v);

struct QuadraticCoefficients {
    double A = 0.0;
    double B = 0.0;
    double C = 0.0;
};

QuadraticCoefficients coeff_ABC(const MotilityPoint& m, double d, double p);
QuadraticCoefficients coeff_ABC(const MotilityFamily& fam, const ModelParams& params, double p,
                                double v);

/// The four comparison functions gamma_1..gamma_4 against which gamma(v)
/// is tested; gamma > gamma_1 is equivalent to F(v) > p.
struct GammaComparators {
    double g1 = 0.0;
    double g2 = 0.0;
    double g3 = 0.0;
    double g4 = 0.0;
};

GammaComparators gamma_comparators(const MotilityPoint& m, double d, double p, int n_dim);
GammaComparators gamma_comparators(const MotilityFamily& fam, const ModelParams& params, double p,
                                   double v);

/// g(p; q, v). Satisfies 4(p-1) gamma g = A q^2 - B q + C.
double eval_g(const MotilityPoint& m, double d, double p, double q);
double eval_g(const MotilityFamily& fam, const ModelParams& params, double p, double q, double v);

/// Admissible exponents q. `lower` is always an open end. `upper` is closed
/// when it comes from B/(2A) and open when it is the cap min{N/2, p}.
struct QInterval {
    enum class Reason { None, NonPositiveB, Void };

    double lower = 0.0;
    double upper = 0.0;
    bool upper_closed = true;
    bool empty = true;
    Reason reason = Reason::Void;

    bool contains(double q) const noexcept {
        return !empty && q > lower && (upper_closed ? q <= upper : q < upper);
    }
    double midpoint() const noexcept { return 0.5 * (lower + upper); }
};

/// Intersect (raw_lower, raw_upper] with (0, cap) and classify.
QInterval make_q_interval(double raw_lower, double raw_upper, double cap);

QInterval q_interval(const MotilityPoint& m, double d, double p, int n_dim);
QInterval q_interval(const MotilityFamily& fam, const ModelParams& params, double p, double v);

}  // namespace kemosim
