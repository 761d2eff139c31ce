#include "kemosim/motility.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <type_traits>

#include "kemosim/errors.hpp"

namespace kemosim {

ConfigError::ConfigError(std::vector<std::string> violations)
    : std::runtime_error([&] {
          std::ostringstream os;
          os << "invalid configuration (" << violations.size() << " problem"
             << (violations.size() == 1 ? "" : "s") << ")";
          for (const auto& v : violations) os << "\n  - " << v;
          return os.str();
      }()),
      violations_(std::move(violations)) {}

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Fritsch-Butland interior slopes with one-sided differences at the ends.
// Together with the sign test this keeps each cubic piece monotone, so the
// interpolant never leaves the range of its two nodes.
std::vector<double> monotone_slopes(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    std::vector<double> secant(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) secant[k] = (y[k + 1] - y[k]) / (x[k + 1] - x[k]);

    std::vector<double> m(n, 0.0);
    m.front() = secant.front();
    m.back() = secant.back();
    for (std::size_t k = 1; k + 1 < n; ++k) {
        const double s0 = secant[k - 1];
        const double s1 = secant[k];
        if (s0 * s1 <= 0.0) continue;
        const double h0 = x[k] - x[k - 1];
        const double h1 = x[k + 1] - x[k];
        m[k] = 3.0 * (h0 + h1) / ((2.0 * h1 + h0) / s0 + (h1 + 2.0 * h0) / s1);
    }
    // Clamp end slopes so the first/last piece stays monotone as well.
    auto clamp_end = [](double& slope, double sec) {
        if (slope * sec <= 0.0) slope = 0.0;
        else if (std::abs(slope) > 3.0 * std::abs(sec)) slope = 3.0 * sec;
    };
    clamp_end(m.front(), secant.front());
    clamp_end(m.back(), secant.back());
    return m;
}

struct HermiteEval {
    double value;
    double derivative;
};

HermiteEval hermite(const std::vector<double>& x, const std::vector<double>& y,
                    const std::vector<double>& m, double v) {
    if (v <= x.front()) return {y.front(), 0.0};
    if (v >= x.back()) return {y.back(), 0.0};
    const auto it = std::upper_bound(x.begin(), x.end(), v);
    const std::size_t k = static_cast<std::size_t>(it - x.begin()) - 1;
    const double h = x[k + 1] - x[k];
    const double t = (v - x[k]) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1;
    const double h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2;
    const double h11 = t3 - t2;
    const double value = h00 * y[k] + h10 * h * m[k] + h01 * y[k + 1] + h11 * h * m[k + 1];
    const double d00 = (6 * t2 - 6 * t) / h;
    const double d10 = 3 * t2 - 4 * t + 1;
    const double d01 = (-6 * t2 + 6 * t) / h;
    const double d11 = 3 * t2 - 2 * t;
    const double deriv = d00 * y[k] + d10 * m[k] + d01 * y[k + 1] + d11 * m[k + 1];
    return {value, deriv};
}

void require_signal(const MotilityFamily& fam, double v) {
    if (!(v >= 0.0) || !std::isfinite(v))
        throw DomainError("signal value must be finite and nonnegative");
    if (v == 0.0 && singular_at_zero(fam))
        throw DomainError(family_kind(fam) + " motility is singular at v = 0");
}

}  // namespace

TabulatedMotility::TabulatedMotility(std::vector<double> v, std::vector<double> gamma,
                                     std::vector<double> phi)
    : v_(std::move(v)), gamma_(std::move(gamma)), phi_(std::move(phi)) {
    if (v_.size() < 2 || gamma_.size() != v_.size() || phi_.size() != v_.size())
        throw DomainError("motility table needs >= 2 nodes and matching gamma/phi columns");
    for (std::size_t k = 0; k < v_.size(); ++k) {
        if (!(v_[k] >= 0.0) || (k > 0 && !(v_[k] > v_[k - 1])))
            throw DomainError("motility table nodes must be nonnegative and strictly increasing");
        if (!(gamma_[k] > 0.0))
            throw NegativeMotility("tabulated gamma must be positive at every node");
        if (!(phi_[k] >= 0.0)) throw DomainError("tabulated phi must be nonnegative");
    }
    gamma_slope_ = monotone_slopes(v_, gamma_);
    phi_slope_ = monotone_slopes(v_, phi_);
}

double TabulatedMotility::gamma(double v) const {
    const double g = hermite(v_, gamma_, gamma_slope_, v).value;
    if (!(g > 0.0)) throw NegativeMotility("tabulated gamma evaluated to a nonpositive value");
    return g;
}

double TabulatedMotility::gamma_prime(double v) const {
    return hermite(v_, gamma_, gamma_slope_, v).derivative;
}

double TabulatedMotility::phi(double v) const {
    return std::max(0.0, hermite(v_, phi_, phi_slope_, v).value);
}

std::string family_kind(const MotilityFamily& fam) {
    return std::visit(overloaded{
                          [](const ConstantMotility&) { return std::string("constant"); },
                          [](const SingularMotility&) { return std::string("singular"); },
                          [](const AlgebraicMotility&) { return std::string("algebraic"); },
                          [](const TabulatedMotility&) { return std::string("custom"); },
                      },
                      fam);
}

bool singular_at_zero(const MotilityFamily& fam) {
    return std::holds_alternative<SingularMotility>(fam) ||
           std::holds_alternative<AlgebraicMotility>(fam);
}

void validate(const MotilityFamily& fam) {
    std::visit(overloaded{
                   [](const ConstantMotility& c) {
                       if (!(c.gamma0 > 0.0)) throw DomainError("gamma0 must be positive");
                       if (!(c.phi0 >= 0.0)) throw DomainError("phi0 must be nonnegative");
                   },
                   [](const SingularMotility& s) {
                       if (!(s.chi > 0.0)) throw DomainError("chi must be positive");
                   },
                   [](const AlgebraicMotility& a) {
                       if (!(a.sigma > 0.0)) throw DomainError("sigma must be positive");
                       if (!(a.lambda > 0.0)) throw DomainError("lambda must be positive");
                       if (!(a.alpha > 0.0 && a.alpha < 1.0))
                           throw DomainError("alpha must lie in (0, 1)");
                   },
                   [](const TabulatedMotility&) {},
               },
               fam);
}

double eval_gamma(const MotilityFamily& fam, double v) {
    require_signal(fam, v);
    return std::visit(overloaded{
                          [](const ConstantMotility& c) { return c.gamma0; },
                          [](const SingularMotility&) { return 1.0; },
                          [v](const AlgebraicMotility& a) { return a.sigma / std::pow(v, a.lambda); },
                          [v](const TabulatedMotility& t) { return t.gamma(v); },
                      },
                      fam);
}

double eval_gamma_prime(const MotilityFamily& fam, double v) {
    require_signal(fam, v);
    return std::visit(overloaded{
                          [](const ConstantMotility&) { return 0.0; },
                          [](const SingularMotility&) { return 0.0; },
                          [v](const AlgebraicMotility& a) {
                              return -a.lambda * a.sigma * std::pow(v, -a.lambda - 1.0);
                          },
                          [v](const TabulatedMotility& t) { return t.gamma_prime(v); },
                      },
                      fam);
}

double eval_phi(const MotilityFamily& fam, double v) {
    require_signal(fam, v);
    return std::visit(overloaded{
                          [](const ConstantMotility& c) { return c.phi0; },
                          [v](const SingularMotility& s) { return s.chi / v; },
                          [v](const AlgebraicMotility& a) {
                              return (1.0 - a.alpha) * a.lambda * a.sigma *
                                     std::pow(v, -a.lambda - 1.0);
                          },
                          [v](const TabulatedMotility& t) { return t.phi(v); },
                      },
                      fam);
}

double phi_bar(const MotilityFamily& fam, double v) {
    require_signal(fam, v);
    // Closed forms avoid the v * (c / v) round trip for the singular families.
    return std::visit(overloaded{
                          [v](const ConstantMotility& c) { return v * c.phi0; },
                          [](const SingularMotility& s) { return s.chi; },
                          [v](const AlgebraicMotility& a) {
                              return (1.0 - a.alpha) * a.lambda * a.sigma * std::pow(v, -a.lambda);
                          },
                          [v](const TabulatedMotility& t) { return v * t.phi(v); },
                      },
                      fam);
}

MotilityPoint evaluate(const MotilityFamily& fam, double v) {
    return {eval_gamma(fam, v), phi_bar(fam, v)};
}

double eval_F(const MotilityPoint& m, double d) {
    const double excess = std::max(m.phi_bar + d - m.gamma, 0.0);
    const double denom = m.phi_bar * excess;
    if (!(denom > 0.0)) return kInfinity;
    return d * m.gamma / denom;
}

double eval_F(const MotilityFamily& fam, const ModelParams& params, double v) {
    if (!(v > 0.0)) throw DomainError("F(v) requires v > 0");
    return eval_F(evaluate(fam, v), params.d);
}

QuadraticCoefficients coeff_ABC(const MotilityPoint& m, double d, double p) {
    if (!(p > 1.0)) throw DomainError("coefficient triple requires p > 1");
    const double g = m.gamma;
    const double pb = m.phi_bar;
    QuadraticCoefficients c;
    c.A = 4.0 * g * d + p * g * g + p * d * d - 2.0 * d * p * g;
    c.B = 2.0 * (p - 1.0) * (2.0 * g * d + p * pb * (g - d));
    c.C = p * (p - 1.0) * (p - 1.0) * pb * pb;
    return c;
}

QuadraticCoefficients coeff_ABC(const MotilityFamily& fam, const ModelParams& params, double p,
                                double v) {
    return coeff_ABC(evaluate(fam, v), params.d, p);
}

GammaComparators gamma_comparators(const MotilityPoint& m, double d, double p, int n_dim) {
    if (!(p > 1.0)) throw DomainError("comparison functions require p > 1");
    const double pb = m.phi_bar;
    const double N = n_dim;
    const double denom2 = 2.0 * d + p * pb;
    GammaComparators c;
    c.g1 = p * pb * (d + pb) / (d + p * pb);
    c.g2 = p * pb * d / denom2;
    c.g3 = p * pb * (2.0 * (p - 1.0) * pb + d * N) / (N * denom2);
    c.g4 = pb * ((p - 1.0) * pb + p * d) / denom2;
    return c;
}

GammaComparators gamma_comparators(const MotilityFamily& fam, const ModelParams& params, double p,
                                   double v) {
    return gamma_comparators(evaluate(fam, v), params.d, p, params.n_dim);
}

double eval_g(const MotilityPoint& m, double d, double p, double q) {
    if (!(p > 1.0)) throw DomainError("g(p; q, v) requires p > 1");
    if (!(m.gamma > 0.0)) throw NegativeMotility("g(p; q, v) requires gamma > 0");
    const double bracket = (p - 1.0) * m.phi_bar + q * m.gamma + d * q;
    return p / (4.0 * (p - 1.0)) * bracket * bracket / m.gamma - d * q * (q + 1.0) -
           p * q * m.phi_bar;
}

double eval_g(const MotilityFamily& fam, const ModelParams& params, double p, double q, double v) {
    return eval_g(evaluate(fam, v), params.d, p, q);
}

QInterval make_q_interval(double raw_lower, double raw_upper, double cap) {
    QInterval iv;
    iv.lower = std::max(raw_lower, 0.0);
    if (raw_upper < cap) {
        iv.upper = raw_upper;
        iv.upper_closed = true;
    } else {
        iv.upper = cap;
        iv.upper_closed = false;
    }
    iv.empty = !(iv.lower < iv.upper) || !(iv.upper > 0.0);
    iv.reason = iv.empty ? QInterval::Reason::Void : QInterval::Reason::None;
    return iv;
}

QInterval q_interval(const MotilityPoint& m, double d, double p, int n_dim) {
    const auto c = coeff_ABC(m, d, p);
    if (!(c.B > 0.0)) {
        QInterval iv;
        iv.empty = true;
        iv.reason = QInterval::Reason::NonPositiveB;
        return iv;
    }
    return make_q_interval(2.0 * c.C / c.B, c.B / (2.0 * c.A), std::min(0.5 * n_dim, p));
}

QInterval q_interval(const MotilityFamily& fam, const ModelParams& params, double p, double v) {
    if (!(v > 0.0)) throw DomainError("q interval requires v > 0");
    return q_interval(evaluate(fam, v), params.d, p, params.n_dim);
}

}  // namespace kemosim
