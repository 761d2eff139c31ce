#include "kemosim/field.hpp"

#include <algorithm>
#include <cmath>

#include "kemosim/errors.hpp"

namespace kemosim {

Grid::Grid(std::vector<double> lengths, std::vector<int> cells) {
    if (lengths.empty() || lengths.size() > 2 || lengths.size() != cells.size())
        throw DomainError("grid needs 1 or 2 axes with matching lengths and cell counts");
    dim_ = static_cast<int>(lengths.size());
    for (std::size_t a = 0; a < lengths.size(); ++a) {
        if (!(lengths[a] > 0.0) || !std::isfinite(lengths[a]))
            throw DomainError("grid lengths must be positive");
        if (cells[a] < 4) throw DomainError("grid needs at least 4 cells per axis");
        lengths_[a] = lengths[a];
        cells_[a] = cells[a];
        h_[a] = lengths[a] / cells[a];
    }
}

double Grid::min_spacing() const noexcept {
    return dim_ == 1 ? h_[0] : std::min(h_[0], h_[1]);
}

double Grid::cell_volume() const noexcept {
    return dim_ == 1 ? h_[0] : h_[0] * h_[1];
}

double Grid::volume() const noexcept {
    return dim_ == 1 ? lengths_[0] : lengths_[0] * lengths_[1];
}

Grid Grid::refined(int factor) const {
    std::vector<double> L(lengths_.begin(), lengths_.begin() + dim_);
    std::vector<int> n(cells_.begin(), cells_.begin() + dim_);
    for (int& c : n) c *= factor;
    return Grid(L, n);
}

Grid Grid::coarsened(int factor) const {
    std::vector<double> L(lengths_.begin(), lengths_.begin() + dim_);
    std::vector<int> n(cells_.begin(), cells_.begin() + dim_);
    for (int& c : n) c = std::max(4, c / factor);
    return Grid(L, n);
}

ScalarField::ScalarField(Grid g, std::vector<double> vals)
    : grid(std::move(g)), values(std::move(vals)) {
    if (values.size() != grid.size()) throw DomainError("field size does not match grid");
}

double ScalarField::min() const { return *std::min_element(values.begin(), values.end()); }
double ScalarField::max() const { return *std::max_element(values.begin(), values.end()); }

double ScalarField::max_abs() const {
    double m = 0.0;
    for (double x : values) m = std::max(m, std::abs(x));
    return m;
}

bool ScalarField::all_finite() const {
    return std::all_of(values.begin(), values.end(), [](double x) { return std::isfinite(x); });
}

double pairwise_sum(std::span<const double> xs) {
    if (xs.size() <= 16) {
        double s = 0.0;
        for (double x : xs) s += x;
        return s;
    }
    const std::size_t half = xs.size() / 2;
    return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

namespace {

// Accumulates (G_right - G_left) / h along one axis into `out`, where G is the
// face flux returned by `flux(left_index, right_index)`. Boundary faces carry
// zero flux.
template <class FaceFlux>
void accumulate_axis(const Grid& g, int axis, std::vector<double>& out, FaceFlux&& flux) {
    const int nx = g.cells(0);
    const int ny = g.dim() == 2 ? g.cells(1) : 1;
    const double h = g.spacing(axis);
    const int n_axis = g.cells(axis);
    std::vector<double> faces(static_cast<std::size_t>(n_axis) + 1);

    const int n_lines = axis == 0 ? ny : nx;
    for (int line = 0; line < n_lines; ++line) {
        auto idx = [&](int k) { return axis == 0 ? g.index(k, line) : g.index(line, k); };
        faces.front() = 0.0;
        faces.back() = 0.0;
        for (int k = 1; k < n_axis; ++k) faces[static_cast<std::size_t>(k)] = flux(idx(k - 1), idx(k), h);
        for (int k = 0; k < n_axis; ++k) {
            const auto kk = static_cast<std::size_t>(k);
            out[idx(k)] += (faces[kk + 1] - faces[kk]) / h;
        }
    }
}

}  // namespace

ScalarField laplacian_neumann(const ScalarField& f) {
    ScalarField out(f.grid, 0.0);
    const auto& x = f.values;
    for (int axis = 0; axis < f.grid.dim(); ++axis) {
        accumulate_axis(f.grid, axis, out.values,
                        [&](std::size_t l, std::size_t r, double h) { return (x[r] - x[l]) / h; });
    }
    return out;
}

CellMotility evaluate_cells(const MotilityFamily& fam, const ScalarField& v) {
    const std::size_t n = v.values.size();
    CellMotility cm{std::vector<double>(n), std::vector<double>(n)};
    if (singular_at_zero(fam)) {
        for (double x : v.values)
            if (!(x > 0.0)) throw DomainError(family_kind(fam) + " motility needs v > 0 in every cell");
    }
    if (const auto* s = std::get_if<SingularMotility>(&fam)) {
        for (std::size_t k = 0; k < n; ++k) {
            cm.gamma[k] = 1.0;
            cm.phi[k] = s->chi / v.values[k];
        }
    } else if (const auto* c = std::get_if<ConstantMotility>(&fam)) {
        std::fill(cm.gamma.begin(), cm.gamma.end(), c->gamma0);
        std::fill(cm.phi.begin(), cm.phi.end(), c->phi0);
    } else if (const auto* a = std::get_if<AlgebraicMotility>(&fam)) {
        const double coef = (1.0 - a->alpha) * a->lambda * a->sigma;
        for (std::size_t k = 0; k < n; ++k) {
            const double vk = v.values[k];
            const double pw = std::pow(vk, a->lambda);
            cm.gamma[k] = a->sigma / pw;
            cm.phi[k] = coef / (pw * vk);
        }
    } else {
        for (std::size_t k = 0; k < n; ++k) {
            cm.gamma[k] = eval_gamma(fam, v.values[k]);
            cm.phi[k] = eval_phi(fam, v.values[k]);
        }
    }
    return cm;
}

ScalarField chemotactic_flux_divergence(const State& state, const MotilityFamily& fam,
                                        FluxDiagnostics* diag, double gamma_floor) {
    const auto cm = evaluate_cells(fam, state.v);
    const auto& u = state.u.values;
    const auto& v = state.v.values;
    ScalarField out(state.u.grid, 0.0);
    double min_gamma = kInfinity;
    for (int axis = 0; axis < state.u.grid.dim(); ++axis) {
        accumulate_axis(state.u.grid, axis, out.values, [&](std::size_t l, std::size_t r, double h) {
            const double gamma_f = 0.5 * (cm.gamma[l] + cm.gamma[r]);
            const double phi_f = 0.5 * (cm.phi[l] + cm.phi[r]);
            min_gamma = std::min(min_gamma, gamma_f);
            const double w = phi_f * (v[r] - v[l]) / h;
            const double u_up = w >= 0.0 ? u[l] : u[r];
            return gamma_f * (u[r] - u[l]) / h - u_up * w;
        });
    }
    if (diag != nullptr) {
        diag->min_face_gamma = min_gamma;
        diag->degenerate = min_gamma < gamma_floor;
    }
    return out;
}

double integrate(const ScalarField& f) { return pairwise_sum(f.values) * f.grid.cell_volume(); }

double lp_norm(const ScalarField& f, double p) {
    if (std::isinf(p) && p > 0) return f.max_abs();
    if (!(p >= 1.0)) throw DomainError("lp_norm needs p >= 1 or p = inf");
    std::vector<double> powered(f.values.size());
    std::transform(f.values.begin(), f.values.end(), powered.begin(),
                   [p](double x) { return std::pow(std::abs(x), p); });
    return std::pow(pairwise_sum(powered) * f.grid.cell_volume(), 1.0 / p);
}

namespace {

template <class FaceFn>
void for_each_face(const Grid& g, FaceFn&& fn) {
    const int nx = g.cells(0);
    const int ny = g.dim() == 2 ? g.cells(1) : 1;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i + 1 < nx; ++i) fn(g.index(i, j), g.index(i + 1, j), g.spacing(0));
    if (g.dim() == 2)
        for (int j = 0; j + 1 < ny; ++j)
            for (int i = 0; i < nx; ++i) fn(g.index(i, j), g.index(i, j + 1), g.spacing(1));
}

}  // namespace

double max_face_gradient(const ScalarField& f) {
    double m = 0.0;
    for_each_face(f.grid, [&](std::size_t l, std::size_t r, double h) {
        m = std::max(m, std::abs(f.values[r] - f.values[l]) / h);
    });
    return m;
}

double max_face_velocity(const ScalarField& v, const CellMotility& cm) {
    double m = 0.0;
    for_each_face(v.grid, [&](std::size_t l, std::size_t r, double h) {
        const double phi_f = 0.5 * (cm.phi[l] + cm.phi[r]);
        m = std::max(m, std::abs(phi_f * (v.values[r] - v.values[l]) / h));
    });
    return m;
}

std::array<std::vector<double>, 2> centered_gradient(const ScalarField& f) {
    const Grid& g = f.grid;
    const int nx = g.cells(0);
    const int ny = g.dim() == 2 ? g.cells(1) : 1;
    std::array<std::vector<double>, 2> grad{std::vector<double>(g.size(), 0.0),
                                            std::vector<double>(g.size(), 0.0)};
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const std::size_t k = g.index(i, j);
            const double left = f.at(std::max(i - 1, 0), j);
            const double right = f.at(std::min(i + 1, nx - 1), j);
            grad[0][k] = (right - left) / (2.0 * g.spacing(0));
            if (g.dim() == 2) {
                const double down = f.at(i, std::max(j - 1, 0));
                const double up = f.at(i, std::min(j + 1, ny - 1));
                grad[1][k] = (up - down) / (2.0 * g.spacing(1));
            }
        }
    }
    return grad;
}

ScalarField reflect(const ScalarField& f, int axis) {
    ScalarField out(f.grid, 0.0);
    const int nx = f.grid.cells(0);
    const int ny = f.grid.dim() == 2 ? f.grid.cells(1) : 1;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            out.at(i, j) = axis == 0 ? f.at(nx - 1 - i, j) : f.at(i, ny - 1 - j);
    return out;
}

}  // namespace kemosim
