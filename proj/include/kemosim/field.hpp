#pragma once

/// @file field.hpp
/// @brief Cell-centred uniform grids with homogeneous Neumann boundaries and
/// the conservative operators of the chemotaxis system.

#include <array>
#include <span>
#include <vector>

#include "kemosim/motility.hpp"

namespace kemosim {

class Grid {
public:
    /// 1D or 2D grid. `lengths` and `cells` must have the same size (1 or 2),
    /// every axis needs at least 4 cells.
    Grid(std::vector<double> lengths, std::vector<int> cells);

    int dim() const noexcept { return dim_; }
    int cells(int axis) const noexcept { return cells_[static_cast<std::size_t>(axis)]; }
    double length(int axis) const noexcept { return lengths_[static_cast<std::size_t>(axis)]; }
    double spacing(int axis) const noexcept { return h_[static_cast<std::size_t>(axis)]; }
    double min_spacing() const noexcept;
    std::size_t size() const noexcept { return static_cast<std::size_t>(cells_[0]) * cells_[1]; }
    double cell_volume() const noexcept;
    double volume() const noexcept;

    std::size_t index(int i, int j = 0) const noexcept {
        return static_cast<std::size_t>(i) + static_cast<std::size_t>(cells_[0]) * j;
    }
    double center(int axis, int k) const noexcept { return (k + 0.5) * spacing(axis); }

    /// Same geometry with every axis scaled by `factor` in cell count.
    Grid refined(int factor) const;
    Grid coarsened(int factor) const;

    bool operator==(const Grid& other) const = default;

private:
    int dim_ = 1;
    std::array<int, 2> cells_{1, 1};
    std::array<double, 2> lengths_{1.0, 1.0};
    std::array<double, 2> h_{1.0, 1.0};
};

struct ScalarField {
    Grid grid;
    std::vector<double> values;

    explicit ScalarField(Grid g, double fill = 0.0) : grid(std::move(g)), values(grid.size(), fill) {}
    ScalarField(Grid g, std::vector<double> vals);

    double& operator[](std::size_t k) { return values[k]; }
    double operator[](std::size_t k) const { return values[k]; }
    double& at(int i, int j = 0) { return values[grid.index(i, j)]; }
    double at(int i, int j = 0) const { return values[grid.index(i, j)]; }

    double min() const;
    double max() const;
    double max_abs() const;
    bool all_finite() const;
};

struct State {
    ScalarField u;
    ScalarField v;
    double t = 0.0;
};

/// Fixed-order pairwise summation; result does not depend on threading.
double pairwise_sum(std::span<const double> xs);

ScalarField laplacian_neumann(const ScalarField& f);

struct FluxDiagnostics {
    double min_face_gamma = kInfinity;
    bool degenerate = false;  ///< min_face_gamma < gamma_floor
};

/// div(gamma(v) grad u - u phi(v) grad v) by finite volumes: arithmetic-mean
/// face motilities, the advective flux taken from the upwind cell of the
/// velocity phi grad v, zero flux through the boundary.
ScalarField chemotactic_flux_divergence(const State& state, const MotilityFamily& fam,
                                        FluxDiagnostics* diag = nullptr,
                                        double gamma_floor = 1e-10);

double integrate(const ScalarField& f);

/// p >= 1, or p = +inf for the max norm.
double lp_norm(const ScalarField& f, double p);

/// Largest |f_R - f_L| / h over interior faces.
double max_face_gradient(const ScalarField& f);

/// Cellwise gamma(v) and phi(v), evaluated once per call.
struct CellMotility {
    std::vector<double> gamma;
    std::vector<double> phi;
};
CellMotility evaluate_cells(const MotilityFamily& fam, const ScalarField& v);

/// Largest |phi_face (v_R - v_L) / h| over interior faces.
double max_face_velocity(const ScalarField& v, const CellMotility& cm);

/// Centred cell gradients with mirrored ghosts; one component per axis.
std::array<std::vector<double>, 2> centered_gradient(const ScalarField& f);

/// Mirror image along `axis`.
ScalarField reflect(const ScalarField& f, int axis);

}  // namespace kemosim
