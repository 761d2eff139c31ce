#pragma once

/// @file io.hpp
/// @brief CSV series and snapshot files.

#include <filesystem>
#include <fstream>
#include <string>

#include "kemosim/field.hpp"
#include "kemosim/monitors.hpp"

namespace kemosim {

/// t,mass_u,int_v,min_v,min_gamma,sup_u,sup_grad_v,lp_u_p1,...,W,ineq_residual,identity_residual
std::string series_header(std::size_t n_lp);
std::string series_row(const MonitorRecord& rec);

/// Appends rows as they arrive and flushes each one.
class SeriesWriter {
public:
    SeriesWriter(const std::filesystem::path& path, std::size_t n_lp);
    void write(const MonitorRecord& rec);

private:
    std::ofstream out_;
};

/// One cell per row: x[,y],u,v with 17 significant digits.
void write_snapshot(const std::filesystem::path& path, const State& state);

/// Reads a snapshot written for `grid` (cells in grid order).
State read_snapshot(const std::filesystem::path& path, const Grid& grid);

std::string snapshot_name(double t);

/// printf("%.17g") with a trailing ".0" when the text would read as an integer.
std::string format_double(double x);

}  // namespace kemosim
