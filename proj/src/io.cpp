#include "kemosim/io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "kemosim/errors.hpp"

namespace kemosim {

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    std::string s(buf);
    if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
    return s;
}

std::string series_header(std::size_t n_lp) {
    std::string h = "t,mass_u,int_v,min_v,min_gamma,sup_u,sup_grad_v";
    for (std::size_t k = 1; k <= n_lp; ++k) h += ",lp_u_p" + std::to_string(k);
    h += ",W,ineq_residual,identity_residual";
    return h;
}

std::string series_row(const MonitorRecord& r) {
    std::string row;
    auto put = [&row](double x) {
        if (!row.empty()) row += ',';
        row += format_double(x);
    };
    for (double x : {r.t, r.mass_u, r.int_v, r.min_v, r.min_gamma, r.sup_u, r.sup_grad_v}) put(x);
    for (double x : r.lp_u) put(x);
    for (double x : {r.W, r.ineq_residual, r.identity_residual}) put(x);
    return row;
}

SeriesWriter::SeriesWriter(const std::filesystem::path& path, std::size_t n_lp) : out_(path) {
    if (!out_) throw std::runtime_error("cannot open " + path.string());
    out_ << series_header(n_lp) << '\n' << std::flush;
}

void SeriesWriter::write(const MonitorRecord& rec) { out_ << series_row(rec) << '\n' << std::flush; }

void write_snapshot(const std::filesystem::path& path, const State& state) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    const Grid& g = state.u.grid;
    out << (g.dim() == 2 ? "x,y,u,v\n" : "x,u,v\n");
    const int nx = g.cells(0);
    const int ny = g.dim() == 2 ? g.cells(1) : 1;
    char buf[128];
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            if (g.dim() == 2)
                std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", g.center(0, i),
                              g.center(1, j), state.u.at(i, j), state.v.at(i, j));
            else
                std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", g.center(0, i),
                              state.u.at(i), state.v.at(i));
            out << buf;
        }
    }
}

State read_snapshot(const std::filesystem::path& path, const Grid& grid) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::string line;
    std::getline(in, line);
    const std::string expected = grid.dim() == 2 ? "x,y,u,v" : "x,u,v";
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != expected)
        throw std::runtime_error(path.string() + ": expected header '" + expected + "'");

    State s{ScalarField(grid), ScalarField(grid), 0.0};
    std::size_t k = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        if (k >= grid.size()) throw std::runtime_error(path.string() + ": too many rows");
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> cols;
        while (std::getline(ss, cell, ',')) cols.push_back(std::stod(cell));
        if (cols.size() != static_cast<std::size_t>(grid.dim()) + 2)
            throw std::runtime_error(path.string() + ": malformed row " + std::to_string(k + 2));
        s.u[k] = cols[cols.size() - 2];
        s.v[k] = cols.back();
        ++k;
    }
    if (k != grid.size())
        throw std::runtime_error(path.string() + ": expected " + std::to_string(grid.size()) +
                                 " rows, got " + std::to_string(k));
    return s;
}

std::string snapshot_name(double t) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "snap_%.6f.csv", t);
    return buf;
}

}  // namespace kemosim
