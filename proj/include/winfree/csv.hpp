#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "winfree/dynamics.hpp"
#include "winfree/model.hpp"
#include "winfree/sweep.hpp"

namespace winfree {

// Shortest representation that still round-trips a double exactly.
[[nodiscard]] std::string format_real(double value);

// Header: t,theta_0,...,theta_{N-1},A,R,D,Inc. The trailing columns are the
// extremal-phase functionals and the mean influence, recomputed on read, so
// only t and the phases are parsed back.
void write_trace_csv(std::ostream& out, const Trace& trace, const Model& model);
[[nodiscard]] Trace read_trace_csv(std::istream& in);

// Header: n,kappa,seed,label,rho_mean,rho_spread,wall_time_s; rows sorted by
// (n, kappa, seed). Wall times are written as 0 unless timings is set: the
// sweep outputs are otherwise byte-stable across runs and worker counts.
void write_cells_csv(std::ostream& out, std::vector<SweepCell> cells, bool timings = false);
[[nodiscard]] std::vector<SweepCell> read_cells_csv(std::istream& in);

// Header: n,kappa_i,kappa_p,kappa_d; undefined entries stay empty.
void write_curves_csv(std::ostream& out, const CriticalCurves& curves);

}  // namespace winfree
