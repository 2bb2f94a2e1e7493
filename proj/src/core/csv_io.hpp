#pragma once

#include <string>
#include <vector>

#include "core/state.hpp"

namespace mutfront {

// All CSV floats are written with %.17g so a rerun of the same binary on the
// same config reproduces the files byte for byte.
std::string format_double(double x);

struct SweepRow {
  std::vector<double> coords;    // one per axis
  std::string classification;    // Classification name or "Error"
  double t_blow = std::nan("");
  double beta_fit = std::nan("");
  double h_final = std::nan("");
};

struct ConvergenceRow {
  int level = 0;
  double dx = 0, dt = 0;
  double err_u = 0, err_front = 0;
  double order_u = std::nan("");
  double order_front = std::nan("");
};

// Header: t,g,h,g_dot,h_dot,max_u,max_v,mass_u
void write_timeseries_csv(const std::vector<FrontRecord>& records, const std::string& path);
std::vector<FrontRecord> read_timeseries_csv(const std::string& path);

// Header: <axis names...>,classification,t_blow,beta_fit,h_final
void write_sweep_csv(const std::vector<std::string>& axis_names,
                     const std::vector<SweepRow>& rows, const std::string& path);

// Header: level,dx,dt,err_u,err_front,order_u,order_front
void write_convergence_csv(const std::vector<ConvergenceRow>& rows, const std::string& path);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace mutfront
