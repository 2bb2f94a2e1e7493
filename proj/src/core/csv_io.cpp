#include "core/csv_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "core/errors.hpp"

namespace mutfront {

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) raise(Errc::io_error, "cannot open " + path + " for writing");
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) raise(Errc::io_error, "failed writing " + path);
}

}  // namespace

void write_timeseries_csv(const std::vector<FrontRecord>& records, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "t,g,h,g_dot,h_dot,max_u,max_v,mass_u\n";
  for (const FrontRecord& r : records) {
    out << format_double(r.t) << ',' << format_double(r.g) << ',' << format_double(r.h)
        << ',' << format_double(r.g_dot) << ',' << format_double(r.h_dot) << ','
        << format_double(r.max_u) << ',' << format_double(r.max_v) << ','
        << format_double(r.mass_u) << '\n';
  }
  finish(out, path);
}

std::vector<FrontRecord> read_timeseries_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::io_error, "cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) raise(Errc::io_error, path + " is empty");
  if (line != "t,g,h,g_dot,h_dot,max_u,max_v,mass_u") {
    raise(Errc::parse_error, path + " does not carry the timeseries header");
  }
  std::vector<FrontRecord> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ss(line);
    FrontRecord r;
    char comma;
    if (!(ss >> r.t >> comma >> r.g >> comma >> r.h >> comma >> r.g_dot >> comma >>
          r.h_dot >> comma >> r.max_u >> comma >> r.max_v >> comma >> r.mass_u)) {
      raise(Errc::parse_error,
            path + ":" + std::to_string(lineno) + " is not a timeseries row");
    }
    out.push_back(r);
  }
  return out;
}

void write_sweep_csv(const std::vector<std::string>& axis_names,
                     const std::vector<SweepRow>& rows, const std::string& path) {
  std::ofstream out = open_out(path);
  for (const std::string& n : axis_names) out << n << ',';
  out << "classification,t_blow,beta_fit,h_final\n";
  for (const SweepRow& r : rows) {
    for (double c : r.coords) out << format_double(c) << ',';
    out << r.classification << ',' << format_double(r.t_blow) << ','
        << format_double(r.beta_fit) << ',' << format_double(r.h_final) << '\n';
  }
  finish(out, path);
}

void write_convergence_csv(const std::vector<ConvergenceRow>& rows, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "level,dx,dt,err_u,err_front,order_u,order_front\n";
  for (const ConvergenceRow& r : rows) {
    out << r.level << ',' << format_double(r.dx) << ',' << format_double(r.dt) << ','
        << format_double(r.err_u) << ',' << format_double(r.err_front) << ','
        << format_double(r.order_u) << ',' << format_double(r.order_front) << '\n';
  }
  finish(out, path);
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out = open_out(path);
  out << content;
  finish(out, path);
}

}  // namespace mutfront
