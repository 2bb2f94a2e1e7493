#include "core/snapshot.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "core/version.hpp"

namespace mutfront {

namespace {

constexpr char kMagic[8] = {'M', 'F', 'S', 'N', 'A', 'P', '\0', '\1'};
constexpr std::uint32_t kMaxGrid = 1u << 24;
constexpr std::uint32_t kMaxEntries = 1u << 24;

template <typename T>
void put(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T take(std::ifstream& in, const char* what) {
  T v;
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) raise(Errc::io_error, std::string("snapshot truncated while reading ") + what);
  return v;
}

void put_state(std::ofstream& out, const FieldState& s) {
  put(out, s.t);
  put(out, s.front.g);
  put(out, s.front.h);
  put(out, s.front.g_dot);
  put(out, s.front.h_dot);
  out.write(reinterpret_cast<const char*>(s.u.data()),
            static_cast<std::streamsize>(s.u.size() * sizeof(double)));
  out.write(reinterpret_cast<const char*>(s.v.data()),
            static_cast<std::streamsize>(s.v.size() * sizeof(double)));
}

FieldState take_state(std::ifstream& in, std::size_t n_u, std::size_t n_v) {
  FieldState s;
  s.t = take<double>(in, "state time");
  s.front.g = take<double>(in, "state g");
  s.front.h = take<double>(in, "state h");
  s.front.g_dot = take<double>(in, "state g_dot");
  s.front.h_dot = take<double>(in, "state h_dot");
  s.u.resize(n_u);
  s.v.resize(n_v);
  in.read(reinterpret_cast<char*>(s.u.data()),
          static_cast<std::streamsize>(n_u * sizeof(double)));
  in.read(reinterpret_cast<char*>(s.v.data()),
          static_cast<std::streamsize>(n_v * sizeof(double)));
  if (!in) raise(Errc::io_error, "snapshot truncated while reading field arrays");
  return s;
}

}  // namespace

void write_snapshot(const Simulator& sim, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) raise(Errc::io_error, "cannot open " + path + " for writing");

  out.write(kMagic, sizeof(kMagic));
  put(out, static_cast<std::uint32_t>(kSnapshotFormatVersion));
  put(out, static_cast<std::uint32_t>(0));  // reserved

  const ModelParams& p = sim.params().get();
  const double pv[12] = {p.d1, p.d2, p.a1, p.a2, p.b1, p.b2,
                         p.c1, p.c2, p.mu, p.b,  p.tau1, p.tau2};
  out.write(reinterpret_cast<const char*>(pv), sizeof(pv));

  const Discretization& d = sim.disc();
  put(out, static_cast<std::int32_t>(d.n_u));
  put(out, static_cast<std::int32_t>(d.n_v));
  put(out, d.L);
  put(out, d.dt);
  put(out, d.t_end);
  put(out, d.blowup_threshold);
  put(out, d.cfl_safety);
  put(out, static_cast<std::int32_t>(d.output_stride));
  put(out, static_cast<std::int32_t>(d.max_dt_retries));

  put(out, static_cast<std::uint64_t>(sim.step_index()));
  put(out, sim.initial_gradient_scale());

  put_state(out, sim.state());
  put_state(out, sim.history().initial());
  const auto& entries = sim.history().entries();
  put(out, static_cast<std::uint32_t>(entries.size()));
  for (const FieldState& s : entries) put_state(out, s);

  out.flush();
  if (!out) raise(Errc::io_error, "failed writing snapshot " + path);
}

SnapshotData read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(Errc::io_error, "cannot open snapshot " + path);

  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(magic)) != 0) {
    raise(Errc::parse_error, path + " is not a snapshot file");
  }
  const auto version = take<std::uint32_t>(in, "format version");
  if (version != static_cast<std::uint32_t>(kSnapshotFormatVersion)) {
    raise(Errc::schema_mismatch,
          "snapshot format version " + std::to_string(version) + " not supported");
  }
  (void)take<std::uint32_t>(in, "reserved");

  SnapshotData snap;
  double pv[12];
  in.read(reinterpret_cast<char*>(pv), sizeof(pv));
  if (!in) raise(Errc::io_error, "snapshot truncated in parameters");
  snap.params = ModelParams{pv[0], pv[1], pv[2], pv[3], pv[4],  pv[5],
                            pv[6], pv[7], pv[8], pv[9], pv[10], pv[11]};

  snap.disc.n_u = take<std::int32_t>(in, "n_u");
  snap.disc.n_v = take<std::int32_t>(in, "n_v");
  if (snap.disc.n_u < 5 || snap.disc.n_v < 5 ||
      static_cast<std::uint32_t>(snap.disc.n_u) > kMaxGrid ||
      static_cast<std::uint32_t>(snap.disc.n_v) > kMaxGrid) {
    raise(Errc::parse_error, "snapshot grid sizes are implausible");
  }
  snap.disc.L = take<double>(in, "L");
  snap.disc.dt = take<double>(in, "dt");
  snap.disc.t_end = take<double>(in, "t_end");
  snap.disc.blowup_threshold = take<double>(in, "blowup_threshold");
  snap.disc.cfl_safety = take<double>(in, "cfl_safety");
  snap.disc.output_stride = take<std::int32_t>(in, "output_stride");
  snap.disc.max_dt_retries = take<std::int32_t>(in, "max_dt_retries");

  snap.step_index = take<std::uint64_t>(in, "step index");
  snap.initial_gradient_scale = take<double>(in, "gradient scale");

  const std::size_t n_u = static_cast<std::size_t>(snap.disc.n_u);
  const std::size_t n_v = static_cast<std::size_t>(snap.disc.n_v);
  snap.current = take_state(in, n_u, n_v);
  snap.initial = take_state(in, n_u, n_v);
  const auto count = take<std::uint32_t>(in, "history count");
  if (count == 0 || count > kMaxEntries) {
    raise(Errc::parse_error, "snapshot history count is implausible");
  }
  for (std::uint32_t i = 0; i < count; ++i) {
    snap.entries.push_back(take_state(in, n_u, n_v));
  }
  return snap;
}

Simulator simulator_from_snapshot(SnapshotData snap, double t_end_override) {
  const ValidatedParams p = ValidatedParams::validate(snap.params);
  Discretization d = snap.disc;
  if (!std::isnan(t_end_override)) {
    if (!(t_end_override > snap.current.t)) {
      raise(Errc::invalid_argument, "t_end override must lie beyond the snapshot time");
    }
    d.t_end = t_end_override;
  }
  return Simulator(p, d, std::move(snap.current), std::move(snap.initial),
                   std::move(snap.entries), snap.initial_gradient_scale,
                   snap.step_index);
}

}  // namespace mutfront
