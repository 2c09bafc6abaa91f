#include "rbslip/checkpoint.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace rbslip {

namespace {

constexpr char kMagic[5] = {'R', 'B', 'N', 'S', '1'};

template <class T>
void put(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is, const std::string& what) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw std::runtime_error("checkpoint truncated while reading " + what);
  return v;
}

void put_series(std::ostream& os, double mean, const std::vector<FourierMode>& modes) {
  put(os, mean);
  put(os, static_cast<std::int32_t>(modes.size()));
  for (const FourierMode& m : modes) {
    put(os, static_cast<std::int32_t>(m.k));
    put(os, m.cos_coeff);
    put(os, m.sin_coeff);
  }
}

void get_series(std::istream& is, double& mean, std::vector<FourierMode>& modes, const std::string& what) {
  mean = get<double>(is, what);
  const auto n = get<std::int32_t>(is, what);
  if (n < 0 || n > 1 << 20) throw std::runtime_error("checkpoint: bad mode count in " + what);
  modes.resize(n);
  for (FourierMode& m : modes) {
    m.k = get<std::int32_t>(is, what);
    m.cos_coeff = get<double>(is, what);
    m.sin_coeff = get<double>(is, what);
  }
}

void put_field(std::ostream& os, const ScalarField& f, std::size_t n) {
  if (f.values.size() != n) throw std::invalid_argument("checkpoint: field size mismatch");
  os.write(reinterpret_cast<const char*>(f.values.data()), static_cast<std::streamsize>(n * sizeof(double)));
}

ScalarField get_field(std::istream& is, int n1, int n2, const std::string& what) {
  ScalarField f(n1, n2);
  is.read(reinterpret_cast<char*>(f.values.data()), static_cast<std::streamsize>(f.values.size() * sizeof(double)));
  if (!is) throw std::runtime_error("checkpoint truncated while reading " + what);
  return f;
}

}  // namespace

void write_checkpoint(const std::string& path, const CheckpointHeader& h, const FlowState& s, const DriverClock& c) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + tmp + " for writing");
    const std::size_t n = static_cast<std::size_t>(h.n1) * h.n2;
    os.write(kMagic, sizeof kMagic);
    put(os, static_cast<std::int32_t>(h.n1));
    put(os, static_cast<std::int32_t>(h.n2));
    put(os, h.gamma);
    put(os, h.params.ra);
    put(os, h.params.pr);
    put(os, h.time);
    put_series(os, h.profile.mean_offset, h.profile.modes);
    put_series(os, h.alpha_bottom.mean, h.alpha_bottom.modes);
    put_series(os, h.alpha_top.mean, h.alpha_top.modes);
    put_field(os, s.omega, n);
    put_field(os, s.psi, n);
    put_field(os, s.temp, n);
    put(os, static_cast<std::int64_t>(s.step));
    put(os, s.dt_prev);
    put(os, s.circulation);
    put(os, s.psi_top);
    put(os, static_cast<std::uint8_t>(s.has_history ? 1 : 0));
    if (s.has_history) {
      put_field(os, s.n_omega_prev, n);
      put_field(os, s.n_temp_prev, n);
    } else {
      const ScalarField z(h.n1, h.n2);
      put_field(os, z, n);
      put_field(os, z, n);
    }
    put(os, c.dt_next);
    put(os, c.next_sample);
    put(os, c.next_checkpoint);
    if (!os) throw std::runtime_error("write failed for " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

Checkpoint read_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open checkpoint " + path);
  char magic[5];
  is.read(magic, 5);
  if (!is || std::memcmp(magic, kMagic, 5) != 0) throw std::runtime_error(path + " is not an RBNS1 checkpoint");
  Checkpoint c;
  CheckpointHeader& h = c.header;
  h.n1 = get<std::int32_t>(is, "n1");
  h.n2 = get<std::int32_t>(is, "n2");
  if (h.n1 < 4 || h.n2 < 3) throw std::runtime_error("checkpoint: implausible grid size");
  h.gamma = get<double>(is, "gamma");
  h.params.ra = get<double>(is, "ra");
  h.params.pr = get<double>(is, "pr");
  h.time = get<double>(is, "time");
  get_series(is, h.profile.mean_offset, h.profile.modes, "height series");
  h.profile.gamma = h.gamma;
  h.alpha_bottom.gamma = h.alpha_top.gamma = h.gamma;
  get_series(is, h.alpha_bottom.mean, h.alpha_bottom.modes, "alpha bottom series");
  get_series(is, h.alpha_top.mean, h.alpha_top.modes, "alpha top series");
  FlowState& s = c.state;
  s.omega = get_field(is, h.n1, h.n2, "omega");
  s.psi = get_field(is, h.n1, h.n2, "psi");
  s.temp = get_field(is, h.n1, h.n2, "temp");
  s.time = h.time;
  s.step = get<std::int64_t>(is, "step");
  s.dt_prev = get<double>(is, "dt_prev");
  s.circulation = get<double>(is, "circulation");
  s.psi_top = get<double>(is, "psi_top");
  s.has_history = get<std::uint8_t>(is, "history flag") != 0;
  s.n_omega_prev = get_field(is, h.n1, h.n2, "omega history");
  s.n_temp_prev = get_field(is, h.n1, h.n2, "temperature history");
  c.clock.dt_next = get<double>(is, "dt_next");
  c.clock.next_sample = get<double>(is, "next_sample");
  c.clock.next_checkpoint = get<double>(is, "next_checkpoint");
  return c;
}

}  // namespace rbslip
