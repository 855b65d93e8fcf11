#include "egl/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

namespace egl {

namespace {

constexpr char magic[4] = {'E', 'G', 'L', '1'};

class Writer {
 public:
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  std::vector<unsigned char> out;
};

class Reader {
 public:
  explicit Reader(const std::vector<unsigned char>& b) : bytes(b) {}
  void need(std::size_t k) const {
    if (pos + k > bytes.size()) throw CheckpointError("checkpoint is truncated");
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes[pos++]) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes[pos++]) << (8 * i);
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  const std::vector<unsigned char>& bytes;
  std::size_t pos = 0;
};

}  // namespace

std::vector<unsigned char> encode_checkpoint(const Checkpoint& c) {
  const std::size_t m = c.n / 2 - 1;
  if (c.spectrum.size() != m * m) throw CheckpointError("spectrum size does not match n");
  Writer w;
  w.out.insert(w.out.end(), std::begin(magic), std::end(magic));
  w.u32(c.version);
  w.u32(static_cast<std::uint32_t>(c.n));
  w.f64(c.t);
  for (double v : c.spectrum) w.f64(v);
  w.u64(static_cast<std::uint64_t>(c.step_count));
  for (double v : {c.last_dt, c.int_grad_u, c.grad_u, c.speed, c.initial_speed, c.log_s, c.delta,
                   c.delta1}) {
    w.f64(v);
  }
  w.u32(c.initial_kind);
  w.u32(static_cast<std::uint32_t>(c.tracers.size()));
  for (const auto& tr : c.tracers) {
    for (double v : tr.alpha) w.f64(v);
    for (double v : tr.x) w.f64(v);
    for (double v : tr.jacobian) w.f64(v);
  }
  return w.out;
}

Checkpoint decode_checkpoint(const std::vector<unsigned char>& bytes) {
  Reader r(bytes);
  r.need(4);
  if (std::memcmp(bytes.data(), magic, 4) != 0) throw CheckpointError("not an EGL1 checkpoint");
  r.pos = 4;
  Checkpoint c;
  c.version = r.u32();
  if (c.version != checkpoint_version) {
    std::ostringstream msg;
    msg << "checkpoint version " << c.version << " is not supported (expected "
        << checkpoint_version << ")";
    throw CheckpointError(msg.str());
  }
  const std::uint32_t n = r.u32();
  if (n < 32 || n > (1u << 16) || (n & (n - 1)) != 0) {
    throw CheckpointError("checkpoint grid size is invalid");
  }
  c.n = static_cast<int>(n);
  c.t = r.f64();
  const std::size_t m = n / 2 - 1;
  r.need(m * m * 8);
  c.spectrum.resize(m * m);
  for (auto& v : c.spectrum) v = r.f64();
  c.step_count = static_cast<std::int64_t>(r.u64());
  for (double* p : {&c.last_dt, &c.int_grad_u, &c.grad_u, &c.speed, &c.initial_speed, &c.log_s,
                    &c.delta, &c.delta1}) {
    *p = r.f64();
  }
  c.initial_kind = r.u32();
  const std::uint32_t count = r.u32();
  r.need(static_cast<std::size_t>(count) * 64);
  c.tracers.resize(count);
  for (auto& tr : c.tracers) {
    for (auto& v : tr.alpha) v = r.f64();
    for (auto& v : tr.x) v = r.f64();
    for (auto& v : tr.jacobian) v = r.f64();
  }
  if (r.pos != bytes.size()) throw CheckpointError("trailing bytes after checkpoint payload");
  return c;
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw std::runtime_error("write to '" + tmp + "' failed");
  }
  std::filesystem::rename(tmp, path);
}

void save_checkpoint(const std::string& path, const Checkpoint& c) {
  const auto bytes = encode_checkpoint(c);
  write_file_atomic(path, std::string(bytes.begin(), bytes.end()));
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot read checkpoint '" + path + "'");
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  return decode_checkpoint(bytes);
}

Checkpoint make_checkpoint(const SimState& state, const std::vector<Tracer>& tracers) {
  Checkpoint c;
  c.n = state.omega.grid().n();
  c.t = state.t;
  c.spectrum.assign(state.omega.spectrum().begin(), state.omega.spectrum().end());
  c.step_count = state.step_count;
  c.last_dt = state.last_dt;
  c.int_grad_u = state.int_grad_u;
  c.grad_u = state.grad_u;
  c.speed = state.speed;
  c.initial_speed = state.initial_speed;
  for (const auto& tr : tracers) c.tracers.push_back({tr.alpha, tr.x, tr.jacobian});
  return c;
}

SimState state_from_checkpoint(const Checkpoint& c) {
  SimState s{ScalarField::from_spectrum(Grid(c.n), c.spectrum)};
  s.t = c.t;
  s.step_count = c.step_count;
  s.last_dt = c.last_dt;
  s.int_grad_u = c.int_grad_u;
  s.grad_u = c.grad_u;
  s.speed = c.speed;
  s.initial_speed = c.initial_speed;
  return s;
}

std::vector<Tracer> tracers_from_checkpoint(const Checkpoint& c) {
  std::vector<Tracer> out;
  for (const auto& ts : c.tracers) {
    Tracer tr;
    tr.alpha = ts.alpha;
    tr.x = ts.x;
    tr.jacobian = ts.jacobian;
    tr.history.push_back({c.t, ts.x[0], ts.x[1], det(ts.jacobian)});
    out.push_back(std::move(tr));
  }
  return out;
}

}  // namespace egl
