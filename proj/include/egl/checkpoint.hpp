#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "egl/evolution.hpp"
#include "egl/lagrangian.hpp"

namespace egl {

inline constexpr std::uint32_t checkpoint_version = 1;

struct TracerState {
  Point alpha{0.0, 0.0};
  Point x{0.0, 0.0};
  Mat2 jacobian = identity2;
  friend bool operator==(const TracerState&, const TracerState&) = default;
};

/// Everything needed to resume a run bit-for-bit.
///
/// Layout, all little-endian: "EGL1", u32 version, u32 n, f64 t, M*M f64
/// spectrum (j-major), i64 step_count, f64 last_dt, int_grad_u, grad_u, speed,
/// initial_speed, log_s, delta, delta1, u32 initial kind, u32 tracer count,
/// then per tracer 8 f64: alpha (2), x (2), J (4).
struct Checkpoint {
  std::uint32_t version = checkpoint_version;
  int n = 0;
  double t = 0.0;
  std::vector<double> spectrum;
  std::int64_t step_count = 0;
  double last_dt = 0.0;
  double int_grad_u = 0.0;
  double grad_u = 0.0;
  double speed = 0.0;
  double initial_speed = 0.0;
  double log_s = 0.0;
  double delta = 0.0;
  double delta1 = 0.0;
  std::uint32_t initial_kind = 0;
  std::vector<TracerState> tracers;

  friend bool operator==(const Checkpoint&, const Checkpoint&) = default;
};

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<unsigned char> encode_checkpoint(const Checkpoint& c);
Checkpoint decode_checkpoint(const std::vector<unsigned char>& bytes);

/// Writes to path + ".tmp" and renames over path.
void save_checkpoint(const std::string& path, const Checkpoint& c);
Checkpoint load_checkpoint(const std::string& path);

Checkpoint make_checkpoint(const SimState& state, const std::vector<Tracer>& tracers);
SimState state_from_checkpoint(const Checkpoint& c);
std::vector<Tracer> tracers_from_checkpoint(const Checkpoint& c);

/// Replace `path` atomically with `contents`.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace egl
