#include "egl/transform.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>

namespace egl {

namespace {

// The FFTW planner is not thread safe; execution with new arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

struct QuadrantTransform::Plans {
  fftw_plan dst = nullptr;  // RODFT00, length M
  fftw_plan dct = nullptr;  // REDFT00, length q
};

QuadrantTransform::QuadrantTransform(int n) : n_(n), q_(n / 2 + 1), plans_(new Plans) {
  const int m = q_ - 2;
  std::vector<double> a(q_), b(q_);
  // FFTW_ESTIMATE keeps plan choice (and therefore rounding) reproducible.
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  std::lock_guard lock(planner_mutex());
  plans_->dst = fftw_plan_r2r_1d(m, a.data(), b.data(), FFTW_RODFT00, flags);
  plans_->dct = fftw_plan_r2r_1d(q_, a.data(), b.data(), FFTW_REDFT00, flags);
  if (plans_->dst == nullptr || plans_->dct == nullptr) {
    throw std::runtime_error("FFTW planning failed");
  }
}

QuadrantTransform::~QuadrantTransform() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(plans_->dst);
  fftw_destroy_plan(plans_->dct);
}

// One line transform of length q. `work` needs room for q doubles.
void QuadrantTransform::line(bool forward, Parity p, const double* in, double* out,
                             double* work) const {
  const int q = q_;
  const int m = q - 2;
  if (p == Parity::odd) {
    fftw_execute_r2r(plans_->dst, const_cast<double*>(in + 1), work);
    const double scale = forward ? 0.5 : 1.0 / (m + 1);
    out[0] = 0.0;
    out[q - 1] = 0.0;
    for (int i = 0; i < m; ++i) out[i + 1] = scale * work[i];
    return;
  }
  if (forward) {
    work[0] = in[0];
    work[q - 1] = in[q - 1];
    for (int i = 1; i < q - 1; ++i) work[i] = 0.5 * in[i];
    fftw_execute_r2r(plans_->dct, work, out);
  } else {
    fftw_execute_r2r(plans_->dct, const_cast<double*>(in), work);
    const double scale = 1.0 / (2.0 * (m + 1));
    out[0] = scale * work[0];
    out[q - 1] = scale * work[q - 1];
    for (int i = 1; i < q - 1; ++i) out[i] = 2.0 * scale * work[i];
  }
}

namespace {

// Apply line2 along every row (axis 2), then line1 along every column (axis 1).
template <class Line1, class Line2>
void separable(int q, std::span<const double> in, std::span<double> out, const Line1& line1,
               const Line2& line2) {
  std::vector<double> tmp(static_cast<std::size_t>(q) * q);
#pragma omp parallel
  {
    std::vector<double> work(q), col_in(q), col_out(q);
#pragma omp for schedule(static)
    for (int r = 0; r < q; ++r) {
      line2(&in[static_cast<std::size_t>(r) * q], &tmp[static_cast<std::size_t>(r) * q],
            work.data());
    }
#pragma omp for schedule(static)
    for (int c = 0; c < q; ++c) {
      for (int r = 0; r < q; ++r) col_in[r] = tmp[static_cast<std::size_t>(r) * q + c];
      line1(col_in.data(), col_out.data(), work.data());
      for (int r = 0; r < q; ++r) out[static_cast<std::size_t>(r) * q + c] = col_out[r];
    }
  }
}

}  // namespace

void QuadrantTransform::synthesize(std::span<const double> coeff, Parity p1, Parity p2,
                                   std::span<double> samples) const {
  auto l1 = [&](const double* a, double* b, double* w) { line(true, p1, a, b, w); };
  auto l2 = [&](const double* a, double* b, double* w) { line(true, p2, a, b, w); };
  separable(q_, coeff, samples, l1, l2);
}

void QuadrantTransform::analyze(std::span<const double> samples, Parity p1, Parity p2,
                                std::span<double> coeff) const {
  auto l1 = [&](const double* a, double* b, double* w) { line(false, p1, a, b, w); };
  auto l2 = [&](const double* a, double* b, double* w) { line(false, p2, a, b, w); };
  separable(q_, samples, coeff, l1, l2);
}

const QuadrantTransform& quadrant_transform(int n) {
  static std::mutex cache_mutex;
  static std::map<int, std::unique_ptr<QuadrantTransform>> cache;
  std::lock_guard lock(cache_mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<QuadrantTransform>(n);
  return *slot;
}

QuadrantArray pad_spectrum(const Grid& grid, std::span<const double> spectrum) {
  const int m = grid.modes();
  const int q = grid.quadrant_size();
  QuadrantArray modal(static_cast<std::size_t>(q) * q, 0.0);
  for (int j = 1; j <= m; ++j) {
    for (int k = 1; k <= m; ++k) {
      modal[static_cast<std::size_t>(j) * q + k] =
          spectrum[static_cast<std::size_t>(j - 1) * m + (k - 1)];
    }
  }
  return modal;
}

std::vector<double> crop_spectrum(const Grid& grid, std::span<const double> modal) {
  const int m = grid.modes();
  const int q = grid.quadrant_size();
  std::vector<double> spectrum(static_cast<std::size_t>(m) * m);
  for (int j = 1; j <= m; ++j) {
    for (int k = 1; k <= m; ++k) {
      spectrum[static_cast<std::size_t>(j - 1) * m + (k - 1)] =
          modal[static_cast<std::size_t>(j) * q + k];
    }
  }
  return spectrum;
}

namespace {

// Full-grid index and sign for quadrant node m along one axis.
struct Source {
  int index;
  double sign;
};

Source quadrant_source(const Grid& grid, int m, Parity p) {
  if (m == grid.quadrant_size() - 1) {
    return {0, p == Parity::odd ? -1.0 : 1.0};
  }
  return {grid.origin_index() + m, 1.0};
}

}  // namespace

QuadrantArray quadrant_from_full(const Grid& grid, std::span<const double> values,
                                 Parity p1, Parity p2) {
  const int q = grid.quadrant_size();
  QuadrantArray out(static_cast<std::size_t>(q) * q);
  for (int m1 = 0; m1 < q; ++m1) {
    const Source s1 = quadrant_source(grid, m1, p1);
    for (int m2 = 0; m2 < q; ++m2) {
      const Source s2 = quadrant_source(grid, m2, p2);
      out[static_cast<std::size_t>(m1) * q + m2] =
          s1.sign * s2.sign * values[grid.index(s1.index, s2.index)];
    }
  }
  return out;
}

std::vector<double> full_from_quadrant(const Grid& grid, std::span<const double> samples,
                                       Parity p1, Parity p2) {
  const int n = grid.n();
  const int q = grid.quadrant_size();
  const int c = grid.origin_index();
  std::vector<double> out(grid.size());
  auto fold = [&](int i, Parity p, int& m, double& sign) {
    const int offset = i - c;  // -n/2 .. n/2-1
    m = offset < 0 ? -offset : offset;
    sign = (offset < 0 && p == Parity::odd) ? -1.0 : 1.0;
  };
#pragma omp parallel for schedule(static)
  for (int i1 = 0; i1 < n; ++i1) {
    int m1;
    double s1;
    fold(i1, p1, m1, s1);
    for (int i2 = 0; i2 < n; ++i2) {
      int m2;
      double s2;
      fold(i2, p2, m2, s2);
      out[grid.index(i1, i2)] = s1 * s2 * samples[static_cast<std::size_t>(m1) * q + m2];
    }
  }
  return out;
}

}  // namespace egl
