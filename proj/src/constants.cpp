#include "egl/constants.hpp"

#include <numbers>

namespace egl {

namespace {

constexpr unsigned guard_digits = 10;

}  // namespace

TheoreticalConstants theoretical_constants(double A, double C3, unsigned digits) {
  if (!(A >= 2.0)) throw std::invalid_argument("A must be >= 2, got " + std::to_string(A));
  if (!(C3 > 0.0)) throw std::invalid_argument("C3 must be positive");
  if (digits < 50) throw std::invalid_argument("precision must be at least 50 digits");

  PrecisionScope scope(digits + guard_digits);
  const HighPrecision pi = boost::math::constants::pi<HighPrecision>();
  const HighPrecision root3 = sqrt(HighPrecision(3));
  const HighPrecision root2 = sqrt(HighPrecision(2));

  TheoreticalConstants c;
  c.digits = digits;
  c.A = HighPrecision(A);
  c.C3 = HighPrecision(C3);
  const HighPrecision rate = c.A + 2 * c.C3;
  c.delta = pi / 96 * exp(-4 * root3 * rate);
  const HighPrecision exp_branch = root2 / 4 * exp(-2 * root3 * rate);
  const HighPrecision half_branch = c.delta / 2;
  if (half_branch <= exp_branch) {
    c.delta1 = half_branch;
    c.branch = Delta1Branch::half_delta;
  } else {
    c.delta1 = exp_branch;
    c.branch = Delta1Branch::exponential;
  }
  c.K = 1920 / pi * exp(8 * root3 * c.C3);
  return c;
}

ConstructionParams resolvable_params(double A, double C3, double delta, double delta1,
                                     double log_s) {
  if (!(delta > 0.0 && delta < 0.25)) {
    throw std::invalid_argument("delta must lie in (0, 1/4)");
  }
  if (!(delta1 > 0.0 && delta1 <= 0.25)) {
    throw std::invalid_argument("delta1 must lie in (0, 1/4]");
  }
  if (!(log_s <= std::log(delta1 / 2.0))) {
    throw std::invalid_argument("tracer start s must satisfy s <= delta1/2");
  }
  ConstructionParams p;
  p.mode = Mode::resolvable;
  p.A = A;
  p.C3 = C3;
  p.delta = delta;
  p.delta1 = delta1;
  p.log_s = log_s;
  p.K = 1920.0 / std::numbers::pi * std::exp(8.0 * std::sqrt(3.0) * C3);
  return p;
}

std::string to_decimal(const HighPrecision& x, unsigned digits) {
  return x.str(static_cast<std::streamsize>(digits > 1 ? digits - 1 : 0), std::ios_base::scientific);
}

}  // namespace egl
