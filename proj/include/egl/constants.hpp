#pragma once

#include <algorithm>
#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/mpfr.hpp>
#include <cmath>
#include <stdexcept>
#include <string>

namespace egl {

using HighPrecision = boost::multiprecision::mpfr_float;

/// Sets the MPFR default precision (decimal digits) for the current thread and
/// restores the previous value on exit.
class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned digits) : saved_(HighPrecision::default_precision()) {
    HighPrecision::default_precision(digits);
  }
  ~PrecisionScope() { HighPrecision::default_precision(saved_); }
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  unsigned saved_;
};

enum class Mode { theoretical, resolvable };

/// Which term attains the minimum in delta1 = min{(sqrt2/4) e^{-2 sqrt3 (A+2C3)}, delta/2}.
enum class Delta1Branch { exponential, half_delta };

/// Constant chain for growth rate A and velocity-residual constant C3, at high precision.
struct TheoreticalConstants {
  unsigned digits = 50;
  HighPrecision A;
  HighPrecision C3;
  HighPrecision delta;   // (pi/96) e^{-4 sqrt3 (A + 2 C3)}
  HighPrecision delta1;
  Delta1Branch branch = Delta1Branch::half_delta;
  HighPrecision K;       // (1920/pi) e^{8 sqrt3 C3}
};

/// Throws std::invalid_argument for A < 2, C3 <= 0 or digits < 50. The
/// returned values carry `digits` plus a few guard digits.
TheoreticalConstants theoretical_constants(double A, double C3, unsigned digits);

/// Parameters actually used to build and track the initial data. In
/// theoretical mode these are the double roundings of TheoreticalConstants;
/// in resolvable mode they are user supplied.
struct ConstructionParams {
  Mode mode = Mode::resolvable;
  double A = 2.0;
  double C3 = 1.0;
  double delta = 0.1;
  double delta1 = 0.05;
  double log_s = std::log(0.01);
  double K = 0.0;
};

/// Validates delta in (0, 1/4), delta1 in (0, 1/4] and log_s <= log(delta1/2).
ConstructionParams resolvable_params(double A, double C3, double delta, double delta1,
                                     double log_s);

/// (sqrt3/12) * (-ln(4 delta1^2 + 48 delta / pi)): lower bound of the key
/// integral for x in [0, delta1/2]^2. Throws std::domain_error when the log
/// argument is >= 1 (the bound is vacuous).
template <class Real>
Real key_integral_lower_bound(const Real& delta, const Real& delta1) {
  using std::log;
  using std::sqrt;
  const Real pi = boost::math::constants::pi<Real>();
  const Real arg = Real(4 * delta1 * delta1) + Real(48 * delta / pi);
  if (!(arg < 1)) {
    throw std::domain_error("key-integral bound is vacuous: 4 delta1^2 + 48 delta/pi >= 1");
  }
  return Real(sqrt(Real(3)) / 12) * Real(-log(arg));
}

/// log of the tracer start coordinate for horizon T:
/// min{ log(delta/20) + 2 - 2e^{C2 T}, log(delta1/2) + 1 - e^{C2 T} }.
template <class Real>
Real choose_log_s(const Real& T, const Real& C2, const Real& delta, const Real& delta1) {
  using std::exp;
  using std::log;
  if (!(T > 0) || !(C2 > 0)) throw std::invalid_argument("choose_s needs T > 0 and C2 > 0");
  const Real growth = exp(Real(C2 * T));
  const Real first = Real(log(Real(delta / 20))) + 2 - 2 * growth;
  const Real second = Real(log(Real(delta1 / 2))) + 1 - growth;
  return first < second ? first : second;
}

/// Final-bound bookkeeping for a given horizon.
template <class Real>
struct GrowthConstants {
  Real log_s;     // chosen start coordinate, log space
  Real loglog_s;  // log(-log s)
  Real C4;        // T-independent: log(-log s) <= C4 (1 + T)
  Real C1;        // 1 / (2 C4)
};

/// C4 = max{ ln(ln(20/delta) + 2), ln(ln(2/delta1) + 1), C2 } bounds both
/// branches of log(-log s) by C4 (1 + T) for every T >= 0, using
/// a + 2(e^x - 1) <= (a + 2) e^x and b + e^x - 1 <= (b + 1) e^x.
template <class Real>
GrowthConstants<Real> growth_constants(const Real& T, const Real& C2, const Real& delta,
                                       const Real& delta1) {
  using std::log;
  GrowthConstants<Real> g;
  g.log_s = choose_log_s(T, C2, delta, delta1);
  g.loglog_s = log(Real(-g.log_s));
  const Real b1 = log(Real(log(Real(20 / delta)) + 2));
  const Real b2 = log(Real(log(Real(2 / delta1)) + 1));
  Real c4 = b1 > b2 ? b1 : b2;
  if (C2 > c4) c4 = C2;
  g.C4 = c4;
  g.C1 = 1 / (2 * c4);
  return g;
}

/// Decimal rendering with `digits` significant digits.
std::string to_decimal(const HighPrecision& x, unsigned digits);

}  // namespace egl
