#pragma once

// Closed-form dimension constants and the bound formulas of the covering
// argument. Everything is templated on the real type so the same code runs
// in double and in a 50-digit multiprecision type.

#include <cmath>
#include <stdexcept>
#include <string_view>

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "covtrick/metric_space.hpp"

namespace covtrick::bounds {

/// Logarithm used inside C'_n = (n + 1) sqrt(log 5).
inline constexpr std::string_view kPrimeConstantLogBase = "natural";

template <class Real = double>
Real pi() {
  return boost::math::constants::pi<Real>();
}

template <class Real = double>
Real log5(const Real& x) {
  using std::log;
  return log(x) / log(Real(5));
}

/// Volume of the unit n-sphere in R^{n+1}: 2 pi^{(n+1)/2} / Gamma((n+1)/2).
template <class Real = double>
Real sphere_volume(int n) {
  if (n < 0) throw InputError("sphere dimension must be nonnegative");
  using std::pow;
  const Real half = Real(n + 1) / 2;
  return 2 * pow(pi<Real>(), half) / boost::math::tgamma(half);
}

/// Volume of the unit ball in R^n: pi^{n/2} / Gamma(n/2 + 1).
template <class Real = double>
Real unit_ball_volume(int n) {
  if (n < 0) throw InputError("ball dimension must be nonnegative");
  using std::pow;
  const Real half = Real(n) / 2;
  return pow(pi<Real>(), half) / boost::math::tgamma(half + 1);
}

/// sigma_n / pi^n.
template <class Real = double>
Real berger_constant(int n) {
  if (n < 1) throw InputError("dimension must be at least 1");
  using std::pow;
  return sphere_volume<Real>(n) / pow(pi<Real>(), n);
}

/// 2^{n-1} sigma_{n-1}^n / (n^n sigma_n^{n-1}).
template <class Real = double>
Real croke_beta(int n) {
  if (n < 1) throw InputError("dimension must be at least 1");
  using std::pow;
  const Real lower = sphere_volume<Real>(n - 1);
  const Real upper = sphere_volume<Real>(n);
  return pow(Real(2), n - 1) * pow(lower, n) / (pow(Real(n), n) * pow(upper, n - 1));
}

template <class Real = double>
struct MainConstants {
  Real c;        // C_n
  Real c_prime;  // C'_n
};

/// C_n = 5 sigma_{n-1}^n / (2 n^n sigma_n^{n-1}),  C'_n = (n+1) sqrt(ln 5).
template <class Real = double>
MainConstants<Real> main_constants(int n) {
  if (n < 1) throw InputError("dimension must be at least 1");
  using std::log;
  using std::pow;
  using std::sqrt;
  const Real lower = sphere_volume<Real>(n - 1);
  const Real upper = sphere_volume<Real>(n);
  return {5 * pow(lower, n) / (2 * pow(Real(n), n) * pow(upper, n - 1)),
          Real(n + 1) * sqrt(log(Real(5)))};
}

template <class Real = double>
struct DimensionConstants {
  int n;
  Real sigma_n;
  Real sigma_n_minus_1;
  Real omega_n;
  Real alpha_berger;
  Real beta_croke;
  Real c_n;
  Real c_n_prime;
};

template <class Real = double>
DimensionConstants<Real> dimension_constants(int n) {
  const auto main = main_constants<Real>(n);
  return {n,
          sphere_volume<Real>(n),
          sphere_volume<Real>(n - 1),
          unit_ball_volume<Real>(n),
          berger_constant<Real>(n),
          croke_beta<Real>(n),
          main.c,
          main.c_prime};
}

/// V / (beta R0^n), the normalized volume every bound is driven by.
template <class Real = double>
Real volume_ratio(const Real& volume, const Real& beta, const Real& r0, int n) {
  using std::pow;
  if (!(beta > 0) || !(r0 > 0)) throw InputError("beta and R0 must be positive");
  return volume / (beta * pow(r0, n));
}

/// theta = sqrt(log_5(V / (beta R0^n))). Shared by the alpha choice and the
/// T-bound so both see bit-identical exponents.
template <class Real = double>
Real theta_exponent(const Real& volume, const Real& beta, const Real& r0, int n) {
  using std::sqrt;
  const Real ratio = volume_ratio(volume, beta, r0, n);
  if (ratio < 1) throw DomainError("ratio below 1: V / (beta R0^n) < 1");
  return sqrt(log5(ratio));
}

/// log_5(V / (beta R0^n)) / (log_5(alpha) - n). Admissible balls with
/// R < R0 have k-index strictly below this value.
template <class Real = double>
Real k_upper_bound(const Real& volume, const Real& beta, const Real& r0, int n,
                   const Real& alpha) {
  const Real ratio = volume_ratio(volume, beta, r0, n);
  if (ratio < 1) throw DomainError("ratio below 1: V / (beta R0^n) < 1");
  const Real denominator = log5(alpha) - n;
  if (!(denominator > 0)) throw DomainError("denominator nonpositive: alpha <= 5^n");
  return log5(ratio) / denominator;
}

/// (V / (beta R0^n)) * 5^{n + (n+1) theta}.
template <class Real = double>
Real t_upper_bound(const Real& volume, const Real& beta, const Real& r0, int n) {
  using std::pow;
  const Real theta = theta_exponent(volume, beta, r0, n);
  return volume_ratio(volume, beta, r0, n) * pow(Real(5), n + (n + 1) * theta);
}

enum class LowerBoundVariant {
  sqrt_b1,      // C_n b1 / exp(C'_n sqrt(b1))
  sqrt_log_b1,  // C_n b1 / exp(C'_n sqrt(log b1))
};

template <class Real = double>
Real main_lower_bound(long long b1, int n, LowerBoundVariant variant) {
  using std::exp;
  using std::log;
  using std::sqrt;
  if (b1 < 0) throw InputError("b1 must be nonnegative");
  const auto constants = main_constants<Real>(n);
  const Real b = Real(b1);
  switch (variant) {
    case LowerBoundVariant::sqrt_b1:
      return constants.c * b / exp(constants.c_prime * sqrt(b));
    case LowerBoundVariant::sqrt_log_b1:
      if (b1 < 1) throw DomainError("sqrt_log_b1 variant needs b1 >= 1");
      return constants.c * b / exp(constants.c_prime * sqrt(log(b)));
  }
  throw InputError("unknown lower-bound variant");
}

/// Natural log of main_lower_bound for real b1 >= 1, usable far beyond the
/// range where the bound itself underflows.
template <class Real = double>
Real log_main_lower_bound(const Real& b1, int n, LowerBoundVariant variant) {
  using std::log;
  using std::sqrt;
  if (!(b1 >= 1)) throw DomainError("log form needs b1 >= 1");
  const auto constants = main_constants<Real>(n);
  const Real tail = variant == LowerBoundVariant::sqrt_b1 ? sqrt(b1) : sqrt(log(b1));
  return log(constants.c) + log(b1) - constants.c_prime * tail;
}

template <class Real = double>
Real durumeric_bound(long long b1) {
  using std::sqrt;
  if (b1 < 0) throw InputError("b1 must be nonnegative");
  return sqrt(Real(b1));
}

/// emb * 5^{(n+1) sqrt(log_5 emb)}: the cover-number bound without its
/// unspecified dimension constant D_n, which multiplies this value.
template <class Real = double>
Real cover_number_bound(const Real& emb, int n) {
  using std::pow;
  using std::sqrt;
  if (!(emb >= 1)) throw DomainError("cover-number bound needs emb >= 1");
  return emb * pow(Real(5), (n + 1) * sqrt(log5(emb)));
}

template <class Real = double>
Real cover_number_bound(const Real& emb, int n, const Real& d_n) {
  return d_n * cover_number_bound(emb, n);
}

}  // namespace covtrick::bounds
