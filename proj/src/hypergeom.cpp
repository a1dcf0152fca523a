#include "coopnet/hypergeom.hpp"

#include <cmath>
#include <stdexcept>

namespace coopnet {

namespace {

constexpr int kMaxTerms = 10000;
constexpr double kSeriesTol = 1e-14;

// 2F1(1, 1; c; x) for x in [0, ~0.5]; plain series, terms t_{k+1} = t_k * (k+1)/(c+k) * x.
double series_11c(double c, double x) {
  double term = 1.0;
  double sum = 1.0;
  for (int k = 0; k < kMaxTerms; ++k) {
    term *= (k + 1.0) / (c + k) * x;
    sum += term;
    if (std::fabs(term) <= kSeriesTol * std::fabs(sum)) break;
  }
  return sum;
}

} // namespace

void HypergeomParams::validate() const {
  if (!(alpha > 2.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("HypergeomParams: alpha must be finite and > 2");
  }
  if (!(theta >= 0.0) || !std::isfinite(theta)) {
    throw std::invalid_argument("HypergeomParams: theta must be finite and >= 0");
  }
}

SlopeFn::SlopeFn(double alpha) : alpha_(alpha) {
  HypergeomParams{alpha, 0.0}.validate();
  c_ = 2.0 - 2.0 / alpha;
  // Connection formula 2F1(1,1;c;x) = A*2F1(1,1;3-c;1-x) + B*(1-x)^(c-2)*x^(1-c),
  // used near x = 1 where the Pfaff-transformed series converges too slowly.
  conn_a_ = std::tgamma(c_) * std::tgamma(c_ - 2.0) /
            (std::tgamma(c_ - 1.0) * std::tgamma(c_ - 1.0));
  conn_b_ = std::tgamma(c_) * std::tgamma(2.0 - c_);
}

double SlopeFn::fg(double theta) const {
  if (theta == 0.0) return 1.0;
  // Pfaff: 2F1(1, 1-2/a; 2-2/a; -theta) = (1+theta)^-1 * 2F1(1, 1; c; x),
  // x = theta/(1+theta).
  const double y = 1.0 / (1.0 + theta);
  const double x = theta * y;
  if (x <= 0.5) {
    return y * series_11c(c_, x);
  }
  return conn_a_ * y * series_11c(3.0 - c_, y) +
         conn_b_ * std::pow(y, c_ - 1.0) * std::pow(x, 1.0 - c_);
}

double SlopeFn::operator()(double theta) const {
  if (theta == 0.0) return 1.0;
  const double y = 1.0 / (1.0 + theta);
  const double x = theta * y;
  const double scale = 2.0 / (alpha_ - 2.0) * x; // = 2*theta/(alpha-2) * (1+theta)^-1
  if (x <= 0.5) {
    return 1.0 + scale * series_11c(c_, x);
  }
  return 1.0 + scale * (conn_a_ * series_11c(3.0 - c_, y) +
                        conn_b_ * std::pow(y, c_ - 2.0) * std::pow(x, 1.0 - c_));
}

double gauss_fg(const HypergeomParams& p) {
  p.validate();
  return SlopeFn(p.alpha).fg(p.theta);
}

double interference_slope(double alpha, double theta) {
  HypergeomParams{alpha, theta}.validate();
  return SlopeFn(alpha)(theta);
}

} // namespace coopnet
