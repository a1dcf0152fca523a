#pragma once

// Gauss hypergeometric special case 2F1(1, 1-2/alpha; 2-2/alpha; -theta) and
// the derived interference slope c(theta) = 1 + 2*theta/(alpha-2) * F_G,
// which makes the exponent of every interference Laplace transform linear
// in the scaled-distance variable: A(theta, u) = u * c(theta).
namespace coopnet {

struct HypergeomParams {
  double alpha; // path-loss exponent, > 2
  double theta; // nonnegative argument

  void validate() const;
};

double gauss_fg(const HypergeomParams& p);
inline double gauss_fg(double alpha, double theta) { return gauss_fg({alpha, theta}); }

double interference_slope(double alpha, double theta);

// Binds alpha and precomputes the gamma-function constants of the
// connection formula; use this in integrands where c(theta) is evaluated
// many times.
class SlopeFn {
 public:
  explicit SlopeFn(double alpha);
  double alpha() const { return alpha_; }
  double fg(double theta) const;             // F_G(alpha, theta)
  double operator()(double theta) const;     // c(theta)

 private:
  double alpha_;
  double c_;       // hypergeometric parameter 2 - 2/alpha
  double conn_a_;  // Gamma(c)Gamma(c-2)/Gamma(c-1)^2
  double conn_b_;  // Gamma(c)Gamma(2-c)
};

} // namespace coopnet
