// Gauss-Jacobi quadrature on [-1, 1] for the weight (1-u^2)^a (the
// Gegenbauer case a = b), computed by Golub-Welsch from the three-term
// recurrence of the Jacobi polynomials.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace bhm {

struct QuadratureRule {
  std::vector<double> nodes;    // u_i in (-1, 1)
  std::vector<double> weights;  // w_i > 0, sum = mu0
};

// n-point rule for \int_{-1}^{1} f(u) (1-u)^a (1+u)^b du, a, b > -1.
inline QuadratureRule gauss_jacobi(int n, double a, double b) {
  if (n < 1) throw std::invalid_argument("gauss_jacobi: need n >= 1");
  if (a <= -1.0 || b <= -1.0)
    throw std::invalid_argument("gauss_jacobi: exponents must exceed -1");
  // total weight mu0 = 2^{a+b+1} B(a+1, b+1)
  double mu0 = std::exp((a + b + 1.0) * std::log(2.0) + std::lgamma(a + 1.0) +
                        std::lgamma(b + 1.0) - std::lgamma(a + b + 2.0));
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    double s = 2.0 * k + a + b;
    double alpha;
    if (k == 0)
      alpha = (a + b + 2.0 > 0.0) ? (b - a) / (a + b + 2.0) : 0.0;
    else
      alpha = (b * b - a * a) / (s * (s + 2.0));
    J(k, k) = alpha;
    if (k + 1 < n) {
      double kk = k + 1.0;
      double t = 2.0 * kk + a + b;
      double beta;
      if (k == 0)
        beta = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + a + b) * (2.0 + a + b) * (3.0 + a + b));
      else
        beta = 4.0 * kk * (kk + a) * (kk + b) * (kk + a + b) /
               (t * t * (t + 1.0) * (t - 1.0));
      double off = std::sqrt(beta);
      J(k, k + 1) = off;
      J(k + 1, k) = off;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = es.eigenvalues()(i);
    double v = es.eigenvectors()(0, i);
    rule.weights[i] = mu0 * v * v;
  }
  return rule;
}

// Rule for the Gegenbauer average underlying the generalized shift:
//   c_nu \int_0^pi f(cos t) sin^{nu-1} t dt  =  sum_i w_i f(u_i)
// with c_nu = Gamma((nu+1)/2) / (sqrt(pi) Gamma(nu/2)); the returned
// weights absorb c_nu, so they sum to 1 up to roundoff.
inline QuadratureRule shift_rule(int n, double nu) {
  if (nu <= 0.0) throw std::invalid_argument("shift_rule: requires nu > 0");
  QuadratureRule rule = gauss_jacobi(n, 0.5 * nu - 1.0, 0.5 * nu - 1.0);
  double c = std::exp(std::lgamma(0.5 * (nu + 1.0)) - 0.5 * std::log(M_PI) -
                      std::lgamma(0.5 * nu));
  for (double& w : rule.weights) w *= c;
  return rule;
}

}  // namespace bhm
