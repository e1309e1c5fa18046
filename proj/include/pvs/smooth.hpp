#pragma once
// Smooth tensor weight phi(x) = prod psi(x_i / s) with the bump
// psi(u) = exp(1 - 1/(1 - u^2)) on (-1, 1), and its Fourier transform.

#include <boost/math/constants/constants.hpp>
#include <boost/math/differentiation/autodiff.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>

#include "pvs/errors.hpp"

namespace pvs {

/// Neumaier's compensated sum. Results depend on the order of add() calls.
class NeumaierSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  void add(const NeumaierSum& other) {
    add(other.sum_);
    add(other.comp_);
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct QuadratureValue {
  double value;
  double error;  // absolute error bound used downstream
};

class SmoothWeight {
 public:
  static constexpr double kQuadratureTolerance = 1e-10;

  explicit SmoothWeight(double scale = 1.0) : s_(scale) {
    if (!(scale > 0.0)) fail(ErrorKind::domain, "weight scale must be positive");
  }

  double scale() const noexcept { return s_; }

  static double psi(double u) {
    const double v = 1.0 - u * u;
    if (v <= 0.0) return 0.0;
    return std::exp(1.0 - 1.0 / v);
  }

  /// One coordinate factor psi(x / s).
  double factor(double x) const { return psi(x / s_); }

  /// Fourier transform of x -> psi(x / s) at frequency t: s * psi-hat(s t),
  /// psi-hat(t) = int psi(u) cos(2 pi t u) du.
  QuadratureValue factor_hat(double t) const {
    const auto r = psi_hat(s_ * t);
    return {s_ * r.value, s_ * r.error};
  }

  /// phi-hat(0) in dimension r.
  double phi_hat0(int r) const { return std::pow(factor_hat(0.0).value, r); }

  /// |factor_hat(t)| <= s ||psi^(8)||_1 / (2 pi s t)^8, from integrating by
  /// parts eight times.
  double decay_majorant(double t) const {
    const double w = 2.0 * boost::math::constants::pi<double>() * s_ * std::abs(t);
    return s_ * psi_d8_l1() / std::pow(w, 8);
  }

  static QuadratureValue psi_hat(double t) {
    using boost::math::quadrature::gauss_kronrod;
    const double two_pi_t = 2.0 * boost::math::constants::pi<double>() * t;
    // Pieces of at most half a period each keep every panel non-oscillatory.
    const int pieces = std::max(1, static_cast<int>(std::ceil(2.0 * std::abs(t))));
    NeumaierSum sum;
    double err_total = 0.0, l1_total = 0.0;
    for (int i = 0; i < pieces; ++i) {
      const double a = static_cast<double>(i) / pieces, b = static_cast<double>(i + 1) / pieces;
      double err = 0.0, l1 = 0.0;
      const double v = gauss_kronrod<double, 61>::integrate([&](double u) { return psi(u) * std::cos(two_pi_t * u); }, a, b,
                                                             10, kQuadratureTolerance, &err, &l1);
      if (!std::isfinite(v) || err > 1e-6 * std::max(l1, 1e-300) + 1e-14) {
        fail(ErrorKind::quadrature, "psi-hat quadrature did not converge at t = " + std::to_string(t));
      }
      sum.add(v);
      err_total += err;
      l1_total += l1;
    }
    const double eps = std::numeric_limits<double>::epsilon();
    return {2.0 * sum.value(), 2.0 * (err_total + 8.0 * pieces * eps * l1_total)};
  }

  /// ||psi^(8)||_1, rounded up by the quadrature error estimate.
  static double psi_d8_l1() {
    static const double value = [] {
      using boost::math::differentiation::make_fvar;
      auto d8 = [](double u) {
        // psi and its derivatives underflow to 0 once 1 - u^2 < 1e-3
        if (1.0 - u * u < 1e-3) return 0.0;
        const auto x = make_fvar<double, 8>(u);
        return std::abs(exp(1.0 - 1.0 / (1.0 - x * x)).derivative(8));
      };
      double err = 0.0;
      const double v =
          boost::math::quadrature::gauss_kronrod<double, 61>::integrate(d8, 0.0, 1.0, 15, kQuadratureTolerance, &err);
      return 2.0 * (v + err) * (1.0 + 1e-6);
    }();
    return value;
  }

 private:
  double s_;
};

}  // namespace pvs
