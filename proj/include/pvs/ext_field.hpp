#pragma once
// Small extension fields F_{p^k}, k <= 4, as F_p[t]/(m(t)) with m the
// lexicographically least monic irreducible polynomial of degree k.
// Elements are packed as integers sum c_i p^i, which also enumerates the field.

#include <array>
#include <vector>

#include "pvs/modular.hpp"

namespace pvs {

class ExtField {
 public:
  using Elem = std::array<i64, 4>;  // coefficients of 1, t, t^2, t^3

  ExtField(i64 p, int k) : p_(p), k_(k) {
    if (!is_prime(p)) fail(ErrorKind::invalid_modulus, std::to_string(p) + " is not prime");
    if (k < 1 || k > 4) fail(ErrorKind::domain, "extension degree must be in 1..4");
    size_ = 1;
    for (int i = 0; i < k; ++i) size_ *= p;
    modulus_ = least_irreducible();
  }

  i64 p() const noexcept { return p_; }
  int degree() const noexcept { return k_; }
  i64 size() const noexcept { return size_; }
  /// Low coefficients of the defining polynomial t^k + m_{k-1} t^{k-1} + ... + m_0.
  const Elem& modulus() const noexcept { return modulus_; }

  Elem from_index(i64 n) const {
    Elem e{};
    for (int i = 0; i < k_; ++i) {
      e[static_cast<std::size_t>(i)] = n % p_;
      n /= p_;
    }
    return e;
  }
  Elem from_int(i64 v) const { return Elem{mod(v, p_), 0, 0, 0}; }

  Elem add(const Elem& a, const Elem& b) const {
    Elem r{};
    for (int i = 0; i < k_; ++i) r[static_cast<std::size_t>(i)] = (a[static_cast<std::size_t>(i)] + b[static_cast<std::size_t>(i)]) % p_;
    return r;
  }

  Elem mul(const Elem& a, const Elem& b) const { return reduce(a, b, modulus_); }

  static bool is_zero(const Elem& a) { return a[0] == 0 && a[1] == 0 && a[2] == 0 && a[3] == 0; }

 private:
  Elem reduce(const Elem& a, const Elem& b, const Elem& m) const {
    std::array<i64, 8> prod{};
    for (int i = 0; i < k_; ++i) {
      for (int j = 0; j < k_; ++j) {
        prod[static_cast<std::size_t>(i + j)] += a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(j)];
      }
    }
    for (auto& c : prod) c %= p_;
    for (int d = 2 * k_ - 2; d >= k_; --d) {
      const i64 c = prod[static_cast<std::size_t>(d)];
      if (c == 0) continue;
      prod[static_cast<std::size_t>(d)] = 0;
      for (int i = 0; i < k_; ++i) {
        auto& slot = prod[static_cast<std::size_t>(d - k_ + i)];
        slot = mod(slot - c * m[static_cast<std::size_t>(i)], p_);
      }
    }
    Elem r{};
    for (int i = 0; i < k_; ++i) r[static_cast<std::size_t>(i)] = prod[static_cast<std::size_t>(i)];
    return r;
  }

  // A monic polynomial of degree k <= 4 is irreducible iff it has no monic
  // factor of degree <= k/2; check by trial division over all such factors.
  bool irreducible(const std::vector<i64>& f) const {
    const int deg = static_cast<int>(f.size()) - 1;
    for (int d = 1; d <= deg / 2; ++d) {
      i64 count = 1;
      for (int i = 0; i < d; ++i) count *= p_;
      for (i64 n = 0; n < count; ++n) {
        std::vector<i64> g(static_cast<std::size_t>(d) + 1, 0);
        i64 t = n;
        for (int i = 0; i < d; ++i) {
          g[static_cast<std::size_t>(i)] = t % p_;
          t /= p_;
        }
        g[static_cast<std::size_t>(d)] = 1;
        if (divides(g, f)) return false;
      }
    }
    return true;
  }

  bool divides(const std::vector<i64>& g, std::vector<i64> f) const {
    const int dg = static_cast<int>(g.size()) - 1;
    for (int d = static_cast<int>(f.size()) - 1; d >= dg; --d) {
      const i64 c = f[static_cast<std::size_t>(d)];
      if (c == 0) continue;
      for (int i = 0; i <= dg; ++i) {
        auto& slot = f[static_cast<std::size_t>(d - dg + i)];
        slot = mod(slot - c * g[static_cast<std::size_t>(i)], p_);
      }
    }
    for (int i = 0; i < dg; ++i) {
      if (f[static_cast<std::size_t>(i)] != 0) return false;
    }
    return true;
  }

  // Lexicographic order on (m_{k-1}, ..., m_0).
  Elem least_irreducible() const {
    for (i64 n = 0; n < size_; ++n) {
      std::vector<i64> f(static_cast<std::size_t>(k_) + 1, 0);
      i64 t = n;
      for (int i = 0; i < k_; ++i) {
        f[static_cast<std::size_t>(i)] = t % p_;
        t /= p_;
      }
      f[static_cast<std::size_t>(k_)] = 1;
      if (k_ == 1 || irreducible(f)) {
        Elem m{};
        for (int i = 0; i < k_; ++i) m[static_cast<std::size_t>(i)] = f[static_cast<std::size_t>(i)];
        return m;
      }
    }
    fail(ErrorKind::domain, "no irreducible polynomial found");
  }

  i64 p_;
  int k_;
  i64 size_ = 1;
  Elem modulus_{};
};

}  // namespace pvs
