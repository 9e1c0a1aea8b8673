#pragma once

// Reference implementations for tests. Nothing here uses the library's
// field tables, elimination or enumeration code.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

namespace oracle {

using Complex = std::complex<long double>;

/// GF(p^k) by schoolbook polynomial arithmetic on base-p digit vectors.
struct Gf {
  int p = 2;
  int k = 1;
  std::vector<int> modulus;  // little-endian, monic, size k+1 (empty for k = 1)

  int q() const {
    int r = 1;
    for (int i = 0; i < k; ++i) r *= p;
    return r;
  }

  std::vector<int> digits(int code) const {
    std::vector<int> d(k);
    for (int i = 0; i < k; ++i) {
      d[i] = code % p;
      code /= p;
    }
    return d;
  }

  int code(const std::vector<int>& d) const {
    int c = 0;
    for (int i = k - 1; i >= 0; --i) c = c * p + d[i];
    return c;
  }

  int add(int a, int b) const {
    auto x = digits(a), y = digits(b);
    for (int i = 0; i < k; ++i) x[i] = (x[i] + y[i]) % p;
    return code(x);
  }

  int neg(int a) const {
    auto x = digits(a);
    for (int i = 0; i < k; ++i) x[i] = (p - x[i]) % p;
    return code(x);
  }

  int sub(int a, int b) const { return add(a, neg(b)); }

  int mul(int a, int b) const {
    if (k == 1) return (a * b) % p;
    auto x = digits(a), y = digits(b);
    std::vector<int> prod(2 * k - 1, 0);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) prod[i + j] = (prod[i + j] + x[i] * y[j]) % p;
    for (int top = 2 * k - 2; top >= k; --top) {
      const int c = prod[top];
      if (c == 0) continue;
      for (int i = 0; i <= k; ++i) prod[top - k + i] = ((prod[top - k + i] - c * modulus[i]) % p + p) % p;
    }
    prod.resize(k);
    return code(prod);
  }

  int pow(int a, long e) const {
    int r = 1;
    for (long i = 0; i < e; ++i) r = mul(r, a);
    return r;
  }

  int inv(int a) const {
    for (int b = 1; b < q(); ++b)
      if (mul(a, b) == 1) return b;
    return -1;
  }

  /// Absolute trace sum_j a^{p^j}, as an integer in [0, p).
  int trace(int a) const {
    int t = 0;
    int x = a;
    for (int j = 0; j < k; ++j) {
      t = add(t, x);
      x = pow(x, p);
    }
    return t;
  }

  Complex chi(int a, int c) const {
    const long double ang = 2.0L * std::numbers::pi_v<long double> * trace(mul(c, a)) / p;
    return {std::cos(ang), std::sin(ang)};
  }
};

/// Row-major multi-index iteration helper.
inline bool next_index(std::vector<int>& idx, const std::vector<int>& bounds) {
  for (int i = static_cast<int>(idx.size()) - 1; i >= 0; --i) {
    if (++idx[i] < bounds[i]) return true;
    idx[i] = 0;
  }
  return false;
}

/// sum_{i} t_{i_1..i_d} v^1_{i_1} ... v^d_{i_d}
inline int eval_multilinear(const Gf& f, const std::vector<int>& dims, const std::vector<int>& entries,
                            const std::vector<std::vector<int>>& vs) {
  std::vector<int> idx(dims.size(), 0);
  int acc = 0;
  std::size_t flat = 0;
  do {
    int term = entries[flat++];
    for (std::size_t m = 0; m < dims.size(); ++m) term = f.mul(term, vs[m][idx[m]]);
    acc = f.add(acc, term);
  } while (next_index(idx, dims));
  return acc;
}

/// E over all (v^1..v^d) of chi_c(T(v)), straight from the definition.
inline Complex brute_bias(const Gf& f, const std::vector<int>& dims, const std::vector<int>& entries, int c = 1) {
  std::vector<int> all;
  for (int n : dims)
    for (int i = 0; i < n; ++i) all.push_back(f.q());
  std::vector<int> coords(all.size(), 0);
  Complex acc = 0;
  long count = 0;
  do {
    std::vector<std::vector<int>> vs;
    std::size_t pos = 0;
    for (int n : dims) {
      vs.emplace_back(coords.begin() + pos, coords.begin() + pos + n);
      pos += n;
    }
    acc += f.chi(eval_multilinear(f, dims, entries, vs), c);
    ++count;
  } while (next_index(coords, all));
  return acc / static_cast<long double>(count);
}

/// rank = cols - log_q |ker M|, counting the kernel by enumeration.
inline int brute_matrix_rank(const Gf& f, int rows, int cols, const std::vector<int>& m) {
  std::vector<int> x(cols, 0);
  const std::vector<int> bounds(cols, f.q());
  long kernel = 0;
  do {
    bool zero = true;
    for (int r = 0; r < rows && zero; ++r) {
      int s = 0;
      for (int c = 0; c < cols; ++c) s = f.add(s, f.mul(m[r * cols + c], x[c]));
      zero = s == 0;
    }
    kernel += zero;
  } while (next_index(x, bounds));
  int nullity = 0;
  while (kernel > 1) {
    kernel /= f.q();
    ++nullity;
  }
  return cols - nullity;
}

}  // namespace oracle

#include <map>

namespace oracle {

/// Polynomial as exponent vector -> coefficient code.
using Poly = std::map<std::vector<unsigned>, int>;

inline int eval_poly(const Gf& f, const Poly& p, const std::vector<int>& x) {
  int acc = 0;
  for (const auto& [e, c] : p) {
    int m = c;
    for (std::size_t i = 0; i < e.size(); ++i) m = f.mul(m, f.pow(x[i], e[i]));
    acc = f.add(acc, m);
  }
  return acc;
}

/// ||chi_c(P)||_{U^k}^{2^k} straight from the cube average, as a complex number.
inline Complex brute_gowers_power(const Gf& f, const Poly& p, int n, int k, int c) {
  const int q = f.q();
  std::vector<int> coords(static_cast<std::size_t>(n * (k + 1)), 0);
  const std::vector<int> bounds(coords.size(), q);
  Complex acc = 0;
  long count = 0;
  do {
    Complex prod = 1;
    for (int w = 0; w < (1 << k); ++w) {
      std::vector<int> pt(coords.begin(), coords.begin() + n);
      for (int j = 0; j < k; ++j)
        if ((w >> j) & 1)
          for (int i = 0; i < n; ++i) pt[i] = f.add(pt[i], coords[n * (j + 1) + i]);
      const Complex v = f.chi(eval_poly(f, p, pt), c);
      prod *= (__builtin_popcount(static_cast<unsigned>(w)) % 2 == 1) ? std::conj(v) : v;
    }
    acc += prod;
    ++count;
  } while (next_index(coords, bounds));
  return acc / static_cast<long double>(count);
}

}  // namespace oracle
