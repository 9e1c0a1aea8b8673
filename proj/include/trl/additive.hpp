// Copyright 2026 The trl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Dense sets in F^n, their Fourier spectra, a constructive Bogolyubov step,
// product multisets and signed sumset certificates.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "trl/error.hpp"
#include "trl/field.hpp"
#include "trl/guard.hpp"
#include "trl/parallel.hpp"
#include "trl/subspace.hpp"
#include "trl/tensor.hpp"

namespace trl {

/// Coordinatewise addition of vector codes through per-digit tables.
class VecArith {
 public:
  VecArith(const FieldSpec& fs, std::size_t n) : fs_(fs), n_(n), codec_(fs.q(), n) {
    guard::check_pow(fs.q(), n, guard::kStorageBits, "vector arithmetic tables");
    digits_.resize(codec_.size() * n);
    for (std::uint64_t x = 0; x < codec_.size(); ++x) codec_.decode_into(x, std::span(digits_).subspan(x * n, n));
  }

  std::uint64_t size() const { return codec_.size(); }
  const VecCodec& codec() const { return codec_; }

  std::uint64_t add(std::uint64_t x, std::uint64_t y) const { return combine(x, y, false); }
  std::uint64_t sub(std::uint64_t x, std::uint64_t y) const { return combine(x, y, true); }

 private:
  std::uint64_t combine(std::uint64_t x, std::uint64_t y, bool subtract) const {
    const int q = fs_.q();
    const FieldElem* add = fs_.add_table();
    const FieldElem* neg = fs_.neg_table();
    const FieldElem* xd = &digits_[x * n_];
    const FieldElem* yd = &digits_[y * n_];
    std::uint64_t code = 0;
    for (std::size_t i = 0; i < n_; ++i) code = code * q + add[xd[i] * q + (subtract ? neg[yd[i]] : yd[i])];
    return code;
  }

  FieldSpec fs_;
  std::size_t n_;
  VecCodec codec_;
  std::vector<FieldElem> digits_;
};

/// A subset of F^n, stored as sorted distinct vector codes.
struct VectorSet {
  FieldSpec fs;
  std::size_t n = 0;
  std::vector<std::uint64_t> codes;

  static VectorSet from_codes(const FieldSpec& fs, std::size_t n, std::vector<std::uint64_t> codes) {
    detail::require(n >= 1, "set ambient dimension must be >= 1");
    const VecCodec codec(fs.q(), n);
    for (auto c : codes) detail::require(c < codec.size(), "set element out of range");
    std::sort(codes.begin(), codes.end());
    codes.erase(std::unique(codes.begin(), codes.end()), codes.end());
    return VectorSet{fs, n, std::move(codes)};
  }

  static VectorSet from_vectors(const FieldSpec& fs, std::size_t n, const std::vector<std::vector<FieldElem>>& vs) {
    const VecCodec codec(fs.q(), n);
    std::vector<std::uint64_t> codes;
    for (const auto& v : vs) {
      detail::require(v.size() == n, "set element has the wrong length");
      for (auto x : v) fs.check(x);
      codes.push_back(codec.encode(v));
    }
    return from_codes(fs, n, std::move(codes));
  }

  std::size_t size() const { return codes.size(); }
  std::uint64_t ambient_size() const { return VecCodec(fs.q(), n).size(); }
  cpp_rational density() const { return cpp_rational(codes.size(), ambient_size()); }
  bool contains(std::uint64_t c) const { return std::binary_search(codes.begin(), codes.end(), c); }
  std::vector<FieldElem> vector(std::size_t i) const { return VecCodec(fs.q(), n).decode(codes.at(i)); }
};

/// Each element kept independently with probability num/den.
inline VectorSet random_set(const FieldSpec& fs, std::size_t n, std::uint64_t num, std::uint64_t den, Rng& rng) {
  const VecCodec codec(fs.q(), n);
  guard::check_pow(fs.q(), n, guard::kStorageBits, "random set");
  std::vector<std::uint64_t> codes;
  for (std::uint64_t x = 0; x < codec.size(); ++x)
    if (rng.coin(num, den)) codes.push_back(x);
  return VectorSet::from_codes(fs, n, std::move(codes));
}

// ---------------------------------------------------------------------------
// Spectrum.

struct SpectrumEntry {
  std::uint64_t code = 0;  // the character r as a vector code
  double magnitude = 0;    // |sum_{a in A} chi(r.a)| / |A|
};

struct Spectrum {
  cpp_rational rho_squared;
  std::vector<SpectrumEntry> entries;  // in code order; r = 0 first
};

namespace detail {

/// Fourier transform of the indicator of A over F_p^{nk}, kept as exponent
/// counts: out[w * p + j] = #{a in A : <w, a> = j}. The F_p coordinates of a
/// code are its base-p digits.
inline std::vector<std::uint32_t> exponent_transform(const VectorSet& a) {
  const int p = a.fs.p();
  const std::uint64_t size = a.ambient_size();
  std::vector<std::uint32_t> cv(size * p, 0);
  for (auto x : a.codes) cv[x * p] = 1;
  std::vector<std::uint32_t> tmp(static_cast<std::size_t>(p) * p);
  for (std::uint64_t stride = 1; stride < size; stride *= p) {
    for (std::uint64_t base = 0; base < size; ++base) {
      if ((base / stride) % p != 0) continue;
      std::fill(tmp.begin(), tmp.end(), 0);
      for (int r = 0; r < p; ++r) {
        for (int x = 0; x < p; ++x) {
          const std::uint32_t* v = &cv[(base + x * stride) * p];
          const int shift = (r * x) % p;
          for (int j = 0; j < p; ++j) tmp[r * p + (j + shift) % p] += v[j];
        }
      }
      for (int r = 0; r < p; ++r)
        std::copy_n(&tmp[r * p], p, &cv[(base + r * stride) * p]);
    }
  }
  return cv;
}

/// Index of the F_p functional x -> Tr(r . x) in the transform.
inline std::uint64_t functional_code(const FieldSpec& fs, std::span<const FieldElem> r) {
  const int p = fs.p();
  const int k = fs.k();
  std::uint64_t code = 0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    // Coordinate i occupies base-p digit positions k(n-1-i) .. k(n-1-i)+k-1.
    std::uint64_t block = 0;
    int tb = 1;  // code of t^b
    std::uint64_t pb = 1;
    for (int b = 0; b < k; ++b) {
      block += static_cast<std::uint64_t>(fs.trace(fs.mul(r[i], static_cast<FieldElem>(tb)))) * pb;
      tb *= p;
      pb *= p;
    }
    code = code * pb + block;
  }
  return code;
}

}  // namespace detail

/// Characters r with |sum_{a in A} chi(r.a)| >= rho |A|, i.e.
/// |A^(r)| >= rho * density. Decided exactly when the sum is rational and at
/// tolerance 1e-9 otherwise.
inline Spectrum spectrum(const VectorSet& a, const cpp_rational& rho_squared) {
  detail::require(rho_squared > 0 && rho_squared <= 1, "rho^2 must lie in (0, 1]");
  detail::require(!a.codes.empty(), "spectrum of the empty set");
  guard::check_pow(a.fs.q(), a.n, guard::kStorageBits, "spectrum");
  const FieldSpec& fs = a.fs;
  const int p = fs.p();
  const auto cv = detail::exponent_transform(a);
  const VecCodec codec(fs.q(), a.n);
  const cpp_int size_a = a.codes.size();
  const long double rho = std::sqrt(static_cast<long double>(rho_squared));
  Spectrum out;
  out.rho_squared = rho_squared;
  std::vector<FieldElem> r(a.n, 0);
  std::uint64_t rc = 0;
  do {
    const std::uint32_t* m = &cv[detail::functional_code(fs, r) * p];
    bool rational = true;
    for (int j = 2; j < p; ++j) rational = rational && m[j] == m[1];
    bool keep = false;
    long double mag = 0;
    if (rational) {
      const cpp_int s = cpp_int(m[0]) - cpp_int(m[1]);
      keep = s * s * denominator(rho_squared) >= numerator(rho_squared) * size_a * size_a;
      mag = std::fabs(static_cast<long double>(s)) / a.codes.size();
    } else {
      long double re = 0, im = 0;
      for (int j = 0; j < p; ++j) {
        const long double ang = 2.0L * std::numbers::pi_v<long double> * j / p;
        re += m[j] * std::cos(ang);
        im += m[j] * std::sin(ang);
      }
      mag = std::hypot(re, im) / a.codes.size();
      keep = mag >= rho - 1e-9L;
    }
    if (keep) out.entries.push_back({rc, static_cast<double>(mag)});
    ++rc;
  } while (next_vector(r, fs.q()));
  return out;
}

// ---------------------------------------------------------------------------
// Bogolyubov.

/// u = a[0] + a[1] - a[2] - a[3], all codes.
struct FourTermWitness {
  std::uint64_t u = 0;
  std::array<std::uint64_t, 4> a{};
};

struct BogolyubovResult {
  Subspace u;
  cpp_rational delta;
  cpp_rational rho_squared;
  std::size_t spectrum_size = 0;
  std::uint64_t codim_bound = 0;  // ceil(1 / delta^2)
  std::vector<FourTermWitness> witnesses;  // one per element of u, code order
};

/// ceil(1 / delta^2).
inline std::uint64_t inverse_square_ceiling(const cpp_rational& delta) {
  const cpp_rational inv = 1 / (delta * delta);
  cpp_int c = numerator(inv) / denominator(inv);
  if (c * denominator(inv) != numerator(inv)) ++c;
  return static_cast<std::uint64_t>(c);
}

namespace detail {

/// For each s in A + A the lexicographically first pair (a1, a2) with
/// a1 + a2 = s; kNone elsewhere.
struct PairTable {
  static constexpr std::uint64_t kNone = ~std::uint64_t{0};
  std::vector<std::pair<std::uint64_t, std::uint64_t>> first;
  std::vector<std::uint64_t> sums;  // A + A in code order

  PairTable(const VectorSet& a, const VecArith& arith) {
    guard::check(cpp_int(a.size()) * a.size(), guard::kEnumerationBits, "pair table");
    first.assign(arith.size(), {kNone, kNone});
    for (auto x : a.codes) {
      for (auto y : a.codes) {
        auto& slot = first[arith.add(x, y)];
        if (slot.first == kNone) slot = {x, y};
      }
    }
    for (std::uint64_t s = 0; s < first.size(); ++s)
      if (first[s].first != kNone) sums.push_back(s);
  }

  /// The witness whose first sum a1 + a2 is smallest in code order.
  std::optional<FourTermWitness> witness(std::uint64_t u, const VecArith& arith) const {
    for (auto s : sums) {
      const std::uint64_t t = arith.sub(s, u);
      if (first[t].first == kNone) continue;
      return FourTermWitness{u, {first[s].first, first[s].second, first[t].first, first[t].second}};
    }
    return std::nullopt;
  }
};

}  // namespace detail

/// U = (span of spectrum(A, rho^2 = delta))^perp with every element of U
/// written as a1 + a2 - a3 - a4 over A. A missing witness or a codimension
/// above ceil(1/delta^2) raises PropertyViolation.
inline BogolyubovResult bogolyubov(const VectorSet& a, const cpp_rational& delta, const Exec& exec = {}) {
  detail::require(delta > 0 && delta <= 1, "delta must lie in (0, 1]");
  detail::require(cpp_rational(a.size()) >= delta * a.ambient_size(), "set density is below delta");
  const FieldSpec& fs = a.fs;
  BogolyubovResult out;
  out.delta = delta;
  out.rho_squared = delta;
  out.codim_bound = inverse_square_ceiling(delta);
  const Spectrum spec = spectrum(a, delta);
  out.spectrum_size = spec.entries.size();
  const VecCodec codec(fs.q(), a.n);
  std::vector<std::vector<FieldElem>> chars;
  for (const auto& e : spec.entries) chars.push_back(codec.decode(e.code));
  out.u = Subspace::span(fs, a.n, chars).orthogonal_complement();
  if (out.u.codim() > out.codim_bound) {
    throw PropertyViolation("Bogolyubov subspace codimension " + std::to_string(out.u.codim()) +
                            " exceeds " + std::to_string(out.codim_bound));
  }
  guard::check(cpp_int(out.u.size()) * a.ambient_size(), guard::kEnumerationBits + 8, "Bogolyubov witnesses");
  const VecArith arith(fs, a.n);
  const detail::PairTable pairs(a, arith);
  const auto elements = out.u.element_codes();
  const auto parts = parallel::map_chunks<std::vector<FourTermWitness>>(
      elements.size(), exec, [&](parallel::Range r) {
        std::vector<FourTermWitness> ws;
        for (std::uint64_t i = r.begin; i < r.end; ++i) {
          auto w = pairs.witness(elements[i], arith);
          if (!w) {
            throw PropertyViolation("no 2A-2A witness for subspace element " + std::to_string(elements[i]));
          }
          ws.push_back(*w);
        }
        return ws;
      });
  for (const auto& p : parts) out.witnesses.insert(out.witnesses.end(), p.begin(), p.end());
  return out;
}

/// Re-checks a witness against A by vector arithmetic.
inline bool verify_witness(const VectorSet& a, const FourTermWitness& w, const VecArith& arith) {
  for (auto x : w.a)
    if (!a.contains(x)) return false;
  const std::uint64_t lhs = arith.sub(arith.sub(arith.add(w.a[0], w.a[1]), w.a[2]), w.a[3]);
  return lhs == w.u;
}

// ---------------------------------------------------------------------------
// Product multisets and sumset certificates.

/// An indexed multiset of product arrays u_1 (x) ... (x) u_d, each stored by
/// its factor codes.
struct ProductMultiset {
  FieldSpec fs;
  Dims dims;
  std::vector<std::vector<std::uint64_t>> tuples;

  std::size_t size() const { return tuples.size(); }

  std::vector<std::vector<FieldElem>> factors(std::size_t i) const {
    std::vector<std::vector<FieldElem>> out;
    for (std::size_t m = 0; m < dims.size(); ++m) out.push_back(VecCodec(fs.q(), dims[m]).decode(tuples.at(i)[m]));
    return out;
  }

  Tensor tensor(std::size_t i) const { return Tensor::outer(fs, factors(i)); }

  void validate() const {
    detail::require(!dims.empty(), "product multiset needs at least one mode");
    for (const auto& t : tuples) {
      detail::require(t.size() == dims.size(), "tuple length does not match the number of modes");
      for (std::size_t m = 0; m < dims.size(); ++m)
        detail::require(t[m] < VecCodec(fs.q(), dims[m]).size(), "tuple factor code out of range");
    }
  }

  /// Every tuple, i.e. the multiset B.
  static ProductMultiset full(const FieldSpec& fs, const Dims& dims) {
    guard::check_pow(fs.q(), dims_sum(dims), guard::kStorageBits, "full product multiset");
    ProductMultiset b{fs, dims, {}};
    std::vector<std::uint64_t> sizes;
    for (auto n : dims) sizes.push_back(VecCodec(fs.q(), n).size());
    std::vector<std::uint64_t> t(dims.size(), 0);
    for (;;) {
      b.tuples.push_back(t);
      std::size_t i = dims.size();
      while (i > 0) {
        --i;
        if (++t[i] < sizes[i]) break;
        t[i] = 0;
        if (i == 0) return b;
      }
    }
  }
};

struct SumsetCertificate {
  std::vector<std::size_t> plus;   // indices into the multiset
  std::vector<std::size_t> minus;
};

inline Tensor certificate_sum(const ProductMultiset& bp, const SumsetCertificate& c) {
  Tensor acc = Tensor::zeros(bp.fs, bp.dims);
  for (auto i : c.plus) acc = acc + bp.tensor(i);
  for (auto i : c.minus) acc = acc - bp.tensor(i);
  return acc;
}

/// Sum of plus minus sum of minus equals the target, entry by entry.
inline bool verify_certificate(const ProductMultiset& bp, const SumsetCertificate& c, const Tensor& target) {
  for (auto i : c.plus)
    if (i >= bp.size()) return false;
  for (auto i : c.minus)
    if (i >= bp.size()) return false;
  return certificate_sum(bp, c) == target;
}

struct SumsetSearch {
  std::optional<SumsetCertificate> certificate;
  bool exhausted_budget = false;
  std::uint64_t work = 0;
};

namespace detail {

inline std::string tensor_key(const Tensor& t) {
  return std::string(reinterpret_cast<const char*>(t.entries().data()), t.entries().size());
}

/// Calls visit(indices) for every nondecreasing index sequence of length s
/// over [0, n), in lexicographic order. Stops early when visit returns true.
template <class Visit>
bool for_each_multiset(std::size_t n, std::size_t s, Visit&& visit) {
  std::vector<std::size_t> idx(s, 0);
  if (s > 0 && n == 0) return false;
  for (;;) {
    if (visit(idx)) return true;
    std::size_t i = s;
    while (i > 0 && idx[i - 1] == n - 1) --i;
    if (i == 0) return false;
    const std::size_t v = idx[i - 1] + 1;
    for (std::size_t j = i - 1; j < s; ++j) idx[j] = v;
  }
}

}  // namespace detail

/// Searches for x = (b_1 + ... + b_a) - (b'_1 + ... + b'_b) with a <= k,
/// b <= l, repetition allowed, by increasing a + b. For each (a, b) the
/// a-fold sums are tabulated and the b-fold sums looked up. Work counts
/// tabulated and probed sums; exceeding the budget gives an inconclusive
/// result.
inline SumsetSearch sumset_member(const Tensor& x, std::size_t k, std::size_t l, const ProductMultiset& bp,
                                  std::uint64_t budget) {
  bp.validate();
  detail::require(x.field() == bp.fs && x.dims() == bp.dims, "target shape does not match the multiset");
  SumsetSearch out;
  std::vector<Tensor> elems;
  for (std::size_t i = 0; i < bp.size(); ++i) elems.push_back(bp.tensor(i));
  struct OutOfBudget {};
  const auto sum_of = [&](const std::vector<std::size_t>& idx) {
    Tensor acc = Tensor::zeros(bp.fs, bp.dims);
    for (auto i : idx) acc = acc + elems[i];
    return acc;
  };
  try {
    for (std::size_t total = 0; total <= k + l; ++total) {
      for (std::size_t a = total > l ? total - l : 0; a <= std::min(k, total); ++a) {
        const std::size_t b = total - a;
        std::unordered_map<std::string, std::vector<std::size_t>> table;
        detail::for_each_multiset(elems.size(), a, [&](const std::vector<std::size_t>& idx) {
          if (++out.work > budget) throw OutOfBudget{};
          table.emplace(detail::tensor_key(sum_of(idx)), idx);
          return false;
        });
        const bool found = detail::for_each_multiset(elems.size(), b, [&](const std::vector<std::size_t>& idx) {
          if (++out.work > budget) throw OutOfBudget{};
          const Tensor want = x + sum_of(idx);
          auto it = table.find(detail::tensor_key(want));
          if (it == table.end()) return false;
          out.certificate = SumsetCertificate{it->second, idx};
          return true;
        });
        if (found) {
          if (!verify_certificate(bp, *out.certificate, x)) throw PropertyViolation("sumset certificate failed to verify");
          return out;
        }
      }
    }
  } catch (const OutOfBudget&) {
    out.exhausted_budget = true;
  }
  return out;
}

}  // namespace trl
