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

// The acceptance criteria as a library routine, shared by the acceptance
// binary and `trl selftest`. Every constant below is pinned; detail strings
// hold counts only, so output is identical across runs and worker counts.

#include <algorithm>
#include <array>
#include <bitset>
#include <chrono>
#include <functional>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "trl/additive.hpp"
#include "trl/ensemble.hpp"
#include "trl/gowers.hpp"
#include "trl/lsystem.hpp"
#include "trl/rank.hpp"
#include "trl/tower.hpp"

namespace trl::selftest {

inline constexpr std::uint64_t kSeed = 20260415;
inline constexpr std::array<double, 10> kLimitSeconds = {60, 600, 300, 0, 0, 300, 600, 0, 0, 0};
inline constexpr std::uint64_t kPrankBudget = 1'000'000;
inline constexpr std::size_t kRandomMatrices = 500;
inline constexpr std::size_t kPolynomials = 200;
inline constexpr std::size_t kDegenerate = 100;
inline constexpr std::size_t kBogolyubovSets = 50;
inline constexpr std::size_t kForcingTrials = 20;
inline constexpr double kMonotoneTolerance = 1e-9;

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
  double limit = 0;  // 0: no runtime limit
};

namespace detail {

/// Collects the first few failure notes and a failure count.
class Notes {
 public:
  void fail(const std::string& what) {
    ++failures_;
    if (first_.size() < 3) first_.push_back(what);
  }
  bool ok() const { return failures_ == 0; }
  Outcome outcome(const std::string& summary) const {
    Outcome o{ok(), summary};
    if (!ok()) {
      o.detail += "; " + std::to_string(failures_) + " failure(s):";
      for (const auto& f : first_) o.detail += " [" + f + "]";
    }
    return o;
  }

 private:
  std::uint64_t failures_ = 0;
  std::vector<std::string> first_;
};

inline Matrix as_matrix(const Tensor& t) {
  Matrix m(t.field(), t.dims()[0], t.dims()[1]);
  for (std::size_t i = 0; i < t.dims()[0]; ++i)
    for (std::size_t j = 0; j < t.dims()[1]; ++j) m.at(i, j) = t[i * t.dims()[1] + j];
  return m;
}

inline Outcome matrix_oracle() {
  Notes notes;
  std::uint64_t checked = 0;
  const auto check = [&](const Tensor& t) {
    ++checked;
    const std::size_t r = rank(as_matrix(t));
    const cpp_rational want(1, guard::ipow(t.field().q(), r));
    const auto b = bias_exact(t);
    const auto a = arank_from_bias(b, t.field().q());
    if (b.value() != want || a.floor_cert != static_cast<std::int64_t>(r) ||
        a.ceil_cert != static_cast<std::int64_t>(r)) {
      notes.fail(t.field().name() + " " + std::to_string(t.dims()[0]) + "x" + std::to_string(t.dims()[1]) +
                 " bias " + b.value().str() + " rank " + std::to_string(r));
    }
  };
  const FieldSpec f2 = FieldSpec::make(2);
  for (std::size_t n = 2; n <= 4; ++n) {
    const std::uint64_t cells = n * n;
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << cells); ++bits) {
      std::vector<FieldElem> e(cells);
      for (std::uint64_t i = 0; i < cells; ++i) e[i] = (bits >> i) & 1U;
      check(Tensor(f2, {n, n}, std::move(e)));
    }
  }
  const Rng base = Rng(kSeed).split("matrix-oracle");
  for (std::size_t i = 0; i < kRandomMatrices; ++i) {
    Rng rng = base.split(i);
    const FieldSpec fs = FieldSpec::make(i % 2 == 0 ? 3 : 5);
    const Dims dims{1 + rng.below(4), 1 + rng.below(4)};
    check(random_tensor(fs, dims, rng));
  }
  return notes.outcome(std::to_string(checked) + " matrices, bias = q^-rank exactly");
}

inline Outcome prank_exact(const Exec& exec) {
  Notes notes;
  const FieldSpec f2 = FieldSpec::make(2);
  std::array<int, 4> by_rank{};
  for (unsigned bits = 0; bits < 256; ++bits) {
    std::vector<FieldElem> e(8);
    for (unsigned i = 0; i < 8; ++i) e[i] = (bits >> i) & 1U;
    const Tensor t(f2, {2, 2, 2}, e);
    const auto pb = prank_bounds(t, kPrankBudget, exec);
    const auto b = bias_exact(t);
    const std::string id = "tensor " + std::to_string(bits);
    if (pb.status != SearchStatus::exact || pb.lower != pb.upper) {
      notes.fail(id + " inconclusive");
      continue;
    }
    if (!pb.certificate.reconstitutes(t)) notes.fail(id + " certificate");
    if (b.value() * guard::ipow(2, static_cast<std::uint64_t>(pb.upper)) < 1) notes.fail(id + " arank > prank");
    if (!charsum_matches_bias(bias_charsum_crosscheck(t), b, f2)) notes.fail(id + " character sum");
    if (pb.upper >= 0 && pb.upper < 4) ++by_rank[pb.upper];
  }
  std::ostringstream os;
  os << "256 tensors exact; prank counts 0:" << by_rank[0] << " 1:" << by_rank[1] << " 2:" << by_rank[2]
     << " 3:" << by_rank[3];
  return notes.outcome(os.str());
}

/// The polynomial ensemble shared by criteria 3 and 4.
struct PolyCase {
  Polynomial p;
  unsigned d;
};

inline PolyCase poly_case(std::size_t i) {
  Rng rng = Rng(kSeed).split("polynomials").split(i);
  static const std::array<std::pair<int, unsigned>, 3> configs = {{{3, 2}, {5, 2}, {5, 3}}};
  const auto [q, d] = configs[i % configs.size()];
  const std::size_t n = 1 + rng.below(3);
  return {random_polynomial(FieldSpec::make(q), n, d, rng), d};
}

inline Outcome gowers_identity(const Exec& exec) {
  Notes notes;
  std::uint64_t steps = 0;
  for (std::size_t i = 0; i < kPolynomials; ++i) {
    const auto [p, d] = poly_case(i);
    const int q = p.field().q();
    const auto h = gowers_histogram(p, d, exec);
    const auto t = bias_charsum_crosscheck(derivative_tensor(p, d), exec);
    const cpp_int scale = guard::ipow(q, p.nvars());
    for (int a = 0; a < q; ++a)
      if (h.counts[a] != t.counts[a] * scale) {
        notes.fail("poly " + std::to_string(i) + " histogram");
        break;
      }
    double prev = 0;
    for (unsigned k = 1; k <= d; ++k) {
      const double v = gowers_norm(p, k, 1, exec).value;
      if (k > 1) {
        ++steps;
        if (v < prev - kMonotoneTolerance) notes.fail("poly " + std::to_string(i) + " U" + std::to_string(k));
      }
      prev = v;
    }
  }
  return notes.outcome(std::to_string(kPolynomials) + " polynomials, histograms equal, " + std::to_string(steps) +
                       " monotone steps");
}

inline Outcome taylor() {
  Notes notes;
  for (std::size_t i = 0; i < kPolynomials; ++i) {
    const auto [p, d] = poly_case(i);
    const auto s = taylor_split(p, d);
    if (!taylor_verify(p, s)) notes.fail("poly " + std::to_string(i) + " pointwise");
    if (!s.w.is_zero() && s.w.degree() + 1 > d) notes.fail("poly " + std::to_string(i) + " deg W");
  }
  bool raised = false;
  try {
    Polynomial x1x2(FieldSpec::make(2), 2);
    x1x2.add_term({1, 1}, 1);
    (void)taylor_split(x1x2, 2);
  } catch (const CharacteristicError&) {
    raised = true;
  }
  if (!raised) notes.fail("F_2 d=2 accepted");
  return notes.outcome(std::to_string(kPolynomials) + " splits verified pointwise; F_2 d=2 rejected");
}

inline Outcome degeneracy() {
  Notes notes;
  const FieldSpec f2 = FieldSpec::make(2);
  std::size_t most = 0;
  for (std::size_t i = 0; i < kDegenerate; ++i) {
    Rng rng = Rng(kSeed).split("degenerate").split(i);
    const std::size_t k = 1 + i % 2;
    const Dims dims{1 + rng.below(3), 1 + rng.below(3), 1 + rng.below(3)};
    std::map<ModeMask, Subspace> h;
    for (ModeMask m = 1; m < 4; ++m) {
      const std::size_t ambient = dims_product(sub_dims(dims, m));
      h.emplace(m, Subspace::random(f2, ambient, std::min(k, ambient), rng));
    }
    const auto [t, w] = degenerate_sample(f2, dims, h, rng);
    const auto cert = degenerate_decompose(w);
    const std::string id = "tensor " + std::to_string(i);
    if (cert.summands.size() > 4 * k) notes.fail(id + " too many summands");
    if (!cert.reconstitutes(t)) notes.fail(id + " reconstitution");
    for (const auto& s : cert.summands)
      if (!prank_one_check(s.expand())) notes.fail(id + " summand not rank one");
    most = std::max(most, cert.summands.size());
  }
  return notes.outcome(std::to_string(kDegenerate) + " tensors within 4k summands (max " + std::to_string(most) + ")");
}

/// 2A - 2A over F_2^n, with codes added by XOR.
inline std::vector<bool> two_a_minus_two_a(const VectorSet& a) {
  const std::uint64_t size = a.ambient_size();
  std::vector<bool> sums(size, false), out(size, false);
  for (auto x : a.codes)
    for (auto y : a.codes) sums[x ^ y] = true;
  for (std::uint64_t s = 0; s < size; ++s) {
    if (!sums[s]) continue;
    for (std::uint64_t t = 0; t < size; ++t)
      if (sums[t]) out[s ^ t] = true;
  }
  return out;
}

/// Cycles through uniform sets, dense subsets of a codimension-1 subspace and
/// codimension-2 subspaces with a few extra points.
inline VectorSet structured_set(const FieldSpec& f2, std::size_t i, Rng& rng) {
  if (i % 3 == 0) return random_set(f2, 8, 1, 3, rng);
  const Subspace h = Subspace::random(f2, 8, 8 - (i % 3), rng);
  std::vector<std::uint64_t> codes;
  for (auto c : h.element_codes())
    if (i % 3 == 2 || rng.coin(3, 4)) codes.push_back(c);
  for (std::size_t extra = rng.below(4); extra > 0; --extra) codes.push_back(rng.below(256));
  return VectorSet::from_codes(f2, 8, std::move(codes));
}

inline Outcome bogolyubov_sets(const Exec& exec) {
  Notes notes;
  const FieldSpec f2 = FieldSpec::make(2);
  const VecArith arith(f2, 8);
  const cpp_rational delta(1, 4);
  std::size_t worst = 0;
  std::uint64_t witnesses = 0;
  for (std::size_t i = 0; i < kBogolyubovSets; ++i) {
    Rng rng = Rng(kSeed).split("bogolyubov").split(i);
    VectorSet a = structured_set(f2, i, rng);
    while (a.density() < delta) a = structured_set(f2, i, rng);
    const auto r = bogolyubov(a, delta, exec);
    const std::string id = "set " + std::to_string(i);
    if (r.u.codim() > 16) notes.fail(id + " codim " + std::to_string(r.u.codim()));
    const auto elems = r.u.element_codes();
    const auto brute = two_a_minus_two_a(a);
    if (r.witnesses.size() != elems.size()) notes.fail(id + " missing witnesses");
    for (std::size_t j = 0; j < std::min(elems.size(), r.witnesses.size()); ++j) {
      const auto& w = r.witnesses[j];
      const bool in_a = a.contains(w.a[0]) && a.contains(w.a[1]) && a.contains(w.a[2]) && a.contains(w.a[3]);
      if (w.u != elems[j] || !in_a || (w.a[0] ^ w.a[1] ^ w.a[2] ^ w.a[3]) != w.u || !verify_witness(a, w, arith))
        notes.fail(id + " witness " + std::to_string(j));
      if (!brute[elems[j]]) notes.fail(id + " element outside 2A-2A");
    }
    witnesses += r.witnesses.size();
    worst = std::max(worst, r.u.codim());
  }
  return notes.outcome(std::to_string(kBogolyubovSets) + " sets, max codim " + std::to_string(worst) + " <= 16, " +
                       std::to_string(witnesses) + " witnesses verified");
}

inline std::set<Tuple> element_set(const LSystem& s) {
  const auto e = lsystem_elements(s);
  return {e.begin(), e.end()};
}

/// Rank-one 3x3 array over F_2 as a 9-bit mask, row-major.
inline unsigned outer_bits(std::uint64_t u, std::uint64_t v) {
  unsigned m = 0;
  for (unsigned i = 0; i < 3; ++i)
    for (unsigned j = 0; j < 3; ++j)
      if (((u >> (2 - i)) & 1U) && ((v >> (2 - j)) & 1U)) m |= 1U << (3 * i + j);
  return m;
}

inline Outcome system_lemmas() {
  Notes notes;
  const FieldSpec f2 = FieldSpec::make(2);
  const Dims dims{3, 3};
  const Rng base = Rng(kSeed).split("lsystems");
  for (std::size_t i = 0; i < 20; ++i) {
    Rng rng = base.split("intersect").split(i);
    const auto a = lsystem_random(f2, dims, 1, rng);
    const auto b = lsystem_random(f2, dims, 1, rng);
    const auto c = lsystem_intersect(a, b);
    const auto check = lsystem_validate(c);
    if (!check.valid || c.bound != 2 || check.max_codim > 2) notes.fail("intersect " + std::to_string(i));
    const auto ea = element_set(a), eb = element_set(b);
    for (const auto& t : element_set(c))
      if (!ea.count(t) || !eb.count(t)) notes.fail("intersect " + std::to_string(i) + " element");
  }
  for (std::size_t i = 0; i < 20; ++i) {
    Rng rng = base.split("restrict").split(i);
    const auto s = lsystem_random(f2, dims, 1, rng);
    std::map<ModeMask, Subspace> l;
    for (ModeMask m = 1; m < 4; ++m) {
      const std::size_t ambient = dims_product(sub_dims(dims, m));
      l.emplace(m, Subspace::random(f2, ambient, ambient - rng.below(2), rng));
    }
    const auto r = lsystem_restrict(s, l);
    const auto check = lsystem_validate(r);
    if (!check.valid || r.bound > s.bound + 4 * 1) notes.fail("restrict " + std::to_string(i));
    const auto es = element_set(s);
    for (const auto& t : element_set(r)) {
      if (!es.count(t)) notes.fail("restrict " + std::to_string(i) + " element outside Q");
      for (const auto& [m, li] : l)
        if (!tuple_in_restriction(f2, dims, t, m, li)) notes.fail("restrict " + std::to_string(i) + " element outside L");
    }
  }
  std::size_t certified = 0, terms = 0;
  for (std::size_t i = 0; i < 5; ++i) {
    Rng rng = base.split("find").split(i);
    ProductMultiset bp{f2, dims, {}};
    while (bp.size() < 16) {
      bp.tuples.clear();
      for (std::uint64_t u = 0; u < 8; ++u)
        for (std::uint64_t v = 0; v < 8; ++v)
          if (rng.coin(1, 2)) bp.tuples.push_back({u, v});
    }
    const auto r = find_system(bp, cpp_rational(1, 4));
    const auto check = lsystem_validate(r.system);
    if (!check.valid || r.system.bound > 4096) notes.fail("find_system " + std::to_string(i) + " system");
    for (const auto& t : lsystem_elements(r.system)) {
      const auto it = r.certificates.find(t);
      if (it == r.certificates.end()) {
        notes.fail("find_system " + std::to_string(i) + " uncertified element");
        continue;
      }
      const auto& c = it->second;
      unsigned acc = 0;
      for (auto j : c.plus) acc ^= outer_bits(bp.tuples.at(j)[0], bp.tuples.at(j)[1]);
      for (auto j : c.minus) acc ^= outer_bits(bp.tuples.at(j)[0], bp.tuples.at(j)[1]);
      if (acc != outer_bits(t[0], t[1]) || c.plus.size() > 16 || c.minus.size() > 16)
        notes.fail("find_system " + std::to_string(i) + " certificate");
      terms = std::max({terms, c.plus.size(), c.minus.size()});
      ++certified;
    }
  }
  return notes.outcome("20 intersections, 20 restrictions, 5 systems with " + std::to_string(certified) +
                       " certified elements (max " + std::to_string(terms) + " terms per sign)");
}

inline Outcome forcing() {
  Notes notes;
  const FieldSpec f2 = FieldSpec::make(2);
  const Dims dims{2, 2, 2};
  ForcingInstance onehot{f2, dims, {}, 1, {}};
  for (std::uint64_t f = 0; f < 8; ++f) onehot.q.emplace_back(Tensor::unit(f2, dims, f), 1);
  onehot.v.emplace(7U, Subspace::zero(f2, 8));
  if (!forcing_check(onehot).forcing) notes.fail("one-hot");
  std::size_t forcing_count = 0;
  for (std::size_t i = 0; i < kForcingTrials; ++i) {
    Rng rng = Rng(kSeed).split("forcing").split(i);
    static const std::array<cpp_rational, 3> alphas = {cpp_rational(1), cpp_rational(3, 4), cpp_rational(2, 3)};
    ForcingInstance inst{f2, dims, {}, alphas[i % 3], {}};
    const std::size_t m = 4 + rng.below(13);
    for (std::size_t j = 0; j < m; ++j) inst.q.emplace_back(random_tensor(f2, dims, rng), 1 + rng.below(2));
    inst.v.emplace(7U, Subspace::zero(f2, 8));
    // With every V_I = {0}: forcing iff no nonzero r annihilates an alpha share.
    bool brute = true;
    for (unsigned r = 1; r < 256 && brute; ++r) {
      std::uint64_t hits = 0, total = 0;
      for (const auto& [t, mult] : inst.q) {
        unsigned parity = 0;
        for (unsigned e = 0; e < 8; ++e) parity ^= ((r >> (7 - e)) & 1U) & t[e];
        total += mult;
        if (parity == 0) hits += mult;
      }
      if (cpp_rational(hits) >= inst.alpha * total) brute = false;
    }
    const bool got = forcing_check(inst).forcing;
    if (got != brute) notes.fail("random Q " + std::to_string(i));
    forcing_count += got;
  }
  return notes.outcome("one-hot certified; " + std::to_string(kForcingTrials) + " random Q agree (" +
                       std::to_string(forcing_count) + " forcing)");
}

inline Outcome towers() {
  Notes notes;
  const auto N = [](std::int64_t v) { return Expr::num(v); };
  for (std::int64_t x : {0, 1, 7, 1000})
    if (Expr::tower(16, N(0), N(x)).evaluate() != std::optional<cpp_rational>(x)) notes.fail("height 0");
  if (Expr::tower(16, N(1), N(2)).evaluate() != std::optional<cpp_rational>(256)) notes.fail("16^2");
  for (std::int64_t b : {2, 3, 16})
    for (std::int64_t h : {0, 1})
      for (std::int64_t x : {0, 1, 2}) {
        const auto lhs = Expr::tower(b, N(h + 1), N(x)).evaluate();
        const auto rhs = Expr::tower(b, N(h), Expr::pow(N(b), N(x))).evaluate();
        if (lhs && rhs && *lhs != *rhs) notes.fail("height shift");
      }
  for (std::int64_t d = 1; d <= 4; ++d)
    for (std::int64_t q : {2, 3, 5}) {
      const std::int64_t base = 8 * q;
      const auto bound = tower_bound("1.11", d, 1, q);
      const Expr t = bound.expr.arg(1);
      const auto lowered = tower_lower(t);
      const Expr want = Expr::tower(base, Expr::pow(N(d + 3), N(d + 3)), Expr::pow(N(base), N(1)));
      if (!lowered || !(*lowered == want) || !(tower_normalize(*lowered) == t)) notes.fail("normalization");
      // The rank bound with 1/c = q^{r / 2^d}: its top q^r sits below (8q)^r.
      for (std::int64_t r = 1; r <= 3; ++r) {
        const Expr from_bias = Expr::tower(base, Expr::pow(N(d + 3), N(d + 3)), Expr::pow(N(q), N(r)));
        const auto lower = tower_lower(tower_bound("1.11", d, r, q).expr.arg(1));
        if (!lower || tower_leq(from_bias, *lower) != std::optional<bool>(true)) notes.fail("consistency");
        const Expr e = Expr::pow(N(q), Expr::mul(Expr::pow(N(2), N(d)), Expr::log(q, Expr::pow(N(q), N(r)))));
        const Expr s = simplify_power_of_log(e);
        if (s.evaluate() != e.evaluate() || !(s == Expr::pow(Expr::pow(N(q), N(r)), Expr::pow(N(2), N(d)))))
          notes.fail("power of log");
      }
    }
  const auto big = tower_bound("1.11", 3, 1, 2);
  if (big.numeric || big.symbolic != "2^2·tower_16(6^6+1, 1)") notes.fail("symbolic refusal");
  if (!Expr::pow(N(2), N(4000)).evaluate() || Expr::pow(N(2), N(4100)).evaluate()) notes.fail("4096-bit cap");
  return notes.outcome("identities, normalization and cap hold; " + big.symbolic);
}

/// Output of a fixed workload, serialized.
inline std::string fingerprint(const Exec& exec) {
  std::ostringstream os;
  EnsembleParams p;
  for (const auto& kind : ensemble_kinds()) {
    EnsembleParams q = p;
    if (kind == "random-poly") q.q = 3;
    if (kind == "product-multiset") q.dims = {3, 3};
    const auto t = ensemble(kind, 12, kSeed, q, exec);
    for (const auto& row : t.rows) {
      for (const auto& c : row) os << c << ' ';
      os << '\n';
    }
  }
  Rng rng = Rng(kSeed).split("determinism");
  const FieldSpec f2 = FieldSpec::make(2);
  const auto a = random_set(f2, 8, 1, 3, rng);
  const auto b = bogolyubov(a, cpp_rational(1, 4), exec);
  for (const auto& w : b.witnesses) os << w.u << ':' << w.a[0] << ',' << w.a[1] << ',' << w.a[2] << ',' << w.a[3] << ' ';
  const auto p5 = random_polynomial(FieldSpec::make(5), 2, 3, rng);
  const auto c = correlation_search(p5, 1, 1, exec);
  os << '\n' << c.best.render() << ' ' << c.value << '\n';
  for (const auto& x : gowers_histogram(p5, 3, exec).counts) os << x << ' ';
  const Tensor t = random_tensor(FieldSpec::make(3), {3, 3, 3}, rng);
  os << '\n' << bias_exact(t, std::nullopt, exec).numerator << '\n';
  const auto fsys = find_system(ProductMultiset::full(f2, {2, 2}), 1);
  os << lsystem_dump(fsys.system);
  return os.str();
}

inline Outcome determinism(const Exec& exec) {
  const unsigned alt = exec.workers == 1 ? 4 : 1;
  const std::string a = fingerprint(Exec{1});
  const std::string b = fingerprint(Exec{1});
  const std::string c = fingerprint(Exec{alt == 1 ? exec.workers : alt});
  const std::string d = fingerprint(exec);
  Notes notes;
  if (a != b) notes.fail("repeat differs");
  if (a != c || a != d) notes.fail("worker count changes output");
  return notes.outcome("fixed workload identical across repeats and worker counts");
}

}  // namespace detail

struct Options {
  Exec exec;
};

/// Runs criteria 1..10 in order. on_result sees each result as it completes.
inline std::vector<CriterionResult> run(const Options& opt,
                                        const std::function<void(const CriterionResult&)>& on_result = {}) {
  using Fn = std::function<Outcome()>;
  const std::vector<std::pair<std::string, Fn>> criteria = {
      {"matrix-oracle", [] { return detail::matrix_oracle(); }},
      {"arank-prank-exact", [&] { return detail::prank_exact(opt.exec); }},
      {"gowers-tensor-identity", [&] { return detail::gowers_identity(opt.exec); }},
      {"taylor-split", [] { return detail::taylor(); }},
      {"degeneracy-bound", [] { return detail::degeneracy(); }},
      {"bogolyubov", [&] { return detail::bogolyubov_sets(opt.exec); }},
      {"system-lemmas", [] { return detail::system_lemmas(); }},
      {"forcing", [] { return detail::forcing(); }},
      {"tower-bounds", [] { return detail::towers(); }},
      {"determinism", [&] { return detail::determinism(opt.exec); }},
  };
  std::vector<CriterionResult> out;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    CriterionResult r;
    r.id = static_cast<int>(i + 1);
    r.name = criteria[i].first;
    r.limit = kLimitSeconds[i];
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.pass = o.pass;
    r.detail = o.detail;
    if (r.limit > 0 && r.seconds > r.limit) {
      r.pass = false;
      r.detail += "; exceeded the runtime limit";
    }
    if (on_result) on_result(r);
    out.push_back(std::move(r));
  }
  return out;
}

/// "PASS  3 gowers-tensor-identity: ..." with an optional timing suffix.
inline std::string format(const CriterionResult& r, bool timings) {
  std::ostringstream os;
  os << (r.pass ? "PASS " : "FAIL ") << (r.id < 10 ? " " : "") << r.id << ' ' << r.name << ": " << r.detail;
  if (timings) {
    os << " (" << std::fixed << std::setprecision(2) << r.seconds << " s";
    if (r.limit > 0) os << ", limit " << r.limit << " s";
    os << ')';
  }
  return os.str();
}

inline bool all_pass(const std::vector<CriterionResult>& rs) {
  return std::all_of(rs.begin(), rs.end(), [](const CriterionResult& r) { return r.pass; });
}

}  // namespace trl::selftest
