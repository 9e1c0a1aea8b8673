#include <gtest/gtest.h>

#include <set>

#include "oracle.hpp"
#include "trl/additive.hpp"

using namespace trl;

namespace {

const FieldSpec f2 = FieldSpec::make(2);

// Over F_2 vector codes add by XOR.
std::set<std::uint64_t> brute_2a_minus_2a(const VectorSet& a) {
  std::set<std::uint64_t> sums;
  for (auto x : a.codes)
    for (auto y : a.codes) sums.insert(x ^ y);
  std::set<std::uint64_t> out;
  for (auto s : sums)
    for (auto t : sums) out.insert(s ^ t);
  return out;
}

VectorSet coset_of_hyperplane(std::size_t n, std::uint64_t normal, std::uint64_t side) {
  std::vector<std::uint64_t> codes;
  for (std::uint64_t x = 0; x < (1ULL << n); ++x)
    if (static_cast<std::uint64_t>(__builtin_popcountll(x & normal) & 1) == side) codes.push_back(x);
  return VectorSet::from_codes(f2, n, codes);
}

}  // namespace

TEST(Subspaces, ComplementExample) {
  const auto s = Subspace::span(f2, 4, {{1, 0, 0, 0}, {0, 1, 0, 0}});
  EXPECT_EQ(s.orthogonal_complement(), Subspace::span(f2, 4, {{0, 0, 1, 0}, {0, 0, 0, 1}}));
  EXPECT_EQ(Subspace::zero(f2, 4).orthogonal_complement(), Subspace::full(f2, 4));
  EXPECT_EQ(Subspace::full(f2, 4).intersect(s), s);
}

TEST(Spectrum, FullSpaceOnlyTrivial) {
  const auto all = VectorSet::from_codes(f2, 4, [] {
    std::vector<std::uint64_t> c(16);
    for (std::uint64_t i = 0; i < 16; ++i) c[i] = i;
    return c;
  }());
  const auto s = spectrum(all, cpp_rational(1, 100));
  ASSERT_EQ(s.entries.size(), 1U);
  EXPECT_EQ(s.entries[0].code, 0U);
}

TEST(Spectrum, AffineHyperplaneHasTwoFullCharacters) {
  const auto a = coset_of_hyperplane(5, 0b10110, 1);
  const auto s = spectrum(a, cpp_rational(1, 100));
  ASSERT_EQ(s.entries.size(), 2U);
  EXPECT_EQ(s.entries[0].code, 0U);
  EXPECT_EQ(s.entries[1].code, 0b10110U);
  for (const auto& e : s.entries) EXPECT_DOUBLE_EQ(e.magnitude, 1.0);
}

TEST(Spectrum, MatchesDirectCharacterSum) {
  Rng rng(50);
  for (int q : {2, 3, 4, 5}) {
    const auto fs = FieldSpec::of_order(q);
    const oracle::Gf g{fs.p(), fs.k(), fs.modulus()};
    const std::size_t n = 2;
    const auto a = random_set(fs, n, 1, 2, rng);
    if (a.size() == 0) continue;
    const auto s = spectrum(a, cpp_rational(1, 16));
    const VecCodec codec(q, n);
    std::set<std::uint64_t> listed;
    for (const auto& e : s.entries) listed.insert(e.code);
    for (std::uint64_t r = 0; r < codec.size(); ++r) {
      const auto rv = codec.decode(r);
      oracle::Complex sum = 0;
      for (auto x : a.codes) {
        const auto xv = codec.decode(x);
        sum += g.chi(g.add(g.mul(rv[0], xv[0]), g.mul(rv[1], xv[1])), 1);
      }
      const double mag = static_cast<double>(std::abs(sum)) / a.size();
      if (std::fabs(mag - 0.25) < 1e-9) continue;  // boundary cases are tolerance-dependent
      EXPECT_EQ(listed.count(r) == 1, mag >= 0.25) << "q=" << q << " r=" << r;
    }
  }
}

TEST(Spectrum, ParsevalBound) {
  Rng rng(51);
  const auto a = random_set(f2, 8, 1, 2, rng);
  const cpp_rational rho2(1, 4);
  const auto s = spectrum(a, rho2);
  EXPECT_LE(cpp_rational(s.entries.size()), 1 / (rho2 * a.density()));
}

TEST(Bogolyubov, FullSpace) {
  std::vector<std::uint64_t> c(64);
  for (std::uint64_t i = 0; i < 64; ++i) c[i] = i;
  const auto r = bogolyubov(VectorSet::from_codes(f2, 6, c), 1);
  EXPECT_EQ(r.u.codim(), 0U);
  EXPECT_EQ(r.witnesses.size(), 64U);
}

TEST(Bogolyubov, HyperplaneCoset) {
  const auto a = coset_of_hyperplane(6, 0b100101, 1);
  const auto r = bogolyubov(a, cpp_rational(1, 2));
  const auto h = Subspace::span(f2, 6, {{1, 0, 0, 1, 0, 1}}).orthogonal_complement();
  EXPECT_TRUE(r.u.is_subspace_of(h));
  EXPECT_LE(r.u.codim(), 4U);
  const auto two = brute_2a_minus_2a(a);
  for (auto u : r.u.element_codes()) EXPECT_TRUE(two.count(u));
}

TEST(Bogolyubov, RandomDenseSets) {
  Rng rng(52);
  const VecArith arith(f2, 8);
  for (int trial = 0; trial < 5; ++trial) {
    const auto a = random_set(f2, 8, 3, 10, rng);
    const cpp_rational delta(3, 10);
    if (a.density() < delta) continue;
    const auto r = bogolyubov(a, delta);
    EXPECT_LE(r.u.codim(), 12U);
    EXPECT_EQ(r.codim_bound, 12U);
    const auto elems = r.u.element_codes();
    ASSERT_EQ(r.witnesses.size(), elems.size());
    const auto two = brute_2a_minus_2a(a);
    for (std::size_t i = 0; i < elems.size(); ++i) {
      EXPECT_EQ(r.witnesses[i].u, elems[i]);
      EXPECT_TRUE(verify_witness(a, r.witnesses[i], arith));
      EXPECT_TRUE(two.count(elems[i]));
    }
  }
}

TEST(Bogolyubov, OddCharacteristic) {
  Rng rng(53);
  const auto f3 = FieldSpec::make(3);
  const auto a = random_set(f3, 4, 1, 2, rng);
  const auto r = bogolyubov(a, cpp_rational(1, 3));
  const VecArith arith(f3, 4);
  for (const auto& w : r.witnesses) EXPECT_TRUE(verify_witness(a, w, arith));
  EXPECT_LE(r.u.codim(), 9U);
}

TEST(Bogolyubov, WorkerIndependent) {
  Rng rng(54);
  const auto a = random_set(f2, 8, 1, 3, rng);
  const auto x = bogolyubov(a, cpp_rational(1, 4), Exec{1});
  const auto y = bogolyubov(a, cpp_rational(1, 4), Exec{3});
  EXPECT_EQ(x.u, y.u);
  ASSERT_EQ(x.witnesses.size(), y.witnesses.size());
  for (std::size_t i = 0; i < x.witnesses.size(); ++i) EXPECT_EQ(x.witnesses[i].a, y.witnesses[i].a);
}

TEST(Bogolyubov, RejectsSparseInput) {
  const auto a = VectorSet::from_codes(f2, 4, {1, 2});
  EXPECT_THROW(bogolyubov(a, cpp_rational(1, 2)), InvalidInput);
}

TEST(Sumset, Examples) {
  const Dims dims{2, 2};
  ProductMultiset bp{f2, dims, {{1, 1}, {2, 3}, {3, 2}, {1, 2}}};
  bp.validate();
  const auto single = sumset_member(bp.tensor(1), 1, 0, bp, 100000);
  ASSERT_TRUE(single.certificate.has_value());
  EXPECT_EQ(single.certificate->plus, std::vector<std::size_t>{1});

  const auto zero = sumset_member(Tensor::zeros(f2, dims), 0, 0, bp, 100000);
  ASSERT_TRUE(zero.certificate.has_value());
  EXPECT_TRUE(zero.certificate->plus.empty() && zero.certificate->minus.empty());

  const Tensor x = bp.tensor(0) + bp.tensor(1) - bp.tensor(3);
  const auto three = sumset_member(x, 2, 1, bp, 100000);
  ASSERT_TRUE(three.certificate.has_value());
  EXPECT_TRUE(verify_certificate(bp, *three.certificate, x));

  const auto starved = sumset_member(x, 2, 1, bp, 3);
  EXPECT_TRUE(starved.exhausted_budget);
  EXPECT_FALSE(starved.certificate.has_value());
}
