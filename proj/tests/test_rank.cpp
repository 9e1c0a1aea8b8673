#include <gtest/gtest.h>

#include <array>
#include <deque>

#include "oracle.hpp"
#include "trl/rank.hpp"

using namespace trl;

namespace {

oracle::Gf oracle_for(const FieldSpec& fs) { return {fs.p(), fs.k(), fs.modulus()}; }

Tensor from_bits(unsigned bits) {
  std::vector<FieldElem> e(8);
  for (unsigned i = 0; i < 8; ++i) e[i] = (bits >> i) & 1U;
  return Tensor(FieldSpec::make(2), {2, 2, 2}, e);
}

// Partition rank of every 2x2x2 tensor over F_2 by breadth-first search over
// sums of rank-one pieces a(x_i) b(x_j, x_k), on raw 8-bit masks.
std::array<int, 256> prank_table() {
  std::vector<unsigned> pieces;
  for (int mode = 0; mode < 3; ++mode)
    for (unsigned a = 1; a < 4; ++a)
      for (unsigned b = 1; b < 16; ++b) {
        unsigned t = 0;
        for (unsigned i = 0; i < 2; ++i)
          for (unsigned j = 0; j < 2; ++j)
            for (unsigned k = 0; k < 2; ++k) {
              const unsigned idx[] = {i, j, k};
              const unsigned own = idx[mode];
              unsigned rest = 0;
              for (int m = 0; m < 3; ++m)
                if (m != mode) rest = rest * 2 + idx[m];
              if (((a >> own) & 1U) && ((b >> rest) & 1U)) t |= 1U << (4 * i + 2 * j + k);
            }
        pieces.push_back(t);
      }
  std::array<int, 256> dist;
  dist.fill(-1);
  dist[0] = 0;
  std::deque<unsigned> queue{0};
  while (!queue.empty()) {
    const unsigned t = queue.front();
    queue.pop_front();
    for (unsigned p : pieces)
      if (dist[t ^ p] < 0) {
        dist[t ^ p] = dist[t] + 1;
        queue.push_back(t ^ p);
      }
  }
  return dist;
}

}  // namespace

TEST(Bias, MatrixIdentity) {
  const auto fs = FieldSpec::make(2);
  const Tensor id(fs, {2, 2}, {1, 0, 0, 1});
  const auto b = bias_exact(id);
  EXPECT_EQ(b.value(), cpp_rational(1, 4));
  const auto h = bias_charsum_crosscheck(id);
  EXPECT_EQ(h.counts, (std::vector<cpp_int>{10, 6}));
  const auto a = arank(id);
  EXPECT_EQ(a.value, 2.0);
  EXPECT_EQ(a.ceil_cert, 2);
}

TEST(Bias, SingleEntryAndDiagonal) {
  const auto fs = FieldSpec::make(2);
  EXPECT_EQ(bias_exact(Tensor::unit(fs, {2, 2, 2}, 7)).value(), cpp_rational(3, 4));
  const Tensor diag = Tensor::unit(fs, {2, 2, 2}, 0) + Tensor::unit(fs, {2, 2, 2}, 7);
  EXPECT_EQ(bias_exact(diag).value(), cpp_rational(9, 16));
  EXPECT_NEAR(arank(diag).value, 0.830074998557688, 1e-12);
  EXPECT_EQ(arank(diag).ceil_cert, 1);
  EXPECT_EQ(arank(diag).floor_cert, 0);
}

TEST(Bias, MatchesComplexOracle) {
  Rng rng(31);
  for (int q : {2, 3, 4, 5}) {
    const auto fs = FieldSpec::of_order(q);
    const auto g = oracle_for(fs);
    for (int trial = 0; trial < 6; ++trial) {
      const Dims dims{2, 2, q <= 3 ? std::size_t{2} : std::size_t{1}};
      const Tensor t = random_tensor(fs, dims, rng);
      const std::vector<int> idims(dims.begin(), dims.end());
      const std::vector<int> e(t.entries().begin(), t.entries().end());
      const auto b = static_cast<long double>(bias_exact(t).value());
      for (int c = 1; c < q; ++c) {
        const auto z = oracle::brute_bias(g, idims, e, c);
        EXPECT_NEAR(static_cast<double>(z.real()), static_cast<double>(b), 1e-12);
        EXPECT_NEAR(static_cast<double>(z.imag()), 0.0, 1e-12);
      }
      EXPECT_TRUE(charsum_matches_bias(bias_charsum_crosscheck(t), bias_exact(t), fs));
    }
  }
}

TEST(Bias, SliceModeInvariant) {
  Rng rng(8);
  const auto fs = FieldSpec::make(3);
  const Tensor t = random_tensor(fs, {2, 3, 2}, rng);
  const auto b = bias_exact(t).value();
  for (std::size_t m = 0; m < 3; ++m) EXPECT_EQ(bias_exact(t, m).value(), b);
}

TEST(Bias, ParallelMatchesSerial) {
  Rng rng(9);
  const auto fs = FieldSpec::make(3);
  const Tensor t = random_tensor(fs, {3, 3, 3}, rng);
  const auto a = bias_exact(t, std::nullopt, Exec{1});
  const auto b = bias_exact(t, std::nullopt, Exec{4});
  EXPECT_EQ(a.numerator, b.numerator);
  EXPECT_EQ(bias_charsum_crosscheck(t, Exec{1}), bias_charsum_crosscheck(t, Exec{3}));
}

TEST(Prank, ZeroAndIdentity) {
  const auto fs = FieldSpec::make(2);
  const auto z = prank_bounds(Tensor::zeros(fs, {2, 2}), 1000);
  EXPECT_EQ(z.lower, 0);
  EXPECT_EQ(z.upper, 0);
  EXPECT_EQ(z.status, SearchStatus::exact);
  const auto id = prank_bounds(Tensor(fs, {2, 2}, {1, 0, 0, 1}), 1000);
  EXPECT_EQ(id.lower, 2);
  EXPECT_EQ(id.upper, 2);
  EXPECT_EQ(id.status, SearchStatus::exact);
}

TEST(Prank, DiagonalIsTwo) {
  const auto fs = FieldSpec::make(2);
  const Tensor diag = Tensor::unit(fs, {2, 2, 2}, 0) + Tensor::unit(fs, {2, 2, 2}, 7);
  const auto b = prank_bounds(diag, 100000);
  EXPECT_EQ(b.arank_lower, 1);
  EXPECT_EQ(b.lower, 2);
  EXPECT_EQ(b.upper, 2);
  EXPECT_EQ(b.status, SearchStatus::exact);
  EXPECT_TRUE(b.certificate.reconstitutes(diag));
}

TEST(Prank, AllSmallTensorsMatchSearchTable) {
  const auto table = prank_table();
  for (unsigned bits = 0; bits < 256; ++bits) {
    const Tensor t = from_bits(bits);
    const auto b = prank_bounds(t, 1000000);
    ASSERT_EQ(b.status, SearchStatus::exact) << bits;
    EXPECT_EQ(b.upper, table[bits]) << bits;
    EXPECT_EQ(b.lower, table[bits]) << bits;
    EXPECT_LE(b.arank_lower, b.upper);
    EXPECT_TRUE(b.certificate.reconstitutes(t));
    EXPECT_EQ(static_cast<std::int64_t>(b.certificate.summands.size()), b.upper);
  }
}

TEST(Prank, TinyBudgetIsInconclusiveButSound) {
  Rng rng(12);
  const auto fs = FieldSpec::make(3);
  const Tensor t = random_tensor(fs, {3, 3, 3}, rng);
  const auto b = prank_bounds(t, 10);
  EXPECT_LE(b.lower, b.upper);
  EXPECT_TRUE(b.certificate.reconstitutes(t));
}

TEST(Prank, OneCheck) {
  const auto fs = FieldSpec::make(3);
  Rng rng(13);
  const Tensor a = random_tensor(fs, {2, 2}, rng) + Tensor(fs, {2, 2}, {1, 0, 0, 0});
  const Tensor v = Tensor::vector(fs, {1, 2});
  const Tensor t = rank_one(IndexSplit(3, 0b011), a, v);
  const auto s = prank_one_check(t);
  ASSERT_TRUE(s.has_value());
  EXPECT_EQ(s->expand(), t);
  const Tensor diag = Tensor::unit(fs, {2, 2, 2}, 0) + Tensor::unit(fs, {2, 2, 2}, 7);
  EXPECT_FALSE(prank_one_check(diag).has_value());
}

TEST(Degeneracy, DecompositionWithinBound) {
  Rng rng(14);
  const auto fs = FieldSpec::make(2);
  const Dims dims{3, 2, 3};
  for (int trial = 0; trial < 20; ++trial) {
    std::map<ModeMask, Subspace> h;
    const std::size_t k = 1 + trial % 2;
    for (ModeMask m : {1U, 2U, 3U})
      h.emplace(m, Subspace::random(fs, dims_product(sub_dims(dims, m)), k, rng));
    auto [t, w] = degenerate_sample(fs, dims, h, rng);
    const auto cert = degenerate_decompose(w);
    EXPECT_LE(cert.summands.size(), 4 * k);
    EXPECT_TRUE(cert.reconstitutes(t));
    for (const auto& s : cert.summands) EXPECT_TRUE(prank_one_check(s.expand()).has_value());
  }
}

TEST(Membership, SubspaceSum) {
  const auto fs = FieldSpec::make(2);
  const Dims dims{2, 2, 2};
  std::map<ModeMask, Subspace> v;
  v.emplace(1U, Subspace::span(fs, 2, {{1, 0}}));
  // e_0 (x) anything lies in V_{0} (x) F^{1,2}.
  const Tensor inside = rank_one(IndexSplit(3, 1), Tensor::vector(fs, {1, 0}), Tensor(fs, {2, 2}, {1, 1, 0, 1}));
  EXPECT_TRUE(membership_subspace_sum(inside, v).member);
  EXPECT_FALSE(membership_subspace_sum(Tensor::unit(fs, dims, 7), v).member);
}

TEST(Forcing, OneHotFullMultiset) {
  const auto fs = FieldSpec::make(2);
  const Dims dims{2, 2, 2};
  ForcingInstance inst{fs, dims, {}, 1, {}};
  for (std::uint64_t f = 0; f < 8; ++f) inst.q.emplace_back(Tensor::unit(fs, dims, f), 1);
  inst.v.emplace(1U, Subspace::zero(fs, 2));
  const auto v = forcing_check(inst);
  EXPECT_TRUE(v.forcing);
  EXPECT_EQ(v.collected, 1U);
  EXPECT_EQ(v.enumerated, 256U);
}

TEST(Forcing, BruteAnnihilatorAgreement) {
  const auto fs = FieldSpec::make(2);
  const Dims dims{2, 2, 2};
  Rng rng(15);
  for (int trial = 0; trial < 20; ++trial) {
    ForcingInstance inst{fs, dims, {}, cpp_rational(1 + trial % 3, 3), {}};
    const std::size_t m = 2 + rng.below(7);
    for (std::size_t i = 0; i < m; ++i) inst.q.emplace_back(random_tensor(fs, dims, rng), 1 + rng.below(2));
    inst.v.emplace(1U, Subspace::zero(fs, 2));
    // Forcing with V = {0} iff no nonzero r is orthogonal to an alpha share of Q.
    bool brute = true;
    for (unsigned r = 1; r < 256 && brute; ++r) {
      std::uint64_t hits = 0, total = 0;
      for (const auto& [t, mult] : inst.q) {
        unsigned par = 0;
        for (unsigned i = 0; i < 8; ++i) par ^= ((r >> (7 - i)) & 1U) & t[i];
        total += mult;
        if (par == 0) hits += mult;
      }
      if (cpp_rational(hits) >= inst.alpha * total) brute = false;
    }
    EXPECT_EQ(forcing_check(inst).forcing, brute) << trial;
  }
}

TEST(Forcing, EmptyMultisetIsVacuous) {
  const auto fs = FieldSpec::make(2);
  ForcingInstance inst{fs, {2, 2}, {}, 1, {}};
  inst.v.emplace(1U, Subspace::zero(fs, 2));
  const auto v = forcing_check(inst);
  EXPECT_FALSE(v.forcing);
  ASSERT_TRUE(v.counterexample.has_value());
  EXPECT_FALSE(v.counterexample->is_zero());
}

TEST(Forcing, AnnihilatorAsFullModeSubspace) {
  const auto fs = FieldSpec::make(2);
  const Dims dims{2, 2, 2};
  Rng rng(16);
  for (int trial = 0; trial < 5; ++trial) {
    ForcingInstance inst{fs, dims, {}, 1, {}};
    for (int i = 0; i < 8; ++i) {
      const auto a = random_tensor(fs, {2}, rng), b = random_tensor(fs, {2}, rng), c = random_tensor(fs, {2}, rng);
      inst.q.emplace_back(Tensor::outer(fs, {a.entries(), b.entries(), c.entries()}), 1);
    }
    std::vector<std::vector<FieldElem>> annihilator;
    for (unsigned r = 0; r < 256; ++r) {
      bool all = true;
      for (const auto& [t, m] : inst.q) {
        unsigned par = 0;
        for (unsigned i = 0; i < 8; ++i) par ^= ((r >> (7 - i)) & 1U) & t[i];
        all = all && par == 0;
      }
      if (!all) continue;
      std::vector<FieldElem> v(8);
      for (unsigned i = 0; i < 8; ++i) v[i] = (r >> (7 - i)) & 1U;
      annihilator.push_back(v);
    }
    const auto space = Subspace::span(fs, 8, annihilator);
    EXPECT_EQ(space.size(), annihilator.size());
    inst.v.emplace(7U, space);
    EXPECT_TRUE(forcing_check(inst).forcing);
  }
}
