#include <gtest/gtest.h>

#include "trl/io.hpp"

using namespace trl;

namespace {

const FieldSpec f2 = FieldSpec::make(2);
const FieldSpec f4 = FieldSpec::make(2, 2);

}  // namespace

TEST(Io, Rationals) {
  EXPECT_EQ(io::parse_rational("3"), cpp_rational(3));
  EXPECT_EQ(io::parse_rational("-3/6"), cpp_rational(-1, 2));
  EXPECT_EQ(io::parse_rational("0.25"), cpp_rational(1, 4));
  EXPECT_THROW(io::parse_rational("1/0"), InvalidInput);
  EXPECT_THROW(io::parse_rational("abc"), InvalidInput);
  EXPECT_EQ(io::rational_str(cpp_rational(6, 4)), "3/2");
}

TEST(Io, FieldRoundTrip) {
  for (const auto& fs : {f2, f4, FieldSpec::make(5), FieldSpec::make(3, 2)})
    EXPECT_EQ(io::field_from_json(io::field_to_json(fs)), fs);
  EXPECT_THROW(io::field_from_json(io::Json::parse(R"({"p": 6})")), InvalidInput);
}

TEST(Io, TensorRoundTrip) {
  Rng rng(70);
  const Tensor t = random_tensor(f4, {2, 3, 2}, rng);
  EXPECT_EQ(io::tensor_from_json(io::tensor_to_json(t)), t);
  EXPECT_EQ(io::tensor_from_text(io::tensor_to_text(t)), t);
  EXPECT_EQ(io::parse_tensor(io::tensor_to_json(t).dump()), t);
  EXPECT_EQ(io::parse_tensor(io::tensor_to_text(t)), t);
  EXPECT_EQ(io::tensor_to_json(io::tensor_from_json(io::tensor_to_json(t))).dump(), io::tensor_to_json(t).dump());
}

TEST(Io, TensorTextComments) {
  const Tensor t = io::tensor_from_text("# identity\nfield 2 1  # F_2\ndims 2 2\nentries 1 0 0 1\n");
  EXPECT_EQ(t, Tensor(FieldSpec::make(2), {2, 2}, {1, 0, 0, 1}));
}

TEST(Io, TensorErrors) {
  EXPECT_THROW(io::parse_tensor("{\"field\": {\"p\": 2}, \"dims\": [2], \"entries\": [0, 2]}"), InvalidInput);
  EXPECT_THROW(io::parse_tensor("{not json"), InvalidInput);
  EXPECT_THROW(io::parse_tensor("field 2 1\ndims 2 2\nentries 0 1 1"), InvalidInput);
  EXPECT_THROW(io::parse_tensor("dims 2\nentries 0 1"), InvalidInput);
}

TEST(Io, PolynomialRoundTrip) {
  Rng rng(71);
  const auto p = random_polynomial(FieldSpec::make(5), 3, 3, rng);
  EXPECT_EQ(io::polynomial_from_json(io::polynomial_to_json(p)), p);
}

TEST(Io, CertificateRoundTrip) {
  const Tensor diag = Tensor::unit(f2, {2, 2, 2}, 0) + Tensor::unit(f2, {2, 2, 2}, 7);
  const auto b = prank_bounds(diag, 100000);
  const auto [t, c] = io::certificate_from_json(io::certificate_to_json(diag, b.certificate));
  EXPECT_EQ(t, diag);
  EXPECT_TRUE(c.reconstitutes(diag));
  EXPECT_EQ(c.summands.size(), b.certificate.summands.size());
}

TEST(Io, SetRoundTrip) {
  Rng rng(72);
  const auto a = random_set(FieldSpec::make(3), 3, 1, 2, rng);
  const auto b = io::parse_set(io::set_to_text(a));
  EXPECT_EQ(b.codes, a.codes);
  const auto c = io::parse_set("# comment\nfield 2 1\n1 0 1\n0 1 1\n");
  EXPECT_EQ(c.codes, (std::vector<std::uint64_t>{3, 5}));
  EXPECT_THROW(io::parse_set("field 2 1\n1 0\n1\n"), InvalidInput);
  EXPECT_THROW(io::parse_set("1 0 1\n"), InvalidInput);
}

TEST(Io, MultisetAndForcingRoundTrip) {
  const auto bp = ProductMultiset::full(f2, {2, 3});
  const auto b2 = io::multiset_from_json(io::multiset_to_json(bp));
  EXPECT_EQ(b2.tuples, bp.tuples);
  EXPECT_EQ(b2.dims, bp.dims);

  ForcingInstance inst{f2, {2, 2}, {}, cpp_rational(2, 3), {}};
  inst.q.emplace_back(Tensor::unit(f2, {2, 2}, 1), 2);
  inst.v.emplace(1U, Subspace::span(f2, 2, {{1, 1}}));
  const auto back = io::forcing_from_json(io::forcing_to_json(inst));
  EXPECT_EQ(back.alpha, inst.alpha);
  EXPECT_EQ(back.q.size(), 1U);
  EXPECT_EQ(back.q[0].first, inst.q[0].first);
  EXPECT_EQ(back.q[0].second, 2U);
  EXPECT_EQ(back.v.at(1U), inst.v.at(1U));
  EXPECT_EQ(io::forcing_to_json(back).dump(), io::forcing_to_json(inst).dump());
}

TEST(Io, LSystemRoundTrip) {
  Rng rng(73);
  const auto s = lsystem_random(f2, {3, 2}, 1, rng);
  const auto back = io::lsystem_from_json(io::lsystem_to_json(s));
  EXPECT_EQ(lsystem_dump(back), lsystem_dump(s));
  EXPECT_EQ(back.bound, s.bound);
}
