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

// Seeded instance ensembles with one metrics row per instance. Instance i
// draws from Rng(seed).split(kind).split(i), so rows do not depend on the
// worker count or on each other.

#include <cstdint>
#include <functional>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "trl/additive.hpp"
#include "trl/gowers.hpp"
#include "trl/lsystem.hpp"
#include "trl/parallel.hpp"
#include "trl/rank.hpp"

namespace trl {

struct EnsembleParams {
  int q = 2;
  Dims dims{2, 2, 2};       // random-tensor, degenerate, product-multiset
  std::size_t nvars = 2;    // random-poly
  unsigned degree = 2;      // random-poly
  std::size_t k = 1;        // degenerate
  cpp_rational density{1, 2};  // product-multiset
  std::uint64_t budget = 2'000'000;
};

struct EnsembleTable {
  std::string kind;
  std::uint64_t seed = 0;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> violations;  // property failures, by row
};

inline const std::vector<std::string>& ensemble_kinds() {
  static const std::vector<std::string> k = {"random-tensor", "random-poly", "degenerate", "product-multiset"};
  return k;
}

namespace detail {

inline std::string fixed(double v, int digits = 12) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

inline std::string ratio_str(const cpp_rational& r) {
  return denominator(r) == 1 ? numerator(r).str() : numerator(r).str() + "/" + denominator(r).str();
}

struct EnsembleRow {
  std::vector<std::string> cells;
  std::string violation;
};

inline EnsembleRow random_tensor_row(const FieldSpec& fs, const EnsembleParams& p, Rng rng) {
  const Tensor t = random_tensor(fs, p.dims, rng);
  const auto a = arank(t);
  const auto b = prank_bounds(t, p.budget);
  EnsembleRow r;
  r.cells = {ratio_str(a.bias.value()), fixed(a.value), std::to_string(b.lower), std::to_string(b.upper),
             to_string(b.status)};
  if (cpp_rational(a.bias.value()) * guard::ipow(fs.q(), static_cast<std::uint64_t>(b.upper)) < 1)
    r.violation = "arank exceeds the prank upper bound";
  return r;
}

inline EnsembleRow random_poly_row(const FieldSpec& fs, const EnsembleParams& p, Rng rng) {
  const Polynomial poly = random_polynomial(fs, p.nvars, p.degree, rng);
  EnsembleRow r;
  r.cells.push_back(poly.render());
  r.cells.push_back(fixed(poly_bias(poly, 1).value.magnitude()));
  double prev = -1;
  bool monotone = true;
  for (unsigned k = 1; k <= p.degree; ++k) {
    const double v = gowers_norm(poly, k, 1).value;
    r.cells.push_back(fixed(v));
    if (prev > v + kNormTolerance) monotone = false;
    prev = v;
  }
  r.cells.push_back(monotone ? "yes" : "no");
  if (!monotone) r.violation = "Gowers norms are not monotone";
  return r;
}

inline EnsembleRow degenerate_row(const FieldSpec& fs, const EnsembleParams& p, Rng rng) {
  const std::size_t d = p.dims.size();
  std::map<ModeMask, Subspace> h;
  for (ModeMask m = 1; m < (ModeMask{1} << (d - 1)); ++m) {
    const std::size_t ambient = dims_product(sub_dims(p.dims, m));
    h.emplace(m, Subspace::random(fs, ambient, std::min(p.k, ambient), rng));
  }
  const auto [t, w] = degenerate_sample(fs, p.dims, h, rng);
  const auto cert = degenerate_decompose(w);
  const std::size_t bound = (std::size_t{1} << (d - 1)) * p.k;
  bool rank_one = true;
  for (const auto& s : cert.summands) rank_one = rank_one && prank_one_check(s.expand()).has_value();
  const bool ok = cert.reconstitutes(t);
  EnsembleRow r;
  r.cells = {std::to_string(w.k()), std::to_string(cert.summands.size()), std::to_string(bound), ok ? "yes" : "no",
             rank_one ? "yes" : "no"};
  if (!ok || !rank_one || cert.summands.size() > bound) r.violation = "degeneracy decomposition failed";
  return r;
}

inline EnsembleRow product_multiset_row(const FieldSpec& fs, const EnsembleParams& p, Rng rng) {
  ProductMultiset all = ProductMultiset::full(fs, p.dims);
  ProductMultiset bp{fs, p.dims, {}};
  const std::uint64_t num = static_cast<std::uint64_t>(numerator(p.density));
  const std::uint64_t den = static_cast<std::uint64_t>(denominator(p.density));
  for (auto& t : all.tuples)
    if (rng.coin(num, den)) bp.tuples.push_back(t);
  const cpp_rational density(bp.size(), all.size());
  EnsembleRow r;
  r.cells = {std::to_string(bp.size()), ratio_str(density)};
  if (density < FindSystemOptions{}.min_delta || p.dims.size() > 3) {
    r.cells.insert(r.cells.end(), {"-", "-", "-", "-"});
    return r;
  }
  const auto fsys = find_system(bp, density);
  const auto check = lsystem_validate(fsys.system);
  r.cells.push_back(std::to_string(check.max_codim));
  r.cells.push_back(std::to_string(fsys.f1));
  r.cells.push_back(std::to_string(fsys.certificates.size()));
  r.cells.push_back(std::to_string(fsys.max_terms));
  if (!check.valid) r.violation = "find_system output failed validation";
  return r;
}

}  // namespace detail

inline EnsembleTable ensemble(const std::string& kind, std::size_t count, std::uint64_t seed,
                              const EnsembleParams& p, const Exec& exec = {}) {
  const FieldSpec fs = FieldSpec::of_order(p.q);
  EnsembleTable table;
  table.kind = kind;
  table.seed = seed;
  std::function<detail::EnsembleRow(Rng)> make;
  if (kind == "random-tensor") {
    detail::require(p.dims.size() >= 2, "random-tensor needs order >= 2");
    table.columns = {"bias", "arank", "prank_lower", "prank_upper", "status"};
    make = [&](Rng r) { return detail::random_tensor_row(fs, p, r); };
  } else if (kind == "random-poly") {
    detail::require(p.degree >= 1, "random-poly needs degree >= 1");
    table.columns = {"polynomial", "bias"};
    for (unsigned k = 1; k <= p.degree; ++k) table.columns.push_back("U" + std::to_string(k));
    table.columns.push_back("monotone");
    make = [&](Rng r) { return detail::random_poly_row(fs, p, r); };
  } else if (kind == "degenerate") {
    detail::require(p.dims.size() >= 2, "degenerate needs order >= 2");
    detail::require(p.k >= 1, "degenerate needs k >= 1");
    table.columns = {"k", "summands", "bound", "reconstitutes", "rank_one"};
    make = [&](Rng r) { return detail::degenerate_row(fs, p, r); };
  } else if (kind == "product-multiset") {
    detail::require(p.density > 0 && p.density <= 1, "density must lie in (0, 1]");
    table.columns = {"size", "density", "max_codim", "f1", "elements", "max_terms"};
    make = [&](Rng r) { return detail::product_multiset_row(fs, p, r); };
  } else {
    detail::fail_input("unknown ensemble kind '" + kind + "'");
  }
  table.columns.insert(table.columns.begin(), "index");
  const Rng base = Rng(seed).split(kind);
  const auto parts = parallel::map_chunks<std::vector<detail::EnsembleRow>>(count, exec, [&](parallel::Range r) {
    std::vector<detail::EnsembleRow> rows;
    for (std::uint64_t i = r.begin; i < r.end; ++i) rows.push_back(make(base.split(i)));
    return rows;
  });
  std::size_t index = 0;
  for (const auto& part : parts) {
    for (const auto& row : part) {
      std::vector<std::string> cells{std::to_string(index)};
      cells.insert(cells.end(), row.cells.begin(), row.cells.end());
      table.rows.push_back(std::move(cells));
      if (!row.violation.empty()) table.violations.push_back("row " + std::to_string(index) + ": " + row.violation);
      ++index;
    }
  }
  return table;
}

}  // namespace trl
