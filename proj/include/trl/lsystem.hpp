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

// l-systems: prefix trees of subspaces U, U_{u_1}, U_{u_1,u_2}, ... with one
// level per mode, each of codimension at most l. Trees are materialized, so
// the number of prefixes is guarded.

#include <algorithm>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "trl/additive.hpp"
#include "trl/error.hpp"
#include "trl/guard.hpp"
#include "trl/subspace.hpp"
#include "trl/tensor.hpp"

namespace trl {

using Tuple = std::vector<std::uint64_t>;

struct LSystemNode {
  Subspace space;
  std::vector<LSystemNode> children;  // one per element of space in code order; empty at the last mode

  const LSystemNode& child(std::uint64_t code) const {
    const auto elems = space.element_codes();
    const auto it = std::lower_bound(elems.begin(), elems.end(), code);
    detail::require(it != elems.end() && *it == code, "prefix element is not in the node's space");
    return children.at(static_cast<std::size_t>(it - elems.begin()));
  }
};

struct LSystem {
  FieldSpec fs;
  Dims dims;
  std::size_t bound = 0;
  LSystemNode root;

  std::size_t order() const { return dims.size(); }
};

namespace detail {

inline void check_system_dims(const FieldSpec& fs, const Dims& dims) {
  detail::require(!dims.empty(), "an l-system needs at least one mode");
  for (auto n : dims) detail::require(n >= 1, "mode sizes must be >= 1");
  guard::check_pow(fs.q(), dims_sum(dims) - dims.back(), guard::kSystemPrefixBits, "l-system prefixes");
}

template <class Make>
LSystemNode build_node(const FieldSpec& fs, const Dims& dims, std::size_t level, Make& make) {
  LSystemNode node{make(level), {}};
  if (level + 1 < dims.size()) {
    const std::uint64_t count = node.space.size();
    node.children.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) node.children.push_back(build_node(fs, dims, level + 1, make));
  }
  return node;
}

}  // namespace detail

/// The 0-system of full spaces.
inline LSystem lsystem_full(const FieldSpec& fs, const Dims& dims) {
  detail::check_system_dims(fs, dims);
  auto make = [&](std::size_t level) { return Subspace::full(fs, dims[level]); };
  return LSystem{fs, dims, 0, detail::build_node(fs, dims, 0, make)};
}

/// Every node a uniformly random subspace with codimension drawn from
/// [0, min(l, n_k)].
inline LSystem lsystem_random(const FieldSpec& fs, const Dims& dims, std::size_t l, Rng& rng) {
  detail::check_system_dims(fs, dims);
  auto make = [&](std::size_t level) {
    const std::size_t n = dims[level];
    const std::size_t codim = rng.below(std::min(l, n) + 1);
    return Subspace::random(fs, n, n - codim, rng);
  };
  return LSystem{fs, dims, l, detail::build_node(fs, dims, 0, make)};
}

struct LSystemCheck {
  bool valid = true;
  std::size_t max_codim = 0;
  std::uint64_t nodes = 0;
  std::string problem;  // first violation, empty when valid
};

inline LSystemCheck lsystem_validate(const LSystem& s) {
  detail::check_system_dims(s.fs, s.dims);
  LSystemCheck out;
  const auto fail = [&](const std::string& why) {
    if (out.valid) out.problem = why;
    out.valid = false;
  };
  const auto visit = [&](auto&& self, const LSystemNode& node, std::size_t level) -> void {
    ++out.nodes;
    if (!(node.space.field() == s.fs) || node.space.ambient() != s.dims[level]) {
      fail("node at mode " + std::to_string(level) + " has the wrong ambient space");
      return;
    }
    out.max_codim = std::max(out.max_codim, node.space.codim());
    if (node.space.codim() > s.bound) {
      fail("node at mode " + std::to_string(level) + " has codimension " + std::to_string(node.space.codim()) +
           " > " + std::to_string(s.bound));
    }
    const bool last = level + 1 == s.dims.size();
    const std::uint64_t want = last ? 0 : node.space.size();
    if (node.children.size() != want) {
      fail("node at mode " + std::to_string(level) + " has " + std::to_string(node.children.size()) +
           " children, expected " + std::to_string(want));
      return;
    }
    for (const auto& c : node.children) self(self, c, level + 1);
  };
  visit(visit, s.root, 0);
  return out;
}

/// Every element u_1 (x) ... (x) u_d as a tuple of codes, in lexicographic order.
inline std::vector<Tuple> lsystem_elements(const LSystem& s) {
  std::vector<Tuple> out;
  Tuple prefix;
  const auto visit = [&](auto&& self, const LSystemNode& node, std::size_t level) -> void {
    const auto elems = node.space.element_codes();
    for (std::size_t i = 0; i < elems.size(); ++i) {
      prefix.push_back(elems[i]);
      if (level + 1 == s.dims.size()) {
        out.push_back(prefix);
      } else {
        self(self, node.children.at(i), level + 1);
      }
      prefix.pop_back();
    }
  };
  visit(visit, s.root, 0);
  return out;
}

inline bool lsystem_contains(const LSystem& s, const Tuple& t) {
  if (t.size() != s.dims.size()) return false;
  const LSystemNode* node = &s.root;
  for (std::size_t level = 0; level < t.size(); ++level) {
    const auto elems = node->space.element_codes();
    const auto it = std::lower_bound(elems.begin(), elems.end(), t[level]);
    if (it == elems.end() || *it != t[level]) return false;
    if (level + 1 < t.size()) node = &node->children.at(static_cast<std::size_t>(it - elems.begin()));
  }
  return true;
}

namespace detail {

inline LSystemNode intersect_nodes(const LSystemNode& a, const LSystemNode& b, std::size_t levels) {
  LSystemNode out{a.space.intersect(b.space), {}};
  if (levels > 1) {
    for (auto code : out.space.element_codes())
      out.children.push_back(intersect_nodes(a.child(code), b.child(code), levels - 1));
  }
  return out;
}

}  // namespace detail

/// Node-wise intersection V_{v..} = U_{v..} cap U'_{v..}; bound l + l'.
inline LSystem lsystem_intersect(const LSystem& a, const LSystem& b) {
  detail::require(a.fs == b.fs && a.dims == b.dims, "l-systems over different fields or dims");
  detail::check_system_dims(a.fs, a.dims);
  return LSystem{a.fs, a.dims, a.bound + b.bound, detail::intersect_nodes(a.root, b.root, a.dims.size())};
}

/// Restricts s to the tuples with (x)_{i in I} u_i in L_I for every I. The
/// node at mode j intersects U with the kernels of c(u_i : i in I, i < j, .)
/// for c in L_I^perp and max(I) = j. Bound k + 2^d l, where l bounds every
/// codim L_I.
inline LSystem lsystem_restrict(const LSystem& s, const std::map<ModeMask, Subspace>& ls) {
  const std::size_t d = s.dims.size();
  detail::check_system_dims(s.fs, s.dims);
  std::size_t l = 0;
  std::vector<std::vector<std::pair<ModeMask, std::vector<std::vector<FieldElem>>>>> by_last(d);
  for (const auto& [mask, space] : ls) {
    detail::require(mask != 0 && (mask & ~full_mask(d)) == 0, "L_I needs a nonempty I within the modes");
    const Dims sub = sub_dims(s.dims, mask);
    detail::require(space.field() == s.fs && space.ambient() == dims_product(sub),
                    "L_I has the wrong ambient dimension");
    l = std::max(l, space.codim());
    const auto modes = mask_modes(mask);
    by_last[modes.back()].push_back({mask, space.orthogonal_complement().basis_vectors()});
  }
  const int q = s.fs.q();
  std::vector<std::vector<FieldElem>> prefix;
  const auto visit = [&](auto&& self, const LSystemNode& node, std::size_t level) -> LSystemNode {
    std::vector<std::vector<FieldElem>> functionals;
    for (const auto& [mask, perp] : by_last[level]) {
      const auto modes = mask_modes(mask);
      const Dims sub = sub_dims(s.dims, mask);
      for (const auto& c : perp) {
        std::vector<FieldElem> f(s.dims[level], 0);
        std::vector<std::size_t> idx(modes.size(), 0);
        for (std::uint64_t flat = 0; flat < c.size(); ++flat) {
          std::uint64_t rest = flat;
          for (std::size_t m = modes.size(); m-- > 0;) {
            idx[m] = rest % sub[m];
            rest /= sub[m];
          }
          FieldElem w = c[flat];
          for (std::size_t m = 0; m + 1 < modes.size() && w != 0; ++m) w = s.fs.mul(w, prefix[modes[m]][idx[m]]);
          f[idx.back()] = s.fs.add(f[idx.back()], w);
        }
        functionals.push_back(std::move(f));
      }
    }
    Subspace space = node.space;
    if (!functionals.empty()) {
      space = space.intersect(Subspace::span(s.fs, s.dims[level], functionals).orthogonal_complement());
    }
    LSystemNode out{space, {}};
    if (level + 1 < d) {
      const VecCodec codec(q, s.dims[level]);
      for (auto code : space.element_codes()) {
        prefix.push_back(codec.decode(code));
        out.children.push_back(self(self, node.child(code), level + 1));
        prefix.pop_back();
      }
    }
    return out;
  };
  LSystem out{s.fs, s.dims, s.bound + (std::size_t{1} << d) * l, visit(visit, s.root, 0)};
  return out;
}

/// Whether (x)_{i in I} u_i lies in L_I for the tuple.
inline bool tuple_in_restriction(const FieldSpec& fs, const Dims& dims, const Tuple& t, ModeMask mask,
                                 const Subspace& li) {
  std::vector<std::vector<FieldElem>> factors;
  for (auto m : mask_modes(mask)) factors.push_back(VecCodec(fs.q(), dims[m]).decode(t[m]));
  return li.contains(Tensor::outer(fs, factors).entries());
}

/// Canonical depth-first listing: one line per node with its prefix and
/// echelon basis.
inline std::string lsystem_dump(const LSystem& s) {
  std::ostringstream os;
  os << "lsystem " << s.fs.name() << " d " << s.dims.size() << " dims";
  for (auto n : s.dims) os << ' ' << n;
  os << " bound " << s.bound << '\n';
  Tuple prefix;
  const auto visit = [&](auto&& self, const LSystemNode& node, std::size_t level) -> void {
    os << "node (";
    for (std::size_t i = 0; i < prefix.size(); ++i) os << (i ? "," : "") << prefix[i];
    os << ") dim " << node.space.dim() << " basis";
    for (const auto& v : node.space.basis_vectors()) {
      os << " [";
      for (std::size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << int(v[i]);
      os << ']';
    }
    os << '\n';
    if (level + 1 == s.dims.size()) return;
    const auto elems = node.space.element_codes();
    for (std::size_t i = 0; i < elems.size(); ++i) {
      prefix.push_back(elems[i]);
      self(self, node.children.at(i), level + 1);
      prefix.pop_back();
    }
  };
  visit(visit, s.root, 0);
  return os.str();
}

// ---------------------------------------------------------------------------
// find_system.

struct FindSystemOptions {
  cpp_rational min_delta = cpp_rational(1, 8);
};

struct FindSystemResult {
  LSystem system;
  std::map<Tuple, SumsetCertificate> certificates;  // every element of the system
  std::uint64_t f1 = 0;  // ceil(16^d / delta^2)
  std::uint64_t f2 = 0;  // 4^d
  std::size_t max_terms = 0;
  std::vector<cpp_rational> level_deltas;  // density threshold used at each mode
};

namespace detail {

struct SignedTuples {
  std::vector<Tuple> plus;
  std::vector<Tuple> minus;
};

struct SubSystem {
  LSystemNode root;
  std::map<Tuple, SignedTuples> certs;
};

/// Drops zero arrays and cancelling pairs; a member tuple becomes a singleton.
inline void simplify(SignedTuples& c, const Tuple& element, const std::vector<Tuple>& members) {
  if (std::binary_search(members.begin(), members.end(), element)) {
    c.plus = {element};
    c.minus.clear();
    return;
  }
  const auto nonzero = [](const Tuple& t) { return std::none_of(t.begin(), t.end(), [](auto x) { return x == 0; }); };
  std::vector<Tuple> plus, minus;
  std::copy_if(c.plus.begin(), c.plus.end(), std::back_inserter(plus), nonzero);
  std::copy_if(c.minus.begin(), c.minus.end(), std::back_inserter(minus), nonzero);
  std::sort(plus.begin(), plus.end());
  std::sort(minus.begin(), minus.end());
  std::vector<Tuple> p2, m2;
  std::size_t i = 0, j = 0;
  while (i < plus.size() || j < minus.size()) {
    if (j == minus.size() || (i < plus.size() && plus[i] < minus[j])) {
      p2.push_back(plus[i++]);
    } else if (i == plus.size() || minus[j] < plus[i]) {
      m2.push_back(minus[j++]);
    } else {
      ++i;
      ++j;
    }
  }
  c.plus = std::move(p2);
  c.minus = std::move(m2);
}

/// Enumerates the elements of a (sub)system rooted at node, as suffix tuples.
inline void node_elements(const LSystemNode& node, std::size_t levels, Tuple& prefix, std::vector<Tuple>& out) {
  const auto elems = node.space.element_codes();
  for (std::size_t i = 0; i < elems.size(); ++i) {
    prefix.push_back(elems[i]);
    if (levels == 1) {
      out.push_back(prefix);
    } else {
      node_elements(node.children.at(i), levels - 1, prefix, out);
    }
    prefix.pop_back();
  }
}

/// members: sorted distinct suffix tuples over dims[level..].
inline SubSystem find_subsystem(const FieldSpec& fs, const Dims& dims, std::size_t level,
                                const std::vector<Tuple>& members, const cpp_rational& delta,
                                std::vector<cpp_rational>& deltas) {
  if (deltas.size() <= level) deltas.push_back(delta);
  const std::size_t n = dims[level];
  const std::size_t levels = dims.size() - level;
  SubSystem out;
  if (levels == 1) {
    std::vector<std::uint64_t> codes;
    for (const auto& t : members) codes.push_back(t[0]);
    const auto a = VectorSet::from_codes(fs, n, codes);
    auto bog = bogolyubov(a, delta);
    out.root = LSystemNode{bog.u, {}};
    for (const auto& w : bog.witnesses) {
      SignedTuples c{{{w.a[0]}, {w.a[1]}}, {{w.a[2]}, {w.a[3]}}};
      simplify(c, Tuple{w.u}, members);
      out.certs.emplace(Tuple{w.u}, std::move(c));
    }
    return out;
  }
  // Fibers B'_u over the first remaining mode.
  std::map<std::uint64_t, std::vector<Tuple>> fibers;
  for (const auto& t : members) fibers[t[0]].push_back(Tuple(t.begin() + 1, t.end()));
  cpp_int fiber_size = 1;
  for (std::size_t m = level + 1; m < dims.size(); ++m) fiber_size *= guard::ipow(fs.q(), dims[m]);
  const cpp_rational half = delta / 2;
  std::vector<std::uint64_t> t_codes;
  std::map<std::uint64_t, SubSystem> sub;
  for (auto& [u, fiber] : fibers) {
    if (cpp_rational(fiber.size()) < half * fiber_size) continue;
    t_codes.push_back(u);
  }
  for (auto u : t_codes) sub.emplace(u, find_subsystem(fs, dims, level + 1, fibers.at(u), half, deltas));
  const auto t_set = VectorSet::from_codes(fs, n, t_codes);
  auto bog = bogolyubov(t_set, half);
  out.root.space = bog.u;
  Tuple suffix;
  for (const auto& w : bog.witnesses) {
    const SubSystem* parts[4] = {&sub.at(w.a[0]), &sub.at(w.a[1]), &sub.at(w.a[2]), &sub.at(w.a[3])};
    LSystemNode child = intersect_nodes(parts[0]->root, parts[1]->root, levels - 1);
    child = intersect_nodes(child, parts[2]->root, levels - 1);
    child = intersect_nodes(child, parts[3]->root, levels - 1);
    std::vector<Tuple> elems;
    suffix.clear();
    node_elements(child, levels - 1, suffix, elems);
    for (const auto& s : elems) {
      SignedTuples c;
      for (int i = 0; i < 4; ++i) {
        const SignedTuples& ci = parts[i]->certs.at(s);
        auto& pos = i < 2 ? c.plus : c.minus;
        auto& neg = i < 2 ? c.minus : c.plus;
        for (const auto& x : ci.plus) {
          Tuple t{w.a[i]};
          t.insert(t.end(), x.begin(), x.end());
          pos.push_back(std::move(t));
        }
        for (const auto& x : ci.minus) {
          Tuple t{w.a[i]};
          t.insert(t.end(), x.begin(), x.end());
          neg.push_back(std::move(t));
        }
      }
      Tuple element{w.u};
      element.insert(element.end(), s.begin(), s.end());
      simplify(c, element, members);
      out.certs.emplace(std::move(element), std::move(c));
    }
    out.root.children.push_back(std::move(child));
  }
  return out;
}

}  // namespace detail

/// An f1-system whose elements carry certificates in f2 B' - f2 B', with
/// f1 = ceil(16^d / delta^2) and f2 = 4^d. bp must hold distinct tuples with
/// |bp| >= delta |B|.
inline FindSystemResult find_system(const ProductMultiset& bp, const cpp_rational& delta,
                                    const FindSystemOptions& opt = {}) {
  bp.validate();
  const std::size_t d = bp.dims.size();
  detail::require(d >= 1 && d <= 3, "find_system supports 1 <= d <= 3");
  detail::require(delta >= opt.min_delta && delta <= 1, "delta is outside [min_delta, 1]");
  detail::check_system_dims(bp.fs, bp.dims);
  guard::check_pow(bp.fs.q(), dims_sum(bp.dims), guard::kStorageBits, "find_system tuples");
  std::vector<Tuple> members = bp.tuples;
  std::sort(members.begin(), members.end());
  detail::require(std::adjacent_find(members.begin(), members.end()) == members.end(),
                  "find_system needs distinct tuples");
  const cpp_int all = guard::ipow(bp.fs.q(), dims_sum(bp.dims));
  if (cpp_rational(members.size()) < delta * all) {
    throw InvalidInput("multiset density " + cpp_rational(members.size(), all).str() + " is below delta " +
                       delta.str());
  }
  FindSystemResult out{LSystem{bp.fs, bp.dims, 0, LSystemNode{Subspace::zero(bp.fs, bp.dims[0]), {}}}, {}, 0, 0, 0, {}};
  auto sub = detail::find_subsystem(bp.fs, bp.dims, 0, members, delta, out.level_deltas);
  cpp_int f1 = 1;
  for (std::size_t i = 0; i < d; ++i) f1 *= 16;
  const cpp_rational ratio = cpp_rational(f1) / (delta * delta);
  cpp_int f1c = numerator(ratio) / denominator(ratio);
  if (f1c * denominator(ratio) != numerator(ratio)) ++f1c;
  out.f1 = static_cast<std::uint64_t>(f1c);
  out.f2 = std::uint64_t{1} << (2 * d);
  out.system.root = std::move(sub.root);
  out.system.bound = static_cast<std::size_t>(out.f1);

  std::map<Tuple, std::size_t> index;
  for (std::size_t i = 0; i < bp.tuples.size(); ++i) index.emplace(bp.tuples[i], i);
  for (auto& [element, c] : sub.certs) {
    SumsetCertificate cert;
    for (const auto& t : c.plus) cert.plus.push_back(index.at(t));
    for (const auto& t : c.minus) cert.minus.push_back(index.at(t));
    out.max_terms = std::max({out.max_terms, cert.plus.size(), cert.minus.size()});
    out.certificates.emplace(element, std::move(cert));
  }

  const auto check = lsystem_validate(out.system);
  if (!check.valid) throw PropertyViolation("find_system output is not an f1-system: " + check.problem);
  if (out.max_terms > out.f2) throw PropertyViolation("find_system certificate exceeds 4^d terms");
  for (const auto& element : lsystem_elements(out.system)) {
    auto it = out.certificates.find(element);
    if (it == out.certificates.end()) throw PropertyViolation("find_system element without a certificate");
    std::vector<std::vector<FieldElem>> factors;
    for (std::size_t m = 0; m < d; ++m) factors.push_back(VecCodec(bp.fs.q(), bp.dims[m]).decode(element[m]));
    if (!verify_certificate(bp, it->second, Tensor::outer(bp.fs, factors))) {
      throw PropertyViolation("find_system certificate failed to verify");
    }
  }
  return out;
}

}  // namespace trl
