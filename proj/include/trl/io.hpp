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

// File formats. JSON documents use nlohmann::json; the tensor and set files
// also have whitespace-separated text forms.

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "trl/additive.hpp"
#include "trl/error.hpp"
#include "trl/field.hpp"
#include "trl/lsystem.hpp"
#include "trl/polynomial.hpp"
#include "trl/rank.hpp"
#include "trl/tensor.hpp"

namespace trl::io {

using Json = nlohmann::ordered_json;

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) detail::fail_input("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Json parse_json(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    detail::fail_input(what + ": " + e.what());
  }
}

/// Wraps nlohmann type errors as InvalidInput.
template <class Fn>
auto guarded(const std::string& what, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Json::exception& e) {
    detail::fail_input(what + ": " + e.what());
  }
}

/// "3", "-2/5" or a terminating decimal such as "0.25".
inline cpp_rational parse_rational(const std::string& s) {
  const auto bad = [&] { detail::fail_input("not a rational number: '" + s + "'"); };
  if (s.empty()) bad();
  const auto parse_int = [&](const std::string& t) {
    if (t.empty() || t.find_first_not_of("-0123456789") != std::string::npos || t.find('-', 1) != std::string::npos ||
        t == "-")
      bad();
    return cpp_int(t);
  };
  if (auto slash = s.find('/'); slash != std::string::npos) {
    const cpp_int den = parse_int(s.substr(slash + 1));
    if (den == 0) bad();
    return cpp_rational(parse_int(s.substr(0, slash)), den);
  }
  if (auto dot = s.find('.'); dot != std::string::npos) {
    const std::string frac = s.substr(dot + 1);
    std::string whole = s.substr(0, dot);
    const bool negative = !whole.empty() && whole[0] == '-';
    if (negative) whole.erase(0, 1);
    if (whole.empty()) whole = "0";
    if (frac.find_first_not_of("0123456789") != std::string::npos) bad();
    cpp_int scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    cpp_rational r(parse_int(whole) * scale + (frac.empty() ? cpp_int(0) : cpp_int(frac)), scale);
    return negative ? cpp_rational(-r) : r;
  }
  return cpp_rational(parse_int(s));
}

inline std::string rational_str(const cpp_rational& r) {
  return denominator(r) == 1 ? numerator(r).str() : numerator(r).str() + "/" + denominator(r).str();
}

/// Accepts a JSON number (integer or decimal literal) or a string.
inline cpp_rational rational_from_json(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return cpp_rational(j.get<std::int64_t>());
  if (j.is_number()) return parse_rational(j.dump());
  detail::fail_input("expected a rational number");
}

// ---------------------------------------------------------------------------
// Field descriptor.

inline Json field_to_json(const FieldSpec& fs) {
  Json j;
  j["p"] = fs.p();
  j["deg"] = fs.k();
  if (fs.is_prime_field()) {
    j["modulus"] = nullptr;
  } else {
    j["modulus"] = fs.modulus();
  }
  return j;
}

inline FieldSpec field_from_json(const Json& j) {
  return guarded("field descriptor", [&] {
    const int p = j.at("p").get<int>();
    const int k = j.contains("deg") ? j.at("deg").get<int>() : 1;
    std::optional<std::vector<int>> modulus;
    if (j.contains("modulus") && !j.at("modulus").is_null()) modulus = j.at("modulus").get<std::vector<int>>();
    return FieldSpec::make(p, k, modulus);
  });
}

// ---------------------------------------------------------------------------
// Tensors.

inline Json tensor_to_json(const Tensor& t) {
  Json j;
  j["field"] = field_to_json(t.field());
  j["dims"] = t.dims();
  std::vector<int> e(t.entries().begin(), t.entries().end());
  j["entries"] = e;
  return j;
}

inline std::vector<FieldElem> codes_from_json(const Json& j, const FieldSpec& fs) {
  std::vector<FieldElem> out;
  for (const auto& v : j) {
    const auto c = v.get<std::int64_t>();
    fs.check(static_cast<int>(std::clamp<std::int64_t>(c, -1, 1 << 20)));
    out.push_back(static_cast<FieldElem>(c));
  }
  return out;
}

inline Tensor tensor_from_json(const Json& j) {
  return guarded("tensor", [&] {
    const FieldSpec fs = field_from_json(j.at("field"));
    const auto dims = j.at("dims").get<Dims>();
    return Tensor(fs, dims, codes_from_json(j.at("entries"), fs));
  });
}

/// Text form: "field p k [modulus...]", "dims n1 .. nd", "entries c ...".
/// '#' starts a comment running to the end of the line.
inline Tensor tensor_from_text(const std::string& text) {
  std::string stripped;
  std::istringstream lines(text);
  for (std::string line; std::getline(lines, line);) stripped += line.substr(0, line.find('#')) + '\n';
  std::istringstream in(stripped);
  std::string tok;
  std::vector<std::int64_t> field_args, dims_args, entry_args;
  std::vector<std::int64_t>* target = nullptr;
  while (in >> tok) {
    if (tok == "field") {
      target = &field_args;
    } else if (tok == "dims") {
      target = &dims_args;
    } else if (tok == "entries") {
      target = &entry_args;
    } else {
      if (target == nullptr) detail::fail_input("tensor text: value before any header");
      try {
        std::size_t used = 0;
        const long long v = std::stoll(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        target->push_back(v);
      } catch (const std::exception&) {
        detail::fail_input("tensor text: bad token '" + tok + "'");
      }
    }
  }
  detail::require(field_args.size() >= 2, "tensor text: field header needs p and k");
  std::optional<std::vector<int>> modulus;
  if (field_args.size() > 2) modulus = std::vector<int>(field_args.begin() + 2, field_args.end());
  const FieldSpec fs = FieldSpec::make(static_cast<int>(field_args[0]), static_cast<int>(field_args[1]), modulus);
  Dims dims;
  for (auto v : dims_args) {
    detail::require(v >= 1, "tensor text: dims must be positive");
    dims.push_back(static_cast<std::size_t>(v));
  }
  std::vector<FieldElem> entries;
  for (auto v : entry_args) {
    detail::require(v >= 0 && v < fs.q(), "tensor text: entry out of range");
    entries.push_back(static_cast<FieldElem>(v));
  }
  return Tensor(fs, dims, std::move(entries));
}

inline std::string tensor_to_text(const Tensor& t) {
  std::ostringstream os;
  os << "field " << t.field().p() << ' ' << t.field().k();
  if (!t.field().is_prime_field())
    for (int c : t.field().modulus()) os << ' ' << c;
  os << "\ndims";
  for (auto n : t.dims()) os << ' ' << n;
  os << "\nentries";
  for (auto e : t.entries()) os << ' ' << int(e);
  os << '\n';
  return os.str();
}

inline bool looks_like_json(const std::string& text) {
  const auto pos = text.find_first_not_of(" \t\r\n");
  return pos != std::string::npos && (text[pos] == '{' || text[pos] == '[');
}

inline Tensor parse_tensor(const std::string& text) {
  return looks_like_json(text) ? tensor_from_json(parse_json(text, "tensor")) : tensor_from_text(text);
}

// ---------------------------------------------------------------------------
// Polynomials.

inline Json polynomial_to_json(const Polynomial& p) {
  Json j;
  j["field"] = field_to_json(p.field());
  j["nvars"] = p.nvars();
  Json ms = Json::array();
  for (const auto& [e, c] : p.terms()) ms.push_back(Json{{"exps", e}, {"coeff", int(c)}});
  j["monomials"] = ms;
  return j;
}

inline Polynomial polynomial_from_json(const Json& j) {
  return guarded("polynomial", [&] {
    const FieldSpec fs = field_from_json(j.at("field"));
    const auto n = j.at("nvars").get<std::int64_t>();
    detail::require(n >= 1, "polynomial nvars must be >= 1");
    Polynomial p(fs, static_cast<std::size_t>(n));
    for (const auto& m : j.at("monomials")) {
      Exponents e;
      for (const auto& x : m.at("exps")) {
        const auto v = x.get<std::int64_t>();
        detail::require(v >= 0 && v <= 1 << 16, "exponent out of range");
        e.push_back(static_cast<unsigned>(v));
      }
      const auto c = m.at("coeff").get<std::int64_t>();
      detail::require(c >= 0 && c < fs.q(), "coefficient out of range");
      p.add_term(e, static_cast<FieldElem>(c));
    }
    return p;
  });
}

// ---------------------------------------------------------------------------
// Partition-rank certificates. Split modes are 0-based.

inline Json certificate_to_json(const Tensor& target, const PrankCertificate& c) {
  Json j;
  j["tensor"] = tensor_to_json(target);
  Json ss = Json::array();
  for (const auto& s : c.summands) {
    Json e;
    e["split"] = s.split.modes();
    e["t1"] = tensor_to_json(s.t1);
    e["t2"] = tensor_to_json(s.t2);
    ss.push_back(e);
  }
  j["summands"] = ss;
  return j;
}

inline std::pair<Tensor, PrankCertificate> certificate_from_json(const Json& j) {
  return guarded("certificate", [&] {
    Tensor target = tensor_from_json(j.at("tensor"));
    PrankCertificate c;
    for (const auto& e : j.at("summands")) {
      const auto modes = e.at("split").get<std::vector<std::size_t>>();
      const IndexSplit split = IndexSplit::of(target.order(), modes);
      Tensor t1 = tensor_from_json(e.at("t1"));
      Tensor t2 = tensor_from_json(e.at("t2"));
      detail::require(t1.dims() == sub_dims(target.dims(), split.mask()), "summand t1 has the wrong shape");
      detail::require(t2.dims() == sub_dims(target.dims(), split.complement_mask()), "summand t2 has the wrong shape");
      c.summands.push_back(PrankSummand{split, std::move(t1), std::move(t2)});
    }
    return std::make_pair(std::move(target), std::move(c));
  });
}

// ---------------------------------------------------------------------------
// Subspace families keyed by mode sets: [{"modes": [...], "basis": [[...]]}].

inline Json subspace_family_to_json(const std::map<ModeMask, Subspace>& v) {
  Json a = Json::array();
  for (const auto& [m, s] : v) {
    Json e;
    e["modes"] = mask_modes(m);
    Json b = Json::array();
    for (const auto& row : s.basis_vectors()) b.push_back(std::vector<int>(row.begin(), row.end()));
    e["basis"] = b;
    a.push_back(e);
  }
  return a;
}

inline std::map<ModeMask, Subspace> subspace_family_from_json(const Json& j, const FieldSpec& fs, const Dims& dims) {
  std::map<ModeMask, Subspace> out;
  for (const auto& e : j) {
    const auto modes = e.at("modes").get<std::vector<std::size_t>>();
    for (auto m : modes) detail::require(m < dims.size(), "mode index out of range");
    const ModeMask mask = modes_mask(modes);
    detail::require(mask != 0, "empty mode set");
    detail::require(!out.contains(mask), "duplicate mode set");
    const std::size_t ambient = dims_product(sub_dims(dims, mask));
    std::vector<std::vector<FieldElem>> rows;
    for (const auto& r : e.at("basis")) {
      auto row = codes_from_json(r, fs);
      detail::require(row.size() == ambient, "basis vector has the wrong length");
      rows.push_back(std::move(row));
    }
    out.emplace(mask, Subspace::span(fs, ambient, rows));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Forcing instances.

inline Json forcing_to_json(const ForcingInstance& f) {
  Json j;
  j["field"] = field_to_json(f.fs);
  j["dims"] = f.dims;
  j["alpha"] = rational_str(f.alpha);
  Json q = Json::array();
  for (const auto& [t, m] : f.q)
    q.push_back(Json{{"entries", std::vector<int>(t.entries().begin(), t.entries().end())}, {"mult", m}});
  j["q"] = q;
  j["v"] = subspace_family_to_json(f.v);
  return j;
}

inline ForcingInstance forcing_from_json(const Json& j) {
  return guarded("forcing instance", [&] {
    ForcingInstance f;
    f.fs = field_from_json(j.at("field"));
    f.dims = j.at("dims").get<Dims>();
    f.alpha = j.contains("alpha") ? rational_from_json(j.at("alpha")) : cpp_rational(1);
    for (const auto& e : j.at("q")) {
      const auto m = e.contains("mult") ? e.at("mult").get<std::int64_t>() : 1;
      detail::require(m >= 1, "multiplicity must be >= 1");
      f.q.emplace_back(Tensor(f.fs, f.dims, codes_from_json(e.at("entries"), f.fs)), static_cast<std::uint64_t>(m));
    }
    if (j.contains("v")) f.v = subspace_family_from_json(j.at("v"), f.fs, f.dims);
    return f;
  });
}

// ---------------------------------------------------------------------------
// Set files: a descriptor header line, then one vector per line.

inline VectorSet parse_set(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::optional<FieldSpec> fs;
  std::vector<std::vector<FieldElem>> vs;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    const auto pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos || line[pos] == '#') continue;
    if (!fs) {
      if (line[pos] == '{') {
        fs = field_from_json(parse_json(line, "set header"));
      } else {
        std::istringstream hs(line);
        std::string word;
        hs >> word;
        detail::require(word == "field", "set file must start with a field header");
        std::vector<int> args;
        int v = 0;
        while (hs >> v) args.push_back(v);
        detail::require(args.size() >= 2, "set header needs p and k");
        std::optional<std::vector<int>> modulus;
        if (args.size() > 2) modulus = std::vector<int>(args.begin() + 2, args.end());
        fs = FieldSpec::make(args[0], args[1], modulus);
      }
      continue;
    }
    std::istringstream ls(line);
    std::vector<FieldElem> v;
    std::string tok;
    while (ls >> tok) {
      int c = -1;
      try {
        std::size_t used = 0;
        c = std::stoi(tok, &used);
        if (used != tok.size()) c = -1;
      } catch (const std::exception&) {
      }
      fs->check(c);
      v.push_back(static_cast<FieldElem>(c));
    }
    if (n == 0) n = v.size();
    detail::require(v.size() == n, "set vectors have different lengths");
    vs.push_back(std::move(v));
  }
  detail::require(fs.has_value(), "set file has no field header");
  detail::require(n > 0, "set file has no vectors");
  return VectorSet::from_vectors(*fs, n, vs);
}

inline std::string set_to_text(const VectorSet& a) {
  std::ostringstream os;
  os << field_to_json(a.fs).dump() << '\n';
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto v = a.vector(i);
    for (std::size_t j = 0; j < v.size(); ++j) os << (j ? " " : "") << int(v[j]);
    os << '\n';
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Product multisets: {"field", "dims", "tuples": [[code per mode]...]}.

inline Json multiset_to_json(const ProductMultiset& b) {
  Json j;
  j["field"] = field_to_json(b.fs);
  j["dims"] = b.dims;
  j["tuples"] = b.tuples;
  return j;
}

inline ProductMultiset multiset_from_json(const Json& j) {
  return guarded("product multiset", [&] {
    ProductMultiset b{field_from_json(j.at("field")), j.at("dims").get<Dims>(), {}};
    b.tuples = j.at("tuples").get<std::vector<Tuple>>();
    b.validate();
    return b;
  });
}

// ---------------------------------------------------------------------------
// l-systems: {"field", "dims", "bound", "root": {"basis": [...], "children": [...]}}.

inline Json lsystem_to_json(const LSystem& s) {
  const auto node_json = [&](auto&& self, const LSystemNode& node) -> Json {
    Json j;
    Json b = Json::array();
    for (const auto& row : node.space.basis_vectors()) b.push_back(std::vector<int>(row.begin(), row.end()));
    j["basis"] = b;
    Json c = Json::array();
    for (const auto& ch : node.children) c.push_back(self(self, ch));
    j["children"] = c;
    return j;
  };
  Json j;
  j["field"] = field_to_json(s.fs);
  j["dims"] = s.dims;
  j["bound"] = s.bound;
  j["root"] = node_json(node_json, s.root);
  return j;
}

inline LSystem lsystem_from_json(const Json& j) {
  return guarded("l-system", [&] {
    LSystem s;
    s.fs = field_from_json(j.at("field"));
    s.dims = j.at("dims").get<Dims>();
    s.bound = j.at("bound").get<std::size_t>();
    detail::check_system_dims(s.fs, s.dims);
    const auto node_from = [&](auto&& self, const Json& nj, std::size_t level) -> LSystemNode {
      detail::require(level < s.dims.size(), "l-system nodes nest deeper than the number of modes");
      std::vector<std::vector<FieldElem>> rows;
      for (const auto& r : nj.at("basis")) {
        auto row = codes_from_json(r, s.fs);
        detail::require(row.size() == s.dims[level], "l-system basis vector has the wrong length");
        rows.push_back(std::move(row));
      }
      LSystemNode node{Subspace::span(s.fs, s.dims[level], rows), {}};
      if (nj.contains("children"))
        for (const auto& c : nj.at("children")) node.children.push_back(self(self, c, level + 1));
      return node;
    };
    s.root = node_from(node_from, j.at("root"), 0);
    return s;
  });
}

}  // namespace trl::io
