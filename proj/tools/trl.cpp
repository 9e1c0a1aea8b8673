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


// trl: command-line front end. Every subcommand reads its inputs, runs one
// library operation and emits a report (text or JSON) whose content depends
// only on the inputs, the seed and the flags.

#include <openssl/evp.h>

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "trl/ensemble.hpp"
#include "trl/gowers.hpp"
#include "trl/io.hpp"
#include "trl/selftest.hpp"
#include "trl/tower.hpp"

namespace {

using trl::io::Json;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitInconclusive = 3;
constexpr int kExitViolation = 4;

struct Flags {
  std::vector<std::string> inputs;
  std::string output;
  std::uint64_t seed = 0;
  std::uint64_t budget = 1'000'000;
  std::string alpha;
  unsigned max_degree = 1;
  std::size_t order = 0;
  std::string delta;
  bool exact = false;
  std::string format = "text";
  unsigned workers = 1;
  bool timings = false;
  int character = 1;
  // tower-bound
  std::string theorem;
  std::int64_t d = 0;
  std::string param = "1";
  std::int64_t q = 2;
  // ensemble
  std::string kind = "random-tensor";
  std::size_t count = 100;
  std::string dims = "2,2,2";
  std::size_t nvars = 2;
  unsigned degree = 2;
  std::size_t k = 1;
  std::string density = "1/2";
};

struct Input {
  std::string path;
  std::string text;
  std::string sha256;
};

struct Report {
  Report(std::string c, std::string s) : command(std::move(c)), summary(std::move(s)) {}

  std::string command;
  std::string summary;
  Json results = Json::object();
  std::vector<std::string> lines;  // preformatted text body, replaces the key listing
  int exit_code = kExitOk;
};

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw trl::Error("SHA-256 digest failed");
  std::ostringstream os;
  for (unsigned i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return os.str();
}

Json big(const trl::cpp_int& v) {
  if (v <= std::numeric_limits<std::int64_t>::max()) return static_cast<std::int64_t>(v);
  return v.str();
}

Json histogram_json(const trl::ValueHistogram& h) {
  Json c = Json::array();
  for (const auto& x : h.counts) c.push_back(big(x));
  return Json{{"counts", c}, {"total", big(h.total)}};
}

std::string fixed12(double v) { return trl::detail::fixed(v, 12); }

class Runner {
 public:
  Runner(const Flags& f, std::string command_line) : f_(f), command_line_(std::move(command_line)) {}

  const Input& input(std::size_t i, const std::string& what) {
    if (i >= f_.inputs.size()) throw trl::InvalidInput("missing input file: " + what);
    while (loaded_.size() <= i) {
      const std::string& path = f_.inputs[loaded_.size()];
      Input in{path, trl::io::read_file(path), {}};
      in.sha256 = sha256_hex(in.text);
      loaded_.push_back(std::move(in));
    }
    return loaded_[i];
  }
  std::size_t input_count() const { return f_.inputs.size(); }

  trl::Exec exec() const { return trl::Exec{std::max(1U, f_.workers)}; }
  const Flags& flags() const { return f_; }

  Json header(const std::string& command) const {
    Json j;
    j["command"] = command;
    j["command_line"] = command_line_;
    Json ins = Json::array();
    for (const auto& in : loaded_) ins.push_back(Json{{"path", in.path}, {"sha256", in.sha256}});
    j["inputs"] = ins;
    j["seed"] = f_.seed;
    const unsigned o = trl::guard::override_bits();
    j["guard"] = Json{{"override_bits", o == 0 ? Json(nullptr) : Json(o)}, {"status", "ok"}};
    return j;
  }

  std::string render(const Report& r, const std::string& guard_status, double seconds) const {
    Json h = header(r.command);
    h["guard"]["status"] = guard_status;
    if (f_.format == "json") {
      h["summary"] = r.summary;
      h["results"] = r.results;
      if (f_.timings) h["timings"] = Json{{"seconds", seconds}};
      return h.dump(2) + "\n";
    }
    std::ostringstream os;
    os << "# " << command_line_ << '\n';
    for (const auto& in : loaded_) os << "# input " << in.path << " sha256 " << in.sha256 << '\n';
    os << "# seed " << f_.seed << ", guard " << guard_status << '\n';
    os << r.summary << '\n';
    if (!r.lines.empty()) {
      for (const auto& l : r.lines) os << l << '\n';
    } else if (r.results.is_object()) {
      std::size_t width = 0;
      for (const auto& [k, v] : r.results.items()) width = std::max(width, k.size());
      for (const auto& [k, v] : r.results.items()) {
        os << "  " << std::left << std::setw(static_cast<int>(width)) << k << "  "
           << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
      }
    }
    if (f_.timings) os << "# time " << std::fixed << std::setprecision(3) << seconds << " s\n";
    return os.str();
  }

 private:
  const Flags& f_;
  std::string command_line_;
  std::vector<Input> loaded_;
};

trl::cpp_rational rational_flag(const std::string& s, const std::string& what) {
  try {
    return trl::io::parse_rational(s);
  } catch (const trl::Error&) {
    throw trl::InvalidInput(what + " is not a rational number: " + s);
  }
}

trl::Tensor load_tensor(Runner& run) { return trl::io::parse_tensor(run.input(0, "tensor").text); }

trl::Polynomial load_polynomial(Runner& run, std::size_t i = 0) {
  return trl::io::polynomial_from_json(trl::io::parse_json(run.input(i, "polynomial").text, "polynomial"));
}

trl::FieldElem character(const Runner& run, const trl::FieldSpec& fs) {
  const int c = run.flags().character;
  fs.check(c);
  return static_cast<trl::FieldElem>(c);
}

std::size_t order_or_degree(const Runner& run, const trl::Polynomial& p) {
  return run.flags().order > 0 ? run.flags().order : std::max(1U, p.degree());
}

// ---------------------------------------------------------------------------
// Subcommands.

Report cmd_bias_tensor(Runner& run) {
  const auto t = load_tensor(run);
  const auto b = trl::bias_exact(t, std::nullopt, run.exec());
  Report r{"bias-tensor", "bias " + trl::io::rational_str(b.value())};
  r.results["field"] = t.field().name();
  r.results["dims"] = t.dims();
  r.results["bias"] = trl::io::rational_str(b.value());
  r.results["zero_count"] = big(b.numerator);
  r.results["domain"] = big(b.denominator);
  if (run.flags().exact) {
    const auto h = trl::bias_charsum_crosscheck(t, run.exec());
    const bool ok = trl::charsum_matches_bias(h, b, t.field());
    r.results["charsum_histogram"] = histogram_json(h);
    r.results["charsum_matches"] = ok;
    if (!ok) throw trl::PropertyViolation("character-sum cross-check disagrees with the zero count");
  }
  return r;
}

Report cmd_arank(Runner& run) {
  const auto t = load_tensor(run);
  const auto a = trl::arank(t, run.exec());
  const std::string bias = trl::io::rational_str(a.bias.value());
  Report r{"arank", {}};
  if (a.floor_cert == a.ceil_cert) {
    r.summary = "bias " + bias + ", arank " + std::to_string(a.floor_cert);
  } else {
    r.summary = "bias " + bias + ", arank " + fixed12(a.value) + " (between " + std::to_string(a.floor_cert) +
                " and " + std::to_string(a.ceil_cert) + ")";
  }
  r.results["field"] = t.field().name();
  r.results["dims"] = t.dims();
  r.results["bias"] = bias;
  r.results["arank"] = fixed12(a.value);
  r.results["arank_floor"] = a.floor_cert;
  r.results["arank_ceil"] = a.ceil_cert;
  return r;
}

Report cmd_prank(Runner& run) {
  const auto t = load_tensor(run);
  const std::uint64_t budget = run.flags().exact ? std::numeric_limits<std::uint64_t>::max() : run.flags().budget;
  const auto pb = trl::prank_bounds(t, budget, run.exec());
  Report r{"prank", "prank bounds (" + std::to_string(pb.lower) + ", " + std::to_string(pb.upper) + "), " +
                        trl::to_string(pb.status)};
  r.results["field"] = t.field().name();
  r.results["dims"] = t.dims();
  r.results["lower"] = pb.lower;
  r.results["upper"] = pb.upper;
  r.results["arank_lower"] = pb.arank_lower;
  r.results["status"] = trl::to_string(pb.status);
  r.results["nodes"] = pb.nodes;
  r.results["budget"] = budget;
  r.results["certificate"] = trl::io::certificate_to_json(t, pb.certificate);
  if (pb.status != trl::SearchStatus::exact) r.exit_code = kExitInconclusive;
  return r;
}

Report cmd_bias_poly(Runner& run) {
  const auto p = load_polynomial(run);
  const auto c = character(run, p.field());
  const auto b = trl::poly_bias(p, c);
  Report r{"bias-poly", {}};
  if (b.exact) {
    r.summary = "bias " + trl::io::rational_str(*b.exact);
  } else {
    r.summary = "bias " + fixed12(b.value.re) + (b.value.im < 0 ? " - " : " + ") + fixed12(std::fabs(b.value.im)) + "i";
  }
  r.results["polynomial"] = p.render();
  r.results["character"] = int(c);
  r.results["histogram"] = histogram_json(b.histogram);
  r.results["re"] = fixed12(b.value.re);
  r.results["im"] = fixed12(b.value.im);
  r.results["magnitude"] = fixed12(b.value.magnitude());
  r.results["exact"] = b.exact ? Json(trl::io::rational_str(*b.exact)) : Json(nullptr);
  return r;
}

Report cmd_gowers(Runner& run) {
  const auto p = load_polynomial(run);
  const std::size_t k = run.flags().order > 0 ? run.flags().order : 2;
  const auto c = character(run, p.field());
  const auto g = trl::gowers_norm(p, k, c, run.exec());
  Report r{"gowers", "U^" + std::to_string(k) + " norm " + fixed12(g.value)};
  r.results["polynomial"] = p.render();
  r.results["order"] = k;
  r.results["character"] = int(c);
  r.results["norm"] = fixed12(g.value);
  r.results["power"] = g.power ? Json(trl::io::rational_str(*g.power)) : Json(nullptr);
  r.results["histogram"] = histogram_json(g.histogram);
  return r;
}

Report cmd_derive_tensor(Runner& run) {
  const auto p = load_polynomial(run);
  const std::size_t d = order_or_degree(run, p);
  const auto t = trl::derivative_tensor(p, d);
  Report r{"derive-tensor", "derivative tensor of order " + std::to_string(d)};
  r.results["polynomial"] = p.render();
  r.results["order"] = d;
  r.results["tensor"] = trl::io::tensor_to_json(t);
  return r;
}

Report cmd_taylor(Runner& run) {
  const auto p = load_polynomial(run);
  const std::size_t d = order_or_degree(run, p);
  const auto s = trl::taylor_split(p, d);
  const bool ok = trl::taylor_verify(p, s);
  if (!ok) throw trl::PropertyViolation("Taylor split does not reconstitute the polynomial");
  Report r{"taylor", "P = " + s.top.render() + " + (" + s.w.render() + ")"};
  r.results["polynomial"] = p.render();
  r.results["order"] = d;
  r.results["top"] = s.top.render();
  r.results["w"] = s.w.render();
  r.results["verified"] = ok;
  r.results["tensor"] = trl::io::tensor_to_json(s.t);
  r.results["w_polynomial"] = trl::io::polynomial_to_json(s.w);
  return r;
}

Report cmd_correlate(Runner& run) {
  const auto p = load_polynomial(run);
  const auto c = character(run, p.field());
  const auto res = trl::correlation_search(p, run.flags().max_degree, c, run.exec());
  Report r{"correlate", "best Q = " + res.best.render() + ", correlation " + fixed12(res.value)};
  r.results["polynomial"] = p.render();
  r.results["max_degree"] = run.flags().max_degree;
  r.results["character"] = int(c);
  r.results["best"] = res.best.render();
  r.results["value"] = fixed12(res.value);
  r.results["candidates"] = res.candidates;
  r.results["prime_field"] = res.prime_field;
  if (!res.prime_field) r.results["note"] = "field is not prime; outside the prime-field hypothesis";
  r.results["best_polynomial"] = trl::io::polynomial_to_json(res.best);
  return r;
}

Report cmd_rank_check(Runner& run) {
  const auto p = load_polynomial(run, 0);
  std::vector<trl::Polynomial> qs;
  for (std::size_t i = 1; i < run.input_count(); ++i) qs.push_back(load_polynomial(run, i));
  const auto rc = trl::rank_certificate_check(p, qs);
  Report r{"rank-check", {}};
  r.results["polynomial"] = p.render();
  Json qj = Json::array();
  for (const auto& q : qs) qj.push_back(q.render());
  r.results["qs"] = qj;
  r.results["degrees_ok"] = rc.degrees_ok;
  r.results["certified"] = rc.certificate.has_value();
  if (rc.certificate) {
    r.summary = "P is a function of the " + std::to_string(qs.size()) + " given polynomials";
    Json table = Json::array();
    for (const auto& [key, v] : rc.certificate->table)
      table.push_back(Json{{"q_values", std::vector<int>(key.begin(), key.end())}, {"p_value", int(v)}});
    r.results["table"] = table;
  } else {
    r.summary = "no certificate";
    if (rc.witness) {
      r.results["witness"] =
          Json::array({std::vector<int>(rc.witness->first.begin(), rc.witness->first.end()),
                       std::vector<int>(rc.witness->second.begin(), rc.witness->second.end())});
    }
  }
  if (!rc.degrees_ok) r.summary += "; some Q has degree >= deg P";
  return r;
}

Report cmd_bogolyubov(Runner& run) {
  const auto a = trl::io::parse_set(run.input(0, "set").text);
  const trl::cpp_rational delta = run.flags().delta.empty() ? a.density() : rational_flag(run.flags().delta, "--delta");
  const auto res = trl::bogolyubov(a, delta, run.exec());
  const trl::VecArith arith(a.fs, a.n);
  for (const auto& w : res.witnesses)
    if (!trl::verify_witness(a, w, arith)) throw trl::PropertyViolation("Bogolyubov witness failed verification");
  Report r{"bogolyubov", "subspace of codimension " + std::to_string(res.u.codim()) + " inside 2A-2A (bound " +
                             std::to_string(res.codim_bound) + ")"};
  r.results["field"] = a.fs.name();
  r.results["n"] = a.n;
  r.results["size"] = a.size();
  r.results["density"] = trl::io::rational_str(a.density());
  r.results["delta"] = trl::io::rational_str(res.delta);
  r.results["rho_squared"] = trl::io::rational_str(res.rho_squared);
  r.results["spectrum_size"] = res.spectrum_size;
  r.results["codim"] = res.u.codim();
  r.results["codim_bound"] = res.codim_bound;
  Json basis = Json::array();
  for (const auto& v : res.u.basis_vectors()) basis.push_back(std::vector<int>(v.begin(), v.end()));
  r.results["basis"] = basis;
  r.results["witnesses_verified"] = res.witnesses.size();
  Json ws = Json::array();
  for (const auto& w : res.witnesses) ws.push_back(Json{{"u", w.u}, {"a", w.a}});
  r.results["witnesses"] = ws;
  return r;
}

Json certificates_json(const trl::FindSystemResult& res) {
  Json out = Json::array();
  for (const auto& [t, c] : res.certificates) out.push_back(Json{{"element", t}, {"plus", c.plus}, {"minus", c.minus}});
  return out;
}

Report cmd_find_system(Runner& run) {
  const auto bp = trl::io::multiset_from_json(trl::io::parse_json(run.input(0, "product multiset").text, "multiset"));
  trl::cpp_rational full = 1;
  for (auto n : bp.dims) full *= trl::guard::ipow(bp.fs.q(), n);
  const trl::cpp_rational delta =
      run.flags().delta.empty() ? trl::cpp_rational(bp.size()) / full : rational_flag(run.flags().delta, "--delta");
  const auto res = trl::find_system(bp, delta);
  for (const auto& [t, c] : res.certificates) {
    std::vector<std::vector<trl::FieldElem>> factors;
    for (std::size_t m = 0; m < bp.dims.size(); ++m) factors.push_back(trl::VecCodec(bp.fs.q(), bp.dims[m]).decode(t[m]));
    if (!trl::verify_certificate(bp, c, trl::Tensor::outer(bp.fs, factors)))
      throw trl::PropertyViolation("sumset certificate failed verification");
  }
  const auto check = trl::lsystem_validate(res.system);
  Report r{"find-system", std::to_string(res.system.bound) + "-system with " + std::to_string(res.certificates.size()) +
                              " certified elements"};
  r.results["delta"] = trl::io::rational_str(delta);
  r.results["f1"] = res.f1;
  r.results["f2"] = res.f2;
  r.results["bound"] = res.system.bound;
  r.results["max_codim"] = check.max_codim;
  r.results["max_terms"] = res.max_terms;
  Json ld = Json::array();
  for (const auto& x : res.level_deltas) ld.push_back(trl::io::rational_str(x));
  r.results["level_deltas"] = ld;
  r.results["system"] = trl::io::lsystem_to_json(res.system);
  r.results["certificates"] = certificates_json(res);
  return r;
}

trl::LSystem load_system(Runner& run, std::size_t i) {
  return trl::io::lsystem_from_json(trl::io::parse_json(run.input(i, "l-system").text, "l-system"));
}

Report system_report(const std::string& command, const trl::LSystem& s) {
  const auto check = trl::lsystem_validate(s);
  Report r{command, check.valid ? "valid " + std::to_string(s.bound) + "-system" : "invalid: " + check.problem};
  r.results["valid"] = check.valid;
  r.results["bound"] = s.bound;
  r.results["max_codim"] = check.max_codim;
  r.results["nodes"] = check.nodes;
  r.results["elements"] = trl::lsystem_elements(s).size();
  if (!check.valid) {
    r.results["problem"] = check.problem;
    r.exit_code = kExitInvalid;
  }
  return r;
}

Report cmd_lsystem_validate(Runner& run) { return system_report("lsystem validate", load_system(run, 0)); }

Report cmd_lsystem_intersect(Runner& run) {
  const auto a = load_system(run, 0);
  const auto b = load_system(run, 1);
  const auto c = trl::lsystem_intersect(a, b);
  Report r = system_report("lsystem intersect", c);
  r.results["system"] = trl::io::lsystem_to_json(c);
  return r;
}

Report cmd_lsystem_restrict(Runner& run) {
  const auto s = load_system(run, 0);
  const auto l = trl::io::subspace_family_from_json(
      trl::io::parse_json(run.input(1, "subspace family").text, "subspace family"), s.fs, s.dims);
  const auto c = trl::lsystem_restrict(s, l);
  Report r = system_report("lsystem restrict", c);
  r.results["system"] = trl::io::lsystem_to_json(c);
  return r;
}

Report cmd_forcing_check(Runner& run) {
  auto inst = trl::io::forcing_from_json(trl::io::parse_json(run.input(0, "forcing instance").text, "forcing"));
  if (!run.flags().alpha.empty()) inst.alpha = rational_flag(run.flags().alpha, "--alpha");
  const auto v = trl::forcing_check(inst, run.exec());
  Report r{"forcing-check", std::string(v.forcing ? "forcing" : "not forcing") + " (k = " + std::to_string(inst.k()) +
                                ", alpha = " + trl::io::rational_str(inst.alpha) + ")"};
  r.results["forcing"] = v.forcing;
  r.results["k"] = inst.k();
  r.results["alpha"] = trl::io::rational_str(inst.alpha);
  r.results["q_size"] = inst.q_size();
  r.results["enumerated"] = v.enumerated;
  r.results["collected"] = v.collected;
  r.results["counterexample"] = v.counterexample ? trl::io::tensor_to_json(*v.counterexample) : Json(nullptr);
  return r;
}

Report cmd_tower_bound(Runner& run) {
  const auto& f = run.flags();
  if (f.theorem.empty()) throw trl::InvalidInput("--theorem is required");
  const auto b = trl::tower_bound(f.theorem, f.d, rational_flag(f.param, "--param"), f.q);
  Report r{"tower-bound", b.symbolic};
  r.results["theorem"] = b.id;
  r.results["d"] = f.d;
  r.results["param"] = trl::io::rational_str(rational_flag(f.param, "--param"));
  r.results["q"] = f.q;
  r.results["symbolic"] = b.symbolic;
  r.results["numeric"] = b.numeric ? Json(trl::io::rational_str(*b.numeric)) : Json(nullptr);
  if (!b.numeric) r.results["note"] = "numeric expansion exceeds " + std::to_string(trl::kTowerCapBits) + " bits";
  return r;
}

trl::Dims parse_dims(const std::string& s) {
  trl::Dims out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      const long v = std::stol(tok, &used);
      if (used != tok.size() || v < 1) throw std::invalid_argument(tok);
      out.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      throw trl::InvalidInput("--dims must be a comma-separated list of positive integers");
    }
  }
  if (out.empty()) throw trl::InvalidInput("--dims is empty");
  return out;
}

Report cmd_ensemble(Runner& run) {
  const auto& f = run.flags();
  trl::EnsembleParams p;
  p.q = static_cast<int>(f.q);
  p.dims = parse_dims(f.dims);
  p.nvars = f.nvars;
  p.degree = f.degree;
  p.k = f.k;
  p.density = rational_flag(f.density, "--density");
  p.budget = f.budget;
  const auto t = trl::ensemble(f.kind, f.count, f.seed, p, run.exec());
  Report r{"ensemble", std::to_string(t.rows.size()) + " " + t.kind + " instances, " +
                           std::to_string(t.violations.size()) + " violations"};
  r.results["kind"] = t.kind;
  r.results["columns"] = t.columns;
  r.results["rows"] = t.rows;
  r.results["violations"] = t.violations;
  std::vector<std::size_t> width(t.columns.size());
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    width[c] = t.columns[c].size();
    for (const auto& row : t.rows) width[c] = std::max(width[c], row.at(c).size());
  }
  const auto line = [&](const std::vector<std::string>& cells) {
    std::ostringstream os;
    for (std::size_t c = 0; c < cells.size(); ++c)
      os << (c ? "  " : "") << std::right << std::setw(static_cast<int>(width[c])) << cells[c];
    return os.str();
  };
  r.lines.push_back(line(t.columns));
  for (const auto& row : t.rows) r.lines.push_back(line(row));
  for (const auto& v : t.violations) r.lines.push_back("violation: " + v);
  if (!t.violations.empty()) r.exit_code = kExitViolation;
  return r;
}

Report cmd_selftest(Runner& run) {
  trl::selftest::Options opt{run.exec()};
  const auto results = trl::selftest::run(opt);
  const bool ok = trl::selftest::all_pass(results);
  std::size_t passed = 0;
  Report r{"selftest", {}};
  Json list = Json::array();
  for (const auto& c : results) {
    passed += c.pass;
    Json j{{"id", c.id}, {"name", c.name}, {"pass", c.pass}, {"detail", c.detail}};
    if (run.flags().timings) {
      j["seconds"] = c.seconds;
      j["limit_seconds"] = c.limit;
    }
    list.push_back(j);
    r.lines.push_back(trl::selftest::format(c, run.flags().timings));
  }
  r.summary = std::to_string(passed) + "/" + std::to_string(results.size()) + " acceptance criteria pass";
  r.results["criteria"] = list;
  r.results["all_pass"] = ok;
  if (!ok) r.exit_code = kExitViolation;
  return r;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw trl::InvalidInput("cannot write " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"trl: exact rank, bias and additive-structure computations over finite fields"};
  app.require_subcommand(1);
  Flags f;

  const auto common = [&](CLI::App* s) {
    s->add_option("-o,--output", f.output, "Report destination (default stdout)");
    s->add_option("--format", f.format, "Report format")->check(CLI::IsMember({"text", "json"}));
    s->add_option("--seed", f.seed, "Random seed recorded in the report");
    s->add_option("--workers", f.workers, "Worker threads; results do not depend on it")->check(CLI::Range(1U, 256U));
    s->add_flag("--timings", f.timings, "Include wall-clock timings");
    return s;
  };
  const auto with_input = [&](CLI::App* s, const std::string& what) {
    s->add_option("-i,--input", f.inputs, what)->required()->check(CLI::ExistingFile);
    return common(s);
  };
  const auto with_char = [&](CLI::App* s) { s->add_option("--char", f.character, "Character index c (default 1)"); };

  using Handler = Report (*)(Runner&);
  std::vector<std::pair<CLI::App*, Handler>> handlers;
  const auto sub = [&](const std::string& name, const std::string& help, Handler h) {
    CLI::App* s = app.add_subcommand(name, help);
    handlers.emplace_back(s, h);
    return s;
  };

  auto* s = with_input(sub("bias-tensor", "Exact bias of a tensor", cmd_bias_tensor), "Tensor file");
  s->add_flag("--exact", f.exact, "Also run the character-sum cross-check");
  with_input(sub("arank", "Analytic rank of a tensor", cmd_arank), "Tensor file");
  s = with_input(sub("prank", "Partition rank bounds with a certificate", cmd_prank), "Tensor file");
  s->add_option("--budget", f.budget, "Search node budget");
  s->add_flag("--exact", f.exact, "Search without a node budget");
  with_char(with_input(sub("bias-poly", "Bias of a polynomial phase", cmd_bias_poly), "Polynomial file"));
  s = with_input(sub("gowers", "Gowers U^k norm of a polynomial phase", cmd_gowers), "Polynomial file");
  s->add_option("--order", f.order, "Norm order k (default 2)");
  with_char(s);
  s = with_input(sub("derive-tensor", "Symmetric derivative tensor of a polynomial", cmd_derive_tensor),
                 "Polynomial file");
  s->add_option("--order", f.order, "Order d (default deg P)");
  s = with_input(sub("taylor", "Split P into its top tensor part and a lower-degree part", cmd_taylor),
                 "Polynomial file");
  s->add_option("--order", f.order, "Order d (default deg P)");
  s = with_input(sub("correlate", "Best correlating lower-degree polynomial", cmd_correlate), "Polynomial file");
  s->add_option("--max-degree", f.max_degree, "Degree bound for the search");
  with_char(s);
  with_input(sub("rank-check", "Check that P is a function of Q_1..Q_m", cmd_rank_check),
             "Polynomial P, then Q_1..Q_m");
  s = with_input(sub("bogolyubov", "Subspace inside 2A-2A with four-term witnesses", cmd_bogolyubov), "Set file");
  s->add_option("--delta", f.delta, "Density parameter (default the density of A)");
  s = with_input(sub("find-system", "l-system inside a sumset of a dense product multiset", cmd_find_system),
                 "Product multiset file");
  s->add_option("--delta", f.delta, "Density parameter (default |B'|/|B|)");

  CLI::App* ls = app.add_subcommand("lsystem", "l-system operations");
  ls->require_subcommand(1);
  const auto lsub = [&](const std::string& name, const std::string& help, Handler h) {
    CLI::App* c = ls->add_subcommand(name, help);
    handlers.emplace_back(c, h);
    return c;
  };
  with_input(lsub("validate", "Check the codimension bound and shape", cmd_lsystem_validate), "l-system file");
  with_input(lsub("intersect", "Intersect two systems", cmd_lsystem_intersect), "Two l-system files");
  with_input(lsub("restrict", "Restrict a system to subspaces L_I", cmd_lsystem_restrict),
             "l-system file, then a subspace family file");

  s = with_input(sub("forcing-check", "Decide whether Q is (k, alpha)-forcing", cmd_forcing_check),
                 "Forcing instance file");
  s->add_option("--alpha", f.alpha, "Override the instance's alpha");

  s = common(sub("tower-bound", "Symbolic bound expressions", cmd_tower_bound));
  s->add_option("--theorem", f.theorem, "Bound identifier")->required()->check(CLI::IsMember(trl::tower_bound_ids()));
  s->add_option("-d", f.d, "Order d")->required();
  s->add_option("-r,--param", f.param, "Bias parameter, rank r or density, as a rational");
  s->add_option("--q", f.q, "Field order");

  s = common(sub("ensemble", "Seeded random instances with per-instance metrics", cmd_ensemble));
  s->add_option("--kind", f.kind, "Instance kind")->check(CLI::IsMember(trl::ensemble_kinds()));
  s->add_option("--count", f.count, "Number of instances");
  s->add_option("--q", f.q, "Field order");
  s->add_option("--dims", f.dims, "Tensor dimensions, comma separated");
  s->add_option("--nvars", f.nvars, "Variables (random-poly)");
  s->add_option("--degree", f.degree, "Degree (random-poly)");
  s->add_option("-k", f.k, "Subspace dimension (degenerate)");
  s->add_option("--density", f.density, "Tuple density (product-multiset)");
  s->add_option("--budget", f.budget, "Partition-rank search budget per instance");

  common(sub("selftest", "Run the acceptance criteria", cmd_selftest));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  Handler handler = nullptr;
  for (const auto& [app_ptr, h] : handlers)
    if (app_ptr->parsed()) handler = h;

  std::string command_line = "trl";
  for (int i = 1; i < argc; ++i) command_line += std::string(" ") + argv[i];
  Runner run(f, command_line);

  const auto start = std::chrono::steady_clock::now();
  const auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };
  try {
    Report r = handler(run);
    write_output(f.output, run.render(r, "ok", elapsed()));
    return r.exit_code;
  } catch (const trl::GuardExceeded& e) {
    std::cerr << "trl: guard exceeded: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const trl::PropertyViolation& e) {
    std::cerr << "trl: property violation: " << e.what() << '\n';
    return kExitViolation;
  } catch (const std::exception& e) {
    std::cerr << "trl: " << e.what() << '\n';
    return kExitInvalid;
  }
}
