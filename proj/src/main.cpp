#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "recbound/engine.hpp"
#include "recbound/galois.hpp"
#include "recbound/multivar.hpp"
#include "recbound/ode.hpp"
#include "recbound/piecewise.hpp"
#include "recbound/synthesis.hpp"

namespace {

using namespace recbound;

bool trace_enabled() {
  const char* t = std::getenv("RECBOUND_TRACE");
  return t && std::string(t) == "1";
}

// ---------------------------------------------------------------------------
// pretty printing

std::vector<std::string> axis_vars(int arity) {
  if (arity == 1) return {"n"};
  std::vector<std::string> v;
  for (int j = 0; j < arity; ++j) v.push_back("x" + std::to_string(j));
  return v;
}

std::string uni_elem_name(const BasisId& b, long idx, const std::string& v) {
  switch (b.kind) {
    case BasisId::Kind::affine:
      return idx == 0 ? v : "1";
    case BasisId::Kind::monomial:
      if (idx == 0) return "1";
      return idx == 1 ? v : v + "^" + std::to_string(idx);
    case BasisId::Kind::binomial:
      return idx == 0 ? "1" : "C(" + v + "," + std::to_string(idx) + ")";
    case BasisId::Kind::stirling:
      return idx == 0 ? "1" : "S(" + v + "+1," + std::to_string(idx + 1) + ")";
    case BasisId::Kind::powers:
      return idx == 0 ? "1" : std::to_string(idx + 1) + "^" + v;
    case BasisId::Kind::stirling_binomial: {
      long cols = b.deg + 1;
      long brow = idx / cols + 1, k = idx % cols;
      std::string s =
          brow == 1 ? "" : "S(" + v + "+1," + std::to_string(brow) + ")";
      std::string c = k == 0 ? "" : "C(" + v + "," + std::to_string(k) + ")";
      if (s.empty() && c.empty()) return "1";
      if (s.empty()) return c;
      if (c.empty()) return s;
      return s + "*" + c;
    }
    case BasisId::Kind::tensor:
      return "?";
  }
  return "?";
}

std::string elem_name(const BasisId& b, long idx,
                      const std::vector<std::string>& vars) {
  if (b.kind != BasisId::Kind::tensor) return uni_elem_name(b, idx, vars[0]);
  std::vector<long> multi = tensor_multi_index(b, idx);
  std::string out;
  for (std::size_t ax = 0; ax < multi.size(); ++ax) {
    std::string part = uni_elem_name(b.axes[ax], multi[ax], vars[ax]);
    if (part == "1") continue;
    if (!out.empty()) out += "*";
    out += part;
  }
  return out.empty() ? "1" : out;
}

std::string coeff_term(const XReal& c, const std::string& name) {
  if (name == "1") return c.str();
  if (!c.is_inf() && c.value() == 1) return name;
  return c.str() + "*" + name;
}

// Signed polynomial, highest element first; a common denominator is
// factored out so the integer numerator reads cleanly.
std::string signed_poly(const BasisId& b, const std::vector<Rat>& coeffs,
                        const std::string& v) {
  Int den = 1;
  for (const auto& c : coeffs) den = boost::multiprecision::lcm(den, denominator(c));
  std::ostringstream os;
  bool first = true;
  for (long i = static_cast<long>(coeffs.size()) - 1; i >= 0; --i) {
    Rat c = coeffs[i] * den;
    if (c == 0) continue;
    Rat a = rat_abs(c);
    if (first) {
      if (c < 0) os << "-";
      first = false;
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    std::string name = uni_elem_name(b, i, v);
    if (name == "1")
      os << rat_to_string(a);
    else if (a == 1)
      os << name;
    else
      os << rat_to_string(a) << "*" << name;
  }
  std::string body = first ? "0" : os.str();
  if (den == 1) return body;
  return "(" + body + ")/" + den.str();
}

// Evaluation-equivalent plain form appended after binomial and
// exponential-tower displays; empty when no conversion applies.
std::string expansion(const BasisId& b, const CoeffVec& g,
                      const std::string& v) {
  if (g.top) return "";
  std::vector<Rat> rc;
  for (const auto& c : g.coeffs) {
    if (c.is_inf()) return "";
    rc.push_back(c.value());
  }
  if (b.kind == BasisId::Kind::binomial) {
    auto conv = convert_basis(b, BasisId::Monomial(b.deg), rc);
    return signed_poly(conv.to, conv.coeffs, v);
  }
  if (b.kind == BasisId::Kind::stirling) {
    auto conv = convert_basis(b, BasisId::Powers(b.expo), rc);
    return signed_poly(conv.to, conv.coeffs, v);
  }
  return "";
}

std::string pretty_vec(const BasisId& b, const CoeffVec& g,
                       const std::vector<std::string>& vars) {
  if (g.top) return "inf";
  if (b.kind == BasisId::Kind::affine)
    return g.coeffs[0].str() + "*" + vars[0] + " + " + g.coeffs[1].str();
  std::ostringstream os;
  bool first = true;
  auto emit = [&](long i) {
    if (g.coeffs[i].is_inf() || g.coeffs[i].value() != 0) {
      if (!first) os << " + ";
      os << coeff_term(g.coeffs[i], elem_name(b, i, vars));
      first = false;
    }
  };
  if (b.kind == BasisId::Kind::tensor) {
    for (long i = 0; i < static_cast<long>(g.coeffs.size()); ++i) emit(i);
  } else {
    for (long i = static_cast<long>(g.coeffs.size()) - 1; i >= 0; --i) emit(i);
  }
  return first ? "0" : os.str();
}

std::string bound_line(const BasisId& b, const GenSet& s, int arity) {
  std::vector<std::string> vars = axis_vars(arity);
  std::string lhs = "f(";
  for (std::size_t j = 0; j < vars.size(); ++j) {
    if (j) lhs += ", ";
    lhs += vars[j];
  }
  lhs += ")";
  if (s.is_top()) return lhs + " <= inf";
  if (s.gens.size() == 1) {
    std::string p = pretty_vec(b, s.gens[0], vars);
    std::string ex = expansion(b, s.gens[0], vars[0]);
    if (!ex.empty() && ex != p) p += " = " + ex;
    return lhs + " <= " + p;
  }
  std::string out = lhs + " <= min(";
  for (std::size_t i = 0; i < s.gens.size(); ++i) {
    if (i) out += ", ";
    out += pretty_vec(b, s.gens[i], vars);
  }
  return out + ")";
}

std::string formset_str(const FormSet& fs, const std::vector<std::string>& names) {
  if (fs.forms.empty()) return "inf";
  if (fs.forms.size() == 1) return form_to_string(fs.forms[0], names);
  std::string out = "min(";
  for (std::size_t i = 0; i < fs.forms.size(); ++i) {
    if (i) out += ", ";
    out += form_to_string(fs.forms[i], names);
  }
  return out + ")";
}

// ---------------------------------------------------------------------------
// shared option parsing

std::optional<BasisId> parse_domain(const std::string& s, std::string* err) {
  if (s == "affine") return BasisId::Affine();
  if (s.rfind("poly:", 0) == 0) {
    try {
      int d = std::stoi(s.substr(5));
      if (d >= 0) return BasisId::Binomial(d);
    } catch (...) {
    }
  }
  if (s.rfind("exppoly:", 0) == 0) {
    std::string rest = s.substr(8);
    std::size_t comma = rest.find(',');
    if (comma != std::string::npos) {
      try {
        int m = std::stoi(rest.substr(0, comma));
        int d = std::stoi(rest.substr(comma + 1));
        if (m >= 1 && d >= 0) return BasisId::StirlingBinomial(m, d);
      } catch (...) {
      }
    }
  }
  *err = "bad domain '" + s + "' (use affine | poly:<d> | exppoly:<m>,<d>)";
  return std::nullopt;
}

bool parse_thresholds(const std::string& s, std::vector<Rat>* out,
                      std::string* err) {
  std::stringstream ss(s);
  std::string tok;
  out->clear();
  while (std::getline(ss, tok, ',')) {
    auto v = parse_rat(tok);
    if (!v) {
      *err = "bad threshold '" + tok + "'";
      return false;
    }
    out->push_back(*v);
  }
  if (out->empty()) {
    *err = "empty threshold list";
    return false;
  }
  return true;
}

struct AnalyzeOpts {
  std::vector<std::string> files;
  std::string domain = "affine";
  std::string thresholds;
  int delay = -1;
  long max_gens = -1;
  long max_iters = -1;
  bool no_early_exit = false;
  long verify_prefix = -1;
  std::string csv_path;
  long csv_points = 32;
  unsigned jobs = 1;
};

struct FileReport {
  std::string out, err;
  int code = 0;
};

// ---------------------------------------------------------------------------
// analyze

FileReport analyze_one(const std::string& path, const AnalyzeOpts& o) {
  FileReport rep;
  std::ostringstream out, err;
  auto fail = [&](const std::string& m) {
    err << path << ": " << m << "\n";
    rep.out = out.str();
    rep.err = err.str();
    rep.code = 1;
    return rep;
  };

  std::string perr;
  auto eq = parse_equation_file(path, &perr);
  if (!eq) return fail(perr);

  std::string derr;
  auto axis = parse_domain(o.domain, &derr);
  if (!axis) return fail(derr);
  BasisId basis = eq->arity == 1 ? *axis : tensor_power(*axis, eq->arity);

  WideningCfg cfg;
  if (!o.thresholds.empty()) {
    std::string terr;
    if (!parse_thresholds(o.thresholds, &cfg.thresholds, &terr))
      return fail(terr);
  }
  if (o.delay >= 0) cfg.delay = o.delay;
  if (o.max_gens >= 0) cfg.max_gens = static_cast<std::size_t>(o.max_gens);
  if (o.max_iters >= 0) cfg.max_iters = o.max_iters;
  if (o.no_early_exit) cfg.early_exit = false;

  AnalysisResult res = analyze(*eq, basis, cfg);

  if (trace_enabled())
    for (std::size_t i = 0; i < res.trace.size(); ++i)
      err << path << " iter " << i << ": " << res.trace[i].str() << "\n";
  for (const auto& w : res.warnings) err << path << " warning: " << w << "\n";

  out << path << ": " << bound_line(basis, res.bound, eq->arity) << "\n";
  out << "status: " << status_name(res.status) << "\n";
  out << "iterations: " << res.iters << "\n";

  if (o.verify_prefix >= 0) {
    std::vector<long> extents(eq->arity, o.verify_prefix + 1);
    PrefixCheck pc = verify_prefix_sampled(*eq, res.bound, extents);
    out << "prefix [0.." << o.verify_prefix << "]: "
        << (pc.sound ? (pc.exact ? "sound, exact" : "sound") : "VIOLATED")
        << "\n";
    if (!pc.sound) {
      out << "violations: " << pc.violations << ", first at (";
      for (std::size_t j = 0; j < pc.first_violation.size(); ++j) {
        if (j) out << ", ";
        out << pc.first_violation[j];
      }
      out << ")\n";
    }
  }

  if (!o.csv_path.empty()) {
    if (eq->arity != 1) return fail("csv output needs a one-variable equation");
    std::ofstream f(o.csv_path);
    if (!f) return fail("cannot write " + o.csv_path);
    f << "n,oracle";
    for (std::size_t i = 0; i < res.bound.gens.size(); ++i) f << ",g" << i;
    f << "\n";
    if (!res.trace.empty()) {
      auto oracle = concrete_lfp_prefix(*eq, {o.csv_points + 1});
      for (long n = 0; n <= o.csv_points; ++n) {
        auto v = oracle.table.get({n});
        f << n << "," << (v ? v->str() : "?");
        for (const auto& g : res.bound.gens) f << "," << g.eval({n}).str();
        f << "\n";
      }
    }
  }

  rep.out = out.str();
  rep.err = err.str();
  rep.code = status_exit_code(res.status);
  return rep;
}

int cmd_analyze(const AnalyzeOpts& o) {
  if (!o.csv_path.empty() && o.files.size() != 1) {
    std::cerr << "--emit-csv needs exactly one input file\n";
    return 1;
  }
  std::vector<FileReport> reports(o.files.size());
  unsigned jobs = std::max(1u, o.jobs);
  if (jobs <= 1 || o.files.size() <= 1) {
    for (std::size_t i = 0; i < o.files.size(); ++i)
      reports[i] = analyze_one(o.files[i], o);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < std::min<std::size_t>(jobs, o.files.size()); ++t)
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < o.files.size();
             i = next.fetch_add(1))
          reports[i] = analyze_one(o.files[i], o);
      });
    for (auto& th : pool) th.join();
  }
  int code = 0;
  for (const auto& r : reports) {
    std::cout << r.out;
    std::cerr << r.err;
    code = std::max(code, r.code);
  }
  return code;
}

// ---------------------------------------------------------------------------
// analyze-pw

int cmd_analyze_pw(const std::string& path, const std::string& thresholds,
                   int delay, long max_gens, long max_iters) {
  std::string perr;
  auto pw = parse_pw_file(path, &perr);
  if (!pw) {
    std::cerr << path << ": " << perr << "\n";
    return 1;
  }
  WideningCfg cfg;
  if (!thresholds.empty()) {
    std::string terr;
    if (!parse_thresholds(thresholds, &cfg.thresholds, &terr)) {
      std::cerr << terr << "\n";
      return 1;
    }
  }
  if (delay >= 0) cfg.delay = delay;
  if (max_gens >= 0) cfg.max_gens = static_cast<std::size_t>(max_gens);
  if (max_iters >= 0) cfg.max_iters = max_iters;

  PWAnalysis res = analyze_pw(*pw, cfg);

  if (trace_enabled())
    for (std::size_t i = 0; i < res.trace.size(); ++i) {
      std::cerr << path << " iter " << i + 1 << ":";
      for (std::size_t p = 0; p < res.trace[i].size(); ++p)
        std::cerr << " [" << p << "] "
                  << formset_str(res.trace[i][p], pw->var_names);
      std::cerr << "\n";
    }
  for (const auto& w : res.warnings)
    std::cerr << path << " warning: " << w << "\n";

  std::string lhs = "f(";
  for (std::size_t j = 0; j < pw->var_names.size(); ++j) {
    if (j) lhs += ", ";
    lhs += pw->var_names[j];
  }
  lhs += ")";
  for (std::size_t p = 0; p < pw->pieces.size(); ++p)
    std::cout << "piece " << p << " (" << pw->pieces[p].guard_text
              << "): " << lhs << " <= "
              << formset_str(res.bounds[p], pw->var_names) << "\n";
  std::cout << "status: " << status_name(res.status) << "\n";
  std::cout << "iterations: " << res.iters << "\n";
  return status_exit_code(res.status);
}

// ---------------------------------------------------------------------------
// reduce

int cmd_reduce(const std::string& path, const std::string& map_text, long box,
               long check_box) {
  bool is_pw = path.size() > 3 && path.substr(path.size() - 3) == ".pw";
  std::string perr;
  std::optional<SeqEquation> eq;
  std::optional<PWEquation> pw;
  int arity;
  if (is_pw) {
    pw = parse_pw_file(path, &perr);
    if (!pw) {
      std::cerr << path << ": " << perr << "\n";
      return 1;
    }
    arity = pw->arity;
  } else {
    eq = parse_equation_file(path, &perr);
    if (!eq) {
      std::cerr << path << ": " << perr << "\n";
      return 1;
    }
    arity = eq->arity;
  }

  std::string merr;
  auto m = parse_fiber_map(map_text, arity, &merr);
  if (!m) {
    std::cerr << merr << "\n";
    return 1;
  }

  std::vector<long> extents(arity, box);
  ReduceResult res = is_pw ? reduce_fixpoint(*m, *pw, extents)
                           : reduce_fixpoint(*m, *eq, extents);

  long A = res.fsharp.extents()[0];
  std::cout << "map: " << map_text << "\n";
  std::cout << "reduced extent: " << A << "\n";
  std::cout << "f#:";
  for (long a = 0; a < A; ++a) {
    auto v = res.fsharp.get({a});
    std::cout << " " << (v ? v->str() : "-");
  }
  std::cout << "\n";
  if (res.stabilized)
    std::cout << "stabilized after " << res.iters << " iterations\n";
  else
    std::cout << "did not stabilize within " << res.iters << " iterations\n";

  // concretized bound against the concrete values on the check box
  std::vector<long> cext(arity, check_box);
  PrefixTable gamma = concretize_table(*m, res.fsharp, cext);
  PrefixTable oracle = is_pw
                           ? pw_concrete_prefix(*pw, check_box - 1)
                           : concrete_lfp_prefix(*eq, cext).table;
  bool sound = true, exact = true;
  long violations = 0;
  for (const auto& p : oracle.points()) {
    auto ov = oracle.get(p);
    auto gv = gamma.get(p);
    XReal o = ov ? *ov : XReal(Rat(0));
    XReal g = gv ? *gv : XReal(Rat(0));
    bool dominated = o.is_inf() ? g.is_inf()
                                : (g.is_inf() || g.value() >= o.value());
    if (!dominated) {
      sound = false;
      ++violations;
    }
    if (!(o.is_inf() == g.is_inf() &&
          (o.is_inf() || o.value() == g.value())))
      exact = false;
  }
  std::cout << "concretization vs concrete table on [0.." << check_box - 1
            << "]^" << arity << ": "
            << (sound ? (exact ? "sound, exact" : "sound") : "VIOLATED")
            << "\n";
  if (!sound) {
    std::cout << "violations: " << violations << "\n";
    return 3;
  }
  return res.stabilized ? 0 : 2;
}

// ---------------------------------------------------------------------------
// synth

int cmd_synth(const std::string& domain, const std::string& boundary,
              const std::string& body) {
  std::string derr;
  auto basis = parse_domain(domain, &derr);
  if (!basis) {
    std::cerr << derr << "\n";
    return 1;
  }
  auto c = parse_rat(boundary);
  if (!c) {
    std::cerr << "bad boundary '" << boundary << "'\n";
    return 1;
  }
  std::vector<XReal> coeffs;
  {
    std::stringstream ss(body);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (tok == "inf") {
        coeffs.push_back(XReal::infinity());
        continue;
      }
      auto v = parse_rat(tok);
      if (!v || *v < 0) {
        std::cerr << "bad body coefficient '" << tok << "'\n";
        return 1;
      }
      coeffs.push_back(XReal(*v));
    }
  }
  if (static_cast<long>(coeffs.size()) != basis->dimension()) {
    std::cerr << "body has " << coeffs.size() << " coefficients, basis needs "
              << basis->dimension() << "\n";
    return 1;
  }
  CoeffVec bodyv(*basis, std::move(coeffs));
  LinearSystem sys = push_system(*basis, *c, bodyv);
  GenSet gens = minimal_generators(*basis, sys);
  std::cout << "system rows: " << sys.rows.size() << "\n";
  std::cout << "minimal bounds: " << gens.gens.size() << "\n";
  std::vector<std::string> vars = axis_vars(1);
  for (const auto& g : gens.gens)
    std::cout << "  " << g.str() << "  " << pretty_vec(*basis, g, vars)
              << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// ode-check

int cmd_ode_check(const std::string& alpha, const std::string& beta,
                  const std::string& gamma, const std::string& v0,
                  const std::string& M, const std::string& eps) {
  std::string ierr;
  auto a = parse_itv(alpha, &ierr);
  if (!a) {
    std::cerr << "--alpha: " << ierr << "\n";
    return 1;
  }
  auto b = parse_itv(beta, &ierr);
  if (!b) {
    std::cerr << "--beta: " << ierr << "\n";
    return 1;
  }
  auto g = parse_itv(gamma, &ierr);
  if (!g) {
    std::cerr << "--gamma: " << ierr << "\n";
    return 1;
  }
  auto v = parse_rat(v0);
  auto mm = parse_rat(M);
  auto e = parse_rat(eps);
  if (!v || !mm || !e) {
    std::cerr << "bad rational in --v0 / --M / --eps\n";
    return 1;
  }
  OdeParams p{*a, *b, *g, *v, *e};
  try {
    Itv cand{Rat(0), *mm};
    Itv image = euler_step_bound(p, cand);
    bool ok = check_const_postfix(p, *mm);
    std::cout << "parameters: alpha=" << itv_to_string(p.alpha)
              << " beta=" << itv_to_string(p.beta)
              << " gamma=" << itv_to_string(p.gamma)
              << " v0=" << rat_to_string(p.v0)
              << " eps=" << rat_to_string(p.eps) << "\n";
    std::cout << "step image of " << itv_to_string(cand) << ": "
              << itv_to_string(image) << "\n";
    if (ok) {
      std::cout << "accepted: " << itv_to_string(cand)
                << " maps into itself and contains v0 (checked at eps, "
                   "eps/2, eps/4)\n";
      std::cout << "the certificate covers the eps-discretized dynamics at "
                   "the checked step sizes, at every horizon\n";
      return 0;
    }
    std::cout << "rejected: ";
    if (!cand.contains(p.v0))
      std::cout << "v0 lies outside " << itv_to_string(cand) << "\n";
    else
      std::cout << "the step image leaves " << itv_to_string(cand) << "\n";
    return 3;
  } catch (const std::invalid_argument& ex) {
    std::cerr << ex.what() << "\n";
    return 1;
  }
}

// ---------------------------------------------------------------------------
// oracle

int cmd_oracle(const std::string& path, long points) {
  std::string perr;
  auto eq = parse_equation_file(path, &perr);
  if (!eq) {
    std::cerr << path << ": " << perr << "\n";
    return 1;
  }
  std::vector<long> extents(eq->arity, points + 1);
  auto k = concrete_lfp_prefix(*eq, extents);
  if (eq->arity == 1)
    std::cout << "n,oracle\n";
  else {
    for (int j = 0; j < eq->arity; ++j) std::cout << "x" << j << ",";
    std::cout << "oracle\n";
  }
  for (const auto& p : k.table.points()) {
    for (std::size_t j = 0; j < p.size(); ++j) std::cout << p[j] << ",";
    auto v = k.table.get(p);
    std::cout << (v ? v->str() : "?") << "\n";
  }
  if (!k.stabilized)
    std::cerr << path << " warning: concrete iteration hit the sweep budget\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"upper-bound analysis for recursive sequence definitions"};
  app.require_subcommand(1);

  AnalyzeOpts ao;
  auto* an = app.add_subcommand("analyze", "bound one or more equation files");
  an->add_option("files", ao.files, "equation files")->required();
  an->add_option("--domain", ao.domain,
                 "abstract domain: affine | poly:<d> | exppoly:<m>,<d>");
  an->add_option("--thresholds", ao.thresholds,
                 "comma-separated widening rungs");
  an->add_option("--delay", ao.delay, "growth steps tolerated before lifting");
  an->add_option("--max-gens", ao.max_gens, "generator cap");
  an->add_option("--max-iters", ao.max_iters, "iteration budget");
  an->add_flag("--no-early-exit", ao.no_early_exit,
               "keep iterating after a single generator verifies");
  an->add_option("--verify-prefix", ao.verify_prefix,
                 "check the bound against the concrete table on [0..N]");
  an->add_option("--emit-csv", ao.csv_path,
                 "write n, concrete value, per-generator bound columns");
  an->add_option("--csv-points", ao.csv_points, "rows in the csv (n = 0..N)");
  an->add_option("--jobs", ao.jobs, "parallel workers across files");

  std::string pw_file, pw_thresholds;
  int pw_delay = -1;
  long pw_max_gens = -1, pw_max_iters = -1;
  auto* apw = app.add_subcommand("analyze-pw",
                                 "bound a case-split (piecewise) definition");
  apw->add_option("file", pw_file, "piecewise definition file")->required();
  apw->add_option("--thresholds", pw_thresholds,
                  "comma-separated widening rungs");
  apw->add_option("--delay", pw_delay, "growth steps tolerated before lifting");
  apw->add_option("--max-gens", pw_max_gens, "form cap per piece");
  apw->add_option("--max-iters", pw_max_iters, "iteration budget");

  std::string rd_file, rd_map;
  long rd_box = 31, rd_check = 16;
  auto* rd = app.add_subcommand(
      "reduce", "collapse a multivariate definition to one index");
  rd->add_option("file", rd_file, "equation (.eq) or piecewise (.pw) file")
      ->required();
  rd->add_option("--map", rd_map, "index map, e.g. \"x+y\"")->required();
  rd->add_option("--box", rd_box, "per-axis extent of the evaluation box");
  rd->add_option("--check-box", rd_check,
                 "per-axis extent for the concretization check");

  std::string sy_domain = "affine", sy_boundary = "0", sy_body;
  auto* sy = app.add_subcommand(
      "synth", "minimal bounds for a boundary-prepend step");
  sy->add_option("--domain", sy_domain, "basis of the coefficients");
  sy->add_option("--boundary", sy_boundary, "value prepended at index 0");
  sy->add_option("--body", sy_body,
                 "comma-separated body bound coefficients (rationals or inf)")
      ->required();

  std::string od_alpha = "0", od_beta = "0", od_gamma = "0", od_v0 = "0",
              od_M, od_eps = "1/100";
  auto* od = app.add_subcommand(
      "ode-check", "infinite-horizon bound for discretized decay dynamics");
  od->add_option("--alpha", od_alpha, "quadratic damping envelope (lo:hi)");
  od->add_option("--beta", od_beta, "linear damping envelope (lo:hi)");
  od->add_option("--gamma", od_gamma, "source term envelope (lo:hi)");
  od->add_option("--v0", od_v0, "initial value");
  od->add_option("--M", od_M, "candidate constant bound")->required();
  od->add_option("--eps", od_eps, "discretization step");

  std::string orc_file;
  long orc_points = 32;
  auto* orc = app.add_subcommand("oracle",
                                 "print the concrete table of an equation");
  orc->add_option("file", orc_file, "equation file")->required();
  orc->add_option("--points", orc_points, "per-axis extent minus one");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Usage problems share the IO/parse exit code; --help stays 0.
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  if (an->parsed()) return cmd_analyze(ao);
  if (apw->parsed())
    return cmd_analyze_pw(pw_file, pw_thresholds, pw_delay, pw_max_gens,
                          pw_max_iters);
  if (rd->parsed()) return cmd_reduce(rd_file, rd_map, rd_box, rd_check);
  if (sy->parsed()) return cmd_synth(sy_domain, sy_boundary, sy_body);
  if (od->parsed())
    return cmd_ode_check(od_alpha, od_beta, od_gamma, od_v0, od_M, od_eps);
  if (orc->parsed()) return cmd_oracle(orc_file, orc_points);
  return 1;
}
