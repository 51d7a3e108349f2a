#include "recbound/piecewise.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

namespace recbound {

AffForm AffForm::constant(int arity, Rat c) {
  AffForm f;
  f.coef.assign(arity, Rat(0));
  f.cst = std::move(c);
  return f;
}

AffForm AffForm::var(int arity, int axis) {
  AffForm f;
  f.coef.assign(arity, Rat(0));
  f.coef[axis] = 1;
  f.cst = 0;
  return f;
}

AffForm AffForm::infinity(int arity) {
  AffForm f;
  f.coef.assign(arity, Rat(0));
  f.cst = 0;
  f.inf = true;
  return f;
}

Rat AffForm::eval(const std::vector<long>& p) const {
  Rat v = cst;
  for (std::size_t j = 0; j < coef.size(); ++j) v += coef[j] * Rat(p[j]);
  return v;
}

bool AffForm::operator==(const AffForm& o) const {
  return inf == o.inf && coef == o.coef && cst == o.cst;
}

bool form_less(const AffForm& a, const AffForm& b) {
  if (a.inf != b.inf) return !a.inf;
  if (a.coef != b.coef) return a.coef < b.coef;
  return a.cst < b.cst;
}

std::string form_to_string(const AffForm& f,
                           const std::vector<std::string>& names) {
  if (f.inf) return "inf";
  std::ostringstream os;
  // positive terms first, then negative ones, constant last
  bool first = true;
  auto emit = [&](const Rat& c, const std::string& name) {
    Rat a = rat_abs(c);
    if (first) {
      if (c < 0) os << "-";
      first = false;
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    if (name.empty()) {
      os << rat_to_string(a);
    } else {
      if (a != 1) os << rat_to_string(a) << "*";
      os << name;
    }
  };
  for (int pass = 0; pass < 2; ++pass)
    for (std::size_t j = 0; j < f.coef.size(); ++j) {
      if (f.coef[j] == 0) continue;
      if ((pass == 0) != (f.coef[j] > 0)) continue;
      emit(f.coef[j], j < names.size() ? names[j] : "x" + std::to_string(j));
    }
  if (f.cst != 0 || first) emit(f.cst, "");
  return os.str();
}

bool Guard::holds(const std::vector<long>& p) const {
  for (const auto& a : atoms)
    if (a.eval(p) < 0) return false;
  return true;
}

namespace {

AffForm add_forms(const AffForm& a, const AffForm& b) {
  if (a.inf || b.inf) return AffForm::infinity(a.coef.size());
  AffForm r = a;
  for (std::size_t j = 0; j < r.coef.size(); ++j) r.coef[j] += b.coef[j];
  r.cst += b.cst;
  return r;
}

AffForm sub_forms(const AffForm& a, const AffForm& b) {
  AffForm r = a;
  for (std::size_t j = 0; j < r.coef.size(); ++j) r.coef[j] -= b.coef[j];
  r.cst -= b.cst;
  return r;
}

AffForm scale_form(const AffForm& a, const Rat& c) {
  if (a.inf) return c == 0 ? AffForm::constant(a.coef.size(), 0) : a;
  AffForm r = a;
  for (auto& x : r.coef) x *= c;
  r.cst *= c;
  return r;
}

// Coefficient-wise maximum dominates both forms over the quadrant x >= 0.
AffForm coeff_max(const AffForm& a, const AffForm& b) {
  if (a.inf) return a;
  if (b.inf) return b;
  AffForm r = a;
  for (std::size_t j = 0; j < r.coef.size(); ++j)
    if (b.coef[j] > r.coef[j]) r.coef[j] = b.coef[j];
  if (b.cst > r.cst) r.cst = b.cst;
  return r;
}

bool is_const_form(const AffForm& a) {
  if (a.inf) return false;
  for (const auto& c : a.coef)
    if (c != 0) return false;
  return true;
}

// Value of the atom at x + delta, still as a function of x.
AffForm shift_atom(const AffForm& a, const std::vector<long>& delta) {
  AffForm r = a;
  for (std::size_t j = 0; j < r.coef.size(); ++j)
    r.cst += r.coef[j] * Rat(delta[j]);
  return r;
}

void dedupe_sort_cap(FormSet& s, std::size_t cap) {
  std::sort(s.forms.begin(), s.forms.end(), form_less);
  s.forms.erase(std::unique(s.forms.begin(), s.forms.end()), s.forms.end());
  // drop explicit infinite forms: they never realize the minimum
  while (!s.forms.empty() && s.forms.back().inf) s.forms.pop_back();
  if (s.forms.size() > cap) s.forms.resize(cap);
}

}  // namespace

Feas feasible(std::vector<AffForm> rows, int arity, long row_cap) {
  for (int j = 0; j < arity; ++j) rows.push_back(AffForm::var(arity, j));
  for (int j = 0; j < arity; ++j) {
    std::vector<AffForm> lower, upper, next;
    for (auto& r : rows) {
      if (r.inf) continue;
      if (r.coef[j] > 0)
        lower.push_back(r);
      else if (r.coef[j] < 0)
        upper.push_back(r);
      else
        next.push_back(r);
    }
    // a*x_j + L >= 0 (a > 0) and -b*x_j + U >= 0 (b > 0) admit a common
    // x_j over Q exactly when a*U + b*L >= 0.
    for (const auto& l : lower)
      for (const auto& u : upper) {
        next.push_back(add_forms(scale_form(u, l.coef[j]),
                                 scale_form(l, -u.coef[j])));
        if (static_cast<long>(next.size()) > row_cap) return Feas::Unknown;
      }
    rows = std::move(next);
  }
  for (const auto& r : rows)
    if (r.cst < 0) return Feas::Infeasible;
  return Feas::Feasible;
}

namespace {

// u >= v over the integer points of {rows >= 0, x >= 0}: the violation
// system rows /\ (v - u >= 1) is refuted.  Rational-feasible systems are
// conservatively treated as not dominant, so an integer-infeasible but
// rational-feasible violation only costs precision, never soundness.
bool dominates_rows(const AffForm& u, const AffForm& v,
                    std::vector<AffForm> rows, int arity) {
  if (u.inf) return true;
  if (v.inf) return false;
  // scaled to integer coefficients, v - u > 0 strengthens to v - u >= 1
  AffForm d = sub_forms(v, u);
  Int den = denominator(d.cst);
  for (const auto& c : d.coef)
    den = boost::multiprecision::lcm(den, denominator(c));
  d = scale_form(d, Rat(den));
  d.cst -= 1;
  rows.push_back(d);
  return feasible(std::move(rows), arity) == Feas::Infeasible;
}

}  // namespace

bool dominance_on(const Guard& g, const AffForm& u, const AffForm& v) {
  int arity = static_cast<int>(u.coef.size());
  if (arity > 4)
    throw std::invalid_argument(
        "dominance check supports at most 4 variables");
  return dominates_rows(u, v, g.atoms, arity);
}

// -------------------------------------------------------------------------
// parsing

namespace {

std::string strip_comments(const std::string& text) {
  std::string out;
  bool in_comment = false;
  for (char c : text) {
    if (c == '#') in_comment = true;
    if (c == '\n') in_comment = false;
    if (!in_comment) out.push_back(c);
  }
  return out;
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

bool is_ident_char(char c) {
  return std::islower(static_cast<unsigned char>(c)) ||
         std::isdigit(static_cast<unsigned char>(c));
}

std::string point_to_string(const std::vector<long>& p) {
  std::ostringstream os;
  os << "(";
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (j) os << ", ";
    os << p[j];
  }
  os << ")";
  return os.str();
}

// Linear integer expression over named variables: [-] term ((+|-) term)*,
// term := int | int '*' name | name.
struct LinParser {
  const std::string& s;
  std::size_t i = 0;
  std::string err;

  void skip_ws() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }

  std::optional<Rat> number() {
    skip_ws();
    std::size_t j = i;
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
    if (j == i) return std::nullopt;
    Rat v(s.substr(i, j - i));
    i = j;
    return v;
  }

  std::optional<std::string> ident() {
    skip_ws();
    if (i >= s.size() || !std::islower(static_cast<unsigned char>(s[i])))
      return std::nullopt;
    std::size_t j = i;
    while (j < s.size() && is_ident_char(s[j])) ++j;
    std::string id = s.substr(i, j - i);
    i = j;
    return id;
  }

  // resolve(name) -> axis, or -1 with err set
  template <typename Resolve>
  std::optional<AffForm> parse(int arity, Resolve resolve) {
    AffForm acc = AffForm::constant(arity, 0);
    skip_ws();
    Rat sign(1);
    if (i < s.size() && s[i] == '-') {
      sign = -1;
      ++i;
    }
    while (true) {
      skip_ws();
      AffForm term = AffForm::constant(arity, 0);
      if (auto v = number()) {
        skip_ws();
        if (i < s.size() && s[i] == '*') {
          ++i;
          auto id = ident();
          if (!id) {
            err = "expected variable after '*'";
            return std::nullopt;
          }
          int ax = resolve(*id);
          if (ax < 0) {
            err = "unknown variable '" + *id + "'";
            return std::nullopt;
          }
          term.coef[ax] = *v;
        } else {
          term.cst = *v;
        }
      } else if (auto id = ident()) {
        int ax = resolve(*id);
        if (ax < 0) {
          err = "unknown variable '" + *id + "'";
          return std::nullopt;
        }
        term.coef[ax] = 1;
      } else {
        err = "expected term";
        return std::nullopt;
      }
      acc = add_forms(acc, scale_form(term, sign));
      skip_ws();
      if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
        sign = s[i] == '+' ? 1 : -1;
        ++i;
        continue;
      }
      break;
    }
    skip_ws();
    if (i != s.size()) {
      err = "trailing input in affine expression";
      return std::nullopt;
    }
    return acc;
  }
};

// Idents mentioned in a guard or body, for arity inference without a
// vars header: n counts as axis 0, x<k>/pop<k>/push<k> as axis k.
int max_builtin_axis(const std::string& text) {
  int mx = -1;
  std::size_t i = 0;
  while (i < text.size()) {
    if (std::islower(static_cast<unsigned char>(text[i]))) {
      std::size_t j = i;
      while (j < text.size() &&
             std::islower(static_cast<unsigned char>(text[j])))
        ++j;
      std::string stem = text.substr(i, j - i);
      std::size_t k = j;
      while (k < text.size() &&
             std::isdigit(static_cast<unsigned char>(text[k])))
        ++k;
      if (stem == "n" && k == j) mx = std::max(mx, 0);
      if ((stem == "x" || stem == "pop" || stem == "push") && k > j)
        mx = std::max(mx, std::stoi(text.substr(j, k - j)));
      i = k;
    } else {
      ++i;
    }
  }
  return mx;
}

// Replaces declared variable names by x<axis> tokens in a body.
std::string substitute_names(const std::string& body,
                             const std::vector<std::string>& names) {
  std::string out;
  std::size_t i = 0;
  while (i < body.size()) {
    if (std::islower(static_cast<unsigned char>(body[i]))) {
      std::size_t j = i;
      while (j < body.size() && is_ident_char(body[j])) ++j;
      std::string id = body.substr(i, j - i);
      auto it = std::find(names.begin(), names.end(), id);
      if (it != names.end())
        out += "x" + std::to_string(it - names.begin());
      else
        out += id;
      i = j;
    } else {
      out.push_back(body[i++]);
    }
  }
  return out;
}

bool has_comp(const SeqExpr& e) {
  if (e.kind == SeqExpr::Kind::Comp) return true;
  return (e.a && has_comp(*e.a)) || (e.b && has_comp(*e.b));
}

const std::set<std::string> kReservedNames = {
    "cst", "f", "pop", "push", "comp", "max", "eq", "case", "vars", "arity"};

}  // namespace

std::optional<PWEquation> parse_pw(const std::string& text, std::string* err) {
  auto fail = [&](const std::string& m) {
    if (err) *err = m;
    return std::nullopt;
  };
  std::string clean = strip_comments(text);
  std::vector<std::string> stmts;
  {
    std::string cur;
    for (char c : clean) {
      if (c == ';') {
        stmts.push_back(trim(cur));
        cur.clear();
      } else {
        cur.push_back(c);
      }
    }
    if (!trim(cur).empty()) return fail("missing ';' after last statement");
  }
  stmts.erase(std::remove(stmts.begin(), stmts.end(), std::string()),
              stmts.end());
  if (stmts.empty()) return fail("empty definition");

  PWEquation pw;
  bool vars_given = false;
  std::size_t first_case = 0;
  if (stmts[0].rfind("vars", 0) == 0 &&
      (stmts[0].size() == 4 ||
       !is_ident_char(stmts[0][4]))) {
    vars_given = true;
    first_case = 1;
    std::stringstream ss(stmts[0].substr(4));
    std::string name;
    while (std::getline(ss, name, ',')) {
      name = trim(name);
      if (name.empty()) return fail("empty variable name");
      for (char c : name)
        if (!is_ident_char(c)) return fail("bad variable name '" + name + "'");
      if (!std::islower(static_cast<unsigned char>(name[0])))
        return fail("bad variable name '" + name + "'");
      if (kReservedNames.count(name))
        return fail("variable name '" + name + "' is reserved");
      if (std::find(pw.var_names.begin(), pw.var_names.end(), name) !=
          pw.var_names.end())
        return fail("duplicate variable name '" + name + "'");
      pw.var_names.push_back(name);
    }
    if (pw.var_names.empty()) return fail("vars header declares no variables");
    pw.arity = static_cast<int>(pw.var_names.size());
  }

  // split the case statements into guard and body texts first so the
  // arity can be inferred when there is no header
  struct RawCase {
    std::string guard, body;
  };
  std::vector<RawCase> raw;
  for (std::size_t k = first_case; k < stmts.size(); ++k) {
    const std::string& st = stmts[k];
    if (st.rfind("case", 0) != 0 || st.size() < 5 || is_ident_char(st[4]))
      return fail("expected 'case <guard>: <body>'");
    std::size_t colon = st.find(':');
    if (colon == std::string::npos) return fail("missing ':' in case");
    raw.push_back({trim(st.substr(4, colon - 4)), trim(st.substr(colon + 1))});
    if (raw.back().guard.empty()) return fail("empty guard");
    if (raw.back().body.empty()) return fail("empty body");
  }
  if (raw.empty()) return fail("no cases given");

  if (!vars_given) {
    int mx = 0;
    for (const auto& rc : raw) {
      mx = std::max(mx, max_builtin_axis(rc.guard));
      mx = std::max(mx, max_builtin_axis(rc.body));
    }
    pw.arity = mx + 1;
    for (int j = 0; j < pw.arity; ++j)
      pw.var_names.push_back("x" + std::to_string(j));
  }

  auto resolve = [&](const std::string& id) -> int {
    auto it = std::find(pw.var_names.begin(), pw.var_names.end(), id);
    if (it != pw.var_names.end())
      return static_cast<int>(it - pw.var_names.begin());
    if (id == "n") return 0;
    if (id.size() > 1 && id[0] == 'x') {
      bool digits = true;
      for (std::size_t k = 1; k < id.size(); ++k)
        digits = digits && std::isdigit(static_cast<unsigned char>(id[k]));
      if (digits) {
        int ax = std::stoi(id.substr(1));
        if (ax < pw.arity) return ax;
      }
    }
    return -1;
  };

  for (const auto& rc : raw) {
    PWPiece piece;
    piece.guard_text = rc.guard;
    piece.body_text = rc.body;
    // guard: atom ('&&' atom)*
    std::vector<std::string> atoms;
    {
      std::size_t pos = 0;
      while (true) {
        std::size_t amp = rc.guard.find("&&", pos);
        if (amp == std::string::npos) {
          atoms.push_back(trim(rc.guard.substr(pos)));
          break;
        }
        atoms.push_back(trim(rc.guard.substr(pos, amp - pos)));
        pos = amp + 2;
      }
    }
    for (const auto& at : atoms) {
      // find the comparison operator
      std::size_t op_pos = std::string::npos;
      std::string op;
      for (std::size_t k = 0; k < at.size(); ++k) {
        if (at[k] == '<' || at[k] == '>' || at[k] == '=') {
          op_pos = k;
          op = at.substr(k, k + 1 < at.size() && at[k + 1] == '=' ? 2 : 1);
          break;
        }
      }
      if (op_pos == std::string::npos)
        return fail("no comparison in guard atom '" + at + "'");
      std::string ls = trim(at.substr(0, op_pos));
      std::string rs = trim(at.substr(op_pos + op.size()));
      LinParser lp{ls}, rp{rs};
      auto lf = lp.parse(pw.arity, resolve);
      if (!lf) return fail("guard atom '" + at + "': " + lp.err);
      auto rf = rp.parse(pw.arity, resolve);
      if (!rf) return fail("guard atom '" + at + "': " + rp.err);
      AffForm ge = sub_forms(*lf, *rf);  // lhs - rhs
      if (op == "<") {
        AffForm a = scale_form(ge, Rat(-1));
        a.cst -= 1;
        piece.guard.atoms.push_back(a);
      } else if (op == "<=") {
        piece.guard.atoms.push_back(scale_form(ge, Rat(-1)));
      } else if (op == "=" || op == "==") {
        piece.guard.atoms.push_back(ge);
        piece.guard.atoms.push_back(scale_form(ge, Rat(-1)));
      } else if (op == ">=") {
        piece.guard.atoms.push_back(ge);
      } else {  // ">"
        AffForm a = ge;
        a.cst -= 1;
        piece.guard.atoms.push_back(a);
      }
    }
    std::string body_text =
        vars_given ? substitute_names(rc.body, pw.var_names) : rc.body;
    std::string perr;
    auto body = parse_seq(body_text, pw.arity, &perr);
    if (!body) return fail("body '" + rc.body + "': " + perr);
    if (has_comp(**body))
      return fail("composition is not supported in piecewise bodies");
    piece.body = *body;
    pw.pieces.push_back(std::move(piece));
  }

  // the cases must tile the sampled box: exactly one guard per point
  PartitionReport part = check_partition(pw, 12);
  if (!part.disjoint)
    return fail("pieces " + std::to_string(part.piece_a) + " and " +
                std::to_string(part.piece_b) + " overlap at " +
                point_to_string(part.overlap_witness));
  if (!part.covers)
    return fail("no piece covers " + point_to_string(part.gap_witness));
  return pw;
}

std::optional<PWEquation> parse_pw_file(const std::string& path,
                                        std::string* err) {
  std::ifstream in(path);
  if (!in) {
    if (err) *err = "cannot open " + path;
    return std::nullopt;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_pw(ss.str(), err);
}

// -------------------------------------------------------------------------
// partition and interfaces

namespace {

void grid_points(int arity, long G,
                 const std::function<void(const std::vector<long>&)>& fn) {
  std::vector<long> p(arity, 0);
  while (true) {
    fn(p);
    int i = arity - 1;
    while (i >= 0) {
      if (++p[i] <= G) break;
      p[i] = 0;
      --i;
    }
    if (i < 0) break;
  }
}

}  // namespace

PartitionReport check_partition(const PWEquation& pw, long G) {
  PartitionReport rep;
  grid_points(pw.arity, G, [&](const std::vector<long>& p) {
    int first = -1, second = -1;
    for (std::size_t k = 0; k < pw.pieces.size(); ++k) {
      if (!pw.pieces[k].guard.holds(p)) continue;
      if (first < 0)
        first = static_cast<int>(k);
      else if (second < 0)
        second = static_cast<int>(k);
    }
    if (first < 0 && rep.covers) {
      rep.covers = false;
      rep.gap_witness = p;
    }
    if (second >= 0 && rep.disjoint) {
      rep.disjoint = false;
      rep.overlap_witness = p;
      rep.piece_a = first;
      rep.piece_b = second;
    }
  });
  return rep;
}

namespace {

// Rows restricting `piece` to the points whose read at x + delta lands
// in piece q: the target guard at the shifted point, plus x + delta >= 0
// on every shifted axis.
std::vector<AffForm> landing_rows(const PWEquation& pw, int q,
                                  const std::vector<long>& delta) {
  std::vector<AffForm> rows;
  for (const auto& a : pw.pieces[q].guard.atoms)
    rows.push_back(shift_atom(a, delta));
  for (int j = 0; j < pw.arity; ++j)
    if (delta[j] != 0) {
      AffForm nn = AffForm::var(pw.arity, j);
      nn.cst = Rat(delta[j]);
      rows.push_back(nn);
    }
  return rows;
}

}  // namespace

std::vector<Interface> interfaces(const PWEquation& pw, int piece,
                                  const std::vector<long>& delta) {
  std::vector<Interface> out;
  for (std::size_t q = 0; q < pw.pieces.size(); ++q) {
    Guard sub;
    sub.atoms = pw.pieces[piece].guard.atoms;
    for (auto& r : landing_rows(pw, static_cast<int>(q), delta))
      sub.atoms.push_back(std::move(r));
    if (feasible(sub.atoms, pw.arity) != Feas::Infeasible)
      out.push_back({std::move(sub), static_cast<int>(q)});
  }
  return out;
}

// -------------------------------------------------------------------------
// abstract step

namespace {

// Net shifts of the recursive reads, in evaluation order.  The right
// operand of a subtraction never contributes to an upper bound, so its
// reads are not collected (the evaluator skips it the same way).
void collect_shifts(const SeqExpr& e, std::vector<long>& cur,
                    std::vector<std::vector<long>>& out) {
  switch (e.kind) {
    case SeqExpr::Kind::F:
      out.push_back(cur);
      return;
    case SeqExpr::Kind::Pop:
      ++cur[e.axis];
      collect_shifts(*e.a, cur, out);
      --cur[e.axis];
      return;
    case SeqExpr::Kind::Push:
      --cur[e.axis];
      collect_shifts(*e.a, cur, out);
      ++cur[e.axis];
      return;
    case SeqExpr::Kind::Sub:
      collect_shifts(*e.a, cur, out);
      return;
    default:
      if (e.a) collect_shifts(*e.a, cur, out);
      if (e.b) collect_shifts(*e.b, cur, out);
      return;
  }
}

void pw_warn(std::vector<std::string>* warnings, const std::string& msg) {
  if (warnings) warnings->push_back(msg);
}

constexpr std::size_t kEvalFormCap = 12;

struct PieceEval {
  const PWEquation& pw;
  const PWValue& bounds;
  const std::vector<int>& assign;
  const std::vector<AffForm>& region;
  const std::vector<bool>& interior;  // guard implies x_axis >= 1
  std::vector<std::string>* warnings;
  std::size_t site = 0;

  FormSet eval(const SeqExpr& e) {
    const int d = pw.arity;
    switch (e.kind) {
      case SeqExpr::Kind::Cst:
        return {{AffForm::constant(d, e.cst)}};
      case SeqExpr::Kind::N:
        return {{AffForm::var(d, e.axis)}};
      case SeqExpr::Kind::F:
        return bounds[assign[site++]];
      case SeqExpr::Kind::Add: {
        FormSet l = eval(*e.a), r = eval(*e.b), out;
        for (const auto& a : l.forms)
          for (const auto& b : r.forms) out.forms.push_back(add_forms(a, b));
        dedupe_sort_cap(out, kEvalFormCap);
        return out;
      }
      case SeqExpr::Kind::Sub:
        return eval(*e.a);
      case SeqExpr::Kind::Mul: {
        FormSet l = eval(*e.a), r = eval(*e.b);
        auto scalar = [](const FormSet& s) -> std::optional<Rat> {
          std::optional<Rat> best;
          for (const auto& f : s.forms) {
            if (!is_const_form(f)) return std::nullopt;
            if (!best || f.cst < *best) best = f.cst;
          }
          return best;
        };
        auto cl = scalar(l), cr = scalar(r);
        const FormSet* other = cl ? &r : &l;
        std::optional<Rat> c = cl ? cl : cr;
        if (!c || *c < 0) {
          pw_warn(warnings,
                  "piecewise product with no constant factor; no bound");
          return {};
        }
        FormSet out;
        for (const auto& f : other->forms)
          out.forms.push_back(scale_form(f, *c));
        dedupe_sort_cap(out, kEvalFormCap);
        return out;
      }
      case SeqExpr::Kind::Max: {
        FormSet l = eval(*e.a), r = eval(*e.b), out;
        for (const auto& a : l.forms)
          for (const auto& b : r.forms) {
            if (dominates_rows(a, b, region, pw.arity))
              out.forms.push_back(a);
            else if (dominates_rows(b, a, region, pw.arity))
              out.forms.push_back(b);
            else
              out.forms.push_back(coeff_max(a, b));
          }
        dedupe_sort_cap(out, kEvalFormCap);
        return out;
      }
      case SeqExpr::Kind::Pop: {
        FormSet s = eval(*e.a);
        for (auto& f : s.forms)
          if (!f.inf) f.cst += f.coef[e.axis];
        dedupe_sort_cap(s, kEvalFormCap);
        return s;
      }
      case SeqExpr::Kind::Push: {
        FormSet s = eval(*e.a);
        FormSet out;
        for (const auto& f : s.forms) {
          AffForm shifted = f;
          if (!shifted.inf) shifted.cst -= shifted.coef[e.axis];
          if (interior[e.axis])
            out.forms.push_back(shifted);
          else
            out.forms.push_back(
                coeff_max(shifted, AffForm::constant(d, e.cst)));
        }
        dedupe_sort_cap(out, kEvalFormCap);
        return out;
      }
      case SeqExpr::Kind::Comp:
        pw_warn(warnings, "composition in a piecewise body; no bound");
        return {};
    }
    return {};
  }
};

std::vector<bool> interior_axes(const PWEquation& pw, int piece) {
  std::vector<bool> out(pw.arity, false);
  for (int j = 0; j < pw.arity; ++j) {
    // interior when guard /\ x_j <= 0 is refuted
    std::vector<AffForm> rows = pw.pieces[piece].guard.atoms;
    rows.push_back(scale_form(AffForm::var(pw.arity, j), Rat(-1)));
    out[j] = feasible(std::move(rows), pw.arity) == Feas::Infeasible;
  }
  return out;
}

}  // namespace

std::vector<SubResult> pw_step_piece(const PWEquation& pw, int piece,
                                     const PWValue& bounds,
                                     std::vector<std::string>* warnings) {
  const auto& pc = pw.pieces[piece];
  std::vector<std::vector<long>> shifts;
  std::vector<long> cur(pw.arity, 0);
  collect_shifts(*pc.body, cur, shifts);

  std::vector<std::vector<int>> cands(shifts.size());
  for (std::size_t i = 0; i < shifts.size(); ++i) {
    for (const auto& itf : interfaces(pw, piece, shifts[i]))
      cands[i].push_back(itf.target);
    if (cands[i].empty()) {
      pw_warn(warnings, "piece " + std::to_string(piece) +
                            ": a recursive read lands nowhere; no bound");
      return {};
    }
  }
  std::vector<bool> interior = interior_axes(pw, piece);

  std::vector<SubResult> out;
  std::vector<std::size_t> combo(shifts.size(), 0);
  while (true) {
    std::vector<AffForm> region = pc.guard.atoms;
    std::vector<int> assign(shifts.size());
    for (std::size_t i = 0; i < shifts.size(); ++i) {
      int q = cands[i][combo[i]];
      assign[i] = q;
      for (auto& r : landing_rows(pw, q, shifts[i]))
        region.push_back(std::move(r));
    }
    if (feasible(region, pw.arity) != Feas::Infeasible) {
      PieceEval ev{pw, bounds, assign, region, interior, warnings};
      FormSet val = ev.eval(*pc.body);
      out.push_back({Guard{std::move(region)}, std::move(val)});
    }
    // next combination
    std::size_t i = 0;
    for (; i < combo.size(); ++i) {
      if (++combo[i] < cands[i].size()) break;
      combo[i] = 0;
    }
    if (i == combo.size()) break;
  }
  return out;
}

namespace {

// u dominates the minimum of V on the region; exact for singleton V,
// otherwise requires one uniform witness.
bool dominates_min_on(const AffForm& u, const FormSet& V,
                      const std::vector<AffForm>& region, int arity) {
  if (V.forms.empty()) return true;  // minimum is +inf
  for (const auto& v : V.forms)
    if (dominates_rows(u, v, region, arity)) return true;
  return false;
}

}  // namespace

FormSet merge_piece(const std::vector<SubResult>& subs, const Guard& target,
                    int arity, std::size_t max_forms,
                    std::vector<std::string>* warnings) {
  const int d = arity;
  if (subs.empty()) return {};

  constexpr std::size_t kCandidateCap = 256;
  std::vector<AffForm> cands;
  auto push_cand = [&](const AffForm& f) {
    if (f.inf || cands.size() >= kCandidateCap) return;
    if (std::find(cands.begin(), cands.end(), f) == cands.end())
      cands.push_back(f);
  };

  for (const auto& s : subs)
    for (const auto& f : s.val.forms) push_cand(f);
  std::size_t base = cands.size();
  for (std::size_t i = 0; i < base; ++i)
    for (std::size_t j = i + 1; j < base; ++j)
      push_cand(coeff_max(cands[i], cands[j]));
  // ramp interpolants: when one sub-region's bound sits a constant above
  // another's, a candidate that climbs from the lower bound along one of
  // the higher region's rows can cover both exactly
  for (const auto& sa : subs)
    for (const auto& sb : subs)
      for (const auto& ua : sa.val.forms)
        for (const auto& ub : sb.val.forms) {
          if (ua.inf || ub.inf || ua.coef != ub.coef) continue;
          Rat delta = ub.cst - ua.cst;
          if (delta <= 0) continue;
          for (const auto& row : sb.region.atoms) {
            AffForm w = add_forms(ua, scale_form(row, delta));
            w.cst += delta;
            push_cand(w);
          }
        }

  FormSet kept;
  for (const auto& u : cands) {
    bool ok = true;
    for (const auto& s : subs)
      if (!dominates_min_on(u, s.val, s.region.atoms, d)) {
        ok = false;
        break;
      }
    if (ok) kept.forms.push_back(u);
  }

  if (kept.forms.empty()) {
    // coefficient-wise max over every sub-result form dominates them all
    AffForm m = AffForm::constant(d, 0);
    bool any = false, infinite = false;
    for (const auto& s : subs) {
      if (s.val.forms.empty()) infinite = true;
      for (const auto& f : s.val.forms) {
        if (f.inf) infinite = true;
        m = any ? coeff_max(m, f) : f;
        any = true;
      }
    }
    if (infinite || !any) {
      pw_warn(warnings, "no finite merged bound");
      return {};
    }
    pw_warn(warnings, "falling back to the coefficient-wise maximum");
    kept.forms.push_back(m);
  }

  std::sort(kept.forms.begin(), kept.forms.end(), form_less);
  // drop forms some other kept form stays below everywhere on the piece
  std::vector<bool> dead(kept.forms.size(), false);
  for (std::size_t i = 0; i < kept.forms.size(); ++i)
    for (std::size_t j = 0; j < kept.forms.size(); ++j) {
      if (i == j || dead[i] || dead[j]) continue;
      if (dominates_rows(kept.forms[i], kept.forms[j], target.atoms, d) &&
          (j < i || !dominates_rows(kept.forms[j], kept.forms[i], target.atoms,
                                    d)))
        dead[i] = true;
    }
  FormSet out;
  for (std::size_t i = 0; i < kept.forms.size(); ++i)
    if (!dead[i]) out.forms.push_back(kept.forms[i]);
  if (out.forms.size() > max_forms) out.forms.resize(max_forms);
  return out;
}

PWValue pw_abstract_step(const PWEquation& pw, const PWValue& bounds,
                         std::vector<std::string>* warnings) {
  PWValue next(pw.pieces.size());
  for (std::size_t p = 0; p < pw.pieces.size(); ++p) {
    auto subs = pw_step_piece(pw, static_cast<int>(p), bounds, warnings);
    std::vector<std::string> local;
    next[p] = merge_piece(subs, pw.pieces[p].guard, pw.arity, 4,
                          warnings ? &local : nullptr);
    if (warnings)
      for (auto& m : local)
        warnings->push_back("piece " + std::to_string(p) + ": " + m);
  }
  return next;
}

// -------------------------------------------------------------------------
// analysis loop

namespace {

FormSet widen_forms(const FormSet& prev, const FormSet& next,
                    const WideningCfg& cfg,
                    std::map<std::vector<Rat>, int>& streaks, bool* widened) {
  std::map<std::vector<Rat>, const AffForm*> prev_by_lin;
  for (const auto& f : prev.forms)
    if (!f.inf) prev_by_lin.emplace(f.coef, &f);
  std::vector<Rat> ladder = cfg.thresholds;
  std::sort(ladder.begin(), ladder.end());

  FormSet out;
  std::map<std::vector<Rat>, int> fresh;
  for (const auto& nf : next.forms) {
    if (nf.inf) continue;
    auto it = prev_by_lin.find(nf.coef);
    if (it == prev_by_lin.end()) {
      out.forms.push_back(nf);
      fresh[nf.coef] = 0;
      continue;
    }
    const AffForm& pf = *it->second;
    if (nf.cst > pf.cst) {
      int s = streaks.count(nf.coef) ? streaks[nf.coef] + 1 : 1;
      if (s >= cfg.delay) {
        for (const auto& rung : ladder)
          if (rung > nf.cst) {
            AffForm lf = nf;
            lf.cst = rung;
            out.forms.push_back(lf);
            break;
          }
        // past the last rung the form escapes to infinity and is dropped
        if (widened) *widened = true;
        fresh[nf.coef] = 0;
      } else {
        out.forms.push_back(nf);
        fresh[nf.coef] = s;
      }
    } else {
      out.forms.push_back(pf.cst > nf.cst ? pf : nf);
      fresh[nf.coef] = 0;
    }
  }
  streaks = std::move(fresh);
  dedupe_sort_cap(out, cfg.max_gens);
  return out;
}

// Every form of A admits a form of V below it on the region; then the
// minimum of V is below the minimum of A there.
bool pw_leq(const FormSet& V, const FormSet& A,
            const std::vector<AffForm>& region, int arity) {
  for (const auto& a : A.forms) {
    bool found = false;
    for (const auto& v : V.forms)
      if (dominates_rows(a, v, region, arity)) {
        found = true;
        break;
      }
    if (!found) return false;
  }
  return true;
}

}  // namespace

PWAnalysis analyze_pw(const PWEquation& pw, const WideningCfg& cfg) {
  PWAnalysis res;
  res.partition = check_partition(pw, 12);
  const int P = static_cast<int>(pw.pieces.size());

  // reads that cross the axis boundary would escape the quadrant; they are
  // only handled when the guard keeps them inside
  std::vector<bool> supported(P, true);
  for (int p = 0; p < P; ++p) {
    std::vector<std::vector<long>> shifts;
    std::vector<long> cur(pw.arity, 0);
    collect_shifts(*pw.pieces[p].body, cur, shifts);
    for (const auto& sh : shifts)
      for (int j = 0; j < pw.arity; ++j) {
        if (sh[j] >= 0) continue;
        // guard /\ x_j <= -sh_j - 1 must be refuted
        std::vector<AffForm> rows = pw.pieces[p].guard.atoms;
        AffForm ub = scale_form(AffForm::var(pw.arity, j), Rat(-1));
        ub.cst = Rat(-sh[j] - 1);
        rows.push_back(ub);
        if (feasible(std::move(rows), pw.arity) != Feas::Infeasible) {
          supported[p] = false;
          res.warnings.push_back(
              "piece " + std::to_string(p) +
              ": a recursive read can cross the axis boundary; no bound");
        }
      }
  }

  PWValue A(P);
  for (int p = 0; p < P; ++p)
    if (supported[p]) A[p].forms.push_back(AffForm::constant(pw.arity, 0));
  std::vector<std::map<std::vector<Rat>, int>> streaks(P);
  bool widened_any = false;

  long it = 0;
  while (it < cfg.max_iters) {
    ++it;
    PWValue next(P);
    for (int p = 0; p < P; ++p) {
      if (!supported[p]) continue;
      auto subs = pw_step_piece(pw, p, A, &res.warnings);
      std::vector<std::string> local;
      next[p] =
          merge_piece(subs, pw.pieces[p].guard, pw.arity, cfg.max_gens, &local);
      for (auto& m : local)
        res.warnings.push_back("piece " + std::to_string(p) + ": " + m);
    }
    res.trace.push_back(next);
    if (next == A) break;
    PWValue W(P);
    for (int p = 0; p < P; ++p)
      if (supported[p])
        W[p] = widen_forms(A[p], next[p], cfg, streaks[p], &widened_any);
    if (W == A) break;
    A = std::move(W);
  }
  res.iters = it;
  res.widened = widened_any;
  res.bounds = A;

  // certificate: one unwidened step stays below the final bounds
  bool ok = true;
  for (int p = 0; p < P && ok; ++p) {
    if (!supported[p]) continue;  // empty bound is +inf, trivially above
    auto subs = pw_step_piece(pw, p, A, nullptr);
    if (subs.empty() && !A[p].forms.empty()) ok = false;
    for (const auto& s : subs)
      if (!pw_leq(s.val, A[p], s.region.atoms, pw.arity)) {
        ok = false;
        break;
      }
  }
  if (ok) {
    res.status = widened_any ? Status::WidenedPostfix : Status::ExactPostfix;
  } else {
    auto grid = pw_verify_grid(pw, A, 12);
    res.status = grid.sound ? Status::SampledOnly : Status::Diverged;
  }
  return res;
}

// -------------------------------------------------------------------------
// concrete grid oracle

namespace {

int piece_at(const PWEquation& pw, const std::vector<long>& p) {
  for (std::size_t k = 0; k < pw.pieces.size(); ++k)
    if (pw.pieces[k].guard.holds(p)) return static_cast<int>(k);
  return -1;
}

XReal eval_pw_concrete(const SeqExpr& e, const PrefixTable& t,
                       std::vector<long>& p) {
  switch (e.kind) {
    case SeqExpr::Kind::Cst:
      return XReal(e.cst);
    case SeqExpr::Kind::N:
      return XReal(Rat(p[e.axis]));
    case SeqExpr::Kind::F: {
      if (!t.in_box(p)) return XReal(Rat(0));
      auto v = t.get(p);
      return v ? *v : XReal(Rat(0));
    }
    case SeqExpr::Kind::Add:
      return eval_pw_concrete(*e.a, t, p) + eval_pw_concrete(*e.b, t, p);
    case SeqExpr::Kind::Sub:
      return monus(eval_pw_concrete(*e.a, t, p), eval_pw_concrete(*e.b, t, p));
    case SeqExpr::Kind::Mul:
      return eval_pw_concrete(*e.a, t, p) * eval_pw_concrete(*e.b, t, p);
    case SeqExpr::Kind::Max:
      return xmax(eval_pw_concrete(*e.a, t, p), eval_pw_concrete(*e.b, t, p));
    case SeqExpr::Kind::Pop: {
      ++p[e.axis];
      XReal v = eval_pw_concrete(*e.a, t, p);
      --p[e.axis];
      return v;
    }
    case SeqExpr::Kind::Push: {
      if (p[e.axis] == 0) return XReal(e.cst);
      --p[e.axis];
      XReal v = eval_pw_concrete(*e.a, t, p);
      ++p[e.axis];
      return v;
    }
    case SeqExpr::Kind::Comp:
      throw std::logic_error("composition in a piecewise body");
  }
  return XReal(Rat(0));
}

}  // namespace

PrefixTable pw_apply_operator(const PWEquation& pw, const PrefixTable& t) {
  PrefixTable next(t.arity(), t.extents());
  for (const auto& p : t.points()) {
    int k = piece_at(pw, p);
    if (k < 0) {
      next.set(p, XReal(Rat(0)));
      continue;
    }
    std::vector<long> q = p;
    next.set(p, eval_pw_concrete(*pw.pieces[k].body, t, q));
  }
  return next;
}

PrefixTable pw_concrete_prefix(const PWEquation& pw, long G, long max_sweeps) {
  std::vector<long> extents(pw.arity, G + 1);
  PrefixTable t(pw.arity, extents);
  long cells = 1;
  for (long e : extents) cells *= e;
  if (max_sweeps <= 0) max_sweeps = 2 * cells + 64;
  for (const auto& p : t.points()) t.set(p, XReal(Rat(0)));
  for (long s = 0; s < max_sweeps; ++s) {
    PrefixTable next = pw_apply_operator(pw, t);
    if (next == t) break;
    t = std::move(next);
  }
  return t;
}

PWGridCheck pw_verify_grid(const PWEquation& pw, const PWValue& bounds,
                           long G) {
  PWGridCheck out;
  PrefixTable oracle = pw_concrete_prefix(pw, G);
  grid_points(pw.arity, G, [&](const std::vector<long>& p) {
    int k = piece_at(pw, p);
    if (k < 0) return;
    auto ov = oracle.get(p);
    XReal o = ov ? *ov : XReal(Rat(0));
    // the bound at p: pointwise minimum over the forms, +inf when none
    bool binf = true;
    Rat bval;
    for (const auto& f : bounds[k].forms) {
      if (f.inf) continue;
      Rat v = f.eval(p);
      if (binf || v < bval) bval = v;
      binf = false;
    }
    bool violated;
    if (binf)
      violated = false;  // infinite bound dominates everything
    else if (o.is_inf())
      violated = true;
    else
      violated = bval < o.value();
    if (violated) {
      out.sound = false;
      ++out.violations;
      if (out.first_violation.empty()) out.first_violation = p;
      out.exact = false;
    } else {
      bool eq = !binf && !o.is_inf() && bval == o.value();
      if (binf && o.is_inf()) eq = true;
      if (!eq) out.exact = false;
    }
  });
  return out;
}

}  // namespace recbound
