#include "recbound/seq_lang.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace recbound {

SeqExprPtr SeqExpr::make_cst(Rat c) {
  auto e = std::make_shared<SeqExpr>();
  e->kind = Kind::Cst;
  e->cst = std::move(c);
  return e;
}
SeqExprPtr SeqExpr::make_n(int axis) {
  auto e = std::make_shared<SeqExpr>();
  e->kind = Kind::N;
  e->axis = axis;
  return e;
}
SeqExprPtr SeqExpr::make_f() {
  auto e = std::make_shared<SeqExpr>();
  e->kind = Kind::F;
  return e;
}
static SeqExprPtr make_bin(SeqExpr::Kind k, SeqExprPtr l, SeqExprPtr r) {
  auto e = std::make_shared<SeqExpr>();
  e->kind = k;
  e->a = std::move(l);
  e->b = std::move(r);
  return e;
}
SeqExprPtr SeqExpr::make_add(SeqExprPtr l, SeqExprPtr r) {
  return make_bin(Kind::Add, std::move(l), std::move(r));
}
SeqExprPtr SeqExpr::make_sub(SeqExprPtr l, SeqExprPtr r) {
  return make_bin(Kind::Sub, std::move(l), std::move(r));
}
SeqExprPtr SeqExpr::make_mul(SeqExprPtr l, SeqExprPtr r) {
  return make_bin(Kind::Mul, std::move(l), std::move(r));
}
SeqExprPtr SeqExpr::make_max(SeqExprPtr l, SeqExprPtr r) {
  return make_bin(Kind::Max, std::move(l), std::move(r));
}
SeqExprPtr SeqExpr::make_pop(SeqExprPtr e, int axis) {
  auto r = std::make_shared<SeqExpr>();
  r->kind = Kind::Pop;
  r->axis = axis;
  r->a = std::move(e);
  return r;
}
SeqExprPtr SeqExpr::make_push(Rat c, SeqExprPtr e, int axis) {
  auto r = std::make_shared<SeqExpr>();
  r->kind = Kind::Push;
  r->cst = std::move(c);
  r->axis = axis;
  r->a = std::move(e);
  return r;
}
SeqExprPtr SeqExpr::make_comp(SeqExprPtr outer, SeqExprPtr inner) {
  return make_bin(Kind::Comp, std::move(outer), std::move(inner));
}

namespace {

int prec(const SeqExpr& e) {
  switch (e.kind) {
    case SeqExpr::Kind::Add:
    case SeqExpr::Kind::Sub:
      return 1;
    case SeqExpr::Kind::Mul:
      return 2;
    default:
      return 3;
  }
}

void print_rec(const SeqExpr& e, std::ostringstream& os, int parent_prec,
               bool right_child) {
  int p = prec(e);
  bool paren = p < parent_prec || (p == parent_prec && right_child);
  if (paren) os << "(";
  switch (e.kind) {
    case SeqExpr::Kind::Cst:
      os << "cst(" << rat_to_string(e.cst) << ")";
      break;
    case SeqExpr::Kind::N:
      if (e.axis == 0)
        os << "n";
      else
        os << "x" << e.axis;
      break;
    case SeqExpr::Kind::F:
      os << "f";
      break;
    case SeqExpr::Kind::Add:
      print_rec(*e.a, os, p, false);
      os << " + ";
      print_rec(*e.b, os, p, true);
      break;
    case SeqExpr::Kind::Sub:
      print_rec(*e.a, os, p, false);
      os << " - ";
      print_rec(*e.b, os, p, true);
      break;
    case SeqExpr::Kind::Mul:
      print_rec(*e.a, os, p, false);
      os << " * ";
      print_rec(*e.b, os, p, true);
      break;
    case SeqExpr::Kind::Pop:
      os << "pop";
      if (e.axis != 0) os << e.axis;
      os << "(";
      print_rec(*e.a, os, 0, false);
      os << ")";
      break;
    case SeqExpr::Kind::Push:
      os << "push";
      if (e.axis != 0) os << e.axis;
      os << " " << rat_to_string(e.cst) << " (";
      print_rec(*e.a, os, 0, false);
      os << ")";
      break;
    case SeqExpr::Kind::Comp:
      os << "comp(";
      print_rec(*e.a, os, 0, false);
      os << ", ";
      print_rec(*e.b, os, 0, false);
      os << ")";
      break;
    case SeqExpr::Kind::Max:
      os << "max(";
      print_rec(*e.a, os, 0, false);
      os << ", ";
      print_rec(*e.b, os, 0, false);
      os << ")";
      break;
  }
  if (paren) os << ")";
}

struct Tok {
  enum class Type { Ident, Num, LP, RP, Comma, Plus, Minus, Star, Semi, Colon, End };
  Type type;
  std::string text;
};

bool tokenize(const std::string& s, std::vector<Tok>& out, std::string* err) {
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '#') {
      while (i < s.size() && s[i] != '\n') ++i;
      continue;
    }
    if (std::islower(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < s.size() && std::islower(static_cast<unsigned char>(s[j]))) ++j;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      out.push_back({Tok::Type::Ident, s.substr(i, j - i)});
      i = j;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      if (j < s.size() && s[j] == '/') {
        std::size_t k = j + 1;
        while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) ++k;
        if (k == j + 1) {
          if (err) *err = "malformed rational literal";
          return false;
        }
        j = k;
      }
      out.push_back({Tok::Type::Num, s.substr(i, j - i)});
      i = j;
      continue;
    }
    Tok::Type t;
    switch (c) {
      case '(': t = Tok::Type::LP; break;
      case ')': t = Tok::Type::RP; break;
      case ',': t = Tok::Type::Comma; break;
      case '+': t = Tok::Type::Plus; break;
      case '-': t = Tok::Type::Minus; break;
      case '*': t = Tok::Type::Star; break;
      case ';': t = Tok::Type::Semi; break;
      case ':': t = Tok::Type::Colon; break;
      default:
        if (err) *err = std::string("unexpected character '") + c + "'";
        return false;
    }
    out.push_back({t, std::string(1, c)});
    ++i;
  }
  out.push_back({Tok::Type::End, ""});
  return true;
}

// Splits an identifier into its letter stem and optional digit suffix.
void split_ident(const std::string& id, std::string& stem, int& suffix,
                 bool& has_suffix) {
  std::size_t k = 0;
  while (k < id.size() && std::islower(static_cast<unsigned char>(id[k]))) ++k;
  stem = id.substr(0, k);
  has_suffix = k < id.size();
  suffix = has_suffix ? std::stoi(id.substr(k)) : 0;
}

struct Parser {
  const std::vector<Tok>& toks;
  std::size_t pos = 0;
  std::string err;

  const Tok& peek() const { return toks[pos]; }
  Tok take() { return toks[pos++]; }
  bool expect(Tok::Type t, const char* what) {
    if (peek().type != t) {
      err = std::string("expected ") + what;
      return false;
    }
    ++pos;
    return true;
  }

  std::optional<Rat> rat_lit() {
    if (peek().type != Tok::Type::Num) {
      err = "expected rational literal";
      return std::nullopt;
    }
    auto r = parse_rat(take().text);
    if (!r) err = "malformed rational literal";
    return r;
  }

  SeqExprPtr expr() {
    auto lhs = term();
    if (!lhs) return nullptr;
    while (peek().type == Tok::Type::Plus || peek().type == Tok::Type::Minus) {
      bool add = take().type == Tok::Type::Plus;
      auto rhs = term();
      if (!rhs) return nullptr;
      lhs = add ? SeqExpr::make_add(lhs, rhs) : SeqExpr::make_sub(lhs, rhs);
    }
    return lhs;
  }

  SeqExprPtr term() {
    auto lhs = factor();
    if (!lhs) return nullptr;
    while (peek().type == Tok::Type::Star) {
      take();
      auto rhs = factor();
      if (!rhs) return nullptr;
      lhs = SeqExpr::make_mul(lhs, rhs);
    }
    return lhs;
  }

  SeqExprPtr paren_expr() {
    if (!expect(Tok::Type::LP, "'('")) return nullptr;
    auto e = expr();
    if (!e) return nullptr;
    if (!expect(Tok::Type::RP, "')'")) return nullptr;
    return e;
  }

  SeqExprPtr factor() {
    if (peek().type == Tok::Type::LP) return paren_expr();
    if (peek().type != Tok::Type::Ident) {
      err = "expected expression";
      return nullptr;
    }
    std::string id = take().text;
    std::string stem;
    int suffix;
    bool has_suffix;
    split_ident(id, stem, suffix, has_suffix);
    if (stem == "cst" && !has_suffix) {
      if (!expect(Tok::Type::LP, "'('")) return nullptr;
      auto r = rat_lit();
      if (!r) return nullptr;
      if (*r < 0) {
        err = "constants must be nonnegative";
        return nullptr;
      }
      if (!expect(Tok::Type::RP, "')'")) return nullptr;
      return SeqExpr::make_cst(*r);
    }
    if (stem == "n" && !has_suffix) return SeqExpr::make_n(0);
    if (stem == "x" && has_suffix) return SeqExpr::make_n(suffix);
    if (stem == "f" && !has_suffix) return SeqExpr::make_f();
    if (stem == "pop") {
      auto e = paren_expr();
      if (!e) return nullptr;
      return SeqExpr::make_pop(e, suffix);
    }
    if (stem == "push") {
      auto r = rat_lit();
      if (!r) return nullptr;
      auto e = paren_expr();
      if (!e) return nullptr;
      return SeqExpr::make_push(*r, e, suffix);
    }
    if (stem == "comp" && !has_suffix) {
      if (!expect(Tok::Type::LP, "'('")) return nullptr;
      auto outer = expr();
      if (!outer) return nullptr;
      if (!expect(Tok::Type::Comma, "','")) return nullptr;
      auto inner = expr();
      if (!inner) return nullptr;
      if (!expect(Tok::Type::RP, "')'")) return nullptr;
      return SeqExpr::make_comp(outer, inner);
    }
    if (stem == "max" && !has_suffix) {
      if (!expect(Tok::Type::LP, "'('")) return nullptr;
      auto l = expr();
      if (!l) return nullptr;
      if (!expect(Tok::Type::Comma, "','")) return nullptr;
      auto r = expr();
      if (!r) return nullptr;
      if (!expect(Tok::Type::RP, "')'")) return nullptr;
      return SeqExpr::make_max(l, r);
    }
    err = "unknown identifier '" + id + "'";
    return nullptr;
  }
};

// Highest axis index mentioned, and whether a composition appears.
void scan_expr(const SeqExpr& e, int& max_axis, bool& has_comp) {
  switch (e.kind) {
    case SeqExpr::Kind::N:
    case SeqExpr::Kind::Pop:
    case SeqExpr::Kind::Push:
      max_axis = std::max(max_axis, e.axis);
      break;
    case SeqExpr::Kind::Comp:
      has_comp = true;
      break;
    default:
      break;
  }
  if (e.a) scan_expr(*e.a, max_axis, has_comp);
  if (e.b) scan_expr(*e.b, max_axis, has_comp);
}

}  // namespace

std::string print_expr(const SeqExpr& e) {
  std::ostringstream os;
  print_rec(e, os, 0, false);
  return os.str();
}

std::string print_equation(const SeqEquation& eq) {
  std::ostringstream os;
  os << "arity " << eq.arity << ";\neq: " << print_expr(*eq.rhs) << ";\n";
  return os.str();
}

std::optional<SeqExprPtr> parse_expr(const std::string& text,
                                     std::string* err) {
  std::vector<Tok> toks;
  if (!tokenize(text, toks, err)) return std::nullopt;
  Parser p{toks};
  auto e = p.expr();
  if (!e || p.peek().type != Tok::Type::End) {
    if (err) *err = e ? "trailing input after expression" : p.err;
    return std::nullopt;
  }
  return e;
}

std::optional<SeqExprPtr> parse_seq(const std::string& text, int arity,
                                    std::string* err) {
  auto e = parse_expr(text, err);
  if (!e) return std::nullopt;
  int max_axis = 0;
  bool has_comp = false;
  scan_expr(**e, max_axis, has_comp);
  if (arity < 1 || max_axis >= arity) {
    if (err) *err = "axis index exceeds declared arity";
    return std::nullopt;
  }
  if (has_comp && arity != 1) {
    if (err) *err = "composition is only supported at arity 1";
    return std::nullopt;
  }
  return e;
}

std::optional<SeqEquation> parse_equation(const std::string& text,
                                          std::string* err) {
  std::vector<Tok> toks;
  if (!tokenize(text, toks, err)) return std::nullopt;
  Parser p{toks};
  SeqEquation eq;
  bool arity_given = false;
  if (p.peek().type == Tok::Type::Ident && p.peek().text == "arity") {
    p.take();
    if (p.peek().type != Tok::Type::Num) {
      if (err) *err = "expected arity value";
      return std::nullopt;
    }
    eq.arity = std::stoi(p.take().text);
    arity_given = true;
    if (!p.expect(Tok::Type::Semi, "';'")) {
      if (err) *err = p.err;
      return std::nullopt;
    }
  }
  if (!(p.peek().type == Tok::Type::Ident && p.peek().text == "eq")) {
    if (err) *err = "expected 'eq:'";
    return std::nullopt;
  }
  p.take();
  if (!p.expect(Tok::Type::Colon, "':'")) {
    if (err) *err = p.err;
    return std::nullopt;
  }
  eq.rhs = p.expr();
  if (!eq.rhs) {
    if (err) *err = p.err;
    return std::nullopt;
  }
  if (!p.expect(Tok::Type::Semi, "';'")) {
    if (err) *err = p.err;
    return std::nullopt;
  }
  if (p.peek().type != Tok::Type::End) {
    if (err) *err = "trailing input after equation";
    return std::nullopt;
  }
  int max_axis = 0;
  bool has_comp = false;
  scan_expr(*eq.rhs, max_axis, has_comp);
  if (!arity_given) eq.arity = max_axis + 1;
  if (eq.arity < 1 || max_axis >= eq.arity) {
    if (err) *err = "axis index exceeds declared arity";
    return std::nullopt;
  }
  if (has_comp && eq.arity != 1) {
    if (err) *err = "composition is only supported at arity 1";
    return std::nullopt;
  }
  return eq;
}

std::optional<SeqEquation> parse_equation_file(const std::string& path,
                                               std::string* err) {
  std::ifstream in(path);
  if (!in) {
    if (err) *err = "cannot open " + path;
    return std::nullopt;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_equation(ss.str(), err);
}

PrefixTable::PrefixTable(int arity, std::vector<long> extents)
    : arity_(arity), extents_(std::move(extents)) {
  long total = 1;
  for (long e : extents_) total *= e;
  cells_.assign(total, std::nullopt);
}

bool PrefixTable::in_box(const std::vector<long>& p) const {
  for (int i = 0; i < arity_; ++i)
    if (p[i] < 0 || p[i] >= extents_[i]) return false;
  return true;
}

long PrefixTable::index(const std::vector<long>& p) const {
  long idx = 0;
  for (int i = 0; i < arity_; ++i) idx = idx * extents_[i] + p[i];
  return idx;
}

std::optional<XReal> PrefixTable::get(const std::vector<long>& p) const {
  return cells_[index(p)];
}

void PrefixTable::set(const std::vector<long>& p, std::optional<XReal> v) {
  cells_[index(p)] = std::move(v);
}

std::vector<std::vector<long>> PrefixTable::points() const {
  std::vector<std::vector<long>> out;
  std::vector<long> p(arity_, 0);
  while (true) {
    out.push_back(p);
    int i = arity_ - 1;
    while (i >= 0) {
      if (++p[i] < extents_[i]) break;
      p[i] = 0;
      --i;
    }
    if (i < 0) break;
  }
  return out;
}

bool PrefixTable::operator==(const PrefixTable& o) const {
  return arity_ == o.arity_ && extents_ == o.extents_ && cells_ == o.cells_;
}

namespace {

constexpr long kCompPointCap = 1000000000000000L;  // avoids index overflow

std::optional<XReal> eval_expr(const SeqExpr& e, const PrefixTable& t,
                               std::vector<long>& p, OutOfBoxPolicy pol) {
  switch (e.kind) {
    case SeqExpr::Kind::Cst:
      return XReal(e.cst);
    case SeqExpr::Kind::N:
      return XReal(Rat(p[e.axis]));
    case SeqExpr::Kind::F: {
      if (!t.in_box(p))
        return pol == OutOfBoxPolicy::Bottom ? std::optional<XReal>(XReal(Rat(0)))
                                             : std::nullopt;
      auto v = t.get(p);
      if (!v)
        return pol == OutOfBoxPolicy::Bottom ? std::optional<XReal>(XReal(Rat(0)))
                                             : std::nullopt;
      return v;
    }
    case SeqExpr::Kind::Add: {
      auto l = eval_expr(*e.a, t, p, pol);
      auto r = eval_expr(*e.b, t, p, pol);
      if (!l || !r) return std::nullopt;
      return *l + *r;
    }
    case SeqExpr::Kind::Sub: {
      auto l = eval_expr(*e.a, t, p, pol);
      auto r = eval_expr(*e.b, t, p, pol);
      if (!l || !r) return std::nullopt;
      return monus(*l, *r);
    }
    case SeqExpr::Kind::Mul: {
      auto l = eval_expr(*e.a, t, p, pol);
      auto r = eval_expr(*e.b, t, p, pol);
      if (!l || !r) return std::nullopt;
      return *l * *r;
    }
    case SeqExpr::Kind::Max: {
      auto l = eval_expr(*e.a, t, p, pol);
      auto r = eval_expr(*e.b, t, p, pol);
      if (!l || !r) return std::nullopt;
      return xmax(*l, *r);
    }
    case SeqExpr::Kind::Pop: {
      ++p[e.axis];
      auto v = eval_expr(*e.a, t, p, pol);
      --p[e.axis];
      return v;
    }
    case SeqExpr::Kind::Push: {
      if (p[e.axis] == 0) return XReal(e.cst);
      --p[e.axis];
      auto v = eval_expr(*e.a, t, p, pol);
      ++p[e.axis];
      return v;
    }
    case SeqExpr::Kind::Comp: {
      auto inner = eval_expr(*e.b, t, p, pol);
      if (!inner) return std::nullopt;
      if (inner->is_inf())
        return pol == OutOfBoxPolicy::Bottom ? std::optional<XReal>(XReal::infinity())
                                             : std::nullopt;
      Int fl = rat_floor(inner->value());
      if (fl < 0) fl = 0;
      long m = fl > Int(kCompPointCap) ? kCompPointCap
                                       : static_cast<long>(fl);
      std::vector<long> q{m};
      return eval_expr(*e.a, t, q, pol);
    }
  }
  return std::nullopt;
}

}  // namespace

PrefixTable apply_operator(const SeqEquation& eq, const PrefixTable& t,
                           OutOfBoxPolicy policy) {
  PrefixTable out(t.arity(), t.extents());
  for (auto& p : t.points()) {
    std::vector<long> q = p;
    out.set(p, eval_expr(*eq.rhs, t, q, policy));
  }
  return out;
}

KleenePrefix concrete_lfp_prefix(const SeqEquation& eq,
                                 const std::vector<long>& extents,
                                 long max_sweeps) {
  PrefixTable t(eq.arity, extents);
  long cells = 1;
  for (long e : extents) cells *= e;
  if (max_sweeps <= 0) max_sweeps = 2 * cells + 64;
  for (auto& p : t.points()) t.set(p, XReal(Rat(0)));
  KleenePrefix out{t, false, 0};
  for (long i = 0; i < max_sweeps; ++i) {
    PrefixTable next = apply_operator(eq, out.table, OutOfBoxPolicy::Bottom);
    ++out.sweeps;
    if (next == out.table) {
      out.stabilized = true;
      break;
    }
    out.table = std::move(next);
  }
  return out;
}

bool check_totality(const SeqEquation& eq, const std::vector<long>& extents,
                    long max_iters) {
  PrefixTable t(eq.arity, extents);
  for (long i = 0; i < max_iters; ++i) {
    PrefixTable next = apply_operator(eq, t, OutOfBoxPolicy::Undefined);
    if (next == t) break;
    t = std::move(next);
  }
  for (auto& p : t.points())
    if (!t.get(p)) return false;
  return true;
}

}  // namespace recbound
