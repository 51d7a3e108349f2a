#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "recbound/rational.hpp"
#include "recbound/xreal.hpp"

namespace recbound {

// Right-hand side expression of a recursive sequence equation
//   f = lfp (lambda f. e)
// over multi-index sequences N^d -> N_inf.
struct SeqExpr;
using SeqExprPtr = std::shared_ptr<const SeqExpr>;

struct SeqExpr {
  enum class Kind { Cst, N, F, Add, Sub, Mul, Max, Pop, Push, Comp };

  Kind kind;
  Rat cst;            // Cst: constant value (nonnegative); Push: boundary value
  int axis = 0;       // N/Pop/Push: axis index; n is x0
  SeqExprPtr a, b;    // operands (Comp: a = outer, b = inner)

  static SeqExprPtr make_cst(Rat c);
  static SeqExprPtr make_n(int axis = 0);
  static SeqExprPtr make_f();
  static SeqExprPtr make_add(SeqExprPtr l, SeqExprPtr r);
  static SeqExprPtr make_sub(SeqExprPtr l, SeqExprPtr r);
  static SeqExprPtr make_mul(SeqExprPtr l, SeqExprPtr r);
  static SeqExprPtr make_max(SeqExprPtr l, SeqExprPtr r);
  static SeqExprPtr make_pop(SeqExprPtr e, int axis = 0);
  static SeqExprPtr make_push(Rat c, SeqExprPtr e, int axis = 0);
  static SeqExprPtr make_comp(SeqExprPtr outer, SeqExprPtr inner);
};

struct SeqEquation {
  int arity = 1;
  SeqExprPtr rhs;
};

// Round-trips through parse_equation / parse_expr.
std::string print_expr(const SeqExpr& e);
std::string print_equation(const SeqEquation& eq);

// Grammar (lowest to highest precedence, + - left associative,
// * binds tighter, also left associative):
//   expr   := term (('+' | '-') term)*
//   term   := factor ('*' factor)*
//   factor := 'cst' '(' rat ')' | 'n' | 'x'<i> | 'f'
//           | 'pop' '(' expr ')' | 'pop'<i> '(' expr ')'
//           | 'push' rat '(' expr ')' | 'push'<i> rat '(' expr ')'
//           | 'comp' '(' expr ',' expr ')'
//           | 'max' '(' expr ',' expr ')'
//           | '(' expr ')'
// 'n' is shorthand for 'x0'. A digit suffix on pop/push/x selects the axis.
std::optional<SeqExprPtr> parse_expr(const std::string& text,
                                     std::string* err = nullptr);

// Parses an expression and validates it against a fixed arity (axis
// references must stay below `arity`; comp needs arity 1).
std::optional<SeqExprPtr> parse_seq(const std::string& text, int arity,
                                    std::string* err = nullptr);

// Equation file: optional '#' comment lines, "arity <d>;" then
// "eq: <expr>;".  Without the header the arity is inferred as one more
// than the highest axis the expression mentions.
std::optional<SeqEquation> parse_equation(const std::string& text,
                                          std::string* err = nullptr);
std::optional<SeqEquation> parse_equation_file(const std::string& path,
                                               std::string* err = nullptr);

// How a read outside the stored prefix box behaves during evaluation.
enum class OutOfBoxPolicy {
  Bottom,     // reads 0, the least element of the value order
  Undefined,  // evaluation is undefined; value reported as missing
};

// Finite prefix of a sequence on the box [0..extent_0) x ... x [0..extent_{d-1}).
// Values are extended naturals; nullopt marks undefined entries.
class PrefixTable {
 public:
  PrefixTable(int arity, std::vector<long> extents);

  int arity() const { return arity_; }
  const std::vector<long>& extents() const { return extents_; }
  bool in_box(const std::vector<long>& p) const;

  std::optional<XReal> get(const std::vector<long>& p) const;
  void set(const std::vector<long>& p, std::optional<XReal> v);

  // All points of the box in lexicographic order.
  std::vector<std::vector<long>> points() const;

  bool operator==(const PrefixTable& o) const;

 private:
  long index(const std::vector<long>& p) const;
  int arity_;
  std::vector<long> extents_;
  std::vector<std::optional<XReal>> cells_;
};

// One application of the equation's operator to a table: evaluates the
// right side at every point of the box.  Reads that land outside the box
// follow the policy: Bottom treats them as 0, Undefined poisons the cell.
// Composition floors the inner value and clamps at 0; an infinite inner
// value yields +inf under Bottom and an undefined cell under Undefined.
PrefixTable apply_operator(const SeqEquation& eq, const PrefixTable& t,
                           OutOfBoxPolicy policy = OutOfBoxPolicy::Bottom);

// Ascending Kleene iteration of apply_operator from the all-zero table
// under the Bottom policy.  The result approximates the least solution
// from below on the box; for boundary-anchored recursions whose reads
// strictly decrease an index the prefix is exact and stabilizes within
// one sweep per diagonal.  `stabilized` is false when the sweep budget
// ran out first, in which case `table` is the last (still sound, still
// from-below) iterate.
struct KleenePrefix {
  PrefixTable table;
  bool stabilized = false;
  long sweeps = 0;
};
KleenePrefix concrete_lfp_prefix(const SeqEquation& eq,
                                 const std::vector<long>& extents,
                                 long max_sweeps = 0);  // 0: 2*cells + 64

// True when every cell of the least fixpoint over the box is defined
// under the Undefined policy, taking reads outside the box as undefined.
// Conservative: a false result may be a box artifact, a true result is
// a proof for the box.
bool check_totality(const SeqEquation& eq, const std::vector<long>& extents,
                    long max_iters = 10000);

}  // namespace recbound
