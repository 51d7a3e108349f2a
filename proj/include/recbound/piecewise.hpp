#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "recbound/engine.hpp"
#include "recbound/rational.hpp"
#include "recbound/seq_lang.hpp"

namespace recbound {

// Signed affine form cst + sum_j coef_j * x_j, or +inf.  Unlike abstract
// coefficient vectors these carry signed coefficients, so comparisons
// between two forms depend on the region they are compared over.
struct AffForm {
  std::vector<Rat> coef;  // one entry per axis
  Rat cst;
  bool inf = false;

  static AffForm constant(int arity, Rat c);
  static AffForm var(int arity, int axis);
  static AffForm infinity(int arity);

  // Value at an integer point; requires a finite form.
  Rat eval(const std::vector<long>& p) const;

  bool operator==(const AffForm& o) const;
};

// Deterministic order: finite before infinite, then coefficients, then
// the constant.
bool form_less(const AffForm& a, const AffForm& b);

std::string form_to_string(const AffForm& f,
                           const std::vector<std::string>& names);

// Conjunction of constraints atom(x) >= 0 over integer points of the
// nonnegative orthant.
struct Guard {
  std::vector<AffForm> atoms;
  bool holds(const std::vector<long>& p) const;
};

struct PWPiece {
  Guard guard;
  SeqExprPtr body;
  std::string guard_text;
  std::string body_text;
};

// A recursive definition by cases over N^d: exactly one guard holds at
// every point, and the guarded body defines the value there.
struct PWEquation {
  int arity = 1;
  std::vector<std::string> var_names;
  std::vector<PWPiece> pieces;
};

// File format: '#' starts a comment; an optional "vars a, b, c;" line
// names the axes (default x0, x1, ...); then one "case <guard>: <body>;"
// per piece.  A guard is a conjunction ('&&') of comparisons between
// integer affine expressions; strict comparisons are tightened to
// inclusive ones over the integers.  Bodies use the sequence expression
// grammar, with declared variable names standing in for x<i>.  Pieces
// must partition [0..12]^d: an overlap or a gap is an error naming a
// witness point.
std::optional<PWEquation> parse_pw(const std::string& text,
                                   std::string* err = nullptr);
std::optional<PWEquation> parse_pw_file(const std::string& path,
                                        std::string* err = nullptr);

// Feasibility of {rows >= 0, x >= 0} over the rationals by variable
// elimination.  Unknown is returned when the intermediate systems grow
// past row_cap.
enum class Feas { Infeasible, Feasible, Unknown };
Feas feasible(std::vector<AffForm> rows, int arity, long row_cap = 2048);

// True when u >= v at every integer point of g (plus x >= 0): the
// violating system g /\ (v - u > 0) is refuted by rational variable
// elimination.  Inconclusive outcomes (rational-feasible violations,
// including ones with no integer witness, or elimination blowup) are
// conservatively "not dominant".  Throws when the variable budget (4)
// is exceeded.
bool dominance_on(const Guard& g, const AffForm& u, const AffForm& v);

// Exhaustive disjointness / coverage check of the pieces on [0..G]^d.
struct PartitionReport {
  bool disjoint = true;
  bool covers = true;
  std::vector<long> overlap_witness, gap_witness;
  int piece_a = -1, piece_b = -1;  // overlapping pair, when any
};
PartitionReport check_partition(const PWEquation& pw, long G = 12);

// Where a recursive read shifted by delta from inside `piece` can land:
// for each target piece, the sub-guard conjoins the piece guard with the
// target guard at the shifted point; refuted sub-guards are dropped.
struct Interface {
  Guard sub_guard;
  int target;
};
std::vector<Interface> interfaces(const PWEquation& pw, int piece,
                                  const std::vector<long>& delta);

// Upper bound valid on one piece: pointwise minimum of the forms; the
// empty set is no bound (+inf).
struct FormSet {
  std::vector<AffForm> forms;
  bool operator==(const FormSet& o) const { return forms == o.forms; }
};

// Per-piece bounds, indexed like PWEquation::pieces.
using PWValue = std::vector<FormSet>;

// Body bound valid on one sub-region of a piece, determined by which
// piece each recursive read lands in.
struct SubResult {
  Guard region;  // piece guard + landing guards at the shifted points
  FormSet val;
};

// One abstract step of a piece against per-piece bounds: the body is
// evaluated once per feasible assignment of recursive reads to landing
// pieces.
std::vector<SubResult> pw_step_piece(const PWEquation& pw, int piece,
                                     const PWValue& bounds,
                                     std::vector<std::string>* warnings = nullptr);

// Single form set dominating every sub-result on its own region.
// Candidates are drawn from the sub-result forms, their coefficient-wise
// maxima, and ramp interpolants built from sub-region rows; a candidate
// is kept only when it provably dominates every sub-result, and the
// coefficient-wise maximum over everything is the always-valid fallback.
FormSet merge_piece(const std::vector<SubResult>& subs, const Guard& target,
                    int arity, std::size_t max_forms = 4,
                    std::vector<std::string>* warnings = nullptr);

// One abstract step of the whole equation: per piece, sub-results then
// merge.
PWValue pw_abstract_step(const PWEquation& pw, const PWValue& bounds,
                         std::vector<std::string>* warnings = nullptr);

struct PWAnalysis {
  PWValue bounds;  // one entry per piece
  Status status = Status::Diverged;
  long iters = 0;
  bool widened = false;
  std::vector<PWValue> trace;  // merged step result, per iteration
  std::vector<std::string> warnings;
  PartitionReport partition;
};

// Iterates the abstract step with threshold widening on the constants of
// forms whose linear parts repeat; the piece structure itself is never
// widened.  The final bounds are re-checked with one unwidened step;
// when that certificate fails the bounds are compared against the grid
// oracle instead.
PWAnalysis analyze_pw(const PWEquation& pw, const WideningCfg& cfg = {});

// One application of the piecewise operator to a table: every cell is
// re-evaluated through its piece's body, reads outside the box taking 0.
// Cells covered by no piece evaluate to 0.
PrefixTable pw_apply_operator(const PWEquation& pw, const PrefixTable& t);

// Ascending Kleene iteration of pw_apply_operator on [0..G]^d from the
// all-zero table.
PrefixTable pw_concrete_prefix(const PWEquation& pw, long G,
                               long max_sweeps = 0);

struct PWGridCheck {
  bool sound = true;
  bool exact = true;
  long violations = 0;
  std::vector<long> first_violation;
};

// Compares per-piece bounds against the grid oracle at every covered
// point of [0..G]^d.
PWGridCheck pw_verify_grid(const PWEquation& pw, const PWValue& bounds,
                           long G);

}  // namespace recbound
