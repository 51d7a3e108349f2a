#pragma once

#include <string>
#include <vector>

#include "recbound/domains.hpp"

namespace recbound {

struct WideningCfg {
  // Rungs a runaway coefficient is lifted to; past the last rung it goes
  // straight to infinity.
  std::vector<Rat> thresholds{Rat(0), Rat(1), Rat(2),  Rat(4),
                              Rat(8), Rat(16), Rat(32)};
  // A coefficient is lifted once it has grown for this many consecutive
  // iterations; 0 lifts every coefficient at every widening.
  int delay = 3;
  // Beyond this many generators the closest pair is joined.
  std::size_t max_gens = 4;
  // Stop as soon as a single widened generator verifies on its own.
  bool early_exit = true;
  long max_iters = 64;
};

enum class Status { ExactPostfix, WidenedPostfix, SampledOnly, Diverged };

std::string status_name(Status s);
int status_exit_code(Status s);

struct AnalysisResult {
  GenSet bound;
  Status status = Status::Diverged;
  long iters = 0;
  std::vector<GenSet> trace;  // iterates, starting from the zero bound
  std::vector<std::string> warnings;
};

// One application of the equation's right side with the recursion read from
// A; exact generator by generator because every operation distributes over
// the pointwise minimum the set denotes.
GenSet abstract_step(const SeqEquation& eq, const BasisId& basis,
                     const GenSet& A, std::vector<std::string>* warnings = nullptr);

struct WidenState {
  // Per generator slot of the previous iterate, per coefficient: how many
  // consecutive iterations that coefficient grew.
  std::vector<std::vector<int>> streaks;
};

// Join of prev and next, with coefficients that kept growing for `delay`
// iterations lifted to the next threshold rung, and the generator count
// capped by joining nearest pairs.  The result is above both arguments.
GenSet widen(const GenSet& prev, const GenSet& next, const WideningCfg& cfg,
             WidenState* state = nullptr, bool* lifted = nullptr);

AnalysisResult analyze(const SeqEquation& eq, const BasisId& basis,
                       const WideningCfg& cfg = {},
                       std::vector<long> fallback_box = {});

// Certificate check: one more step stays below A.  Complete over the affine
// basis, where every operation is tracked exactly.
bool verify_postfix_exact_affine(const SeqEquation& eq, const GenSet& A);
// Same check for any basis; a pass is a certificate, a failure may only
// mean lost precision.
bool verify_postfix_abstract(const SeqEquation& eq, const BasisId& basis,
                             const GenSet& A);

// Tabulates A on a box enlarged past the reach of the equation's shifts and
// checks one concrete step stays below it on the core box.
bool verify_postfix_sampled(const SeqEquation& eq, const GenSet& A,
                            const std::vector<long>& extents);

struct PrefixCheck {
  bool sound = true;  // A dominates the iterated lower table everywhere
  bool exact = true;  // A equals it everywhere
  long violations = 0;
  std::vector<long> first_violation;  // empty when sound
};

// Compares A against the concrete iteration prefix on the given box.
PrefixCheck verify_prefix_sampled(const SeqEquation& eq, const GenSet& A,
                                  const std::vector<long>& extents);

}  // namespace recbound
