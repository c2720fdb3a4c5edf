#pragma once
// The termination decision: guard tables, guessed leading terms, solver dispatch,
// the assumption check and witness handling.

#include "loopterm/sas.hpp"
#include "loopterm/simulator.hpp"

#include <optional>

namespace loopterm {

struct EngineConfig {
  std::vector<std::string> solver;  // empty: built-in fallback only
  long timeout_ms = 20000;
  long indep_cap = 30;
  Rational eps = Rational(1, 1000000000);
  long max_iter = 10000;
  unsigned long seed = 1;
  // Drop candidate leading terms whose non-oscillating part vanishes identically.
  bool prune_mean_zero = true;
  long max_guesses = 100000;
};

enum class Verdict { Nonterminating, Terminating, TerminatingUnderAssumption, Unknown };
std::string to_string(Verdict v);

enum class AssumptionStatus { Holds, Vacuous, Violated, Unverified };
std::string to_string(AssumptionStatus s);

struct AssumptionEntry {
  int table = 0;
  TermIndex term;
  AssumptionStatus status = AssumptionStatus::Unverified;
  std::string reason;
};

struct AssumptionCheck {
  std::vector<AssumptionEntry> entries;
  AssumptionStatus aggregate = AssumptionStatus::Vacuous;
};

AssumptionCheck check_assumption(const GuardAnalysis& ga, int nvars, const EngineConfig& cfg);

struct GuessRecord {
  std::vector<TermIndex> guess;  // one per table
  int constraints = 0;
  SolverOutcome outcome;
};

struct WitnessRecord {
  RationalVector x0;
  std::vector<TermIndex> guess;
  long checked = 0;            // simulated steps
  bool discrepancy = false;    // some guard failed within the budget
  long first_failure = -1;
  long shift = 0;              // steps skipped to reach a run that survived, if any
  bool shifted_survives = false;
};

// Bounded exact simulation of a model; a failure is reported with the first failing
// step and a retry from just past the last failure.
WitnessRecord witness_package(const RationalVector& x0, const std::vector<TermIndex>& guess, const LoopSpec& spec,
                              const EngineConfig& cfg);

struct EigenSummary {
  std::string factor;
  int multiplicity = 0;
  std::vector<std::string> roots;
  std::vector<std::string> arguments;
};

struct TableSummary {
  int guard = 0, residue = 1, period = 1;
  std::vector<std::string> moduli;
  int terms = 0;
  std::vector<TermIndex> candidates;
  int pruned = 0;
};

struct GuardSummary {
  int guard = 0;
  unsigned long period = 1;
  std::vector<std::string> classes;  // modulus and independent phases per class
};

struct Report {
  Verdict verdict = Verdict::Unknown;
  std::string reason;
  std::vector<std::string> vars;
  std::string charpoly;
  int shift = 0;
  std::vector<EigenSummary> eigen;
  std::vector<GuardSummary> guards;
  std::vector<TableSummary> tables;
  std::vector<std::string> torus;
  AssumptionCheck assumption;
  long guesses_total = 0;
  std::vector<GuessRecord> guesses;
  std::optional<WitnessRecord> witness;
  std::vector<std::pair<std::string, double>> timings;  // seconds per phase
};

Report analyze(const LoopSpec& spec, const EngineConfig& cfg);

// Candidate leading terms of a table after pruning, in the order they are tried.
std::vector<TermIndex> guess_candidates(const GuardTermTable& table, bool prune_mean_zero);

std::string render_human(const Report& r, bool timings);
std::string render_json(const Report& r, bool timings);

}  // namespace loopterm
