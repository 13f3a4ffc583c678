#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "matchlab/market.hpp"

namespace matchlab {

enum class PolicyKind { LowestIndex, HighestIndex, SeededRandom };

// Chooses which proposer moves next (DA) or which cycle clears next (TTC).
struct Policy {
  PolicyKind kind = PolicyKind::LowestIndex;
  std::uint64_t seed = 0;

  static Policy lowest() { return {}; }
  static Policy highest() { return {PolicyKind::HighestIndex, 0}; }
  static Policy random(std::uint64_t seed) {
    return {PolicyKind::SeededRandom, seed};
  }
};

struct Proposal {
  int proposer;
  int receiver;
  bool accepted;  // tentatively held after this event
};

struct CycleEvent {
  std::vector<std::pair<int, int>> pairs;  // (applicant, institution)
};

struct ExecutionTrace {
  bool institution_proposing = false;
  std::vector<Proposal> proposals;
  std::vector<CycleEvent> cycles;
};

struct Outcome {
  Matching matching;
  ExecutionTrace trace;
};

enum class Mechanism { SD, SDRot, TTC, APDA, IPDA };

std::string to_string(Mechanism m);
Mechanism parse_mechanism(const std::string& name);

// Applicants absent from `order` stay unmatched.
Matching run_sd(const Market& m, const std::vector<int>& order);

// Market shape: applicant 0 is the distinguished applicant, applicants
// 1..n the dictators in order; institutions 0..n-1 are ordinary and the
// remaining r institutions, whose names start with "hrot", rotate the start.
// r must divide n; rotation institution t starts the dictatorship at
// dictator t*(n/r)+1, so r = n is the one-dictator-per-step variant and
// r = n/2 moves the start two dictators at a time.
bool has_sdrot_shape(const Market& m);
Matching run_sdrot(const Market& m);

// Trading semantics: an applicant receives the institution she points at,
// whether or not that institution ranks her.
Outcome run_ttc(const Market& m, Policy policy = {});
Outcome run_apda(const Market& m, Policy policy = {});
// Members of `reject_all` reject every proposal they receive.
Outcome run_ipda(const Market& m, Policy policy = {},
                 const std::vector<int>& reject_all = {});

// Matching only, no trace; SD uses declaration order.
Matching run_mechanism(Mechanism mech, const Market& m, Policy policy = {});

// Rebuilds the matching from the trace alone.
Matching replay_trace(const Market& m, const ExecutionTrace& trace);

}  // namespace matchlab
