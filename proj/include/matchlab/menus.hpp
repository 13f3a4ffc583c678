#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "matchlab/market.hpp"
#include "matchlab/mechanisms.hpp"

namespace matchlab {

// Sorted institution ids; the empty match is always implicitly available.
using Menu = std::vector<int>;

struct BlockingPair {
  int applicant;
  int institution;
  auto operator<=>(const BlockingPair&) const = default;
};

// All (d,h) with h above mu(d) on d's list and h either holding a free seat
// it would give d or holding someone it ranks below d.
std::vector<BlockingPair> find_blocking_pairs(const Market& m,
                                              const Matching& mu);
bool is_stable(const Market& m, const Matching& mu);

// Visits every mutually acceptable, capacity-feasible matching. Throws
// CeilingExceeded when more than `ceiling` are visited.
std::vector<Matching> enumerate_stable_matchings(
    const Market& m, std::uint64_t ceiling = kDefaultCeiling);

enum class WitnessDomain { Singletons, Full };

// Union of d's outcomes over the witness domain, holding the rest of the
// market fixed. Singletons means the empty list and every one-element list.
Menu menu_brute(Mechanism mech, const Market& m, int d,
                WitnessDomain domain = WitnessDomain::Singletons,
                std::uint64_t ceiling = kDefaultCeiling);

// Institutions that propose to d when IPDA runs with d rejecting everyone.
Menu menu_via_ipda(const Market& m, int d);

// Institutions with a free seat that rank d, plus full institutions whose
// lowest admitted applicant is no better than d.
std::vector<int> stable_budget_set(const Market& m, const Matching& mu, int d);

// Position of h on list, or list.size() when absent.
int list_rank(const PreferenceList& list, int h);
// True when a is strictly preferred to b under list; kUnmatched ranks
// just below the last listed entry.
bool prefers(const PreferenceList& list, int a, int b);
// The list's favourite element of `options`, or kUnmatched.
int list_max(const PreferenceList& list, const std::vector<int>& options);

}  // namespace matchlab
