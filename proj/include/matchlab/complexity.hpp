#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "matchlab/constructions.hpp"
#include "matchlab/market.hpp"
#include "matchlab/mechanisms.hpp"
#include "matchlab/menus.hpp"

namespace matchlab {

enum class MeasureId {
  TYPE_TO_MATCHING,
  TYPE_TO_OWN_MATCH,
  TYPE_TO_ANOTHERS_MATCH,
  TYPE_TO_MENU,
  ALL_MENUS,
  ALL_TYPE_TO_ONE_MATCH,
};

std::string to_string(MeasureId m);
MeasureId parse_measure(const std::string& name);

// d_star: the applicant whose report is the function's input.
// d_dagger: the applicant whose match or menu is its output.
struct MeasureArgs {
  int d_star = -1;
  int d_dagger = -1;
};

// Serialized outputs, one per witness list in canonical order.
using Fingerprint = std::string;

// Witness lists over all institutions of m.
std::vector<PreferenceList> witness_lists(const Market& m, WitnessDomain domain,
                                          std::uint64_t ceiling = kDefaultCeiling);

// Menus inside a fingerprint always use singleton witnesses; `domain`
// governs the quantified-over report.
Fingerprint fingerprint(MeasureId measure, Mechanism mech, const Market& profile,
                        const MeasureArgs& args,
                        WitnessDomain domain = WitnessDomain::Singletons,
                        std::uint64_t ceiling = kDefaultCeiling);

struct CountResult {
  std::uint64_t count = 0;
  double log2 = 0;
  std::uint64_t family_size = 0;
  std::uint64_t domain_size = 0;
};

CountResult count_distinct(MeasureId measure, Mechanism mech,
                           const std::vector<Market>& family,
                           const MeasureArgs& args,
                           WitnessDomain domain = WitnessDomain::Singletons,
                           int jobs = 1, std::uint64_t ceiling = kDefaultCeiling);

// Every combination of lists (all lengths) for the applicants in `vary`.
std::vector<Market> exhaustive_profiles(const Market& skeleton,
                                        const std::vector<int>& vary,
                                        std::uint64_t ceiling = kDefaultCeiling);

MeasureId family_default_measure(FamilyId f);

// Outputs of the instance over its scenario domain.
Fingerprint family_fingerprint(const ConstructionInstance& inst,
                               MeasureId measure, Mechanism mech);

struct DistinctnessResult {
  std::uint64_t classes = 0;
  std::uint64_t expected = 0;
  bool pass() const { return classes == expected; }
};

// Fingerprints every bit profile of the family.
DistinctnessResult verify_family_distinctness(
    FamilyId family, int k, MeasureId measure, int jobs = 1,
    std::uint64_t ceiling = kDefaultCeiling);

struct PairwiseResult {
  std::uint64_t pairs = 0;
  std::uint64_t distinguished = 0;
  bool pass() const { return pairs == distinguished; }
};

// Seeded sample of distinct profile pairs, each searched for a scenario
// that tells them apart. pairs == 0 means every pair.
PairwiseResult pairwise_distinctness(FamilyId family, int k, MeasureId measure,
                                     std::uint64_t pairs, std::uint64_t seed,
                                     int jobs = 1);

// Lists of everyone but the first dictator, filtered and cut to length 2.
struct CompactSDRep {
  std::vector<int> order;
  std::vector<PreferenceList> p_small;  // indexed by applicant
};

// Unit capacities only; the first applicant of `order` is the free one.
CompactSDRep sd_compact_representation(const Market& m, const std::vector<int>& order);
// m with every applicant but the first replaced by the compact lists.
Market apply_compact(const Market& m, const CompactSDRep& rep);

// S[t] holds the institutions added to the last dictator's menu when the
// distinguished applicant picks rotation institution t instead of t-1.
struct SDRotMenuRep {
  std::vector<Menu> S;
};

SDRotMenuRep sdrot_menu_representation(const Market& m);
// Union of S[0..t] for pick t; empty for no pick.
Menu sdrot_menu_from_rep(const SDRotMenuRep& rep, int pick);
// Last dictator's menu when the dictatorship starts at dictator `start`.
Menu sd_suffix_menu(const Market& m, int start);

struct TypeToMenuWitness {
  std::uint64_t profiles = 0;
  std::uint64_t menu_functions = 0;
  std::uint64_t graphs = 0;
  std::uint64_t checks = 0;
  std::uint64_t mismatches = 0;  // menu_from_graph vs menu_brute
  std::uint64_t max_nodes = 0;
  // Profiles whose graph was seen before with a different menu function.
  std::uint64_t graph_conflicts = 0;
};

// All lists for applicants outside S = {d_star, d_dagger}; every d_star
// report is compared against the un-rejection graph.
TypeToMenuWitness type_to_menu_da_witness(const Market& skeleton, int d_star,
                                          int d_dagger, int jobs = 1,
                                          std::uint64_t ceiling = kDefaultCeiling);

}  // namespace matchlab
