#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "matchlab/market.hpp"
#include "matchlab/mechanisms.hpp"
#include "matchlab/menus.hpp"

namespace matchlab {

enum class FamilyId {
  SD_CASCADE,
  SDROT_TTM,
  TTC_TTM,
  IPDA_TTM,
  TTC_TYPE_TO_MENU,
  TTC_REPRESENTATION,
  DA_REPRESENTATION_LB,
  VERIF_LB,
  ALL_MENUS_DA,
  ALL_MENUS_TTC,
  ATTOM_SD,
};

std::string to_string(FamilyId f);
FamilyId parse_family(const std::string& name);
std::vector<FamilyId> all_families();

// Bit layouts, all 1-based in the formulas and row-major in storage:
//   SDROT_TTM, TTC_TTM    b_{i,j} for j <= i, index i(i-1)/2 + j-1
//   IPDA_TTM              b_{i,j}, index (i-1)k + j-1
//   TTC_REPRESENTATION    b_{i,j}, 0 = left, 1 = right
//   DA_REPRESENTATION_LB  b_i = 1 when d_i ranks h_i above the shared seat
//   VERIF_LB              b_i
//   TTC_TYPE_TO_MENU, ALL_MENUS_DA, ALL_MENUS_TTC, ATTOM_SD
//                         set bits: index (i-1)k + j-1 set when element j
//                         belongs to the i-th set
// TTC_TTM's k counts the left/right pairs, so it has 2k chooser applicants.
// SD_CASCADE's k is the number of applicants and takes no bits.
struct FamilyParams {
  int k = 2;
  std::vector<int> bits;
  // Optional for set families; when non-empty it overrides `bits`.
  // sets[i-1] lists the 1-based elements of the i-th set.
  std::vector<std::vector<int>> sets;
  // IPDA_TTM: the distinguished applicant ranks every rotation
  // institution instead of one.
  bool full_length_scenarios = false;
};

int family_bit_count(FamilyId f, int k);
// Minimum k the construction is defined for.
int family_min_k(FamilyId f);
// Mechanisms the family's characterization speaks about.
std::vector<Mechanism> family_mechanisms(FamilyId f);
// Bits as an integer, least significant bit first.
FamilyParams params_from_mask(FamilyId f, int k, std::uint64_t mask);

// The distinguished applicant's report in one case of the characterization.
// applicant < 0 means the fixed market is used as generated.
struct Scenario {
  int applicant = -1;
  PreferenceList list;
  std::string label;
};

struct ConstructionInstance {
  FamilyId family = FamilyId::SD_CASCADE;
  FamilyParams params;
  Market market;
  int free_applicant = -1;
  // Applicant whose match or menu the characterization reads off, when not the free one.
  int target_applicant = -1;
  std::vector<Scenario> scenarios;
};

// Throws std::invalid_argument on a dimension mismatch.
ConstructionInstance gen_construction(FamilyId family, const FamilyParams& params);
Market apply_scenario(const ConstructionInstance& inst, const Scenario& s);

struct Expectation {
  int applicant;
  int institution;  // may be kUnmatched
  bool matched;     // whether mu(applicant) == institution
};

struct Prediction {
  std::vector<Expectation> matches;
  int menu_applicant = -1;  // >= 0 when `menu` is predicted
  Menu menu;
};

// The characterization's formula; no mechanism is run. Throws std::out_of_range for a
// scenario outside the domain.
Prediction predicted_outcome(FamilyId family, const FamilyParams& params,
                             int scenario);

// Empty when the outcome of `mech` agrees with the prediction.
std::vector<std::string> check_prediction(const ConstructionInstance& inst,
                                          int scenario, Mechanism mech);

struct FamilyReport {
  FamilyId family;
  int k = 0;
  std::uint64_t instances = 0;
  std::uint64_t checks = 0;
  std::vector<std::string> mismatches;  // first entries only
  std::uint64_t mismatch_count = 0;
};

// Every bit profile, every scenario, every family mechanism.
FamilyReport validate_family(FamilyId family, int k, int jobs = 1,
                             std::uint64_t ceiling = kDefaultCeiling);

// Named markets from the worked examples.
std::vector<std::string> example_names();
Market example_market(std::string_view name);

}  // namespace matchlab
