#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace matchlab {

inline constexpr int kUnmatched = -1;

// Lists hold dense indices. Anything not on a list is unacceptable.
using PreferenceList = std::vector<int>;
using PriorityList = std::vector<int>;

struct Market {
  std::vector<std::string> applicants;
  std::vector<std::string> institutions;
  std::vector<int> capacity;
  std::vector<PreferenceList> pref;  // indexed by applicant
  std::vector<PriorityList> prio;    // indexed by institution

  int num_applicants() const { return static_cast<int>(applicants.size()); }
  int num_institutions() const { return static_cast<int>(institutions.size()); }

  int add_applicant(std::string name);
  int add_institution(std::string name, int cap = 1);

  // -1 when absent.
  int find_applicant(std::string_view name) const;
  int find_institution(std::string_view name) const;
  // Throw std::out_of_range when absent.
  int applicant(std::string_view name) const;
  int institution(std::string_view name) const;

  bool has_unit_capacities() const;

  bool operator==(const Market&) const = default;
};

struct Matching {
  std::vector<int> to;  // applicant -> institution or kUnmatched

  Matching() = default;
  explicit Matching(int n) : to(n, kUnmatched) {}

  int operator[](int d) const { return to[d]; }
  int size() const { return static_cast<int>(to.size()); }

  bool operator==(const Matching&) const = default;
  auto operator<=>(const Matching&) const = default;
};

class MarketError : public std::runtime_error {
 public:
  enum class Kind { Syntax, Duplicate, UnknownId, Capacity, Invalid };
  MarketError(Kind kind, int line, int column, const std::string& what);
  Kind kind() const { return kind_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  Kind kind_;
  int line_;
  int column_;
};

// Checks ids in range, lists duplicate-free, capacities >= 1.
void validate_market(const Market& m);

Market parse_market(std::string_view text);
std::string serialize_market(const Market& m);

// rank[x] = position of x in list, or `unranked` when absent.
std::vector<int> rank_table(const std::vector<int>& list, int universe,
                            int unranked);

// Capacity respected; with `mutual`, every pair is acceptable on both sides.
bool is_feasible(const Market& m, const Matching& mu, bool mutual = true);

struct Expansion {
  Market market;
  std::vector<int> slot_parent;  // slot institution -> original institution
  std::vector<std::vector<int>> slots;  // original institution -> its slots
};

Expansion expand_capacities(const Market& m);
// Replace each institution by its slots in order; used to translate a
// single applicant's list into the expanded market.
PreferenceList expand_list(const Expansion& e, const PreferenceList& list);
Matching contract_matching(const Matching& mu,
                           const std::vector<int>& slot_parent);

inline constexpr std::uint64_t kDefaultCeiling = 10'000'000;

class CeilingExceeded : public std::runtime_error {
 public:
  CeilingExceeded(const std::string& what, std::uint64_t requested,
                  std::uint64_t ceiling);
  std::uint64_t requested() const { return requested_; }
  std::uint64_t ceiling() const { return ceiling_; }

 private:
  std::uint64_t requested_;
  std::uint64_t ceiling_;
};

// Smallest b with 2^b >= x.
int ceil_log2(std::uint64_t x);

// Number of ordered lists of length <= max_len drawn from n items.
std::uint64_t count_preferences(int n, int max_len);

// Ordered by length, then lexicographically by institution index.
std::vector<PreferenceList> enumerate_preferences(
    std::vector<int> institutions, int max_len,
    std::uint64_t ceiling = kDefaultCeiling);

// Strict total order matching enumerate_preferences.
bool canonical_less(const PreferenceList& a, const PreferenceList& b);

struct RandomMarketSpec {
  int applicants = 3;
  int institutions = 3;
  int cap_min = 1;
  int cap_max = 1;
  // Negative max means "all institutions" / "all applicants".
  int pref_min = 0;
  int pref_max = -1;
  int prio_min = 0;
  int prio_max = -1;
};

Market random_market(std::uint64_t seed, const RandomMarketSpec& spec);

}  // namespace matchlab
