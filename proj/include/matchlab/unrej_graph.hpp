#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "matchlab/market.hpp"
#include "matchlab/menus.hpp"

namespace matchlab {

struct UnrejNode {
  int applicant;
  int institution;
  auto operator<=>(const UnrejNode&) const = default;
};

using Chain = std::vector<UnrejNode>;

// Forest over (applicant in S, institution) pairs. Each node has at most
// one successor; v reaches w exactly when w lies on chain(v).
struct UnrejGraph {
  std::vector<int> S;
  int num_institutions = 0;
  std::vector<UnrejNode> nodes;  // sorted
  std::vector<int> successor;    // index into nodes, or -1

  int find(UnrejNode v) const;  // -1 when absent
  // Node indices reachable from v, v first, in path order.
  std::vector<int> chain_from(int v) const;
  bool reaches(int from, int to) const;
  int num_edges() const;
};

// The lists of S members in `m` are ignored.
Chain compute_chain(const Market& m, const std::vector<int>& S, int d, int h);
UnrejGraph build_unrejgr(const Market& m, const std::vector<int>& S);

struct StabResult {
  std::vector<int> stab;  // node indices, path order
  int unrej = -1;         // node index or -1
};

StabResult stab_and_unrej(const UnrejGraph& g, int d, const PreferenceList& P_d);

// S = {d_star, d_dagger}; the menu d_dagger faces in DA when d_star
// reports P_star.
Menu menu_from_graph(const UnrejGraph& g, int d_dagger,
                     const PreferenceList& P_star);

// S = {d}; d's IPDA match when she reports P_d.
int match_from_graph(const UnrejGraph& g, int d, const PreferenceList& P_d);

// S = {d_star, d_dagger}; pairs (h_star, h_dagger) that can be obtained
// simultaneously.
std::vector<std::pair<int, int>> pairwise_menu(const UnrejGraph& g);

// d's favourite institution among those proposing to her when she rejects
// everything in IPDA.
int applicant_optimal_description(const Market& m, int d);

// Fixed-width layout: one code per (S member, institution) slot naming
// "absent", "no successor" or the successor slot.
std::uint64_t encoded_bits(const UnrejGraph& g);

std::string to_dot(const UnrejGraph& g, const Market& m);

}  // namespace matchlab
