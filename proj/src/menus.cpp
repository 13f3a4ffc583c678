#include "matchlab/menus.hpp"

#include <algorithm>
#include <set>

namespace matchlab {

namespace {

// Listed entries first, then the empty match, then everything unlisted.
int order_key(const std::vector<int>& list, int x) {
  const int n = static_cast<int>(list.size());
  if (x == kUnmatched) return n;
  auto it = std::find(list.begin(), list.end(), x);
  return it == list.end() ? n + 1 : static_cast<int>(it - list.begin());
}

}  // namespace

int list_rank(const PreferenceList& list, int h) {
  auto it = std::find(list.begin(), list.end(), h);
  return static_cast<int>(it - list.begin());
}

bool prefers(const PreferenceList& list, int a, int b) {
  return order_key(list, a) < order_key(list, b);
}

int list_max(const PreferenceList& list, const std::vector<int>& options) {
  for (int h : list) {
    if (std::find(options.begin(), options.end(), h) != options.end()) return h;
  }
  return kUnmatched;
}

std::vector<BlockingPair> find_blocking_pairs(const Market& m,
                                              const Matching& mu) {
  std::vector<std::vector<int>> members(m.num_institutions());
  for (int d = 0; d < mu.size(); ++d) {
    if (mu[d] != kUnmatched) members[mu[d]].push_back(d);
  }
  std::vector<BlockingPair> out;
  for (int d = 0; d < m.num_applicants(); ++d) {
    for (int h : m.pref[d]) {
      if (h == mu[d]) break;  // everything further down is worse
      const auto& q = m.prio[h];
      bool blocks = false;
      if (static_cast<int>(members[h].size()) < m.capacity[h]) {
        blocks = std::find(q.begin(), q.end(), d) != q.end();
      } else {
        for (int other : members[h]) {
          if (prefers(q, d, other)) {
            blocks = true;
            break;
          }
        }
      }
      if (blocks) out.push_back({d, h});
    }
  }
  return out;
}

bool is_stable(const Market& m, const Matching& mu) {
  return find_blocking_pairs(m, mu).empty();
}

namespace {

struct StableSearch {
  const Market& m;
  std::uint64_t ceiling;
  std::uint64_t visited = 0;
  Matching cur;
  std::vector<int> load;
  std::vector<Matching> out;

  bool acceptable_to(int h, int d) const {
    const auto& q = m.prio[h];
    return std::find(q.begin(), q.end(), d) != q.end();
  }

  void visit(int d) {
    if (d == m.num_applicants()) {
      if (++visited > ceiling) {
        throw CeilingExceeded("feasible matchings", visited, ceiling);
      }
      if (is_stable(m, cur)) out.push_back(cur);
      return;
    }
    cur.to[d] = kUnmatched;
    visit(d + 1);
    for (int h : m.pref[d]) {
      if (load[h] >= m.capacity[h] || !acceptable_to(h, d)) continue;
      ++load[h];
      cur.to[d] = h;
      visit(d + 1);
      --load[h];
    }
    cur.to[d] = kUnmatched;
  }
};

}  // namespace

std::vector<Matching> enumerate_stable_matchings(const Market& m,
                                                 std::uint64_t ceiling) {
  StableSearch s{m, ceiling, 0, Matching(m.num_applicants()),
                 std::vector<int>(m.num_institutions(), 0), {}};
  s.visit(0);
  std::sort(s.out.begin(), s.out.end());
  return s.out;
}

Menu menu_brute(Mechanism mech, const Market& m, int d, WitnessDomain domain,
                std::uint64_t ceiling) {
  std::vector<PreferenceList> witnesses;
  if (domain == WitnessDomain::Full) {
    std::vector<int> all(m.num_institutions());
    for (int h = 0; h < m.num_institutions(); ++h) all[h] = h;
    witnesses = enumerate_preferences(all, m.num_institutions(), ceiling);
  } else {
    witnesses.emplace_back();
    for (int h = 0; h < m.num_institutions(); ++h) witnesses.push_back({h});
  }
  Market probe = m;
  std::set<int> menu;
  for (const auto& w : witnesses) {
    probe.pref[d] = w;
    int h = run_mechanism(mech, probe)[d];
    if (h != kUnmatched) menu.insert(h);
  }
  return Menu(menu.begin(), menu.end());
}

Menu menu_via_ipda(const Market& m, int d) {
  Outcome out = run_ipda(m, Policy::lowest(), {d});
  std::set<int> menu;
  for (const auto& p : out.trace.proposals) {
    if (p.receiver == d) menu.insert(p.proposer);
  }
  return Menu(menu.begin(), menu.end());
}

std::vector<int> stable_budget_set(const Market& m, const Matching& mu, int d) {
  std::vector<std::vector<int>> members(m.num_institutions());
  for (int a = 0; a < mu.size(); ++a) {
    if (mu[a] != kUnmatched) members[mu[a]].push_back(a);
  }
  std::vector<int> out;
  for (int h = 0; h < m.num_institutions(); ++h) {
    const auto& q = m.prio[h];
    bool ranked = std::find(q.begin(), q.end(), d) != q.end();
    if (static_cast<int>(members[h].size()) < m.capacity[h]) {
      if (ranked) out.push_back(h);
      continue;
    }
    int lowest = members[h].front();
    for (int a : members[h]) {
      if (prefers(q, lowest, a)) lowest = a;
    }
    // Weak comparison: the applicant holding the lowest seat clears it.
    if (ranked && (d == lowest || prefers(q, d, lowest))) out.push_back(h);
  }
  return out;
}

}  // namespace matchlab
