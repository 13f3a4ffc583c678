#include "matchlab/unrej_graph.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "engines.hpp"

namespace matchlab {

int UnrejGraph::find(UnrejNode v) const {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), v);
  return it != nodes.end() && *it == v ? static_cast<int>(it - nodes.begin())
                                       : -1;
}

std::vector<int> UnrejGraph::chain_from(int v) const {
  std::vector<int> out;
  while (v >= 0) {
    if (out.size() > nodes.size()) {
      throw std::logic_error("un-rejection graph has a cycle");
    }
    out.push_back(v);
    v = successor[v];
  }
  return out;
}

bool UnrejGraph::reaches(int from, int to) const {
  std::size_t steps = 0;
  for (int v = from; v >= 0; v = successor[v]) {
    if (v == to) return true;
    if (++steps > nodes.size()) {
      throw std::logic_error("un-rejection graph has a cycle");
    }
  }
  return false;
}

int UnrejGraph::num_edges() const {
  return static_cast<int>(
      std::count_if(successor.begin(), successor.end(), [](int s) { return s >= 0; }));
}

Chain compute_chain(const Market& m, const std::vector<int>& S, int d, int h) {
  Market probe = m;
  probe.pref[d] = {h};
  std::vector<int> others;
  std::vector<char> in_s(m.num_applicants(), 0);
  for (int s : S) {
    in_s[s] = 1;
    if (s != d) others.push_back(s);
  }
  detail::IpdaEngine eng(probe, others);
  eng.run(Policy::lowest(), nullptr);
  if (eng.holder(d) != h) return {};

  Chain chain{{d, h}};
  eng.release(d);
  eng.run_single_proposer([&](const Proposal& p) {
    if (in_s[p.receiver]) chain.push_back({p.receiver, p.proposer});
  });
  return chain;
}

UnrejGraph build_unrejgr(const Market& m, const std::vector<int>& S) {
  if (S.empty() || S.size() > 2) {
    throw std::invalid_argument("un-rejection graph needs |S| in {1,2}");
  }
  std::vector<Chain> chains;
  for (int d : S) {
    for (int h = 0; h < m.num_institutions(); ++h) {
      Chain c = compute_chain(m, S, d, h);
      if (!c.empty()) chains.push_back(std::move(c));
    }
  }
  UnrejGraph g;
  g.S = S;
  g.num_institutions = m.num_institutions();
  for (const auto& c : chains) g.nodes.insert(g.nodes.end(), c.begin(), c.end());
  std::sort(g.nodes.begin(), g.nodes.end());
  g.nodes.erase(std::unique(g.nodes.begin(), g.nodes.end()), g.nodes.end());
  g.successor.assign(g.nodes.size(), -1);
  for (const auto& c : chains) {
    for (std::size_t i = 0; i + 1 < c.size(); ++i) {
      int v = g.find(c[i]);
      int w = g.find(c[i + 1]);
      if (g.successor[v] >= 0 && g.successor[v] != w) {
        throw std::logic_error("un-rejection node with two successors");
      }
      g.successor[v] = w;
    }
  }
  return g;
}

StabResult stab_and_unrej(const UnrejGraph& g, int d, const PreferenceList& P_d) {
  std::vector<int> own;
  for (int v = 0; v < static_cast<int>(g.nodes.size()); ++v) {
    if (g.nodes[v].applicant == d) own.push_back(v);
  }
  StabResult r;
  for (int v : own) {
    int h = g.nodes[v].institution;
    if (std::find(P_d.begin(), P_d.end(), h) == P_d.end()) continue;
    bool ok = true;
    for (int w : own) {
      if (w == v || g.reaches(v, w)) continue;
      if (!prefers(P_d, h, g.nodes[w].institution)) {
        ok = false;
        break;
      }
    }
    if (ok) r.stab.push_back(v);
  }
  // Along a path, earlier nodes reach more of the set.
  std::vector<std::pair<int, int>> keyed;
  for (int a : r.stab) {
    int reach = 0;
    for (int b : r.stab) reach += (a != b && g.reaches(a, b)) ? 1 : 0;
    keyed.emplace_back(-reach, a);
  }
  std::sort(keyed.begin(), keyed.end());
  for (std::size_t i = 0; i < keyed.size(); ++i) r.stab[i] = keyed[i].second;
  for (std::size_t i = 0; i + 1 < r.stab.size(); ++i) {
    if (!g.reaches(r.stab[i], r.stab[i + 1])) {
      throw std::logic_error("stab set is not a path");
    }
  }
  if (!r.stab.empty()) r.unrej = r.stab.front();
  return r;
}

Menu menu_from_graph(const UnrejGraph& g, int d_dagger,
                     const PreferenceList& P_star) {
  if (g.S.size() != 2) throw std::invalid_argument("menu_from_graph needs |S| = 2");
  int d_star = g.S[0] == d_dagger ? g.S[1] : g.S[0];
  StabResult r = stab_and_unrej(g, d_star, P_star);
  std::vector<char> excluded(g.nodes.size(), 0);
  if (r.unrej >= 0) {
    for (int v : g.chain_from(r.unrej)) excluded[v] = 1;
  }
  Menu menu;
  for (int v = 0; v < static_cast<int>(g.nodes.size()); ++v) {
    if (g.nodes[v].applicant == d_dagger && !excluded[v]) {
      menu.push_back(g.nodes[v].institution);
    }
  }
  std::sort(menu.begin(), menu.end());
  return menu;
}

int match_from_graph(const UnrejGraph& g, int d, const PreferenceList& P_d) {
  StabResult r = stab_and_unrej(g, d, P_d);
  return r.unrej < 0 ? kUnmatched : g.nodes[r.unrej].institution;
}

std::vector<std::pair<int, int>> pairwise_menu(const UnrejGraph& g) {
  if (g.S.size() != 2) throw std::invalid_argument("pairwise_menu needs |S| = 2");
  std::vector<std::pair<int, int>> out;
  const int n = static_cast<int>(g.nodes.size());
  for (int v = 0; v < n; ++v) {
    if (g.nodes[v].applicant != g.S[0]) continue;
    for (int w = 0; w < n; ++w) {
      if (g.nodes[w].applicant != g.S[1]) continue;
      if (g.reaches(v, w) || g.reaches(w, v)) continue;
      out.emplace_back(g.nodes[v].institution, g.nodes[w].institution);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

int applicant_optimal_description(const Market& m, int d) {
  return list_max(m.pref[d], menu_via_ipda(m, d));
}

std::uint64_t encoded_bits(const UnrejGraph& g) {
  std::uint64_t slots = g.S.size() * static_cast<std::uint64_t>(g.num_institutions);
  return slots * static_cast<std::uint64_t>(ceil_log2(slots + 2));
}

std::string to_dot(const UnrejGraph& g, const Market& m) {
  std::ostringstream out;
  auto label = [&](int v) {
    return "\"" + m.applicants[g.nodes[v].applicant] + "," +
           m.institutions[g.nodes[v].institution] + "\"";
  };
  out << "digraph unrejgr {\n";
  for (int v = 0; v < static_cast<int>(g.nodes.size()); ++v) {
    out << "  " << label(v);
    if (g.successor[v] >= 0) out << " -> " << label(g.successor[v]);
    out << ";\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace matchlab
