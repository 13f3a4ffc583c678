#include <set>

#include "doctest.h"
#include "matchlab/constructions.hpp"
#include "matchlab/unrej_graph.hpp"
#include "oracles.hpp"

using namespace matchlab;

namespace {

void check_structure(const UnrejGraph& g, const Market& m) {
  CHECK(g.successor.size() == g.nodes.size());
  CHECK(g.nodes.size() <= g.S.size() * static_cast<std::size_t>(m.num_institutions()));
  for (int v = 0; v < static_cast<int>(g.nodes.size()); ++v) {
    // Out-degree is at most one by representation; acyclicity means the
    // walk from v ends without revisiting v.
    const auto walk = g.chain_from(v);
    CHECK(std::set<int>(walk.begin(), walk.end()).size() == walk.size());
    for (int d : {g.nodes[v].applicant}) CHECK(std::find(g.S.begin(), g.S.end(), d) != g.S.end());
  }
}

void check_chain_suffix(const Market& m, const std::vector<int>& S) {
  for (int d : S) {
    for (int h = 0; h < m.num_institutions(); ++h) {
      const Chain c = compute_chain(m, S, d, h);
      for (std::size_t i = 1; i < c.size(); ++i) {
        const Chain tail = compute_chain(m, S, c[i].applicant, c[i].institution);
        CHECK(tail == Chain(c.begin() + static_cast<long>(i), c.end()));
      }
    }
  }
}

}  // namespace

TEST_SUITE("unrej_graph") {

TEST_CASE("single node chains") {
  const Market m = parse_market("applicants: d\ninstitutions: h g\nprio h: d\n");
  CHECK(compute_chain(m, {0}, 0, 0) == Chain{{0, 0}});
  CHECK(compute_chain(m, {0}, 0, 1).empty());
  const UnrejGraph g = build_unrejgr(m, {0});
  CHECK(g.nodes.size() == 1);
  CHECK(g.num_edges() == 0);
  CHECK(match_from_graph(g, 0, {}) == kUnmatched);
  CHECK(match_from_graph(g, 0, {0}) == 0);
}

TEST_CASE("empty graph") {
  const Market m = parse_market("applicants: a b\ninstitutions: h\n");
  const UnrejGraph g = build_unrejgr(m, {0, 1});
  CHECK(g.nodes.empty());
  const StabResult r = stab_and_unrej(g, 0, {0});
  CHECK(r.stab.empty());
  CHECK(r.unrej == -1);
  CHECK(pairwise_menu(g).empty());
  CHECK(menu_from_graph(g, 1, {}).empty());
}

TEST_CASE("primer market: graph menus equal brute-force menus") {
  const Market m = example_market("unrej_primer");
  const int ds = m.applicant("d_star");
  const int dd = m.applicant("d_dag");
  const UnrejGraph g = build_unrejgr(m, {ds, dd});
  check_structure(g, m);
  check_chain_suffix(m, {ds, dd});
  CHECK(menu_from_graph(g, dd, {}).size() ==
        static_cast<std::size_t>(std::count_if(g.nodes.begin(), g.nodes.end(),
                                               [&](const UnrejNode& v) { return v.applicant == dd; })));
  Market probe = m;
  for (const auto& list : oracle::all_lists(m.num_institutions(), 3)) {
    probe.pref[ds] = list;
    CHECK(menu_from_graph(g, dd, list) == menu_brute(Mechanism::APDA, probe, dd));
  }
}

TEST_CASE("structure, chain suffix and stab paths on random markets") {
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const int na = 2 + static_cast<int>(seed % 5);
    const Market m = oracle::random_small(seed, na, 1 + static_cast<int>(seed / 5 % 6), 1);
    const std::vector<int> S = {0, 1};
    const UnrejGraph g = build_unrejgr(m, S);
    check_structure(g, m);
    check_chain_suffix(m, S);
    CHECK(encoded_bits(g) <= 2ULL * m.num_institutions() *
                                 (ceil_log2(m.num_institutions()) + ceil_log2(2ULL * m.num_institutions() + 1)));
    for (const auto& list : {m.pref[0], m.pref[1], PreferenceList{}}) {
      const StabResult r = stab_and_unrej(g, 0, list);
      for (std::size_t i = 0; i + 1 < r.stab.size(); ++i) CHECK(g.reaches(r.stab[i], r.stab[i + 1]));
      if (!r.stab.empty()) CHECK(r.unrej == r.stab.front());
    }
  }
}

TEST_CASE("match_from_graph equals the ipda match") {
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const Market m = oracle::random_small(seed, 1 + seed % 6, 1 + seed / 6 % 6, 1);
    const UnrejGraph g = build_unrejgr(m, {0});
    CHECK(match_from_graph(g, 0, m.pref[0]) == run_mechanism(Mechanism::IPDA, m)[0]);
    CHECK(match_from_graph(g, 0, {}) == kUnmatched);
  }
}

TEST_CASE("menu_from_graph on random five-applicant markets") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Market m = oracle::random_small(seed, 5, 2 + seed % 4, 1);
    const UnrejGraph g = build_unrejgr(m, {0, 1});
    const auto lists = oracle::all_lists(m.num_institutions(), m.num_institutions());
    Market probe = m;
    for (int t = 0; t < 20; ++t) {
      const auto& list = lists[(seed * 31 + t * 7) % lists.size()];
      probe.pref[0] = list;
      CHECK(menu_from_graph(g, 1, list) == menu_brute(Mechanism::APDA, probe, 1));
    }
  }
}

TEST_CASE("pairwise menu equals achievable pairs") {
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    const Market m = oracle::random_small(seed, 3, 3, 1);
    const UnrejGraph g = build_unrejgr(m, {0, 1});
    std::set<std::pair<int, int>> brute;
    Market probe = m;
    for (const auto& a : oracle::all_lists(3, 3)) {
      for (const auto& b : oracle::all_lists(3, 3)) {
        probe.pref[0] = a;
        probe.pref[1] = b;
        const Matching mu = oracle::applicant_proposing(probe);
        if (mu[0] != kUnmatched && mu[1] != kUnmatched) brute.emplace(mu[0], mu[1]);
      }
    }
    const auto got = pairwise_menu(g);
    CHECK(std::vector<std::pair<int, int>>(brute.begin(), brute.end()) == got);
    for (auto [a, b] : got) CHECK(a != b);
  }
}

TEST_CASE("applicant-optimal description") {
  const Market ex = example_market("budget_vs_menu");
  CHECK(applicant_optimal_description(ex, ex.applicant("d1")) == ex.institution("h1"));
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const Market m = oracle::random_small(seed, 1 + seed % 5, 1 + seed / 5 % 5, 1);
    const Matching mu = oracle::applicant_proposing(m);
    std::vector<int> desc(m.num_applicants());
    for (int d = 0; d < m.num_applicants(); ++d) {
      desc[d] = applicant_optimal_description(m, d);
      CHECK(desc[d] == mu[d]);
    }
    for (int a = 0; a < m.num_applicants(); ++a) {
      for (int b = a + 1; b < m.num_applicants(); ++b) {
        if (desc[a] != kUnmatched && desc[b] != kUnmatched) CHECK(desc[a] != desc[b]);
      }
    }
  }
}

TEST_CASE("dot output names nodes and edges") {
  const Market m = example_market("unrej_primer");
  const UnrejGraph g = build_unrejgr(m, {0, 1});
  const std::string dot = to_dot(g, m);
  CHECK(dot.rfind("digraph", 0) == 0);
  CHECK(static_cast<int>(std::count(dot.begin(), dot.end(), '>')) == g.num_edges());
}

}  // TEST_SUITE
