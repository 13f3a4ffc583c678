#include <cmath>
#include <set>

#include "doctest.h"
#include "matchlab/complexity.hpp"
#include "oracles.hpp"

using namespace matchlab;

namespace {

Market blank(int na, int ni) {
  Market m;
  for (int d = 0; d < na; ++d) m.add_applicant("d" + std::to_string(d + 1));
  for (int h = 0; h < ni; ++h) m.add_institution("h" + std::to_string(h + 1));
  return m;
}

std::vector<int> order_of(int n) {
  std::vector<int> o(n);
  for (int i = 0; i < n; ++i) o[i] = i;
  return o;
}

// SDrot market: d_star, n dictators, n ordinary and n rotation institutions.
Market sdrot_market(int n) {
  Market m;
  m.add_applicant("d_star");
  for (int d = 1; d <= n; ++d) m.add_applicant("d" + std::to_string(d));
  for (int h = 1; h <= n; ++h) m.add_institution("h" + std::to_string(h));
  for (int t = 1; t <= n; ++t) m.add_institution("hrot_" + std::to_string(t));
  return m;
}

// Last dictator's menu when dictators start..n go in order, using the
// serial dictatorship oracle and singleton reports.
std::set<int> oracle_suffix_menu(const Market& m, int start) {
  const int n = m.num_applicants() - 1;
  std::vector<int> order;
  for (int d = start; d <= n; ++d) order.push_back(d);
  Market probe = m;
  for (int h = n; h < m.num_institutions(); ++h) probe.capacity[h] = 0;
  std::set<int> menu;
  for (int h = 0; h < n; ++h) {
    probe.pref[n] = {h};
    if (oracle::serial_dictatorship(probe, order)[n] == h) menu.insert(h);
  }
  return menu;
}

}  // namespace

TEST_SUITE("complexity_lab") {

TEST_CASE("serial dictatorship with two applicants has five type-to-matching functions") {
  Market m = blank(2, 2);
  m.pref[0] = {0, 1};
  const auto family = exhaustive_profiles(m, {1});
  CHECK(family.size() == 5);
  for (WitnessDomain dom : {WitnessDomain::Singletons, WitnessDomain::Full}) {
    const CountResult r =
        count_distinct(MeasureId::TYPE_TO_MATCHING, Mechanism::SD, family, {0, -1}, dom);
    CHECK(r.count == 5);
    CHECK(r.family_size == 5);
    CHECK(r.log2 == doctest::Approx(std::log2(5.0)));
  }
}

TEST_CASE("family of size one") {
  const Market m = example_market("two_stable");
  const CountResult r = count_distinct(MeasureId::TYPE_TO_MENU, Mechanism::APDA, {m}, {0, 1});
  CHECK(r.count == 1);
  CHECK(r.log2 == 0.0);
}

TEST_CASE("fingerprints are deterministic and ignore unreachable institutions") {
  // h3 never ranks d1, and d2 never lists it, so under DA no report of d1
  // can make its priorities matter.
  Market a = blank(2, 3);
  a.pref[1] = {0, 1};
  a.prio = {{0, 1}, {1, 0}, {}};
  Market b = a;
  b.prio[2] = {1};
  for (Mechanism mech : {Mechanism::APDA, Mechanism::IPDA}) {
    const Fingerprint fa = fingerprint(MeasureId::TYPE_TO_MATCHING, mech, a, {0, -1},
                                       WitnessDomain::Full);
    CHECK(fa == fingerprint(MeasureId::TYPE_TO_MATCHING, mech, a, {0, -1}, WitnessDomain::Full));
    CHECK(fa == fingerprint(MeasureId::TYPE_TO_MATCHING, mech, b, {0, -1}, WitnessDomain::Full));
  }
}

TEST_CASE("sdrot distinctness") {
  auto r = verify_family_distinctness(FamilyId::SDROT_TTM, 2, MeasureId::TYPE_TO_MATCHING);
  CHECK(r.classes == 8);
  CHECK(r.expected == 8);
}

TEST_CASE("type-to-menu construction gives sixteen menu functions") {
  const auto r = verify_family_distinctness(FamilyId::TTC_TYPE_TO_MENU, 2,
                                            family_default_measure(FamilyId::TTC_TYPE_TO_MENU));
  CHECK(r.classes == 16);
  CHECK(r.pass());
  const auto p = pairwise_distinctness(FamilyId::TTC_TYPE_TO_MENU, 2, MeasureId::TYPE_TO_MENU, 0, 0);
  CHECK(p.pairs == 120);
  CHECK(p.pass());
}

TEST_CASE("ipda rotation construction distinctness") {
  const auto r = verify_family_distinctness(FamilyId::IPDA_TTM, 2, MeasureId::TYPE_TO_MATCHING);
  CHECK(r.classes == 16);
  CHECK(r.expected == 16);
  const auto p = pairwise_distinctness(FamilyId::IPDA_TTM, 3, MeasureId::TYPE_TO_MATCHING, 50, 7);
  CHECK(p.pairs == 50);
  CHECK(p.pass());
}

TEST_CASE("parallel counting matches sequential") {
  const auto one = verify_family_distinctness(FamilyId::ATTOM_SD, 2,
                                              MeasureId::ALL_TYPE_TO_ONE_MATCH, 1);
  const auto four = verify_family_distinctness(FamilyId::ATTOM_SD, 2,
                                               MeasureId::ALL_TYPE_TO_ONE_MATCH, 4);
  CHECK(one.classes == four.classes);
  CHECK(one.pass());
}

TEST_CASE("ceiling") {
  const Market m = blank(3, 5);
  CHECK_THROWS_AS(exhaustive_profiles(m, {0, 1, 2}, 1000), CeilingExceeded);
}

TEST_CASE("compact serial dictatorship example") {
  Market m = blank(3, 3);
  m.pref[1] = {0, 1, 2};
  m.pref[2] = {0, 1, 2};
  const CompactSDRep rep = sd_compact_representation(m, {0, 1, 2});
  CHECK(rep.p_small[1] == PreferenceList{0, 1});
  CHECK(rep.p_small[2] == PreferenceList{1, 2});
}

TEST_CASE("compact representation leaves short disjoint lists alone") {
  Market m = blank(3, 4);
  m.pref[1] = {1, 0};
  m.pref[2] = {2, 3};
  const CompactSDRep rep = sd_compact_representation(m, {0, 1, 2});
  CHECK(rep.p_small[1] == m.pref[1]);
  CHECK(rep.p_small[2] == m.pref[2]);
}

TEST_CASE("compact representation is equivalent for every first report") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const int n = 2 + static_cast<int>(seed % 3);
    Market m = oracle::random_small(seed, n, n);
    m.capacity.assign(n, 1);
    m.pref[0].clear();
    const auto order = order_of(n);
    const CompactSDRep rep = sd_compact_representation(m, order);
    for (int d = 1; d < n; ++d) CHECK(rep.p_small[d].size() <= 2);
    for (const auto& p1 : oracle::all_lists(n, n)) {
      Market full = m;
      full.pref[0] = p1;
      const Market small = apply_compact(full, rep);
      CHECK(small.pref[0] == p1);
      const Matching mu = oracle::serial_dictatorship(small, order);
      CHECK(mu == oracle::serial_dictatorship(full, order));
      for (int d = 1; d < n; ++d) {
        if (mu[d] != kUnmatched) CHECK(oracle::pos(rep.p_small[d], mu[d]) >= 0);
      }
    }
  }
}

TEST_CASE("sdrot two dictators") {
  Market m = sdrot_market(2);
  m.pref[1] = {0};
  const SDRotMenuRep rep = sdrot_menu_representation(m);
  REQUIRE(rep.S.size() == 2);
  CHECK(rep.S[0] == Menu{1});
  CHECK(rep.S[1] == Menu{0});
  CHECK(sdrot_menu_from_rep(rep, -1).empty());
  CHECK(sdrot_menu_from_rep(rep, 1) == Menu{0, 1});
}

TEST_CASE("sdrot union contract, exhaustive at three dictators") {
  const int n = 3;
  const auto lists = oracle::all_lists(n, n);
  Market m = sdrot_market(n);
  for (const auto& l1 : lists)
    for (const auto& l2 : lists) {
      m.pref[1] = l1;
      m.pref[2] = l2;
      m.pref[0].clear();
      const SDRotMenuRep rep = sdrot_menu_representation(m);
      std::set<int> seen;
      for (const auto& s : rep.S) {
        for (int h : s) CHECK(seen.insert(h).second);
      }
      for (int t = 0; t < n; ++t) {
        Market probe = m;
        probe.pref[0] = {n + t};
        const Menu brute = menu_brute(Mechanism::SDRot, probe, n);
        CHECK(brute == sdrot_menu_from_rep(rep, t));
        const std::set<int> o = oracle_suffix_menu(m, t + 1);
        CHECK(Menu(o.begin(), o.end()) == brute);
      }
    }
}

TEST_CASE("suffix menus grow as the start advances") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const int n = 2 + static_cast<int>(seed % 5);
    const Market r = oracle::random_small(seed, n, n);
    Market m = sdrot_market(n);
    for (int d = 1; d <= n; ++d) m.pref[d] = r.pref[d - 1];
    for (int s = 1; s < n; ++s) {
      const Menu a = sd_suffix_menu(m, s), b = sd_suffix_menu(m, s + 1);
      CHECK(std::includes(b.begin(), b.end(), a.begin(), a.end()));
    }
  }
}

TEST_CASE("da type-to-menu witness on a small skeleton") {
  const Market m = blank(3, 2);
  const TypeToMenuWitness w = type_to_menu_da_witness(m, 0, 1);
  CHECK(w.profiles > 0);
  CHECK(w.mismatches == 0);
  CHECK(w.graph_conflicts == 0);
  CHECK(w.menu_functions <= w.graphs);
  CHECK(w.max_nodes <= 4);
}

}  // TEST_SUITE
