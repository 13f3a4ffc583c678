#include <algorithm>

#include "doctest.h"
#include "matchlab/constructions.hpp"
#include "matchlab/menus.hpp"
#include "oracles.hpp"

using namespace matchlab;

namespace {

bool has(const std::vector<int>& v, int x) { return std::find(v.begin(), v.end(), x) != v.end(); }

oracle::Mech lib(Mechanism mech) {
  return [mech](const Market& m) { return run_mechanism(mech, m); };
}

}  // namespace

TEST_SUITE("menus") {

TEST_CASE("blocking pairs") {
  const Market one = parse_market("applicants: d\ninstitutions: h\npref d: h\nprio h: d\n");
  CHECK(find_blocking_pairs(one, Matching(1)) == std::vector<BlockingPair>{{0, 0}});
  const Market m = example_market("two_stable");
  Matching mu(2);
  mu.to = {1, 0};
  CHECK(find_blocking_pairs(m, mu).empty());
  Matching partial(2);
  partial.to = {0, kUnmatched};
  CHECK_FALSE(find_blocking_pairs(m, partial).empty());
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const Market r = random_market(seed, {5, 4, 1, 2, 0, -1, 0, -1});
    CHECK(find_blocking_pairs(r, run_mechanism(Mechanism::APDA, r)).empty());
  }
}

TEST_CASE("stable set enumeration") {
  CHECK(enumerate_stable_matchings(example_market("two_stable")).size() == 2);
  CHECK(enumerate_stable_matchings(example_market("ipda_with_edges")).size() == 1);
  Market empty = example_market("two_stable");
  for (auto& l : empty.pref) l.clear();
  CHECK(enumerate_stable_matchings(empty) == std::vector<Matching>{Matching(2)});
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const Market m = oracle::random_small(seed, 1 + seed % 4, 1 + seed / 4 % 4, 2);
    auto got = enumerate_stable_matchings(m);
    auto want = oracle::stable_set(m);
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    CHECK(got == want);
    for (const auto& mu : got) CHECK(is_stable(m, mu));
  }
}

TEST_CASE("menu versus stable budget set on the worked example") {
  const Market m = example_market("budget_vs_menu");
  const int h2 = m.institution("h2");
  const Matching mu = run_mechanism(Mechanism::APDA, m);
  auto menu = [&](const char* d) { return menu_brute(Mechanism::APDA, m, m.applicant(d)); };
  auto budget = [&](const char* d) { return stable_budget_set(m, mu, m.applicant(d)); };
  CHECK(has(menu("d1"), h2));
  CHECK(has(menu("d2"), h2));
  CHECK(has(menu("d4"), h2));
  CHECK_FALSE(has(menu("d3"), h2));
  CHECK_FALSE(has(budget("d1"), h2));
  CHECK(has(budget("d2"), h2));
  CHECK(has(budget("d3"), h2));
  CHECK(has(budget("d4"), h2));
  CHECK(has(menu_via_ipda(m, m.applicant("d1")), h2));
  CHECK(menu_via_ipda(m, m.applicant("d1")) == menu("d1"));
}

TEST_CASE("trivial menus") {
  const Market one = parse_market("applicants: d\ninstitutions: h\nprio h: d\n");
  CHECK(menu_brute(Mechanism::APDA, one, 0) == Menu{0});
  const Market nobody = parse_market("applicants: d e\ninstitutions: h\nprio h: e\n");
  CHECK(menu_via_ipda(nobody, 0).empty());
}

TEST_CASE("singleton witnesses agree with the full domain, exhaustive 2x2 and random 3x3") {
  const auto lists2 = oracle::all_lists(2, 2);
  const auto prio2 = oracle::all_lists(2, 2);
  Market m = parse_market("applicants: d1 d2\ninstitutions: h1 h2\n");
  for (const auto& a : lists2)
    for (const auto& b : lists2)
      for (const auto& p : prio2)
        for (const auto& q : prio2) {
          m.pref = {a, b};
          m.prio = {p, q};
          for (Mechanism mech : {Mechanism::TTC, Mechanism::APDA, Mechanism::IPDA, Mechanism::SD}) {
            for (int d = 0; d < 2; ++d) {
              CHECK(menu_brute(mech, m, d) == oracle::full_menu(lib(mech), m, d));
            }
          }
        }
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const Market r = oracle::random_small(seed, 3, 3, 1);
    for (Mechanism mech : {Mechanism::TTC, Mechanism::APDA, Mechanism::IPDA, Mechanism::SD}) {
      for (int d = 0; d < 3; ++d) {
        CHECK(menu_brute(mech, r, d) == oracle::full_menu(lib(mech), r, d));
        CHECK(menu_brute(mech, r, d, WitnessDomain::Full) == oracle::full_menu(lib(mech), r, d));
      }
    }
  }
}

TEST_CASE("menus agree across DA variants and with the ipda description") {
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const Market m = oracle::random_small(seed, 1 + seed % 5, 1 + seed / 5 % 5, 1);
    for (int d = 0; d < m.num_applicants(); ++d) {
      const Menu a = menu_brute(Mechanism::APDA, m, d);
      CHECK(a == menu_brute(Mechanism::IPDA, m, d));
      CHECK(a == menu_via_ipda(m, d));
      Market other = m;
      other.pref[d] = {};
      CHECK(a == menu_brute(Mechanism::APDA, other, d));
    }
  }
}

TEST_CASE("stable budget set") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const Market m = oracle::random_small(seed, 1 + seed % 5, 1 + seed / 5 % 4, 2);
    const Matching mu = run_mechanism(Mechanism::APDA, m);
    const Matching empty(m.num_applicants());
    for (int d = 0; d < m.num_applicants(); ++d) {
      CHECK(mu[d] == list_max(m.pref[d], stable_budget_set(m, mu, d)));
      std::vector<int> ranking;
      for (int h = 0; h < m.num_institutions(); ++h) {
        if (oracle::pos(m.prio[h], d) >= 0) ranking.push_back(h);
      }
      CHECK(stable_budget_set(m, empty, d) == ranking);
    }
  }
}

}  // TEST_SUITE
