#include <set>

#include "doctest.h"
#include "matchlab/market.hpp"
#include "matchlab/mechanisms.hpp"
#include "oracles.hpp"

using namespace matchlab;

TEST_SUITE("market_core") {

TEST_CASE("minimal market parses") {
  const Market m = parse_market("applicants: d1\ninstitutions: h1\npref d1: h1\nprio h1: d1");
  CHECK(m.num_applicants() == 1);
  CHECK(m.num_institutions() == 1);
  CHECK(m.capacity[0] == 1);
  CHECK(m.pref[0] == PreferenceList{0});
}

TEST_CASE("capacity suffix") {
  const Market m = parse_market("applicants: d1\ninstitutions: h1*2\n");
  CHECK(m.capacity[0] == 2);
}

TEST_CASE("parse errors carry kind and position") {
  auto kind_of = [](const char* text) {
    try {
      parse_market(text);
    } catch (const MarketError& e) {
      return e.kind();
    }
    FAIL("no error");
    return MarketError::Kind::Invalid;
  };
  CHECK(kind_of("applicants: d1\ninstitutions: h1\npref d1: h1 h1") == MarketError::Kind::Duplicate);
  CHECK(kind_of("applicants: d1 d1\ninstitutions: h1") == MarketError::Kind::Duplicate);
  CHECK(kind_of("applicants: d1\ninstitutions: h1\npref d2: h1") == MarketError::Kind::UnknownId);
  CHECK(kind_of("applicants: d1\ninstitutions: h1*0") == MarketError::Kind::Capacity);
  CHECK(kind_of("institutions: h1") == MarketError::Kind::Syntax);
  try {
    parse_market("applicants: d1\ninstitutions: h1\npref d1: h1 h1");
  } catch (const MarketError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() == 13);
  }
}

TEST_CASE("comments are ignored") {
  const Market m = parse_market("# header\napplicants: d1 # one\ninstitutions: h1\n");
  CHECK(m.applicants == std::vector<std::string>{"d1"});
}

TEST_CASE("serialize round trip") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Market m = random_market(seed, {4, 3, 1, 3, 0, -1, 0, -1});
    const std::string text = serialize_market(m);
    const Market back = parse_market(text);
    CHECK(back == m);
    CHECK(serialize_market(back) == text);
  }
}

TEST_CASE("2x2 market serializes to six lines, empty lists omitted") {
  Market m = parse_market(
      "applicants: d1 d2\ninstitutions: h1 h2\npref d1: h1 h2\npref d2: h2 h1\n"
      "prio h1: d2 d1\nprio h2: d1 d2\n");
  std::string text = serialize_market(m);
  CHECK(std::count(text.begin(), text.end(), '\n') == 6);
  m.pref[0].clear();
  text = serialize_market(m);
  CHECK(text.find("pref d1") == std::string::npos);
  CHECK(std::count(text.begin(), text.end(), '\n') == 5);
}

TEST_CASE("enumerate_preferences counts and order") {
  CHECK(enumerate_preferences({0, 1}, 2).size() == 5);
  CHECK(enumerate_preferences({0, 1, 2}, 3).size() == 16);
  CHECK(enumerate_preferences({0, 1, 2}, 0) == std::vector<PreferenceList>{{}});
  const auto lists = enumerate_preferences({0, 1, 2, 3}, 4);
  CHECK(lists.size() == count_preferences(4, 4));
  CHECK(std::set<PreferenceList>(lists.begin(), lists.end()).size() == lists.size());
  for (std::size_t i = 1; i < lists.size(); ++i) CHECK(canonical_less(lists[i - 1], lists[i]));
  auto mine = oracle::all_lists(4, 4);
  std::sort(mine.begin(), mine.end(), canonical_less);
  CHECK(mine == lists);
}

TEST_CASE("enumeration ceiling") {
  CHECK_THROWS_AS(enumerate_preferences({0, 1, 2, 3, 4, 5, 6, 7, 8, 9}, 10, 1000), CeilingExceeded);
}

TEST_CASE("random_market determinism and spread") {
  const RandomMarketSpec spec{4, 4, 1, 2, 0, -1, 0, -1};
  CHECK(random_market(7, spec) == random_market(7, spec));
  std::set<std::string> distinct;
  for (std::uint64_t s = 0; s < 100; ++s) distinct.insert(serialize_market(random_market(s, spec)));
  CHECK(distinct.size() >= 99);
  const Market full = random_market(3, {4, 5, 1, 1, 5, 5, 0, -1});
  for (const auto& l : full.pref) CHECK(l.size() == 5);
}

TEST_CASE("expand_capacities") {
  Market unit = random_market(1, {3, 3, 1, 1, 0, -1, 0, -1});
  const Expansion same = expand_capacities(unit);
  CHECK(same.market == unit);
  CHECK(same.slot_parent == std::vector<int>{0, 1, 2});

  const Market m = parse_market(
      "applicants: d1 d2\ninstitutions: a h*2 b\npref d1: a h b\nprio h: d2 d1\n");
  const Expansion e = expand_capacities(m);
  CHECK(e.market.num_institutions() == 4);
  CHECK(e.market.pref[0] == PreferenceList{0, 1, 2, 3});
  CHECK(e.slot_parent == std::vector<int>{0, 1, 1, 2});
  CHECK(e.market.prio[1] == m.prio[1]);
  CHECK(e.market.prio[2] == m.prio[1]);
}

TEST_CASE("contract_matching") {
  Matching mu(3);
  mu.to = {2, kUnmatched, 1};
  const Matching c = contract_matching(mu, {0, 1, 1, 2});
  CHECK(c.to == std::vector<int>{1, kUnmatched, 1});
}

TEST_CASE("expansion agrees with many-to-one mechanisms") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Market m = random_market(seed, {5, 3, 1, 3, 0, -1, 0, -1});
    const Expansion e = expand_capacities(m);
    CHECK(contract_matching(run_mechanism(Mechanism::APDA, e.market), e.slot_parent) ==
          oracle::applicant_proposing(m));
    CHECK(contract_matching(run_mechanism(Mechanism::IPDA, e.market), e.slot_parent) ==
          oracle::institution_proposing(m));
    CHECK(contract_matching(run_mechanism(Mechanism::TTC, e.market), e.slot_parent) ==
          oracle::top_trading_cycles(m));
    std::vector<int> order = {0, 1, 2, 3, 4};
    CHECK(contract_matching(run_sd(e.market, order), e.slot_parent) ==
          oracle::serial_dictatorship(m, order));
    for (int h = 0; h < m.num_institutions(); ++h) {
      const auto c = contract_matching(run_mechanism(Mechanism::APDA, e.market), e.slot_parent);
      CHECK(std::count(c.to.begin(), c.to.end(), h) <= m.capacity[h]);
    }
  }
}

}  // TEST_SUITE
