#include <set>

#include "doctest.h"
#include "matchlab/constructions.hpp"
#include "matchlab/menus.hpp"
#include "matchlab/protocols.hpp"
#include "oracles.hpp"

using namespace matchlab;

namespace {

RandomMarketSpec many_to_one(int na, int ni) {
  RandomMarketSpec s;
  s.applicants = na;
  s.institutions = ni;
  s.cap_min = 1;
  s.cap_max = 3;
  s.pref_min = 0;
  s.pref_max = ni;
  s.prio_min = 0;
  s.prio_max = na;
  return s;
}

Market random_many_to_one(std::uint64_t seed) {
  const int na = 1 + static_cast<int>(seed % 12);
  const int ni = 1 + static_cast<int>((seed / 12) % 4);
  return random_market(seed, many_to_one(na, ni));
}

// Every label assignment of an INST-side graph whose targets follow mu; a
// label at a free institution has no target.
std::vector<ImprovementGraph> inst_graphs(const Market& m, const Matching& mu) {
  std::vector<int> holder(m.num_institutions(), kUnmatched);
  for (int d = 0; d < m.num_applicants(); ++d) {
    if (mu[d] != kUnmatched) holder[mu[d]] = d;
  }
  std::vector<ImprovementGraph> out;
  ImprovementGraph g;
  g.side = ImprSide::Inst;
  g.label.assign(m.num_applicants(), kUnmatched);
  g.target.assign(m.num_applicants(), kUnmatched);
  auto rec = [&](auto&& self, int d) -> void {
    if (d == m.num_applicants()) {
      out.push_back(g);
      return;
    }
    g.label[d] = g.target[d] = kUnmatched;
    self(self, d + 1);
    for (int h = 0; h < m.num_institutions(); ++h) {
      g.label[d] = h;
      g.target[d] = holder[h];
      self(self, d + 1);
    }
    g.label[d] = g.target[d] = kUnmatched;
  };
  rec(rec, 0);
  return out;
}

std::vector<Matching> all_matchings(const Market& m) {
  std::vector<Matching> out;
  Matching mu(m.num_applicants());
  std::vector<int> load(m.num_institutions(), 0);
  auto rec = [&](auto&& self, int d) -> void {
    if (d == m.num_applicants()) {
      out.push_back(mu);
      return;
    }
    mu.to[d] = kUnmatched;
    self(self, d + 1);
    for (int h = 0; h < m.num_institutions(); ++h) {
      if (load[h] == m.capacity[h]) continue;
      ++load[h];
      mu.to[d] = h;
      self(self, d + 1);
      --load[h];
    }
    mu.to[d] = kUnmatched;
  };
  rec(rec, 0);
  return out;
}

bool someone_rejects(Mechanism mech, const Market& m, const VerificationCertificate& c) {
  for (int d = 0; d < m.num_applicants(); ++d) {
    if (!check_verification(mech, m, d, m.pref[d], c).ok) return true;
  }
  return false;
}

}  // namespace

TEST_SUITE("protocols") {

TEST_CASE("da cutoff example") {
  const Market m = parse_market(
      "applicants: d1 d2\ninstitutions: h1 h2\npref d1: h1\npref d2: h1 h2\n"
      "prio h1: d1 d2\nprio h2: d1 d2\n");
  const DACutoffCertificate c = encode_da_representation(m);
  CHECK(c.d_min == std::vector<int>{0, 1});
  CHECK(decode_da_representation(c, m, 1, m.pref[1]) == 1);
  CHECK(decode_da_representation(c, m, 0, m.pref[0]) == 0);
}

TEST_CASE("empty preferences decode to nothing") {
  const Market m = parse_market(
      "applicants: d1 d2\ninstitutions: h1 h2\nprio h1: d1 d2\nprio h2: d2\n");
  const DACutoffCertificate c = encode_da_representation(m);
  CHECK(c.d_min == std::vector<int>{kUnmatched, kUnmatched});
  for (int d = 0; d < 2; ++d) CHECK(decode_da_representation(c, m, d, m.pref[d]) == kUnmatched);
}

TEST_CASE("applicant ranked nowhere decodes to nothing") {
  const Market m = parse_market(
      "applicants: d1 d2\ninstitutions: h1\npref d1: h1\npref d2: h1\nprio h1: d1\n");
  CHECK(decode_da_representation(encode_da_representation(m), m, 1, m.pref[1]) == kUnmatched);
  CHECK(decode_ttc_representation(encode_ttc_representation(m), m, 1, m.pref[1]) ==
        kUnmatched);
}

TEST_CASE("ttc cutoffs on the all-left lower-bound market") {
  const auto inst = gen_construction(FamilyId::TTC_REPRESENTATION,
                                     params_from_mask(FamilyId::TTC_REPRESENTATION, 2, 0));
  const Market& m = inst.market;
  const TTCCutoffCertificate c = encode_ttc_representation(m);
  const Matching mu = run_ttc(m).matching;
  CHECK(mu == oracle::top_trading_cycles(m));
  for (int d = 0; d < m.num_applicants(); ++d) {
    CHECK(decode_ttc_representation(c, m, d, m.pref[d]) == mu[d]);
    CHECK(oracle::ttc_reconstruct(c, m, d) == mu[d]);
  }
}

TEST_CASE("decode of encode matches the mechanism on random many-to-one markets") {
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const Market m = random_many_to_one(seed);
    const Matching da = oracle::applicant_proposing(m);
    const Matching ttc = oracle::top_trading_cycles(m);
    const DACutoffCertificate dc = encode_da_representation(m);
    const TTCCutoffCertificate tc = encode_ttc_representation(m);
    CHECK(certificate_bit_size(dc) ==
          static_cast<std::uint64_t>(m.num_institutions()) *
              ceil_log2(static_cast<std::uint64_t>(m.num_applicants()) + 1));
    for (int d = 0; d < m.num_applicants(); ++d) {
      CHECK(decode_da_representation(dc, m, d, m.pref[d]) == da[d]);
      CHECK(decode_ttc_representation(tc, m, d, m.pref[d]) == ttc[d]);
      CHECK(oracle::ttc_reconstruct(tc, m, d) == ttc[d]);
    }
  }
}

TEST_CASE("da lower bound: the paired applicant takes the shared seat iff the first ranks her own seat first") {
  const FamilyId f = FamilyId::DA_REPRESENTATION_LB;
  std::set<std::vector<int>> certs;
  for (std::uint64_t mask = 0; mask < 8; ++mask) {
    const auto inst = gen_construction(f, params_from_mask(f, 3, mask));
    const Market& m = inst.market;
    const DACutoffCertificate c = encode_da_representation(m);
    certs.insert(c.d_min);
    const int hB = m.institution("hB");
    for (int i = 1; i <= 3; ++i) {
      const int di = m.applicant("d_" + std::to_string(i));
      const int dp = m.applicant("dp_" + std::to_string(i));
      const int hi = m.institution("h_" + std::to_string(i));
      const bool own_first = m.pref[di].front() == hi;
      CHECK(own_first == (((mask >> (i - 1)) & 1) == 1));
      CHECK((decode_da_representation(c, m, dp, m.pref[dp]) == hB) == own_first);
    }
  }
  CHECK(certs.size() == 8);
}

TEST_CASE("improvement graph on the small worked market") {
  const Market m = example_market("ipda_with_edges");
  const Matching mu = run_ipda(m).matching;
  const ImprovementGraph g = build_improvement_graph(ImprSide::Inst, m, mu);
  const int d1 = m.applicant("d1"), d2 = m.applicant("d2"), d3 = m.applicant("d3");
  CHECK(g.target[d1] == d3);
  CHECK(g.target[d2] == d3);
  CHECK(g.target[d3] == kUnmatched);
  CHECK(g.num_edges() == 2);
  CHECK(is_acyclic(g));
}

TEST_CASE("ipda graphs are acyclic on random markets") {
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const Market m = oracle::random_small(seed, 1 + seed % 6, 1 + (seed / 6) % 6);
    const ImprovementGraph inst =
        build_improvement_graph(ImprSide::Inst, m, run_ipda(m).matching);
    const ImprovementGraph appl =
        build_improvement_graph(ImprSide::Appl, m, run_apda(m).matching);
    CHECK(is_acyclic(inst));
    CHECK(is_acyclic(appl));
    for (int v = 0; v < m.num_applicants(); ++v) {
      if (inst.label[v] == kUnmatched) CHECK(inst.target[v] == kUnmatched);
    }
  }
}

TEST_CASE("applicant-optimal matching has a two-cycle on the inst side") {
  const Market m = example_market("two_stable");
  const Matching best = run_apda(m).matching;
  CHECK(best != run_ipda(m).matching);
  const ImprovementGraph g = build_improvement_graph(ImprSide::Inst, m, best);
  CHECK(g.target[0] == 1);
  CHECK(g.target[1] == 0);
  CHECK_FALSE(is_acyclic(g));
}

TEST_CASE("honest certificates pass every check") {
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const Market m = random_many_to_one(seed);
    for (Mechanism mech : {Mechanism::APDA, Mechanism::IPDA, Mechanism::TTC}) {
      const VerificationCertificate c = encode_verification(mech, m);
      const Matching mu = run_mechanism(mech, m);
      CHECK(certificate_matching(c, m) == mu);
      for (int d = 0; d < m.num_applicants(); ++d) {
        const CheckResult r = check_verification(mech, m, d, m.pref[d], c);
        CHECK(r.ok);
        CHECK(r.my_match == mu[d]);
      }
      if (mech == Mechanism::TTC) {
        CHECK(c.transcript.size() <=
              4u * static_cast<std::size_t>(m.num_applicants() + m.num_institutions()));
      }
      CHECK(certificate_bit_size(c, m) == certificate_bit_size(encode_verification(mech, m), m));
    }
  }
}

TEST_CASE("bit sizes") {
  DACutoffCertificate da;
  da.num_applicants = 15;
  da.d_min.assign(4, kUnmatched);
  CHECK(certificate_bit_size(da) == 16);
  TTCCutoffCertificate ttc;
  ttc.num_applicants = 6;
  ttc.num_institutions = 3;
  ttc.cutoff.assign(9, kClosed);
  CHECK(certificate_bit_size(ttc) == 27);
  const Market empty;
  const VerificationCertificate t = encode_verification(Mechanism::TTC, empty);
  CHECK(t.transcript.empty());
  CHECK(certificate_bit_size(t, empty) == 0);
  const VerificationCertificate g = encode_verification(Mechanism::IPDA, empty);
  CHECK(g.graph.num_edges() == 0);
}

TEST_CASE("cyclic graph claim is rejected by everyone; acyclic lies by someone") {
  const Market m = example_market("two_stable");
  const Matching best = run_apda(m).matching;
  VerificationCertificate c;
  c.mech = Mechanism::IPDA;
  c.matching = best;
  c.graph = build_improvement_graph(ImprSide::Inst, m, best);
  for (int d = 0; d < 2; ++d) CHECK_FALSE(check_verification(Mechanism::IPDA, m, d, m.pref[d], c).ok);
  for (const auto& g : inst_graphs(m, best)) {
    c.graph = g;
    CHECK(someone_rejects(Mechanism::IPDA, m, c));
  }
}

TEST_CASE("da soundness over every certificate at two by two") {
  // Both sides: every matching, every label assignment, every profile.
  const auto lists = oracle::all_lists(2, 2);
  Market m = parse_market("applicants: d1 d2\ninstitutions: h1 h2\n");
  std::uint64_t wrong = 0;
  for (const auto& p0 : lists)
    for (const auto& p1 : lists)
      for (const auto& q0 : lists)
        for (const auto& q1 : lists) {
          m.pref = {p0, p1};
          m.prio = {q0, q1};
          const Matching truth = run_ipda(m).matching;
          for (const Matching& mu : all_matchings(m)) {
            if (mu == truth) continue;
            VerificationCertificate c;
            c.mech = Mechanism::IPDA;
            c.matching = mu;
            for (const auto& g : inst_graphs(m, mu)) {
              c.graph = g;
              ++wrong;
              CHECK(someone_rejects(Mechanism::IPDA, m, c));
            }
          }
        }
  CHECK(wrong > 0);
}

TEST_CASE("ttc certificates for other types are caught") {
  const auto lists = oracle::all_lists(2, 2);
  Market m = parse_market("applicants: d1 d2\ninstitutions: h1 h2\nprio h1: d2 d1\nprio h2: d1\n");
  for (const auto& p0 : lists)
    for (const auto& p1 : lists) {
      m.pref = {p0, p1};
      const Matching truth = run_ttc(m).matching;
      for (const auto& r0 : lists)
        for (const auto& r1 : lists) {
          Market lie = m;
          lie.pref = {r0, r1};
          const VerificationCertificate c = encode_verification(Mechanism::TTC, lie);
          if (certificate_matching(c, m) == truth) continue;
          CHECK(someone_rejects(Mechanism::TTC, m, c));
        }
    }
}

TEST_CASE("malformed certificates are rejected") {
  const Market m = example_market("ipda_with_edges");
  VerificationCertificate c = encode_verification(Mechanism::IPDA, m);
  c.matching.to.pop_back();
  CHECK_FALSE(check_verification(Mechanism::IPDA, m, 0, m.pref[0], c).ok);
  c = encode_verification(Mechanism::IPDA, m);
  CHECK_FALSE(check_verification(Mechanism::APDA, m, 0, m.pref[0], c).ok);
  c = encode_verification(Mechanism::TTC, m);
  c.transcript.pop_back();
  CHECK_FALSE(check_verification(Mechanism::TTC, m, 0, m.pref[0], c).ok);
}

}  // TEST_SUITE
