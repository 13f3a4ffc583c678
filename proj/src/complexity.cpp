#include "matchlab/complexity.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <stdexcept>

#include "matchlab/parallel.hpp"
#include "matchlab/unrej_graph.hpp"

namespace matchlab {

namespace {

constexpr const char* kMeasureNames[] = {
    "TYPE_TO_MATCHING", "TYPE_TO_OWN_MATCH",  "TYPE_TO_ANOTHERS_MATCH",
    "TYPE_TO_MENU",     "ALL_MENUS",          "ALL_TYPE_TO_ONE_MATCH",
};

void put(std::string& out, int x) {
  out += std::to_string(x);
  out += ',';
}

void put_list(std::string& out, const std::vector<int>& v) {
  out += '[';
  for (int x : v) put(out, x);
  out += ']';
}

void require_applicant(const Market& m, int d, const char* what) {
  if (d < 0 || d >= m.num_applicants()) {
    throw std::invalid_argument(std::string(what) + " is not an applicant of the market");
  }
}

// Output of one scenario market under the measure; `scenario_applicant`
// is the applicant whose report the scenario sets.
std::string scenario_output(const ConstructionInstance& inst, const Market& m,
                            MeasureId measure, Mechanism mech,
                            int scenario_applicant) {
  std::string out;
  const int target =
      inst.target_applicant >= 0 ? inst.target_applicant : scenario_applicant;
  switch (measure) {
    case MeasureId::TYPE_TO_MATCHING:
      put_list(out, run_mechanism(mech, m).to);
      break;
    case MeasureId::TYPE_TO_OWN_MATCH:
      require_applicant(m, scenario_applicant, "scenario applicant");
      put(out, run_mechanism(mech, m)[scenario_applicant]);
      break;
    case MeasureId::TYPE_TO_ANOTHERS_MATCH:
    case MeasureId::ALL_TYPE_TO_ONE_MATCH:
      require_applicant(m, target, "target applicant");
      put(out, run_mechanism(mech, m)[target]);
      break;
    case MeasureId::TYPE_TO_MENU:
      require_applicant(m, target, "target applicant");
      put_list(out, menu_brute(mech, m, target));
      break;
    case MeasureId::ALL_MENUS:
      throw std::logic_error("ALL_MENUS is read from the base market");
  }
  return out;
}

// One output string per scenario, or per scenario applicant for ALL_MENUS.
std::vector<std::string> scenario_outputs(const ConstructionInstance& inst,
                                          MeasureId measure, Mechanism mech) {
  std::vector<std::string> out;
  if (measure == MeasureId::ALL_MENUS) {
    std::set<int> seen;
    for (const auto& s : inst.scenarios) {
      if (s.applicant < 0 || !seen.insert(s.applicant).second) continue;
      std::string x;
      put_list(x, menu_brute(mech, inst.market, s.applicant));
      out.push_back(std::move(x));
    }
    return out;
  }
  for (const auto& s : inst.scenarios) {
    out.push_back(scenario_output(inst, apply_scenario(inst, s), measure, mech, s.applicant));
  }
  return out;
}

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) {
    out += p;
    out += ';';
  }
  return out;
}

Mechanism family_mechanism(FamilyId f) { return family_mechanisms(f).front(); }

void check_family_size(FamilyId family, int k, std::uint64_t ceiling) {
  if (k < family_min_k(family)) {
    throw std::invalid_argument(to_string(family) + " needs k >= " +
                                std::to_string(family_min_k(family)));
  }
  const int nbits = family_bit_count(family, k);
  if (nbits >= 63 || (1ULL << nbits) > ceiling) {
    throw CeilingExceeded("family bit profiles (bits=" + std::to_string(nbits) + ")",
                          nbits >= 63 ? ~0ULL : 1ULL << nbits, ceiling);
  }
}

}  // namespace

std::string to_string(MeasureId m) { return kMeasureNames[static_cast<int>(m)]; }

MeasureId parse_measure(const std::string& name) {
  for (int i = 0; i < 6; ++i) {
    if (name == kMeasureNames[i]) return static_cast<MeasureId>(i);
  }
  throw std::invalid_argument("unknown measure '" + name + "'");
}

std::vector<PreferenceList> witness_lists(const Market& m, WitnessDomain domain,
                                          std::uint64_t ceiling) {
  const int ni = m.num_institutions();
  if (domain == WitnessDomain::Full) {
    std::vector<int> all(ni);
    for (int h = 0; h < ni; ++h) all[h] = h;
    return enumerate_preferences(all, ni, ceiling);
  }
  std::vector<PreferenceList> out;
  out.emplace_back();
  for (int h = 0; h < ni; ++h) out.push_back({h});
  return out;
}

Fingerprint fingerprint(MeasureId measure, Mechanism mech, const Market& profile,
                        const MeasureArgs& args, WitnessDomain domain,
                        std::uint64_t ceiling) {
  Fingerprint out;
  if (measure == MeasureId::ALL_MENUS) {
    for (int d = 0; d < profile.num_applicants(); ++d) {
      put_list(out, menu_brute(mech, profile, d));
      out += ';';
    }
    return out;
  }
  const auto lists = witness_lists(profile, domain, ceiling);
  Market probe = profile;
  auto run_over = [&](int d_in, auto&& emit) {
    const PreferenceList saved = probe.pref[d_in];
    for (const auto& w : lists) {
      probe.pref[d_in] = w;
      emit();
      out += ';';
    }
    probe.pref[d_in] = saved;
  };

  if (measure == MeasureId::ALL_TYPE_TO_ONE_MATCH) {
    require_applicant(profile, args.d_dagger, "d_dagger");
    const std::uint64_t work =
        static_cast<std::uint64_t>(profile.num_applicants()) * lists.size();
    if (work > ceiling) throw CeilingExceeded("type-to-one-match evaluations", work, ceiling);
    for (int d = 0; d < profile.num_applicants(); ++d) {
      if (d == args.d_dagger) continue;
      run_over(d, [&] { put(out, run_mechanism(mech, probe)[args.d_dagger]); });
      out += '|';
    }
    return out;
  }

  require_applicant(profile, args.d_star, "d_star");
  switch (measure) {
    case MeasureId::TYPE_TO_MATCHING:
      run_over(args.d_star, [&] { put_list(out, run_mechanism(mech, probe).to); });
      break;
    case MeasureId::TYPE_TO_OWN_MATCH:
      run_over(args.d_star, [&] { put(out, run_mechanism(mech, probe)[args.d_star]); });
      break;
    case MeasureId::TYPE_TO_ANOTHERS_MATCH:
      require_applicant(profile, args.d_dagger, "d_dagger");
      run_over(args.d_star, [&] { put(out, run_mechanism(mech, probe)[args.d_dagger]); });
      break;
    case MeasureId::TYPE_TO_MENU:
      require_applicant(profile, args.d_dagger, "d_dagger");
      run_over(args.d_star, [&] { put_list(out, menu_brute(mech, probe, args.d_dagger)); });
      break;
    default:
      break;
  }
  return out;
}

CountResult count_distinct(MeasureId measure, Mechanism mech,
                           const std::vector<Market>& family,
                           const MeasureArgs& args, WitnessDomain domain,
                           int jobs, std::uint64_t ceiling) {
  CountResult r;
  r.family_size = family.size();
  if (family.empty()) return r;
  r.domain_size = measure == MeasureId::ALL_MENUS
                      ? 0
                      : witness_lists(family.front(), domain, ceiling).size();
  const std::uint64_t work = r.family_size * std::max<std::uint64_t>(r.domain_size, 1);
  if (work > ceiling) throw CeilingExceeded("profiles x domain", work, ceiling);
  auto fps = parallel_map(family.size(), jobs, [&](std::size_t i) {
    return fingerprint(measure, mech, family[i], args, domain, ceiling);
  });
  std::set<Fingerprint> distinct(fps.begin(), fps.end());
  r.count = distinct.size();
  r.log2 = std::log2(static_cast<double>(r.count));
  return r;
}

std::vector<Market> exhaustive_profiles(const Market& skeleton,
                                        const std::vector<int>& vary,
                                        std::uint64_t ceiling) {
  const int ni = skeleton.num_institutions();
  std::vector<int> all(ni);
  for (int h = 0; h < ni; ++h) all[h] = h;
  const auto lists = enumerate_preferences(all, ni, ceiling);
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < vary.size(); ++i) {
    if (total > ceiling / lists.size()) {
      throw CeilingExceeded("exhaustive profiles", ~0ULL, ceiling);
    }
    total *= lists.size();
  }
  std::vector<Market> out;
  out.reserve(total);
  std::vector<std::size_t> idx(vary.size(), 0);
  for (std::uint64_t c = 0; c < total; ++c) {
    Market m = skeleton;
    for (std::size_t i = 0; i < vary.size(); ++i) m.pref[vary[i]] = lists[idx[i]];
    out.push_back(std::move(m));
    for (std::size_t i = vary.size(); i-- > 0;) {
      if (++idx[i] < lists.size()) break;
      idx[i] = 0;
    }
  }
  return out;
}

MeasureId family_default_measure(FamilyId f) {
  switch (f) {
    case FamilyId::TTC_TYPE_TO_MENU: return MeasureId::TYPE_TO_MENU;
    case FamilyId::ALL_MENUS_DA:
    case FamilyId::ALL_MENUS_TTC: return MeasureId::ALL_MENUS;
    case FamilyId::ATTOM_SD: return MeasureId::ALL_TYPE_TO_ONE_MATCH;
    default: return MeasureId::TYPE_TO_MATCHING;
  }
}

Fingerprint family_fingerprint(const ConstructionInstance& inst,
                               MeasureId measure, Mechanism mech) {
  return join(scenario_outputs(inst, measure, mech));
}

DistinctnessResult verify_family_distinctness(FamilyId family, int k,
                                              MeasureId measure, int jobs,
                                              std::uint64_t ceiling) {
  check_family_size(family, k, ceiling);
  const std::uint64_t profiles = 1ULL << family_bit_count(family, k);
  const Mechanism mech = family_mechanism(family);
  auto fps = parallel_map(profiles, jobs, [&](std::size_t mask) {
    return family_fingerprint(gen_construction(family, params_from_mask(family, k, mask)),
                              measure, mech);
  });
  std::set<Fingerprint> distinct(fps.begin(), fps.end());
  return {distinct.size(), profiles};
}

PairwiseResult pairwise_distinctness(FamilyId family, int k, MeasureId measure,
                                     std::uint64_t pairs, std::uint64_t seed,
                                     int jobs) {
  check_family_size(family, k, kDefaultCeiling);
  const int nbits = family_bit_count(family, k);
  const std::uint64_t profiles = 1ULL << nbits;
  const Mechanism mech = family_mechanism(family);
  PairwiseResult r;
  if (profiles < 2) return r;

  if (pairs == 0) {
    // Every pair: outputs are computed once per profile, then searched.
    auto outs = parallel_map(profiles, jobs, [&](std::size_t mask) {
      return scenario_outputs(gen_construction(family, params_from_mask(family, k, mask)),
                              measure, mech);
    });
    auto rows = parallel_map(profiles, jobs, [&](std::size_t a) {
      std::uint64_t hit = 0;
      for (std::size_t b = a + 1; b < profiles; ++b) {
        for (std::size_t s = 0; s < outs[a].size(); ++s) {
          if (outs[a][s] != outs[b][s]) {
            ++hit;
            break;
          }
        }
      }
      return hit;
    });
    r.pairs = profiles * (profiles - 1) / 2;
    for (auto h : rows) r.distinguished += h;
    return r;
  }

  std::mt19937_64 rng(seed);
  std::vector<std::pair<std::uint64_t, std::uint64_t>> sample;
  sample.reserve(pairs);
  const std::uint64_t mask_all = profiles - 1;
  while (sample.size() < pairs) {
    std::uint64_t a = rng() & mask_all;
    std::uint64_t b = rng() & mask_all;
    if (a != b) sample.emplace_back(a, b);
  }
  auto hits = parallel_map(sample.size(), jobs, [&](std::size_t i) {
    const auto ia = gen_construction(family, params_from_mask(family, k, sample[i].first));
    const auto ib = gen_construction(family, params_from_mask(family, k, sample[i].second));
    if (measure == MeasureId::ALL_MENUS) {
      return scenario_outputs(ia, measure, mech) != scenario_outputs(ib, measure, mech);
    }
    // Stops at the first scenario that tells the two profiles apart.
    for (std::size_t s = 0; s < ia.scenarios.size(); ++s) {
      const auto& sa = ia.scenarios[s];
      const auto& sb = ib.scenarios[s];
      if (scenario_output(ia, apply_scenario(ia, sa), measure, mech, sa.applicant) !=
          scenario_output(ib, apply_scenario(ib, sb), measure, mech, sb.applicant)) {
        return true;
      }
    }
    return false;
  });
  r.pairs = sample.size();
  for (bool h : hits) r.distinguished += h ? 1 : 0;
  return r;
}

// ---------------------------------------------------------------- compact SD

CompactSDRep sd_compact_representation(const Market& m, const std::vector<int>& order) {
  if (!m.has_unit_capacities()) {
    throw std::invalid_argument("compact SD representation needs unit capacities");
  }
  for (int d : order) require_applicant(m, d, "order entry");
  CompactSDRep rep;
  rep.order = order;
  rep.p_small.assign(m.num_applicants(), {});
  std::vector<PreferenceList> filt(m.num_applicants());
  for (std::size_t t = 1; t < order.size(); ++t) filt[order[t]] = m.pref[order[t]];
  for (std::size_t t = 1; t < order.size(); ++t) {
    const auto& mine = filt[order[t]];
    if (mine.empty()) continue;
    const int top = mine.front();
    for (std::size_t u = t + 1; u < order.size(); ++u) {
      auto& later = filt[order[u]];
      later.erase(std::remove(later.begin(), later.end(), top), later.end());
    }
  }
  for (std::size_t t = 1; t < order.size(); ++t) {
    auto list = filt[order[t]];
    if (list.size() > 2) list.resize(2);
    rep.p_small[order[t]] = std::move(list);
  }
  return rep;
}

Market apply_compact(const Market& m, const CompactSDRep& rep) {
  Market out = m;
  for (std::size_t t = 1; t < rep.order.size(); ++t) {
    out.pref[rep.order[t]] = rep.p_small[rep.order[t]];
  }
  return out;
}

// ---------------------------------------------------------------- SDrot menus

Menu sd_suffix_menu(const Market& m, int start) {
  if (!has_sdrot_shape(m)) throw std::invalid_argument("market does not have the SDrot shape");
  const int n = m.num_applicants() - 1;
  std::vector<char> taken(n, 0);
  for (int d = start; d < n; ++d) {
    for (int h : m.pref[d]) {
      if (h < n && !taken[h]) {
        taken[h] = 1;
        break;
      }
    }
  }
  Menu out;
  for (int h = 0; h < n; ++h) {
    if (!taken[h]) out.push_back(h);
  }
  return out;
}

SDRotMenuRep sdrot_menu_representation(const Market& m) {
  if (!has_sdrot_shape(m)) throw std::invalid_argument("market does not have the SDrot shape");
  const int n = m.num_applicants() - 1;
  const int rot = m.num_institutions() - n;
  const int stride = n / rot;
  SDRotMenuRep rep;
  Menu prev;
  for (int t = 0; t < rot; ++t) {
    Menu cur = sd_suffix_menu(m, t * stride + 1);
    Menu added;
    std::set_difference(cur.begin(), cur.end(), prev.begin(), prev.end(),
                        std::back_inserter(added));
    rep.S.push_back(std::move(added));
    prev = std::move(cur);
  }
  return rep;
}

Menu sdrot_menu_from_rep(const SDRotMenuRep& rep, int pick) {
  Menu out;
  for (int t = 0; t <= pick && t < static_cast<int>(rep.S.size()); ++t) {
    out.insert(out.end(), rep.S[t].begin(), rep.S[t].end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------- DA menus

TypeToMenuWitness type_to_menu_da_witness(const Market& skeleton, int d_star,
                                          int d_dagger, int jobs,
                                          std::uint64_t ceiling) {
  require_applicant(skeleton, d_star, "d_star");
  require_applicant(skeleton, d_dagger, "d_dagger");
  if (d_star == d_dagger) throw std::invalid_argument("d_star and d_dagger must differ");
  std::vector<int> vary;
  for (int d = 0; d < skeleton.num_applicants(); ++d) {
    if (d != d_star && d != d_dagger) vary.push_back(d);
  }
  const auto profiles = exhaustive_profiles(skeleton, vary, ceiling);
  const auto reports = witness_lists(skeleton, WitnessDomain::Full, ceiling);
  const std::uint64_t work = profiles.size() * reports.size();
  if (work > ceiling) throw CeilingExceeded("profiles x reports", work, ceiling);
  const std::vector<int> S = {std::min(d_star, d_dagger), std::max(d_star, d_dagger)};

  struct Row {
    std::string graph;
    std::string menus;
    std::uint64_t mismatches = 0;
    std::uint64_t nodes = 0;
  };
  auto rows = parallel_map(profiles.size(), jobs, [&](std::size_t i) {
    const Market& m = profiles[i];
    Row row;
    const UnrejGraph g = build_unrejgr(m, S);
    row.nodes = g.nodes.size();
    for (std::size_t v = 0; v < g.nodes.size(); ++v) {
      put(row.graph, g.nodes[v].applicant);
      put(row.graph, g.nodes[v].institution);
      put(row.graph, g.successor[v]);
    }
    Market probe = m;
    for (const auto& rep : reports) {
      probe.pref[d_star] = rep;
      const Menu expect = menu_brute(Mechanism::APDA, probe, d_dagger);
      const Menu got = menu_from_graph(g, d_dagger, rep);
      if (got != expect) ++row.mismatches;
      put_list(row.menus, expect);
    }
    return row;
  });

  TypeToMenuWitness w;
  w.profiles = profiles.size();
  std::map<std::string, const std::string*> graphs;
  std::set<std::string> menus;
  for (const auto& r : rows) {
    auto [it, fresh] = graphs.emplace(r.graph, &r.menus);
    if (!fresh && *it->second != r.menus) ++w.graph_conflicts;
    menus.insert(r.menus);
    w.checks += reports.size();
    w.mismatches += r.mismatches;
    w.max_nodes = std::max(w.max_nodes, r.nodes);
  }
  w.graphs = graphs.size();
  w.menu_functions = menus.size();
  return w;
}

}  // namespace matchlab
