#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "matchlab/complexity.hpp"
#include "matchlab/constructions.hpp"
#include "matchlab/experiment.hpp"
#include "matchlab/market.hpp"
#include "matchlab/mechanisms.hpp"
#include "matchlab/menus.hpp"
#include "matchlab/protocols.hpp"
#include "matchlab/unrej_graph.hpp"

namespace ml = matchlab;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Common {
  std::uint64_t seed = 0;
  int jobs = 1;
  bool csv = false;
};

std::string inst_name(const ml::Market& m, int h) {
  return h == ml::kUnmatched ? "-" : m.institutions[h];
}

std::string appl_name(const ml::Market& m, int d) {
  return d == ml::kUnmatched ? "-" : m.applicants[d];
}

void print_matching(const ml::Market& m, const ml::Matching& mu) {
  for (int d = 0; d < m.num_applicants(); ++d) {
    std::cout << m.applicants[d] << ' ' << inst_name(m, mu[d]) << '\n';
  }
}

void print_menu(const ml::Market& m, const ml::Menu& menu) {
  std::cout << '{';
  for (std::size_t i = 0; i < menu.size(); ++i) {
    std::cout << (i ? " " : "") << m.institutions[menu[i]];
  }
  std::cout << "}\n";
}

ml::PreferenceList parse_list(const ml::Market& m, const std::string& text) {
  std::istringstream in(text);
  ml::PreferenceList out;
  for (std::string tok; in >> tok;) out.push_back(m.institution(tok));
  return out;
}

ml::Policy parse_policy(const std::string& p, std::uint64_t seed) {
  if (p == "lowest") return ml::Policy::lowest();
  if (p == "highest") return ml::Policy::highest();
  if (p == "random") return ml::Policy::random(seed);
  throw UsageError("unknown policy '" + p + "' (lowest|highest|random)");
}

ml::Mechanism mechanism_arg(const std::string& name) {
  try {
    return ml::parse_mechanism(name);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

// ---------------------------------------------------------------- run

struct RunArgs {
  std::string mech, market, policy = "lowest";
  bool trace = false;
};

int cmd_run(const RunArgs& a, const Common& c) {
  const ml::Market m = ml::load_market(a.market);
  const ml::Mechanism mech = mechanism_arg(a.mech);
  const ml::Policy policy = parse_policy(a.policy, c.seed);
  ml::Outcome out;
  switch (mech) {
    case ml::Mechanism::TTC: out = ml::run_ttc(m, policy); break;
    case ml::Mechanism::APDA: out = ml::run_apda(m, policy); break;
    case ml::Mechanism::IPDA: out = ml::run_ipda(m, policy); break;
    default: out.matching = ml::run_mechanism(mech, m, policy); break;
  }
  print_matching(m, out.matching);
  if (a.trace) {
    std::cout << "trace\n";
    for (const auto& p : out.trace.proposals) {
      const bool ip = out.trace.institution_proposing;
      std::cout << "  " << (ip ? inst_name(m, p.proposer) : appl_name(m, p.proposer))
                << " -> " << (ip ? appl_name(m, p.receiver) : inst_name(m, p.receiver))
                << (p.accepted ? " held" : " rejected") << '\n';
    }
    for (const auto& cyc : out.trace.cycles) {
      std::cout << "  cycle";
      for (auto [d, h] : cyc.pairs) std::cout << ' ' << m.applicants[d] << ':' << inst_name(m, h);
      std::cout << '\n';
    }
  }
  return kPass;
}

// ---------------------------------------------------------------- menu

struct MenuArgs {
  std::string mech, market, applicant, method = "brute";
  bool full = false;
};

int cmd_menu(const MenuArgs& a) {
  const ml::Market m = ml::load_market(a.market);
  const ml::Mechanism mech = mechanism_arg(a.mech);
  const int d = m.applicant(a.applicant);
  if (a.method == "ipda") {
    if (mech != ml::Mechanism::APDA && mech != ml::Mechanism::IPDA) {
      throw UsageError("--method ipda applies to apda and ipda only");
    }
    print_menu(m, ml::menu_via_ipda(m, d));
  } else if (a.method == "brute") {
    print_menu(m, ml::menu_brute(mech, m, d,
                                 a.full ? ml::WitnessDomain::Full : ml::WitnessDomain::Singletons));
  } else {
    throw UsageError("unknown method '" + a.method + "' (brute|ipda)");
  }
  return kPass;
}

// ---------------------------------------------------------------- stable

struct StableArgs {
  std::string market;
  bool enumerate = false;
};

int cmd_stable(const StableArgs& a) {
  const ml::Market m = ml::load_market(a.market);
  const ml::Matching apda = ml::run_mechanism(ml::Mechanism::APDA, m);
  const ml::Matching ipda = ml::run_mechanism(ml::Mechanism::IPDA, m);
  std::cout << "apda\n";
  print_matching(m, apda);
  std::cout << "ipda\n";
  print_matching(m, ipda);
  if (a.enumerate) {
    const auto all = ml::enumerate_stable_matchings(m);
    std::cout << "stable matchings: " << all.size() << '\n';
    for (std::size_t i = 0; i < all.size(); ++i) {
      std::cout << "#" << i + 1 << '\n';
      print_matching(m, all[i]);
    }
  }
  return ml::is_stable(m, apda) && ml::is_stable(m, ipda) ? kPass : kFail;
}

// ---------------------------------------------------------------- unrejgr

struct UnrejArgs {
  std::string market, menu_of, given_list;
  std::vector<std::string> pair;
};

int cmd_unrejgr(const UnrejArgs& a) {
  const ml::Market m = ml::load_market(a.market);
  if (a.pair.empty() || a.pair.size() > 2) throw UsageError("--pair takes one or two applicants");
  std::vector<int> S;
  for (const auto& name : a.pair) S.push_back(m.applicant(name));
  std::sort(S.begin(), S.end());
  const ml::UnrejGraph g = ml::build_unrejgr(m, S);
  if (a.menu_of.empty()) {
    std::cout << ml::to_dot(g, m);
    return kPass;
  }
  if (a.pair.size() != 2) throw UsageError("--menu-of needs --pair d_star d_dagger");
  const int d_dagger = m.applicant(a.menu_of);
  const int d_star = m.applicant(a.pair[0]) == d_dagger ? m.applicant(a.pair[1])
                                                         : m.applicant(a.pair[0]);
  if (d_star == d_dagger) throw UsageError("--menu-of must name one member of --pair");
  print_menu(m, ml::menu_from_graph(g, d_dagger, parse_list(m, a.given_list)));
  return kPass;
}

// ---------------------------------------------------------------- represent

struct RepresentArgs {
  std::string mech, market, tamper;
  bool bits = false;
};

// raise-cutoff:h moves h's DA cutoff one place up its priority list.
void tamper_da(ml::DACutoffCertificate& c, const ml::Market& m, const std::string& spec) {
  const std::string prefix = "raise-cutoff:";
  if (spec.rfind(prefix, 0) != 0) throw UsageError("represent --tamper supports raise-cutoff:H");
  const int h = m.institution(spec.substr(prefix.size()));
  const auto& prio = m.prio[h];
  const int cur = c.d_min[h];
  if (cur == ml::kUnmatched) {
    if (!prio.empty()) c.d_min[h] = prio.back();
    return;
  }
  const int pos = ml::list_rank(prio, cur);
  if (pos > 0) c.d_min[h] = prio[pos - 1];
}

int cmd_represent(const RepresentArgs& a) {
  const ml::Market m = ml::load_market(a.market);
  int wrong = 0;
  std::uint64_t bits = 0;
  ml::Matching truth;
  if (a.mech == "da") {
    auto c = ml::encode_da_representation(m);
    if (!a.tamper.empty()) tamper_da(c, m, a.tamper);
    truth = ml::run_mechanism(ml::Mechanism::APDA, m);
    bits = ml::certificate_bit_size(c);
    for (int h = 0; h < m.num_institutions(); ++h) {
      std::cout << "cutoff " << m.institutions[h] << ' ' << appl_name(m, c.d_min[h]) << '\n';
    }
    for (int d = 0; d < m.num_applicants(); ++d) {
      const int got = ml::decode_da_representation(c, m, d, m.pref[d]);
      std::cout << m.applicants[d] << ' ' << inst_name(m, got) << '\n';
      if (got != truth[d]) ++wrong;
    }
  } else if (a.mech == "ttc") {
    if (!a.tamper.empty()) throw UsageError("represent --tamper applies to da");
    const auto c = ml::encode_ttc_representation(m);
    truth = ml::run_mechanism(ml::Mechanism::TTC, m);
    bits = ml::certificate_bit_size(c);
    for (int h1 = 0; h1 < m.num_institutions(); ++h1) {
      for (int h2 = 0; h2 < m.num_institutions(); ++h2) {
        if (c.at(h1, h2) == ml::kClosed) continue;
        std::cout << "cutoff " << m.institutions[h1] << ' ' << m.institutions[h2] << ' '
                  << appl_name(m, c.at(h1, h2)) << '\n';
      }
    }
    for (int d = 0; d < m.num_applicants(); ++d) {
      const int got = ml::decode_ttc_representation(c, m, d, m.pref[d]);
      std::cout << m.applicants[d] << ' ' << inst_name(m, got) << '\n';
      if (got != truth[d]) ++wrong;
    }
  } else {
    throw UsageError("--mech must be da or ttc");
  }
  if (a.bits) std::cout << "bits " << bits << '\n';
  std::cout << "decode mismatches " << wrong << '\n';
  return wrong == 0 ? kPass : kFail;
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
  std::string mech, market, tamper;
};

std::pair<std::string, std::string> split_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw UsageError("tamper spec needs KIND:ARGS");
  return {spec.substr(0, colon), spec.substr(colon + 1)};
}

void tamper_verification(ml::VerificationCertificate& c, const ml::Market& m,
                         const std::string& spec) {
  const auto [kind, args] = split_spec(spec);
  if (kind == "swap") {
    const auto comma = args.find(',');
    if (comma == std::string::npos) throw UsageError("swap:D1,D2");
    const int d1 = m.applicant(args.substr(0, comma));
    const int d2 = m.applicant(args.substr(comma + 1));
    if (c.mech == ml::Mechanism::TTC) {
      // Exchange the final pointing of the two applicants.
      int e1 = -1, e2 = -1;
      for (int i = 0; i < static_cast<int>(c.transcript.size()); ++i) {
        const auto& e = c.transcript[i];
        if (e.by_applicant && e.actor == d1) e1 = i;
        if (e.by_applicant && e.actor == d2) e2 = i;
      }
      if (e1 < 0 || e2 < 0) throw UsageError("both applicants must point in the transcript");
      std::swap(c.transcript[e1].target, c.transcript[e2].target);
    } else {
      std::swap(c.matching.to[d1], c.matching.to[d2]);
    }
  } else if (kind == "delete-edge") {
    if (c.mech == ml::Mechanism::TTC) throw UsageError("delete-edge applies to apda and ipda");
    int v;
    if (c.graph.side == ml::ImprSide::Inst) {
      v = m.applicant(args);
    } else {
      // Vertices are expansion slots; the first slot of the named institution.
      const ml::Expansion e = ml::expand_capacities(m);
      v = e.slots[m.institution(args)].front();
    }
    c.graph.label.at(v) = ml::kUnmatched;
    c.graph.target.at(v) = ml::kUnmatched;
  } else {
    throw UsageError("unknown tamper kind '" + kind + "' (swap, delete-edge)");
  }
}

int cmd_verify(const VerifyArgs& a) {
  const ml::Market m = ml::load_market(a.market);
  const ml::Mechanism mech = mechanism_arg(a.mech);
  if (mech == ml::Mechanism::SD || mech == ml::Mechanism::SDRot) {
    throw UsageError("--mech must be apda, ipda or ttc");
  }
  auto c = ml::encode_verification(mech, m);
  if (!a.tamper.empty()) tamper_verification(c, m, a.tamper);
  std::vector<std::string> rejecters;
  for (int d = 0; d < m.num_applicants(); ++d) {
    const ml::CheckResult r = ml::check_verification(mech, m, d, m.pref[d], c);
    std::cout << m.applicants[d] << ' ' << (r.ok ? "accept " : "reject ")
              << inst_name(m, r.my_match) << '\n';
    if (!r.ok) rejecters.push_back(m.applicants[d]);
  }
  std::cout << "bits " << ml::certificate_bit_size(c, m) << '\n';
  std::cout << "rejecting:";
  for (const auto& r : rejecters) std::cout << ' ' << r;
  std::cout << '\n';
  return rejecters.empty() ? kPass : kFail;
}

// ---------------------------------------------------------------- construct

struct ConstructArgs {
  std::string family, bits, emit;
  int k = 2;
};

int cmd_construct(const ConstructArgs& a) {
  const ml::FamilyId f = ml::parse_family(a.family);
  ml::FamilyParams p;
  p.k = a.k;
  for (char ch : a.bits) {
    if (ch != '0' && ch != '1') throw UsageError("--bits takes a string of 0 and 1");
    p.bits.push_back(ch - '0');
  }
  const ml::ConstructionInstance inst = ml::gen_construction(f, p);
  const std::string text = ml::serialize_market(inst.market);
  if (a.emit.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(a.emit);
    if (!out) throw UsageError("cannot write '" + a.emit + "'");
    out << text;
  }
  std::cout << "# scenarios\n";
  for (const auto& s : inst.scenarios) {
    std::cout << "# " << s.label << ' ' << appl_name(inst.market, s.applicant) << ':';
    for (int h : s.list) std::cout << ' ' << inst.market.institutions[h];
    std::cout << '\n';
  }
  return kPass;
}

// ---------------------------------------------------------------- validate

struct ValidateArgs {
  std::string family;
  int k = 2;
};

int cmd_validate(const ValidateArgs& a, const Common& c) {
  ml::ExperimentConfig cfg;
  cfg.id = a.family + "_k" + std::to_string(a.k);
  cfg.kind = "validate";
  cfg.family = a.family;
  cfg.k = a.k;
  cfg.jobs = c.jobs;
  const ml::Report r = ml::run_experiment(cfg);
  std::cout << ml::emit_report(r, c.csv ? ml::ReportFormat::Csv : ml::ReportFormat::Table);
  if (!r.all_pass()) {
    const auto f = ml::validate_family(ml::parse_family(a.family), a.k, c.jobs);
    for (const auto& s : f.mismatches) std::cerr << s << '\n';
  }
  return r.all_pass() ? kPass : kFail;
}

// ---------------------------------------------------------------- measure

struct MeasureArgsCli {
  std::string measure, mech, market, family, d_star, d_dagger, domain = "singletons";
  std::vector<std::string> vary;
  bool exhaustive = false, timing = false;
  int k = 2;
};

int cmd_measure(const MeasureArgsCli& a, const Common& c) {
  ml::ExperimentConfig cfg;
  cfg.jobs = c.jobs;
  cfg.timing = a.timing;
  cfg.seed = c.seed;
  cfg.measure = a.measure;
  if (!a.family.empty()) {
    cfg.id = a.family + "_k" + std::to_string(a.k);
    cfg.kind = "distinctness";
    cfg.family = a.family;
    cfg.k = a.k;
  } else if (a.exhaustive && !a.market.empty()) {
    if (a.mech.empty() || a.measure.empty()) throw UsageError("--mech and --measure are required");
    cfg.id = "measure";
    cfg.kind = "count";
    cfg.mechanism = a.mech;
    cfg.market = a.market;
    cfg.vary = a.vary;
    cfg.d_star = a.d_star;
    cfg.d_dagger = a.d_dagger;
    cfg.domain = a.domain;
  } else {
    throw UsageError("measure needs --market FILE --exhaustive or --family F --k K");
  }
  const ml::Report r = ml::run_experiment(cfg);
  std::cout << ml::emit_report(r, c.csv ? ml::ReportFormat::Csv : ml::ReportFormat::Table);
  return r.all_pass() ? kPass : kFail;
}

// ---------------------------------------------------------------- report

struct ReportArgs {
  std::string config;
  bool timing = false;
};

int cmd_report(const ReportArgs& a, const Common& c) {
  std::ifstream in(a.config);
  if (!in) throw UsageError("cannot read config '" + a.config + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  ml::Report all;
  for (auto cfg : ml::parse_experiment_configs(ss.str())) {
    if (c.jobs > 1) cfg.jobs = c.jobs;
    if (c.seed != 0) cfg.seed = c.seed;
    cfg.timing = cfg.timing || a.timing;
    all.append(ml::run_experiment(cfg));
  }
  std::cout << ml::emit_report(all, c.csv ? ml::ReportFormat::Csv : ml::ReportFormat::Table);
  return all.all_pass() ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Matching-market mechanisms, menus, certificates and complexity experiments"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--seed", common.seed, "Seed for every random choice")->default_val(0);
  app.add_option("--jobs", common.jobs, "Worker threads; output does not depend on it")
      ->default_val(1)
      ->check(CLI::PositiveNumber);
  app.add_flag("--csv", common.csv, "CSV report output");

  std::function<int()> action;

  RunArgs run;
  auto* s_run = app.add_subcommand("run", "[mechanisms] Run a mechanism and print the matching");
  s_run->add_option("--mech", run.mech, "sd|sdrot|ttc|apda|ipda")->required();
  s_run->add_option("--market", run.market, "Market file or example name")->required();
  s_run->add_option("--policy", run.policy, "lowest|highest|random");
  s_run->add_flag("--trace", run.trace, "Print the execution trace");
  s_run->callback([&] { action = [&] { return cmd_run(run, common); }; });

  MenuArgs menu;
  auto* s_menu = app.add_subcommand("menu", "[menus] Menu of one applicant");
  s_menu->add_option("--mech", menu.mech, "Mechanism")->required();
  s_menu->add_option("--market", menu.market, "Market file or example name")->required();
  s_menu->add_option("--applicant", menu.applicant, "Applicant name")->required();
  s_menu->add_option("--method", menu.method, "brute|ipda");
  s_menu->add_flag("--full-domain", menu.full, "Brute force over every list");
  s_menu->callback([&] { action = [&] { return cmd_menu(menu); }; });

  StableArgs stable;
  auto* s_stable = app.add_subcommand("stable", "[menus] Stable outcomes of a market");
  s_stable->add_option("--market", stable.market, "Market file or example name")->required();
  s_stable->add_flag("--enumerate", stable.enumerate, "List every stable matching");
  s_stable->callback([&] { action = [&] { return cmd_stable(stable); }; });

  UnrejArgs unrej;
  auto* s_unrej = app.add_subcommand("unrejgr", "[unrej_graph] Un-rejection graph in DOT text");
  s_unrej->add_option("--market", unrej.market, "Market file or example name")->required();
  s_unrej->add_option("--pair", unrej.pair, "d_star [d_dagger]")->required()->expected(1, 2);
  s_unrej->add_option("--menu-of", unrej.menu_of, "Print this applicant's represented menu");
  s_unrej->add_option("--given-list", unrej.given_list, "The other applicant's list, e.g. \"h3 h1\"");
  s_unrej->callback([&] { action = [&] { return cmd_unrejgr(unrej); }; });

  RepresentArgs rep;
  auto* s_rep = app.add_subcommand("represent", "[protocols] Cutoff certificate and decoding");
  s_rep->add_option("--mech", rep.mech, "da|ttc")->required();
  s_rep->add_option("--market", rep.market, "Market file or example name")->required();
  s_rep->add_flag("--bits", rep.bits, "Print the certificate size");
  s_rep->add_option("--tamper", rep.tamper, "raise-cutoff:H");
  s_rep->callback([&] { action = [&] { return cmd_represent(rep); }; });

  VerifyArgs ver;
  auto* s_ver = app.add_subcommand("verify", "[protocols] Verification certificate and checks");
  s_ver->add_option("--mech", ver.mech, "apda|ipda|ttc")->required();
  s_ver->add_option("--market", ver.market, "Market file or example name")->required();
  s_ver->add_option("--tamper", ver.tamper, "swap:D1,D2 or delete-edge:V");
  s_ver->callback([&] { action = [&] { return cmd_verify(ver); }; });

  ConstructArgs con;
  auto* s_con = app.add_subcommand("construct", "[constructions] Emit a lower-bound market");
  s_con->add_option("--family", con.family, "Family name")->required();
  s_con->add_option("--k", con.k, "Size parameter")->required();
  s_con->add_option("--bits", con.bits, "Bit string, first bit first");
  s_con->add_option("--emit", con.emit, "Write the market to this file");
  s_con->callback([&] { action = [&] { return cmd_construct(con); }; });

  ValidateArgs val;
  auto* s_val = app.add_subcommand("validate", "[constructions] Check every profile against the formulas");
  s_val->add_option("--family", val.family, "Family name")->required();
  s_val->add_option("--k", val.k, "Size parameter")->required();
  s_val->callback([&] { action = [&] { return cmd_validate(val, common); }; });

  MeasureArgsCli mea;
  auto* s_mea = app.add_subcommand("measure", "[complexity_lab] Count distinct induced functions");
  s_mea->add_option("--measure", mea.measure, "Measure name");
  s_mea->add_option("--mech", mea.mech, "Mechanism");
  s_mea->add_option("--market", mea.market, "Skeleton market");
  s_mea->add_flag("--exhaustive", mea.exhaustive, "Every list for the --vary applicants");
  s_mea->add_option("--vary", mea.vary, "Applicants whose lists range over all lists");
  s_mea->add_option("--d-star", mea.d_star, "Applicant whose report is the input");
  s_mea->add_option("--d-dagger", mea.d_dagger, "Applicant whose outcome is the output");
  s_mea->add_option("--domain", mea.domain, "singletons|full");
  s_mea->add_option("--family", mea.family, "Construction family");
  s_mea->add_option("--k", mea.k, "Family size parameter");
  s_mea->add_flag("--timing", mea.timing, "Fill runtime_ms");
  s_mea->callback([&] { action = [&] { return cmd_measure(mea, common); }; });

  ReportArgs repo;
  auto* s_repo = app.add_subcommand("report", "[cli] Run a JSON experiment config");
  s_repo->add_option("--config", repo.config, "Config file")->required();
  s_repo->add_flag("--timing", repo.timing, "Fill runtime_ms");
  s_repo->callback([&] { action = [&] { return cmd_report(repo, common); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }
  try {
    return action();
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const ml::ConfigError& e) {
    std::cerr << e.what() << '\n';
    return kUsage;
  } catch (const ml::MarketError& e) {
    std::cerr << "market error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kUsage;
  } catch (const std::out_of_range& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFail;
  }
}
