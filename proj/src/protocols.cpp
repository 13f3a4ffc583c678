#include "matchlab/protocols.hpp"

#include <algorithm>
#include <functional>
#include <optional>

#include "engines.hpp"
#include "matchlab/menus.hpp"

namespace matchlab {

namespace {

bool ranks(const std::vector<int>& list, int x) {
  return std::find(list.begin(), list.end(), x) != list.end();
}

// d at least as good as c under list.
bool weakly_above(const std::vector<int>& list, int d, int c) {
  return d == c || prefers(list, d, c);
}

}  // namespace

// ---------------------------------------------------------------- DA cutoffs

DACutoffCertificate encode_da_representation(const Market& m) {
  Matching mu = run_mechanism(Mechanism::APDA, m);
  DACutoffCertificate c;
  c.num_applicants = m.num_applicants();
  c.d_min.assign(m.num_institutions(), kUnmatched);
  std::vector<std::vector<int>> members(m.num_institutions());
  for (int d = 0; d < mu.size(); ++d) {
    if (mu[d] != kUnmatched) members[mu[d]].push_back(d);
  }
  for (int h = 0; h < m.num_institutions(); ++h) {
    if (static_cast<int>(members[h].size()) < m.capacity[h]) continue;
    int lowest = members[h].front();
    for (int d : members[h]) {
      if (prefers(m.prio[h], lowest, d)) lowest = d;
    }
    c.d_min[h] = lowest;
  }
  return c;
}

int decode_da_representation(const DACutoffCertificate& c, const Market& Q,
                             int d, const PreferenceList& P_d) {
  for (int h : P_d) {
    if (!ranks(Q.prio[h], d)) continue;
    if (c.d_min[h] == kUnmatched || weakly_above(Q.prio[h], d, c.d_min[h])) {
      return h;
    }
  }
  return kUnmatched;
}

// ---------------------------------------------------------------- TTC cutoffs

TTCCutoffCertificate encode_ttc_representation(const Market& m) {
  const int ni = m.num_institutions();
  TTCCutoffCertificate c;
  c.num_applicants = m.num_applicants();
  c.num_institutions = ni;
  c.cutoff.assign(static_cast<std::size_t>(ni) * ni, kClosed);

  detail::TtcEngine eng(m);
  while (eng.settle()) {
    const std::vector<int> cycle = eng.cycles().front();
    for (int d : cycle) {
      int h2 = eng.applicant_points(d);
      // Institutions whose top remaining applicant leaves for h2 admit to h2
      // down to her; later records at the same pair are lower priority.
      for (int h1 = 0; h1 < ni; ++h1) {
        if (eng.active(h1) && eng.institution_points(h1) == d) {
          c.cutoff[h1 * ni + h2] = d;
        }
      }
    }
    eng.clear_cycle(cycle);
  }

  const Matching& mu = eng.matching();
  for (int d = 0; d < m.num_applicants(); ++d) {
    if (decode_ttc_representation(c, m, d, m.pref[d]) != mu[d]) {
      throw CutoffValidationError(
          "TTC cutoff reconstruction fails for applicant " + m.applicants[d],
          m);
    }
  }
  return c;
}

int decode_ttc_representation(const TTCCutoffCertificate& c, const Market& Q,
                              int d, const PreferenceList& P_d) {
  for (int h2 : P_d) {
    for (int h1 = 0; h1 < c.num_institutions; ++h1) {
      int cut = c.at(h1, h2);
      if (cut == kClosed || !ranks(Q.prio[h1], d)) continue;
      if (weakly_above(Q.prio[h1], d, cut)) return h2;
    }
  }
  return kUnmatched;
}

// ---------------------------------------------------------------- graphs

int ImprovementGraph::num_edges() const {
  return static_cast<int>(
      std::count_if(target.begin(), target.end(), [](int t) { return t != kUnmatched; }));
}

namespace {

// d ranks above h's current holder, or h has a free seat it would give d.
bool inst_qualifies(const PriorityList& prio_h, int d, int holder) {
  return ranks(prio_h, d) && (holder == kUnmatched || prefers(prio_h, d, holder));
}

// Dual: d lists h above her current match.
bool appl_qualifies(const PreferenceList& pref_d, int h, int match) {
  return ranks(pref_d, h) && (match == kUnmatched || prefers(pref_d, h, match));
}

}  // namespace

ImprovementGraph build_improvement_graph(ImprSide side, const Market& m,
                                         const Matching& mu) {
  if (!m.has_unit_capacities()) {
    throw std::invalid_argument("improvement graphs need unit capacities");
  }
  std::vector<int> holder(m.num_institutions(), kUnmatched);
  for (int d = 0; d < mu.size(); ++d) {
    if (mu[d] != kUnmatched) holder[mu[d]] = d;
  }
  ImprovementGraph g;
  g.side = side;
  if (side == ImprSide::Inst) {
    g.label.assign(m.num_applicants(), kUnmatched);
    g.target.assign(m.num_applicants(), kUnmatched);
    for (int d = 0; d < m.num_applicants(); ++d) {
      for (int h : m.pref[d]) {
        if (inst_qualifies(m.prio[h], d, holder[h])) {
          g.label[d] = h;
          g.target[d] = holder[h];
          break;
        }
      }
    }
  } else {
    g.label.assign(m.num_institutions(), kUnmatched);
    g.target.assign(m.num_institutions(), kUnmatched);
    for (int h = 0; h < m.num_institutions(); ++h) {
      for (int d : m.prio[h]) {
        if (appl_qualifies(m.pref[d], h, mu[d])) {
          g.label[h] = d;
          g.target[h] = mu[d];
          break;
        }
      }
    }
  }
  return g;
}

bool is_acyclic(const ImprovementGraph& g) {
  const int n = static_cast<int>(g.target.size());
  std::vector<int> state(n, 0);
  for (int s = 0; s < n; ++s) {
    std::vector<int> path;
    int v = s;
    while (v != kUnmatched && state[v] == 0) {
      state[v] = 1;
      path.push_back(v);
      v = g.target[v];
      if (v != kUnmatched && (v < 0 || v >= n)) return false;
    }
    if (v != kUnmatched && state[v] == 1) return false;
    for (int x : path) state[x] = 2;
  }
  return true;
}

// ---------------------------------------------------------------- TTC protocol

namespace {

// Public state of the pointing protocol. The driver supplies applicant
// answers; institution answers follow from the public priorities.
class TtcProtocol {
 public:
  explicit TtcProtocol(const Market& m)
      : m_(m),
        remaining_(m.num_applicants(), 1),
        cap_left_(m.capacity),
        mu_(m.num_applicants()) {}

  struct Node {
    bool applicant;
    int id;
  };

  bool active(int h) const {
    if (cap_left_[h] == 0) return false;
    return std::any_of(m_.prio[h].begin(), m_.prio[h].end(),
                       [&](int d) { return remaining_[d]; });
  }

  int top_applicant(int h) const {
    for (int d : m_.prio[h]) {
      if (remaining_[d]) return d;
    }
    return kUnmatched;
  }

  int favourite(const PreferenceList& list) const {
    for (int h : list) {
      if (active(h)) return h;
    }
    return kUnmatched;
  }

  // Next actor, or nullopt once the protocol has terminated.
  std::optional<Node> next_actor() {
    while (!chain_.empty() && !chain_.back().applicant &&
           !active(chain_.back().id)) {
      chain_.pop_back();
    }
    if (chain_.empty()) {
      for (int h = 0; h < m_.num_institutions(); ++h) {
        if (active(h)) {
          chain_.push_back({false, h});
          break;
        }
      }
      if (chain_.empty()) return std::nullopt;
    }
    return chain_.back();
  }

  // The current actor points at target. Returns false on a move the
  // protocol does not allow.
  bool apply(int target) {
    Node actor = chain_.back();
    if (actor.applicant) {
      if (target == kUnmatched) {
        remaining_[actor.id] = 0;
        chain_.pop_back();
        return true;
      }
      if (target < 0 || target >= m_.num_institutions() || !active(target)) {
        return false;
      }
    } else if (target != top_applicant(actor.id)) {
      return false;
    }
    Node next{!actor.applicant, target};
    auto it = std::find_if(chain_.begin(), chain_.end(), [&](const Node& n) {
      return n.applicant == next.applicant && n.id == next.id;
    });
    if (it == chain_.end()) {
      chain_.push_back(next);
      return true;
    }
    // Cycle from *it to the actor: each applicant takes the institution
    // following her.
    std::size_t start = static_cast<std::size_t>(it - chain_.begin());
    std::size_t len = chain_.size() - start;
    for (std::size_t i = start; i < chain_.size(); ++i) {
      if (!chain_[i].applicant) continue;
      std::size_t j = start + (i - start + 1) % len;
      int h = chain_[j].id;
      mu_.to[chain_[i].id] = h;
      remaining_[chain_[i].id] = 0;
      --cap_left_[h];
    }
    chain_.resize(start);
    return true;
  }

  const Matching& matching() const { return mu_; }

 private:
  const Market& m_;
  std::vector<char> remaining_;
  std::vector<int> cap_left_;
  std::vector<Node> chain_;
  Matching mu_;
};

std::vector<TranscriptEvent> ttc_transcript(const Market& m) {
  TtcProtocol proto(m);
  std::vector<TranscriptEvent> out;
  while (auto actor = proto.next_actor()) {
    int target = actor->applicant ? proto.favourite(m.pref[actor->id])
                                  : proto.top_applicant(actor->id);
    out.push_back({actor->applicant, actor->id, target});
    proto.apply(target);
  }
  return out;
}

// Replays the transcript. `check` sees every applicant event with the
// public state and may veto it.
std::optional<Matching> replay_transcript(
    const Market& Q, const std::vector<TranscriptEvent>& events,
    const std::function<bool(const TtcProtocol&, const TranscriptEvent&)>& check) {
  TtcProtocol proto(Q);
  std::size_t i = 0;
  while (auto actor = proto.next_actor()) {
    if (i == events.size()) return std::nullopt;
    const TranscriptEvent& ev = events[i++];
    if (ev.by_applicant != actor->applicant || ev.actor != actor->id) {
      return std::nullopt;
    }
    if (ev.by_applicant && check && !check(proto, ev)) return std::nullopt;
    if (!proto.apply(ev.target)) return std::nullopt;
  }
  if (i != events.size()) return std::nullopt;
  return proto.matching();
}

bool is_da(Mechanism mech) {
  return mech == Mechanism::APDA || mech == Mechanism::IPDA;
}

// DA certificates live on the unit-capacity expansion.
struct Working {
  Expansion e;
  const Market* market;
  bool expanded;
};

Working working_market(const Market& m) {
  Working w;
  w.expanded = !m.has_unit_capacities();
  if (w.expanded) {
    w.e = expand_capacities(m);
    w.market = nullptr;
  } else {
    w.market = &m;
  }
  return w;
}

const Market& market_of(const Working& w) {
  return w.expanded ? w.e.market : *w.market;
}

}  // namespace

VerificationCertificate encode_verification(Mechanism mech, const Market& m) {
  VerificationCertificate c;
  c.mech = mech;
  if (mech == Mechanism::TTC) {
    c.transcript = ttc_transcript(m);
    return c;
  }
  if (!is_da(mech)) {
    throw std::invalid_argument("verification covers apda, ipda and ttc");
  }
  Working w = working_market(m);
  const Market& wm = market_of(w);
  c.matching = run_mechanism(mech, wm);
  c.graph = build_improvement_graph(
      mech == Mechanism::IPDA ? ImprSide::Inst : ImprSide::Appl, wm, c.matching);
  return c;
}

namespace {

// Checks anyone can run from the certificate and the priorities.
bool public_da_checks(Mechanism mech, const Market& wm,
                      const VerificationCertificate& c,
                      std::vector<int>& holder) {
  const int na = wm.num_applicants();
  const int ni = wm.num_institutions();
  if (c.matching.size() != na) return false;
  holder.assign(ni, kUnmatched);
  for (int d = 0; d < na; ++d) {
    int h = c.matching[d];
    if (h == kUnmatched) continue;
    if (h < 0 || h >= ni || holder[h] != kUnmatched) return false;
    if (!ranks(wm.prio[h], d)) return false;
    holder[h] = d;
  }
  const ImprovementGraph& g = c.graph;
  const bool inst = mech == Mechanism::IPDA;
  if (g.side != (inst ? ImprSide::Inst : ImprSide::Appl)) return false;
  const int vertices = inst ? na : ni;
  const int labels = inst ? ni : na;
  if (static_cast<int>(g.label.size()) != vertices ||
      static_cast<int>(g.target.size()) != vertices) {
    return false;
  }
  for (int v = 0; v < vertices; ++v) {
    int l = g.label[v];
    if (l == kUnmatched) {
      if (g.target[v] != kUnmatched) return false;
      continue;
    }
    if (l < 0 || l >= labels) return false;
    // A label whose partner is empty names the top qualifier but adds no edge.
    int expected = inst ? holder[l] : c.matching[l];
    if (g.target[v] != expected) return false;
  }
  return is_acyclic(g);
}

bool private_da_checks(Mechanism mech, const Market& wm, int d,
                       const PreferenceList& P, const VerificationCertificate& c,
                       const std::vector<int>& holder) {
  const int mine = c.matching[d];
  if (mine != kUnmatched && !ranks(P, mine)) return false;
  // No blocking pair involving d.
  for (int h : P) {
    if (h == mine) break;
    if (!ranks(wm.prio[h], d)) continue;
    if (holder[h] == kUnmatched || prefers(wm.prio[h], d, holder[h])) {
      return false;
    }
  }
  const ImprovementGraph& g = c.graph;
  if (mech == Mechanism::IPDA) {
    int want = kUnmatched;
    for (int h : P) {
      if (inst_qualifies(wm.prio[h], d, holder[h])) {
        want = h;
        break;
      }
    }
    return g.label[d] == want;
  }
  // Each label must qualify, and nobody ranked above it may.
  for (int h = 0; h < wm.num_institutions(); ++h) {
    const int dy = g.label[h];
    const bool mine_qualifies = appl_qualifies(P, h, mine);
    if (dy == d) {
      if (!mine_qualifies || !ranks(wm.prio[h], d)) return false;
      continue;
    }
    if (!ranks(wm.prio[h], d)) continue;
    if ((dy == kUnmatched || prefers(wm.prio[h], d, dy)) && mine_qualifies) return false;
  }
  return true;
}

}  // namespace

CheckResult check_verification(Mechanism mech, const Market& Q, int d,
                               const PreferenceList& P_d,
                               const VerificationCertificate& c) {
  CheckResult r;
  if (c.mech != mech) return r;
  if (mech == Mechanism::TTC) {
    auto mu = replay_transcript(
        Q, c.transcript, [&](const TtcProtocol& proto, const TranscriptEvent& ev) {
          return ev.actor != d || ev.target == proto.favourite(P_d);
        });
    if (!mu) return r;
    r.ok = true;
    r.my_match = (*mu)[d];
    return r;
  }
  if (!is_da(mech)) return r;
  Working w = working_market(Q);
  const Market& wm = market_of(w);
  PreferenceList P = w.expanded ? expand_list(w.e, P_d) : P_d;
  std::vector<int> holder;
  if (!public_da_checks(mech, wm, c, holder)) return r;
  if (!private_da_checks(mech, wm, d, P, c, holder)) return r;
  r.ok = true;
  int mine = c.matching[d];
  r.my_match = (w.expanded && mine != kUnmatched) ? w.e.slot_parent[mine] : mine;
  return r;
}

Matching certificate_matching(const VerificationCertificate& c,
                              const Market& Q) {
  if (c.mech == Mechanism::TTC) {
    auto mu = replay_transcript(Q, c.transcript, nullptr);
    return mu ? *mu : Matching(Q.num_applicants());
  }
  if (Q.has_unit_capacities()) return c.matching;
  return contract_matching(c.matching, expand_capacities(Q).slot_parent);
}

// ---------------------------------------------------------------- bits

std::uint64_t certificate_bit_size(const DACutoffCertificate& c) {
  return c.d_min.size() * static_cast<std::uint64_t>(
                              ceil_log2(static_cast<std::uint64_t>(c.num_applicants) + 1));
}

std::uint64_t certificate_bit_size(const TTCCutoffCertificate& c) {
  return c.cutoff.size() * static_cast<std::uint64_t>(
                               ceil_log2(static_cast<std::uint64_t>(c.num_applicants) + 2));
}

std::uint64_t certificate_bit_size(const VerificationCertificate& c,
                                   const Market& Q) {
  if (c.mech == Mechanism::TTC) {
    std::uint64_t per = ceil_log2(static_cast<std::uint64_t>(Q.num_applicants()) + 1) +
                        ceil_log2(static_cast<std::uint64_t>(Q.num_institutions()) + 1);
    return c.transcript.size() * per;
  }
  // Sizes of the market the certificate is written on.
  const std::uint64_t na = c.matching.to.size();
  std::uint64_t ni = 0;
  for (int h : Q.capacity) ni += static_cast<std::uint64_t>(h);
  std::uint64_t labels = c.graph.side == ImprSide::Inst ? ni : na;
  std::uint64_t bits = na * ceil_log2(ni + 1);
  bits += c.graph.label.size() * static_cast<std::uint64_t>(ceil_log2(labels + 1));
  return bits;
}

}  // namespace matchlab
