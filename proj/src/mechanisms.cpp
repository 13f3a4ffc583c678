#include "matchlab/mechanisms.hpp"

#include <algorithm>
#include <stdexcept>

#include "engines.hpp"

namespace matchlab {

using detail::kUnranked;

std::string to_string(Mechanism m) {
  switch (m) {
    case Mechanism::SD: return "sd";
    case Mechanism::SDRot: return "sdrot";
    case Mechanism::TTC: return "ttc";
    case Mechanism::APDA: return "apda";
    case Mechanism::IPDA: return "ipda";
  }
  return "?";
}

Mechanism parse_mechanism(const std::string& name) {
  for (Mechanism m : {Mechanism::SD, Mechanism::SDRot, Mechanism::TTC,
                      Mechanism::APDA, Mechanism::IPDA}) {
    if (to_string(m) == name) return m;
  }
  throw std::invalid_argument("unknown mechanism '" + name + "'");
}

// ---------------------------------------------------------------- SD

Matching run_sd(const Market& m, const std::vector<int>& order) {
  Matching mu(m.num_applicants());
  std::vector<int> left = m.capacity;
  std::vector<char> seen(m.num_applicants(), 0);
  for (int d : order) {
    if (d < 0 || d >= m.num_applicants()) {
      throw std::out_of_range("applicant " + std::to_string(d) +
                              " not in market");
    }
    if (seen[d]) throw std::invalid_argument("applicant repeated in order");
    seen[d] = 1;
    for (int h : m.pref[d]) {
      if (left[h] > 0) {
        --left[h];
        mu.to[d] = h;
        break;
      }
    }
  }
  return mu;
}

bool has_sdrot_shape(const Market& m) {
  const int n = m.num_applicants() - 1;
  const int rot = m.num_institutions() - n;
  if (n < 1 || rot < 1 || n % rot != 0) return false;
  for (int h = 0; h < m.num_institutions(); ++h) {
    bool is_rot = m.institutions[h].rfind("hrot", 0) == 0;
    if (is_rot != (h >= n) || m.capacity[h] != 1) return false;
  }
  return true;
}

Matching run_sdrot(const Market& m) {
  if (!has_sdrot_shape(m)) {
    throw std::invalid_argument("market does not have the SDrot shape");
  }
  const int n = m.num_applicants() - 1;
  const int stride = n / (m.num_institutions() - n);
  Matching mu(m.num_applicants());
  int start = -1;
  for (int h : m.pref[0]) {
    if (h >= n) {
      start = (h - n) * stride + 1;
      mu.to[0] = h;
      break;
    }
  }
  if (start < 0) return mu;
  std::vector<char> taken(n, 0);
  for (int d = start; d <= n; ++d) {
    for (int h : m.pref[d]) {
      if (h < n && !taken[h]) {
        taken[h] = 1;
        mu.to[d] = h;
        break;
      }
    }
  }
  return mu;
}

// ---------------------------------------------------------------- IPDA

namespace detail {

IpdaEngine::IpdaEngine(const Market& m, const std::vector<int>& reject_all)
    : m_(m),
      na_(m.num_applicants()),
      ni_(m.num_institutions()),
      rank_(static_cast<std::size_t>(na_) * ni_, kUnranked),
      next_(ni_, 0),
      held_(ni_, 0),
      holder_(na_, kUnmatched),
      reject_all_(na_, 0) {
  for (int d = 0; d < na_; ++d) {
    const auto& p = m.pref[d];
    for (int r = 0; r < static_cast<int>(p.size()); ++r) {
      rank_[static_cast<std::size_t>(d) * ni_ + p[r]] = r;
    }
  }
  for (int d : reject_all) reject_all_[d] = 1;
}

Proposal IpdaEngine::propose(int h) {
  int d = m_.prio[h][next_[h]++];
  Proposal p{h, d, false};
  if (reject_all_[d]) return p;
  int r = rank_[static_cast<std::size_t>(d) * ni_ + h];
  if (r == kUnranked) return p;
  int cur = holder_[d];
  if (cur != kUnmatched &&
      rank_[static_cast<std::size_t>(d) * ni_ + cur] <= r) {
    return p;
  }
  if (cur != kUnmatched) --held_[cur];
  holder_[d] = h;
  ++held_[h];
  p.accepted = true;
  return p;
}

void IpdaEngine::run(Policy policy, std::vector<Proposal>* log) {
  if (policy.kind == PolicyKind::LowestIndex) {
    for (;;) {
      int h = 0;
      while (h < ni_ && !active(h)) ++h;
      if (h == ni_) return;
      Proposal p = propose(h);
      if (log) log->push_back(p);
    }
  }
  PolicyPicker picker(policy);
  std::vector<int> cand;
  for (;;) {
    cand.clear();
    for (int h = 0; h < ni_; ++h) {
      if (active(h)) cand.push_back(h);
    }
    if (cand.empty()) return;
    Proposal p = propose(picker.pick(cand));
    if (log) log->push_back(p);
  }
}

void IpdaEngine::release(int d) {
  int h = holder_[d];
  if (h != kUnmatched) {
    --held_[h];
    holder_[d] = kUnmatched;
  }
  reject_all_[d] = 1;
}

void IpdaEngine::run_single_proposer(
    const std::function<void(const Proposal&)>& on) {
  for (;;) {
    int found = -1;
    for (int h = 0; h < ni_; ++h) {
      if (!active(h)) continue;
      if (found >= 0) {
        throw std::logic_error(
            "continuation has two institutions proposing at once");
      }
      found = h;
    }
    if (found < 0) return;
    on(propose(found));
  }
}

Matching IpdaEngine::matching() const {
  Matching mu(na_);
  mu.to = holder_;
  return mu;
}

}  // namespace detail

Outcome run_ipda(const Market& m, Policy policy,
                 const std::vector<int>& reject_all) {
  detail::IpdaEngine eng(m, reject_all);
  Outcome out;
  out.trace.institution_proposing = true;
  eng.run(policy, &out.trace.proposals);
  out.matching = eng.matching();
  return out;
}

// ---------------------------------------------------------------- APDA

namespace {

class ApdaEngine {
 public:
  explicit ApdaEngine(const Market& m)
      : m_(m),
        na_(m.num_applicants()),
        ni_(m.num_institutions()),
        prank_(static_cast<std::size_t>(na_) * ni_, kUnranked),
        next_(na_, 0),
        held_(ni_),
        mu_(na_) {
    for (int h = 0; h < ni_; ++h) {
      const auto& q = m.prio[h];
      for (int r = 0; r < static_cast<int>(q.size()); ++r) {
        prank_[static_cast<std::size_t>(h) * na_ + q[r]] = r;
      }
    }
  }

  bool free(int d) const {
    return mu_.to[d] == kUnmatched &&
           next_[d] < static_cast<int>(m_.pref[d].size());
  }

  Proposal propose(int d) {
    int h = m_.pref[d][next_[d]++];
    Proposal p{d, h, false};
    const int* rank = &prank_[static_cast<std::size_t>(h) * na_];
    if (rank[d] == kUnranked) return p;
    auto& held = held_[h];
    if (static_cast<int>(held.size()) < m_.capacity[h]) {
      held.push_back(d);
      mu_.to[d] = h;
      p.accepted = true;
      return p;
    }
    auto worst = std::max_element(
        held.begin(), held.end(), [&](int a, int b) { return rank[a] < rank[b]; });
    if (rank[*worst] < rank[d]) return p;
    mu_.to[*worst] = kUnmatched;
    *worst = d;
    mu_.to[d] = h;
    p.accepted = true;
    return p;
  }

  void run(Policy policy, std::vector<Proposal>* log) {
    if (policy.kind == PolicyKind::LowestIndex) {
      for (;;) {
        int d = 0;
        while (d < na_ && !free(d)) ++d;
        if (d == na_) return;
        Proposal p = propose(d);
        if (log) log->push_back(p);
      }
    }
    detail::PolicyPicker picker(policy);
    std::vector<int> cand;
    for (;;) {
      cand.clear();
      for (int d = 0; d < na_; ++d) {
        if (free(d)) cand.push_back(d);
      }
      if (cand.empty()) return;
      Proposal p = propose(picker.pick(cand));
      if (log) log->push_back(p);
    }
  }

  const Matching& matching() const { return mu_; }

 private:
  const Market& m_;
  int na_;
  int ni_;
  std::vector<int> prank_;  // prank_[h * na + d]
  std::vector<int> next_;
  std::vector<std::vector<int>> held_;
  Matching mu_;
};

}  // namespace

Outcome run_apda(const Market& m, Policy policy) {
  ApdaEngine eng(m);
  Outcome out;
  eng.run(policy, &out.trace.proposals);
  out.matching = eng.matching();
  return out;
}

// ---------------------------------------------------------------- TTC

namespace detail {

TtcEngine::TtcEngine(const Market& m)
    : m_(m),
      na_(m.num_applicants()),
      ni_(m.num_institutions()),
      remaining_(na_, 1),
      active_(ni_, 1),
      cap_left_(m.capacity),
      app_ptr_(na_, kUnmatched),
      inst_ptr_(ni_, kUnmatched),
      mu_(na_) {}

bool TtcEngine::settle() {
  bool changed = true;
  while (changed) {
    changed = false;
    for (int h = 0; h < ni_; ++h) {
      if (!active_[h]) continue;
      int top = kUnmatched;
      if (cap_left_[h] > 0) {
        for (int d : m_.prio[h]) {
          if (remaining_[d]) {
            top = d;
            break;
          }
        }
      }
      inst_ptr_[h] = top;
      if (top == kUnmatched) {
        active_[h] = 0;
        changed = true;
      }
    }
    for (int d = 0; d < na_; ++d) {
      if (!remaining_[d]) continue;
      int target = kUnmatched;
      for (int h : m_.pref[d]) {
        if (active_[h]) {
          target = h;
          break;
        }
      }
      app_ptr_[d] = target;
      if (target == kUnmatched) {
        remaining_[d] = 0;
        changed = true;
      }
    }
  }
  return std::find(remaining_.begin(), remaining_.end(), 1) != remaining_.end();
}

std::vector<std::vector<int>> TtcEngine::cycles() const {
  std::vector<std::vector<int>> out;
  std::vector<int> state(na_, 0);  // 0 new, 1 on stack, 2 done
  for (int s = 0; s < na_; ++s) {
    if (!remaining_[s] || state[s] != 0) continue;
    std::vector<int> path;
    int d = s;
    while (state[d] == 0) {
      state[d] = 1;
      path.push_back(d);
      d = inst_ptr_[app_ptr_[d]];
    }
    if (state[d] == 1) {
      auto it = std::find(path.begin(), path.end(), d);
      std::vector<int> cyc(it, path.end());
      std::rotate(cyc.begin(), std::min_element(cyc.begin(), cyc.end()),
                  cyc.end());
      out.push_back(std::move(cyc));
    }
    for (int x : path) state[x] = 2;
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return out;
}

void TtcEngine::clear_cycle(const std::vector<int>& cycle) {
  for (int d : cycle) {
    int h = app_ptr_[d];
    mu_.to[d] = h;
    remaining_[d] = 0;
    --cap_left_[h];
  }
}

}  // namespace detail

Outcome run_ttc(const Market& m, Policy policy) {
  detail::TtcEngine eng(m);
  detail::PolicyPicker picker(policy);
  Outcome out;
  while (eng.settle()) {
    auto cyc = eng.cycles();
    int pick = 0;
    if (policy.kind == PolicyKind::HighestIndex) {
      // The cycle holding the highest-index applicant.
      int best = -1;
      for (int i = 0; i < static_cast<int>(cyc.size()); ++i) {
        int top = *std::max_element(cyc[i].begin(), cyc[i].end());
        if (top > best) {
          best = top;
          pick = i;
        }
      }
    } else {
      std::vector<int> keys(cyc.size());
      for (int i = 0; i < static_cast<int>(cyc.size()); ++i) keys[i] = i;
      pick = picker.pick(keys);
    }
    CycleEvent ev;
    for (int d : cyc[pick]) ev.pairs.emplace_back(d, eng.applicant_points(d));
    eng.clear_cycle(cyc[pick]);
    out.trace.cycles.push_back(std::move(ev));
  }
  out.matching = eng.matching();
  return out;
}

// ---------------------------------------------------------------- dispatch

namespace {

Matching apda_only(const Market& m, Policy policy) {
  ApdaEngine eng(m);
  eng.run(policy, nullptr);
  return eng.matching();
}

Matching ipda_only(const Market& m, Policy policy) {
  detail::IpdaEngine eng(m, {});
  eng.run(policy, nullptr);
  return eng.matching();
}

Matching ttc_only(const Market& m) {
  detail::TtcEngine eng(m);
  while (eng.settle()) {
    for (const auto& c : eng.cycles()) eng.clear_cycle(c);
  }
  return eng.matching();
}

}  // namespace

Matching run_mechanism(Mechanism mech, const Market& m, Policy policy) {
  switch (mech) {
    case Mechanism::SD: {
      std::vector<int> order(m.num_applicants());
      for (int d = 0; d < m.num_applicants(); ++d) order[d] = d;
      return run_sd(m, order);
    }
    case Mechanism::SDRot:
      return run_sdrot(m);
    case Mechanism::TTC:
      return policy.kind == PolicyKind::LowestIndex ? ttc_only(m)
                                                    : run_ttc(m, policy).matching;
    case Mechanism::APDA:
      return apda_only(m, policy);
    case Mechanism::IPDA:
      return ipda_only(m, policy);
  }
  throw std::logic_error("unhandled mechanism");
}

// ---------------------------------------------------------------- replay

Matching replay_trace(const Market& m, const ExecutionTrace& trace) {
  Matching mu(m.num_applicants());
  if (!trace.cycles.empty()) {
    for (const auto& c : trace.cycles) {
      for (auto [d, h] : c.pairs) mu.to[d] = h;
    }
    return mu;
  }
  if (trace.institution_proposing) {
    std::vector<int> holder(m.num_applicants(), kUnmatched);
    for (const auto& p : trace.proposals) {
      if (p.accepted) holder[p.receiver] = p.proposer;
    }
    mu.to = holder;
    return mu;
  }
  // Applicant proposing: an accepted proposal displaces the lowest-priority
  // holder once the institution is full.
  std::vector<std::vector<int>> held(m.num_institutions());
  for (const auto& p : trace.proposals) {
    if (!p.accepted) continue;
    int h = p.receiver;
    auto& hs = held[h];
    if (static_cast<int>(hs.size()) == m.capacity[h]) {
      auto rank = rank_table(m.prio[h], m.num_applicants(), kUnranked);
      auto worst = std::max_element(hs.begin(), hs.end(), [&](int a, int b) {
        return rank[a] < rank[b];
      });
      mu.to[*worst] = kUnmatched;
      hs.erase(worst);
    }
    hs.push_back(p.proposer);
    mu.to[p.proposer] = h;
  }
  return mu;
}

}  // namespace matchlab
