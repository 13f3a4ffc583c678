#pragma once

// Step-level mechanism state shared by mechanisms.cpp, unrej_graph.cpp and
// protocols.cpp. Not part of the installed interface.

#include <climits>
#include <functional>
#include <random>
#include <vector>

#include "matchlab/market.hpp"
#include "matchlab/mechanisms.hpp"

namespace matchlab::detail {

inline constexpr int kUnranked = INT_MAX;

class PolicyPicker {
 public:
  explicit PolicyPicker(Policy p)
      : policy_(p), rng_(static_cast<std::uint_fast32_t>(p.seed ^ (p.seed >> 32))) {}
  // Picks one element of a non-empty ascending candidate list.
  int pick(const std::vector<int>& ascending) {
    switch (policy_.kind) {
      case PolicyKind::LowestIndex:
        return ascending.front();
      case PolicyKind::HighestIndex:
        return ascending.back();
      case PolicyKind::SeededRandom: {
        std::uniform_int_distribution<std::size_t> u(0, ascending.size() - 1);
        return ascending[u(rng_)];
      }
    }
    return ascending.front();
  }

 private:
  Policy policy_;
  // Constructed once per run; a small state keeps seeding cheap.
  std::minstd_rand rng_;
};

// Institution-proposing deferred acceptance over a many-to-one market.
class IpdaEngine {
 public:
  IpdaEngine(const Market& m, const std::vector<int>& reject_all);

  bool active(int h) const {
    return held_[h] < m_.capacity[h] &&
           next_[h] < static_cast<int>(m_.prio[h].size());
  }
  // One proposal from h to its next applicant.
  Proposal propose(int h);
  void run(Policy policy, std::vector<Proposal>* log);
  // d drops her tentative match and rejects everything from now on.
  void release(int d);
  // Runs to completion; throws std::logic_error if two institutions are
  // ever active at once.
  void run_single_proposer(const std::function<void(const Proposal&)>& on);

  int holder(int d) const { return holder_[d]; }
  Matching matching() const;

 private:
  const Market& m_;
  int na_;
  int ni_;
  std::vector<int> rank_;  // rank_[d * ni + h]
  std::vector<int> next_;
  std::vector<int> held_;
  std::vector<int> holder_;
  std::vector<char> reject_all_;
};

// Top trading cycles with trading semantics over a many-to-one market.
class TtcEngine {
 public:
  explicit TtcEngine(const Market& m);

  // Retires exhausted applicants and dead institutions and refreshes
  // pointers. Returns false when no applicant remains.
  bool settle();
  // Cycles of the current pointing graph, each listed from its
  // lowest-index applicant; the outer list is sorted by that applicant.
  std::vector<std::vector<int>> cycles() const;
  void clear_cycle(const std::vector<int>& cycle);

  bool remaining(int d) const { return remaining_[d]; }
  bool active(int h) const { return active_[h]; }
  int applicant_points(int d) const { return app_ptr_[d]; }
  int institution_points(int h) const { return inst_ptr_[h]; }
  const Matching& matching() const { return mu_; }

 private:
  const Market& m_;
  int na_;
  int ni_;
  std::vector<char> remaining_;
  std::vector<char> active_;
  std::vector<int> cap_left_;
  std::vector<int> app_ptr_;
  std::vector<int> inst_ptr_;
  Matching mu_;
};

}  // namespace matchlab::detail
