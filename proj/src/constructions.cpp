#include "matchlab/constructions.hpp"

#include <algorithm>
#include <stdexcept>

#include "matchlab/parallel.hpp"
#include "matchlab/protocols.hpp"

namespace matchlab {

namespace {

struct FamilyName {
  FamilyId id;
  const char* name;
};

constexpr FamilyName kFamilyNames[] = {
    {FamilyId::SD_CASCADE, "SD_CASCADE"},
    {FamilyId::SDROT_TTM, "SDROT_TTM"},
    {FamilyId::TTC_TTM, "TTC_TTM"},
    {FamilyId::IPDA_TTM, "IPDA_TTM"},
    {FamilyId::TTC_TYPE_TO_MENU, "TTC_TYPE_TO_MENU"},
    {FamilyId::TTC_REPRESENTATION, "TTC_REPRESENTATION"},
    {FamilyId::DA_REPRESENTATION_LB, "DA_REPRESENTATION_LB"},
    {FamilyId::VERIF_LB, "VERIF_LB"},
    {FamilyId::ALL_MENUS_DA, "ALL_MENUS_DA"},
    {FamilyId::ALL_MENUS_TTC, "ALL_MENUS_TTC"},
    {FamilyId::ATTOM_SD, "ATTOM_SD"},
};

std::string nm(const char* stem, int i) { return stem + std::to_string(i); }
std::string nm(const char* stem, int i, int j) {
  return stem + std::to_string(i) + "_" + std::to_string(j);
}

// Lists written by name.
class Builder {
 public:
  int a(const std::string& name) { return m.add_applicant(name); }
  int h(const std::string& name, int cap = 1) {
    return m.add_institution(name, cap);
  }
  int A(const std::string& name) const { return m.applicant(name); }
  int H(const std::string& name) const { return m.institution(name); }
  void pref(const std::string& d, const std::vector<std::string>& hs) {
    auto& list = m.pref[A(d)];
    for (const auto& x : hs) list.push_back(H(x));
  }
  void prio(const std::string& h, const std::vector<std::string>& ds) {
    auto& list = m.prio[H(h)];
    for (const auto& x : ds) list.push_back(A(x));
  }
  // Every institution ranks everyone in declaration order.
  void common_priority() {
    for (auto& list : m.prio) {
      list.clear();
      for (int d = 0; d < m.num_applicants(); ++d) list.push_back(d);
    }
  }
  // Institution i is owned by applicant i; the rest follow in index order.
  void housing_priority() {
    for (int h = 0; h < m.num_institutions(); ++h) {
      auto& list = m.prio[h];
      list = {h};
      for (int d = 0; d < m.num_applicants(); ++d) {
        if (d != h) list.push_back(d);
      }
    }
  }

  Market m;
};

bool uses_sets(FamilyId f) {
  return f == FamilyId::TTC_TYPE_TO_MENU || f == FamilyId::ALL_MENUS_DA ||
         f == FamilyId::ALL_MENUS_TTC || f == FamilyId::ATTOM_SD;
}

// Indices mod k into 1..k.
int wrap(int x, int k) { return ((x - 1) % k + k) % k + 1; }

int tri(int i, int j) { return i * (i - 1) / 2 + (j - 1); }

class Bits {
 public:
  Bits(FamilyId f, const FamilyParams& p) : k_(p.k), bits_(p.bits) {
    if (p.k < family_min_k(f)) {
      throw std::invalid_argument(to_string(f) + " needs k >= " +
                                  std::to_string(family_min_k(f)));
    }
    if (uses_sets(f) && !p.sets.empty()) {
      if (static_cast<int>(p.sets.size()) != p.k) {
        throw std::invalid_argument(to_string(f) + " needs exactly k sets");
      }
      bits_.assign(static_cast<std::size_t>(p.k) * p.k, 0);
      for (int i = 0; i < p.k; ++i) {
        for (int e : p.sets[i]) {
          if (e < 1 || e > p.k) {
            throw std::invalid_argument("set element out of range 1..k");
          }
          bits_[i * p.k + e - 1] = 1;
        }
      }
    }
    if (static_cast<int>(bits_.size()) != family_bit_count(f, p.k)) {
      throw std::invalid_argument(
          to_string(f) + " with k=" + std::to_string(p.k) + " needs " +
          std::to_string(family_bit_count(f, p.k)) + " bits, got " +
          std::to_string(bits_.size()));
    }
    for (int b : bits_) {
      if (b != 0 && b != 1) throw std::invalid_argument("bits must be 0 or 1");
    }
  }
  int tri(int i, int j) const { return bits_[matchlab::tri(i, j)]; }
  int sq(int i, int j) const { return bits_[(i - 1) * k_ + (j - 1)]; }
  int one(int i) const { return bits_[i - 1]; }
  // Set i contains element j.
  bool in(int i, int j) const { return sq(i, j) == 1; }

 private:
  int k_;
  std::vector<int> bits_;
};

// ---------------------------------------------------------------- families

// The left chooser of pair i reads bit b_{i,j} as "take h^{b} first".
std::vector<std::string> sdrot_list(const Bits& b, int i, bool left,
                                    const char* zero, const char* one) {
  std::vector<std::string> out;
  for (int j = 1; j <= i; ++j) {
    int first = left ? b.tri(i, j) : 1 - b.tri(i, j);
    out.push_back(nm(first ? one : zero, j));
    out.push_back(nm(first ? zero : one, j));
  }
  return out;
}

ConstructionInstance gen_sd_cascade(const FamilyParams& p) {
  const int n = p.k;
  Builder b;
  for (int i = 1; i <= n; ++i) b.a(nm("d", i));
  for (int i = 1; i <= n; ++i) b.h(nm("h", i));
  for (int i = 1; i <= n; ++i) b.pref(nm("d", i), {nm("h", i), nm("h", wrap(i + 1, n))});
  b.common_priority();
  ConstructionInstance inst;
  inst.market = b.m;
  inst.free_applicant = 0;
  inst.scenarios = {{0, {0, 1}, "truthful"}, {0, {1, 0}, "swap"}};
  return inst;
}

ConstructionInstance gen_sdrot_ttm(const FamilyParams& p, const Bits& bits) {
  const int k = p.k;
  Builder b;
  b.a("d_star");
  for (int i = 1; i <= k; ++i) {
    b.a(nm("dL_", i));
    b.a(nm("dR_", i));
  }
  for (int j = 1; j <= k; ++j) {
    b.h(nm("h0_", j));
    b.h(nm("h1_", j));
  }
  for (int j = 1; j <= k; ++j) b.h(nm("hrot_", j));
  for (int i = 1; i <= k; ++i) {
    b.pref(nm("dL_", i), sdrot_list(bits, i, true, "h0_", "h1_"));
    b.pref(nm("dR_", i), sdrot_list(bits, i, false, "h0_", "h1_"));
  }
  b.common_priority();
  ConstructionInstance inst;
  inst.market = b.m;
  inst.free_applicant = 0;
  for (int s = 1; s <= k; ++s) {
    inst.scenarios.push_back({0, {b.H(nm("hrot_", s))}, nm("rot", s)});
  }
  return inst;
}

ConstructionInstance gen_ttc_ttm(const FamilyParams& p, const Bits& bits) {
  const int pairs = p.k;
  const int n = 2 * pairs;
  Builder b;
  b.a("d_star");
  for (int i = 1; i <= n; ++i) b.a(nm("dR_", i));
  for (int i = 1; i <= n; ++i) b.a(nm("dP_", i));
  for (int i = 1; i <= n; ++i) b.a(nm("dA_", i));
  b.h("h_star");
  for (int i = 1; i <= n; ++i) b.h(nm("hR_", i));
  for (int i = 1; i <= n; ++i) b.h(nm("hP_", i));
  for (int i = 1; i <= n; ++i) b.h(nm("hA_", i));
  b.housing_priority();
  for (int i = 1; i <= n; ++i) {
    b.pref(nm("dR_", i), {i == 1 ? "h_star" : nm("hR_", i - 1), nm("hP_", i)});
  }
  std::vector<std::string> all_r;
  for (int i = 1; i <= n; ++i) all_r.push_back(nm("hR_", i));
  for (int i = 1; i <= n; ++i) b.pref(nm("dA_", i), all_r);
  // Choosers d^P_{2i-1}, d^P_{2i} are the left/right pair i; h^b_j is
  // institution d^A_{2j-1+b}.
  for (int i = 1; i <= pairs; ++i) {
    for (int side = 0; side < 2; ++side) {
      std::vector<std::string> list;
      for (const auto& x : sdrot_list(bits, i, side == 0, "z", "o")) {
        int j = std::stoi(x.substr(1));
        list.push_back(nm("hA_", 2 * j - 1 + (x[0] == 'o' ? 1 : 0)));
      }
      b.pref(nm("dP_", 2 * i - 1 + side), list);
    }
  }
  ConstructionInstance inst;
  inst.market = b.m;
  inst.free_applicant = 0;
  for (int j = 0; j < n; ++j) {
    inst.scenarios.push_back(
        {0, {b.H(j == 0 ? std::string("h_star") : nm("hR_", j))}, nm("start", j)});
  }
  return inst;
}

ConstructionInstance gen_ipda_ttm(const FamilyParams& p, const Bits& bits) {
  const int k = p.k;
  Builder b;
  for (int i = 1; i <= k; ++i) b.a(nm("d_", i));
  for (int i = 1; i <= k; ++i) b.a(nm("dp_", i));
  for (int i = 1; i <= k; ++i) b.a(nm("dR_", i));
  b.a("d_star");
  for (int i = 1; i <= k; ++i) {
    b.h(nm("h0_", i));
    b.h(nm("h1_", i));
  }
  for (int i = 0; i <= k; ++i) b.h(nm("hR_", i));

  for (int i = 1; i <= k; ++i) {
    std::vector<std::string> order;
    for (int t = 0; t < k; ++t) {
      order.push_back(nm("d_", wrap(i + t, k)));
      order.push_back(nm("dp_", wrap(i + t, k)));
    }
    b.prio(nm("h0_", i), order);
    b.prio(nm("h1_", i), order);
  }
  b.prio("hR_0", {"d_star", "dR_1"});
  b.prio("hR_1", {"d_star", "d_1", "dp_1", "dR_2"});
  for (int i = 2; i <= k - 1; ++i) {
    b.prio(nm("hR_", i), {nm("dR_", i), "d_star", "d_1", "dp_1", nm("dR_", i + 1)});
  }
  b.prio(nm("hR_", k), {nm("dR_", k), "d_star"});

  b.pref("dR_1", {"hR_0"});
  for (int i = 2; i <= k; ++i) b.pref(nm("dR_", i), {nm("hR_", i - 1), nm("hR_", i)});

  // Built worst first, then reversed.
  for (int i = 1; i <= k; ++i) {
    std::vector<std::string> worst_d, worst_dp;
    for (int t = 1; t <= k; ++t) {
      int h = wrap(i - t + 1, k);
      int bit = bits.sq(i, t);
      worst_d.push_back(nm(bit ? "h0_" : "h1_", h));
      worst_d.push_back(nm(bit ? "h1_" : "h0_", h));
      worst_dp.push_back(nm("h0_", h));
      worst_dp.push_back(nm("h1_", h));
      if (i == 1 && t < k) {
        worst_d.push_back(nm("hR_", t));
        worst_dp.push_back(nm("hR_", t));
      }
    }
    std::reverse(worst_d.begin(), worst_d.end());
    std::reverse(worst_dp.begin(), worst_dp.end());
    b.pref(nm("d_", i), worst_d);
    b.pref(nm("dp_", i), worst_dp);
  }

  ConstructionInstance inst;
  inst.market = b.m;
  inst.free_applicant = b.A("d_star");
  for (int j = 1; j <= k; ++j) {
    PreferenceList list;
    if (p.full_length_scenarios) {
      std::vector<int> order = {k, j + 1, j, 0};
      for (int t = j - 1; t >= 1; --t) order.push_back(t);
      for (int t = 0; t <= k; ++t) order.push_back(t);
      for (int t : order) {
        if (t > k) continue;
        int h = b.H(nm("hR_", t));
        if (std::find(list.begin(), list.end(), h) == list.end()) list.push_back(h);
      }
    } else {
      list = {b.H(nm("hR_", j))};
    }
    inst.scenarios.push_back({inst.free_applicant, list, nm("rot", j)});
  }
  return inst;
}

ConstructionInstance gen_ttc_type_to_menu(const FamilyParams& p, const Bits& bits) {
  const int k = p.k;
  Builder b;
  b.a("d_star");
  b.a("d_dag");
  for (int j = 0; j <= k; ++j) {
    b.a(nm("dX_", j));
    b.a(nm("dY_", j));
  }
  for (int i = 1; i <= k; ++i) b.a(nm("dT_", i));
  b.h("h_star");
  b.h("h_dag");
  for (int j = 0; j <= k; ++j) {
    b.h(nm("hX_", j));
    b.h(nm("hY_", j));
  }
  for (int i = 1; i <= k; ++i) b.h(nm("hT_", i));
  b.housing_priority();

  b.pref("dX_0", {"hY_0", "hX_0"});
  for (int j = 1; j <= k; ++j) {
    b.pref(nm("dX_", j), {nm("hY_", j), "hX_0", "h_dag", nm("hX_", j)});
  }
  for (int j = 0; j <= k - 1; ++j) b.pref(nm("dY_", j), {"h_star", nm("hX_", j + 1)});
  std::vector<std::string> last;
  for (int j = 1; j <= k; ++j) last.push_back(nm("hY_", j));
  b.pref(nm("dY_", k), last);
  for (int i = 1; i <= k; ++i) {
    std::vector<std::string> list;
    for (int j = 1; j <= k; ++j) {
      if (bits.in(i, j)) list.push_back(nm("hX_", j));
    }
    list.push_back(nm("hT_", i));
    b.pref(nm("dT_", i), list);
  }
  ConstructionInstance inst;
  inst.market = b.m;
  inst.free_applicant = 0;
  inst.target_applicant = b.A("d_dag");
  for (int j = 1; j <= k; ++j) {
    inst.scenarios.push_back({0, {b.H(nm("hY_", j - 1))}, nm("select", j)});
  }
  return inst;
}

ConstructionInstance gen_ttc_representation(const FamilyParams& p, const Bits& bits) {
  const int k = p.k;
  const char* sides[] = {"T", "L", "R"};
  Builder b;
  for (const char* s : sides) {
    for (int i = 1; i <= k; ++i) {
      for (int j = 1; j <= k; ++j) b.a(nm((std::string("d") + s).c_str(), i, j));
    }
  }
  for (const char* s : sides) {
    for (int i = 1; i <= k; ++i) b.h(nm((std::string("h") + s + "_").c_str(), i), k);
  }
  for (const char* s : sides) {
    for (int i = 1; i <= k; ++i) {
      std::vector<std::string> order;
      for (int j = 1; j <= k; ++j) order.push_back(nm((std::string("d") + s).c_str(), i, j));
      b.prio(nm((std::string("h") + s + "_").c_str(), i), order);
    }
  }
  for (const char* s : {"L", "R"}) {
    for (int i = 1; i <= k; ++i) {
      for (int j = 1; j <= k; ++j) {
        b.pref(nm((std::string("d") + s).c_str(), i, j),
               {nm("hT_", j), nm((std::string("h") + s + "_").c_str(), i)});
      }
    }
  }
  for (int i = 1; i <= k; ++i) {
    for (int j = 1; j <= k; ++j) {
      b.pref(nm("dT", i, j), {nm(bits.sq(i, j) ? "hR_" : "hL_", j)});
    }
  }
  ConstructionInstance inst;
  inst.market = b.m;
  inst.scenarios = {{-1, {}, "fixed"}};
  return inst;
}

ConstructionInstance gen_da_representation_lb(const FamilyParams& p, const Bits& bits) {
  const int n = p.k;
  Builder b;
  for (int i = 1; i <= n; ++i) b.a(nm("d_", i));
  for (int i = 1; i <= n; ++i) b.a(nm("dp_", i));
  b.h("hB", n);
  for (int i = 1; i <= n; ++i) b.h(nm("h_", i));
  std::vector<std::string> shared;
  for (int i = 1; i <= n; ++i) shared.push_back(nm("d_", i));
  for (int i = 1; i <= n; ++i) shared.push_back(nm("dp_", i));
  b.prio("hB", shared);
  for (int i = 1; i <= n; ++i) {
    b.prio(nm("h_", i), {nm("d_", i), nm("dp_", i)});
    b.pref(nm("dp_", i), {nm("h_", i), "hB"});
    if (bits.one(i)) {
      b.pref(nm("d_", i), {nm("h_", i), "hB"});
    } else {
      b.pref(nm("d_", i), {"hB", nm("h_", i)});
    }
  }
  ConstructionInstance inst;
  inst.market = b.m;
  inst.scenarios = {{-1, {}, "fixed"}};
  return inst;
}

ConstructionInstance gen_verif_lb(const FamilyParams& p, const Bits& bits) {
  const int k = p.k;
  Builder b;
  for (int j = 1; j <= k; ++j) b.a(nm("dT_", j));
  for (int j = 1; j <= k; ++j) b.a(nm("dB_", j));
  b.h("hT", k + 1);
  b.h("hC", k);
  b.h("hB", k + 1);
  b.common_priority();
  for (int j = 1; j <= k; ++j) {
    b.pref(nm("dT_", j), {bits.one(j) ? "hT" : "hC"});
    b.pref(nm("dB_", j), {"hC", "hB"});
  }
  ConstructionInstance inst;
  inst.market = b.m;
  inst.scenarios = {{-1, {}, "fixed"}};
  return inst;
}

std::vector<Scenario> grid_scenarios(const Builder& b, int k) {
  std::vector<Scenario> out;
  for (int i = 1; i <= k; ++i) {
    for (int j = 1; j <= k; ++j) {
      out.push_back({b.A(nm("dT_", i)), {b.H(nm("hB_", j))}, nm("T", i, j)});
    }
  }
  return out;
}

ConstructionInstance gen_all_menus_da(const FamilyParams& p, const Bits& bits) {
  const int k = p.k;
  Builder b;
  for (const char* s : {"dT_", "dB_", "dR_"}) {
    for (int i = 1; i <= k; ++i) b.a(nm(s, i));
  }
  for (const char* s : {"hT_", "hB_", "hR_"}) {
    for (int i = 1; i <= k; ++i) b.h(nm(s, i));
  }
  for (int i = 1; i <= k; ++i) {
    std::vector<std::string> t = {nm("dT_", i)};
    for (int j = 1; j <= k; ++j) t.push_back(nm("dB_", j));
    b.prio(nm("hT_", i), t);
    std::vector<std::string> bb = {nm("dR_", i)};
    for (int j = 1; j <= k; ++j) bb.push_back(nm("dT_", j));
    bb.push_back(nm("dB_", i));
    b.prio(nm("hB_", i), bb);
    b.prio(nm("hR_", i), {nm("dB_", i), nm("dR_", i)});

    b.pref(nm("dT_", i), {nm("hT_", i)});
    std::vector<std::string> list = {nm("hB_", i)};
    for (int j = 1; j <= k; ++j) {
      if (bits.in(i, j)) list.push_back(nm("hT_", j));
    }
    list.push_back(nm("hR_", i));
    b.pref(nm("dB_", i), list);
    b.pref(nm("dR_", i), {nm("hR_", i), nm("hB_", i)});
  }
  ConstructionInstance inst;
  inst.market = b.m;
  inst.scenarios = grid_scenarios(b, k);
  return inst;
}

ConstructionInstance gen_all_menus_ttc(const FamilyParams& p, const Bits& bits) {
  const int k = p.k;
  Builder b;
  for (int i = 1; i <= k; ++i) b.a(nm("dT_", i));
  for (int i = 1; i <= k; ++i) b.a(nm("dB_", i));
  for (int i = 1; i <= k; ++i) b.h(nm("hT_", i));
  for (int i = 1; i <= k; ++i) b.h(nm("hB_", i));
  for (int i = 1; i <= k; ++i) {
    b.prio(nm("hT_", i), {nm("dT_", i)});
    b.prio(nm("hB_", i), {nm("dB_", i)});
    b.pref(nm("dT_", i), {nm("hT_", i)});
    std::vector<std::string> list;
    for (int j = 1; j <= k; ++j) {
      if (bits.in(i, j)) list.push_back(nm("hT_", j));
    }
    list.push_back(nm("hB_", i));
    b.pref(nm("dB_", i), list);
  }
  ConstructionInstance inst;
  inst.market = b.m;
  inst.scenarios = grid_scenarios(b, k);
  return inst;
}

ConstructionInstance gen_attom_sd(const FamilyParams& p, const Bits& bits) {
  const int k = p.k;
  Builder b;
  for (int i = 1; i <= k; ++i) b.a(nm("dT_", i));
  for (int i = 1; i <= k; ++i) b.a(nm("dB_", i));
  b.a("d_dag");
  for (int i = 1; i <= k; ++i) b.h(nm("hT_", i));
  for (int i = 1; i <= k; ++i) b.h(nm("hB_", i));
  b.h("h_dag");
  b.common_priority();
  for (int i = 1; i <= k; ++i) {
    b.pref(nm("dT_", i), {nm("hT_", i)});
    std::vector<std::string> list = {nm("hB_", i)};
    for (int j = 1; j <= k; ++j) {
      if (bits.in(i, j)) list.push_back(nm("hT_", j));
    }
    list.push_back("h_dag");
    b.pref(nm("dB_", i), list);
  }
  b.pref("d_dag", {"h_dag"});
  ConstructionInstance inst;
  inst.market = b.m;
  inst.free_applicant = b.A("d_dag");
  inst.target_applicant = b.A("d_dag");
  inst.scenarios = grid_scenarios(b, k);
  return inst;
}

std::string bit_string(const FamilyParams& p) {
  std::string s;
  for (int b : p.bits) s += static_cast<char>('0' + b);
  return s.empty() ? "-" : s;
}

std::string name_of(const Market& m, int h) {
  return h == kUnmatched ? "-" : m.institutions[h];
}

}  // namespace

std::string to_string(FamilyId f) {
  for (const auto& e : kFamilyNames) {
    if (e.id == f) return e.name;
  }
  return "?";
}

FamilyId parse_family(const std::string& name) {
  for (const auto& e : kFamilyNames) {
    if (name == e.name) return e.id;
  }
  throw std::invalid_argument("unknown family '" + name + "'");
}

std::vector<FamilyId> all_families() {
  std::vector<FamilyId> out;
  for (const auto& e : kFamilyNames) out.push_back(e.id);
  return out;
}

int family_bit_count(FamilyId f, int k) {
  switch (f) {
    case FamilyId::SD_CASCADE: return 0;
    case FamilyId::SDROT_TTM:
    case FamilyId::TTC_TTM: return k * (k + 1) / 2;
    case FamilyId::DA_REPRESENTATION_LB:
    case FamilyId::VERIF_LB: return k;
    default: return k * k;
  }
}

int family_min_k(FamilyId f) {
  switch (f) {
    case FamilyId::SD_CASCADE:
    case FamilyId::IPDA_TTM: return 2;
    default: return 1;
  }
}

std::vector<Mechanism> family_mechanisms(FamilyId f) {
  switch (f) {
    case FamilyId::SD_CASCADE:
    case FamilyId::VERIF_LB:
      return {Mechanism::SD, Mechanism::TTC, Mechanism::APDA, Mechanism::IPDA};
    case FamilyId::SDROT_TTM: return {Mechanism::SDRot};
    case FamilyId::TTC_TTM:
    case FamilyId::TTC_TYPE_TO_MENU:
    case FamilyId::TTC_REPRESENTATION:
    case FamilyId::ALL_MENUS_TTC: return {Mechanism::TTC};
    case FamilyId::IPDA_TTM: return {Mechanism::IPDA};
    case FamilyId::DA_REPRESENTATION_LB:
    case FamilyId::ALL_MENUS_DA: return {Mechanism::APDA, Mechanism::IPDA};
    case FamilyId::ATTOM_SD: return {Mechanism::SD};
  }
  return {};
}

FamilyParams params_from_mask(FamilyId f, int k, std::uint64_t mask) {
  FamilyParams p;
  p.k = k;
  const int n = family_bit_count(f, k);
  for (int i = 0; i < n; ++i) p.bits.push_back(static_cast<int>((mask >> i) & 1U));
  return p;
}

ConstructionInstance gen_construction(FamilyId family, const FamilyParams& params) {
  Bits bits(family, params);
  ConstructionInstance inst;
  switch (family) {
    case FamilyId::SD_CASCADE: inst = gen_sd_cascade(params); break;
    case FamilyId::SDROT_TTM: inst = gen_sdrot_ttm(params, bits); break;
    case FamilyId::TTC_TTM: inst = gen_ttc_ttm(params, bits); break;
    case FamilyId::IPDA_TTM: inst = gen_ipda_ttm(params, bits); break;
    case FamilyId::TTC_TYPE_TO_MENU: inst = gen_ttc_type_to_menu(params, bits); break;
    case FamilyId::TTC_REPRESENTATION: inst = gen_ttc_representation(params, bits); break;
    case FamilyId::DA_REPRESENTATION_LB: inst = gen_da_representation_lb(params, bits); break;
    case FamilyId::VERIF_LB: inst = gen_verif_lb(params, bits); break;
    case FamilyId::ALL_MENUS_DA: inst = gen_all_menus_da(params, bits); break;
    case FamilyId::ALL_MENUS_TTC: inst = gen_all_menus_ttc(params, bits); break;
    case FamilyId::ATTOM_SD: inst = gen_attom_sd(params, bits); break;
  }
  inst.family = family;
  inst.params = params;
  validate_market(inst.market);
  return inst;
}

Market apply_scenario(const ConstructionInstance& inst, const Scenario& s) {
  Market m = inst.market;
  if (s.applicant >= 0) m.pref[s.applicant] = s.list;
  return m;
}

Prediction predicted_outcome(FamilyId family, const FamilyParams& params,
                             int scenario) {
  const ConstructionInstance inst = gen_construction(family, params);
  if (scenario < 0 || scenario >= static_cast<int>(inst.scenarios.size())) {
    throw std::out_of_range("scenario " + std::to_string(scenario) +
                            " outside the family's domain");
  }
  const Bits bits(family, params);
  const Market& m = inst.market;
  const int k = params.k;
  auto A = [&](const std::string& s) { return m.applicant(s); };
  auto H = [&](const std::string& s) { return m.institution(s); };
  Prediction out;
  auto expect = [&](int d, int h, bool matched = true) {
    out.matches.push_back({d, h, matched});
  };

  switch (family) {
    case FamilyId::SD_CASCADE: {
      const int shift = scenario == 0 ? 0 : 1;
      for (int i = 1; i <= k; ++i) expect(A(nm("d", i)), H(nm("h", wrap(i + shift, k))));
      break;
    }
    case FamilyId::SDROT_TTM: {
      const int start = scenario + 1;
      expect(0, H(nm("hrot_", start)));
      for (int i = start; i <= k; ++i) {
        int j = i - start + 1;
        expect(A(nm("dL_", i)), H(nm(bits.tri(i, j) ? "h1_" : "h0_", j)));
      }
      break;
    }
    case FamilyId::TTC_TTM: {
      const int n = 2 * k;
      const int j = scenario;
      expect(0, j == 0 ? H("h_star") : H(nm("hR_", j)));
      for (int i = 1; i <= j; ++i) {
        expect(A(nm("dR_", i)), i == 1 ? H("h_star") : H(nm("hR_", i - 1)));
      }
      // Serial dictatorship over d^P_{j+1}..d^P_n on the d^A institutions.
      std::vector<char> taken(m.num_institutions(), 0);
      for (int i = j + 1; i <= n; ++i) {
        int d = A(nm("dP_", i));
        int got = kUnmatched;
        for (int h : m.pref[d]) {
          if (!taken[h]) {
            taken[h] = 1;
            got = h;
            break;
          }
        }
        expect(d, got);
      }
      break;
    }
    case FamilyId::IPDA_TTM: {
      const int j = scenario + 1;
      expect(A("d_star"), H(nm("hR_", j)));
      for (int i = 1; i <= k; ++i) {
        expect(A(nm("d_", i)), H(nm(bits.sq(i, j) ? "h1_" : "h0_", wrap(i - j + 1, k))));
      }
      break;
    }
    case FamilyId::TTC_TYPE_TO_MENU: {
      const int j = scenario + 1;
      out.menu_applicant = A("d_dag");
      out.menu = {H("h_dag"), H(nm("hX_", j))};
      for (int i = 1; i <= k; ++i) {
        if (bits.in(i, j)) out.menu.push_back(H(nm("hT_", i)));
      }
      std::sort(out.menu.begin(), out.menu.end());
      break;
    }
    case FamilyId::TTC_REPRESENTATION: {
      for (int i = 1; i <= k; ++i) {
        for (int j = 1; j <= k; ++j) {
          const bool right = bits.sq(i, j) == 1;
          expect(A(nm(right ? "dR" : "dL", j, i)), H(nm("hT_", i)));
          expect(A(nm(right ? "dL" : "dR", j, i)), H(nm(right ? "hL_" : "hR_", j)));
        }
      }
      break;
    }
    case FamilyId::DA_REPRESENTATION_LB: {
      for (int i = 1; i <= k; ++i) {
        const bool own_first = bits.one(i) == 1;
        expect(A(nm("d_", i)), own_first ? H(nm("h_", i)) : H("hB"));
        expect(A(nm("dp_", i)), own_first ? H("hB") : H(nm("h_", i)));
      }
      break;
    }
    case FamilyId::VERIF_LB: {
      int s = 0;
      for (int j = 1; j <= k; ++j) s += bits.one(j);
      for (int j = 1; j <= k; ++j) {
        expect(A(nm("dT_", j)), H(bits.one(j) ? "hT" : "hC"));
        expect(A(nm("dB_", j)), H(j <= s ? "hC" : "hB"));
      }
      break;
    }
    case FamilyId::ALL_MENUS_DA:
    case FamilyId::ALL_MENUS_TTC:
    case FamilyId::ATTOM_SD: {
      const int i = scenario / k + 1;
      const int j = scenario % k + 1;
      const bool member = bits.in(j, i);
      if (family == FamilyId::ATTOM_SD) {
        expect(A("d_dag"), H("h_dag"), member);
      } else {
        expect(A(nm("dT_", i)), H(nm("hB_", j)), member);
      }
      break;
    }
  }
  return out;
}

std::vector<std::string> check_prediction(const ConstructionInstance& inst,
                                          int scenario, Mechanism mech) {
  const Scenario& s = inst.scenarios.at(scenario);
  const Prediction pred = predicted_outcome(inst.family, inst.params, scenario);
  const Market m = apply_scenario(inst, s);
  const Matching mu = run_mechanism(mech, m);
  const std::string where = to_string(inst.family) + " k=" +
                            std::to_string(inst.params.k) + " bits=" +
                            bit_string(inst.params) + " " + s.label + " " +
                            to_string(mech) + ": ";
  std::vector<std::string> out;
  for (const auto& e : pred.matches) {
    if ((mu[e.applicant] == e.institution) != e.matched) {
      out.push_back(where + m.applicants[e.applicant] + (e.matched ? " expected " : " expected not ") +
                    name_of(m, e.institution) + ", got " + name_of(m, mu[e.applicant]));
    }
  }
  if (pred.menu_applicant >= 0) {
    Menu got = menu_brute(mech, m, pred.menu_applicant);
    if (got != pred.menu) {
      out.push_back(where + "menu of " + m.applicants[pred.menu_applicant] +
                    " differs from prediction");
    }
  }
  if (inst.family == FamilyId::TTC_REPRESENTATION && mech == Mechanism::TTC) {
    try {
      encode_ttc_representation(m);
    } catch (const CutoffValidationError& e) {
      out.push_back(where + e.what());
    }
  }
  return out;
}

FamilyReport validate_family(FamilyId family, int k, int jobs,
                             std::uint64_t ceiling) {
  const int nbits = family_bit_count(family, k);
  if (nbits >= 40) throw CeilingExceeded("family bit profiles", ~0ULL, ceiling);
  const std::uint64_t profiles = 1ULL << nbits;
  const ConstructionInstance probe =
      gen_construction(family, params_from_mask(family, k, 0));
  const std::uint64_t total = profiles * probe.scenarios.size();
  if (total > ceiling) throw CeilingExceeded("family instantiations", total, ceiling);

  const auto mechs = family_mechanisms(family);
  auto per_profile = parallel_map(profiles, jobs, [&](std::size_t mask) {
    const ConstructionInstance inst =
        gen_construction(family, params_from_mask(family, k, mask));
    std::vector<std::string> bad;
    for (int s = 0; s < static_cast<int>(inst.scenarios.size()); ++s) {
      for (Mechanism mech : mechs) {
        auto v = check_prediction(inst, s, mech);
        bad.insert(bad.end(), v.begin(), v.end());
      }
    }
    return bad;
  });

  FamilyReport r;
  r.family = family;
  r.k = k;
  r.instances = profiles;
  r.checks = total * mechs.size();
  for (const auto& v : per_profile) {
    r.mismatch_count += v.size();
    for (const auto& s : v) {
      if (r.mismatches.size() < 20) r.mismatches.push_back(s);
    }
  }
  return r;
}

// ---------------------------------------------------------------- examples

namespace {

struct Example {
  const char* name;
  const char* text;
};

// Trailing "and the rest" segments of partially specified lists are
// dropped; the stated facts hold on the truncated lists.
constexpr Example kExamples[] = {
    {"budget_vs_menu",
     "applicants: d1 d2 d3 d4\n"
     "institutions: h1 h2 h3 h4\n"
     "pref d1: h1\n"
     "pref d2: h1 h2 h4\n"
     "pref d3: h3\n"
     "pref d4: h4 h2\n"
     "prio h1: d1 d2\n"
     "prio h2: d4 d3 d2 d1\n"
     "prio h3: d3\n"
     "prio h4: d2 d4\n"},
    {"ipda_with_edges",
     "applicants: d1 d2 d3\n"
     "institutions: h1 h2 ha\n"
     "pref d1: h2 ha h1\n"
     "pref d2: h1 ha h2\n"
     "pref d3: ha\n"
     "prio h1: d1 d2\n"
     "prio h2: d2 d1\n"
     "prio ha: d1 d2 d3\n"},
    {"unrej_primer",
     "applicants: d_star d_dag d2 d3 d4 d5\n"
     "institutions: h1 h2 h3 h4 h5 h6\n"
     "pref d2: h3 h1 h2\n"
     "pref d3: h2 h3\n"
     "pref d4: h5 h6 h4\n"
     "pref d5: h4 h6\n"
     "prio h1: d_dag d2 d_star\n"
     "prio h2: d2 d_star d3\n"
     "prio h3: d_dag d3 d_star d2\n"
     "prio h4: d4 d_dag d_star d5\n"
     "prio h5: d_star d4 d5\n"
     "prio h6: d_star d4 d5 d_dag\n"},
    {"two_stable",
     "applicants: d1 d2\n"
     "institutions: h1 h2\n"
     "pref d1: h1 h2\n"
     "pref d2: h2 h1\n"
     "prio h1: d2 d1\n"
     "prio h2: d1 d2\n"},
    {"sd_cascade",
     "applicants: d1 d2 d3 d4\n"
     "institutions: h1 h2 h3 h4\n"
     "pref d1: h1 h2\n"
     "pref d2: h2 h3\n"
     "pref d3: h3 h4\n"
     "pref d4: h4 h1\n"
     "prio h1: d1 d2 d3 d4\n"
     "prio h2: d1 d2 d3 d4\n"
     "prio h3: d1 d2 d3 d4\n"
     "prio h4: d1 d2 d3 d4\n"},
};

}  // namespace

std::vector<std::string> example_names() {
  std::vector<std::string> out;
  for (const auto& e : kExamples) out.emplace_back(e.name);
  return out;
}

Market example_market(std::string_view name) {
  for (const auto& e : kExamples) {
    if (name == e.name) return parse_market(e.text);
  }
  throw std::invalid_argument("unknown example '" + std::string(name) + "'");
}

}  // namespace matchlab
