#include "matchlab/market.hpp"

#include <algorithm>
#include <cctype>
#include <random>
#include <sstream>

namespace matchlab {

int Market::add_applicant(std::string name) {
  applicants.push_back(std::move(name));
  pref.emplace_back();
  return num_applicants() - 1;
}

int Market::add_institution(std::string name, int cap) {
  institutions.push_back(std::move(name));
  capacity.push_back(cap);
  prio.emplace_back();
  return num_institutions() - 1;
}

namespace {

int find_name(const std::vector<std::string>& names, std::string_view name) {
  auto it = std::find(names.begin(), names.end(), name);
  return it == names.end() ? -1 : static_cast<int>(it - names.begin());
}

}  // namespace

int Market::find_applicant(std::string_view name) const {
  return find_name(applicants, name);
}

int Market::find_institution(std::string_view name) const {
  return find_name(institutions, name);
}

int Market::applicant(std::string_view name) const {
  int i = find_applicant(name);
  if (i < 0) throw std::out_of_range("unknown applicant " + std::string(name));
  return i;
}

int Market::institution(std::string_view name) const {
  int i = find_institution(name);
  if (i < 0) {
    throw std::out_of_range("unknown institution " + std::string(name));
  }
  return i;
}

bool Market::has_unit_capacities() const {
  return std::all_of(capacity.begin(), capacity.end(),
                     [](int c) { return c == 1; });
}

MarketError::MarketError(Kind kind, int line, int column,
                         const std::string& what)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ":" +
                                        std::to_string(column) + ": " + what
                                  : what),
      kind_(kind),
      line_(line),
      column_(column) {}

CeilingExceeded::CeilingExceeded(const std::string& what,
                                 std::uint64_t requested, std::uint64_t ceiling)
    : std::runtime_error(what + ": " + std::to_string(requested) +
                         " exceeds ceiling " + std::to_string(ceiling)),
      requested_(requested),
      ceiling_(ceiling) {}

namespace {

void check_list(const std::vector<int>& list, int universe,
                const std::string& owner) {
  std::vector<char> seen(universe, 0);
  for (int x : list) {
    if (x < 0 || x >= universe) {
      throw MarketError(MarketError::Kind::UnknownId, 0, 0,
                        "list of " + owner + " references unknown id");
    }
    if (seen[x]) {
      throw MarketError(MarketError::Kind::Duplicate, 0, 0,
                        "list of " + owner + " repeats an entry");
    }
    seen[x] = 1;
  }
}

}  // namespace

void validate_market(const Market& m) {
  const int na = m.num_applicants();
  const int ni = m.num_institutions();
  if (static_cast<int>(m.pref.size()) != na ||
      static_cast<int>(m.prio.size()) != ni ||
      static_cast<int>(m.capacity.size()) != ni) {
    throw MarketError(MarketError::Kind::Invalid, 0, 0,
                      "list tables do not match declared sides");
  }
  for (int h = 0; h < ni; ++h) {
    if (m.capacity[h] < 1) {
      throw MarketError(MarketError::Kind::Capacity, 0, 0,
                        "capacity of " + m.institutions[h] + " below 1");
    }
  }
  for (int d = 0; d < na; ++d) check_list(m.pref[d], ni, m.applicants[d]);
  for (int h = 0; h < ni; ++h) check_list(m.prio[h], na, m.institutions[h]);
  auto dup = [](std::vector<std::string> names) {
    std::sort(names.begin(), names.end());
    return std::adjacent_find(names.begin(), names.end()) != names.end();
  };
  if (dup(m.applicants) || dup(m.institutions)) {
    throw MarketError(MarketError::Kind::Duplicate, 0, 0, "duplicate name");
  }
}

// ---------------------------------------------------------------- parsing

namespace {

bool is_token_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

class LineScanner {
 public:
  LineScanner(std::string_view line, int line_no)
      : line_(line), line_no_(line_no) {}

  void skip_space() {
    while (pos_ < line_.size() && (line_[pos_] == ' ' || line_[pos_] == '\t' ||
                                   line_[pos_] == '\r')) {
      ++pos_;
    }
  }
  bool at_end() {
    skip_space();
    return pos_ >= line_.size();
  }
  int column() const { return static_cast<int>(pos_) + 1; }

  std::string token() {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < line_.size() && is_token_char(line_[pos_])) ++pos_;
    if (start == pos_) fail("expected identifier");
    return std::string(line_.substr(start, pos_ - start));
  }

  bool try_char(char c) {
    skip_space();
    if (pos_ < line_.size() && line_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!try_char(c)) fail(std::string("expected '") + c + "'");
  }

  // Digits directly after '*'.
  long integer() {
    std::size_t start = pos_;
    while (pos_ < line_.size() &&
           std::isdigit(static_cast<unsigned char>(line_[pos_]))) {
      ++pos_;
    }
    if (start == pos_) fail("expected integer capacity");
    if (pos_ - start > 9) fail("capacity out of range");
    return std::stol(std::string(line_.substr(start, pos_ - start)));
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw MarketError(MarketError::Kind::Syntax, line_no_, column(), what);
  }

 private:
  std::string_view line_;
  int line_no_;
  std::size_t pos_ = 0;
};

}  // namespace

Market parse_market(std::string_view text) {
  Market m;
  enum class Stage { Applicants, Institutions, Lists } stage = Stage::Applicants;
  std::vector<char> pref_seen;
  std::vector<char> prio_seen;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    std::size_t hash = raw.find('#');
    std::string_view line = raw.substr(0, hash);
    LineScanner sc(line, line_no);
    if (sc.at_end()) {
      if (end == text.size()) break;
      continue;
    }

    int kw_col = sc.column();
    std::string keyword = sc.token();
    if (stage == Stage::Applicants) {
      if (keyword != "applicants") sc.fail("expected 'applicants:'");
      sc.expect(':');
      do {
        int col = sc.column();
        std::string name = sc.token();
        if (m.find_applicant(name) >= 0) {
          throw MarketError(MarketError::Kind::Duplicate, line_no, col,
                            "duplicate applicant " + name);
        }
        m.add_applicant(name);
      } while (!sc.at_end());
      stage = Stage::Institutions;
    } else if (stage == Stage::Institutions) {
      if (keyword != "institutions") sc.fail("expected 'institutions:'");
      sc.expect(':');
      do {
        int col = sc.column();
        std::string name = sc.token();
        if (m.find_institution(name) >= 0) {
          throw MarketError(MarketError::Kind::Duplicate, line_no, col,
                            "duplicate institution " + name);
        }
        long cap = 1;
        if (sc.try_char('*')) {
          int cap_col = sc.column();
          cap = sc.integer();
          if (cap < 1) {
            throw MarketError(MarketError::Kind::Capacity, line_no, cap_col,
                              "capacity of " + name + " below 1");
          }
        }
        m.add_institution(name, static_cast<int>(cap));
      } while (!sc.at_end());
      pref_seen.assign(m.num_applicants(), 0);
      prio_seen.assign(m.num_institutions(), 0);
      stage = Stage::Lists;
    } else {
      const bool is_pref = keyword == "pref";
      if (!is_pref && keyword != "prio") {
        throw MarketError(MarketError::Kind::Syntax, line_no, kw_col,
                          "expected 'pref' or 'prio'");
      }
      int owner_col = sc.column();
      std::string owner = sc.token();
      int owner_id = is_pref ? m.find_applicant(owner) : m.find_institution(owner);
      if (owner_id < 0) {
        throw MarketError(MarketError::Kind::UnknownId, line_no, owner_col,
                          "unknown " +
                              std::string(is_pref ? "applicant " : "institution ") +
                              owner);
      }
      auto& seen = is_pref ? pref_seen : prio_seen;
      if (seen[owner_id]) {
        throw MarketError(MarketError::Kind::Duplicate, line_no, owner_col,
                          "second list for " + owner);
      }
      seen[owner_id] = 1;
      sc.expect(':');
      std::vector<int>& list = is_pref ? m.pref[owner_id] : m.prio[owner_id];
      while (!sc.at_end()) {
        int col = sc.column();
        std::string name = sc.token();
        int id = is_pref ? m.find_institution(name) : m.find_applicant(name);
        if (id < 0) {
          throw MarketError(MarketError::Kind::UnknownId, line_no, col,
                            "unknown id " + name);
        }
        if (std::find(list.begin(), list.end(), id) != list.end()) {
          throw MarketError(MarketError::Kind::Duplicate, line_no, col,
                            "repeated entry " + name);
        }
        list.push_back(id);
      }
    }
    if (end == text.size()) break;
  }
  if (stage != Stage::Lists) {
    throw MarketError(MarketError::Kind::Syntax, line_no, 1,
                      stage == Stage::Applicants
                          ? "missing 'applicants:' line"
                          : "missing 'institutions:' line");
  }
  return m;
}

std::string serialize_market(const Market& m) {
  std::ostringstream out;
  out << "applicants:";
  for (const auto& a : m.applicants) out << ' ' << a;
  out << "\ninstitutions:";
  for (int h = 0; h < m.num_institutions(); ++h) {
    out << ' ' << m.institutions[h];
    if (m.capacity[h] != 1) out << '*' << m.capacity[h];
  }
  out << '\n';
  for (int d = 0; d < m.num_applicants(); ++d) {
    if (m.pref[d].empty()) continue;
    out << "pref " << m.applicants[d] << ':';
    for (int h : m.pref[d]) out << ' ' << m.institutions[h];
    out << '\n';
  }
  for (int h = 0; h < m.num_institutions(); ++h) {
    if (m.prio[h].empty()) continue;
    out << "prio " << m.institutions[h] << ':';
    for (int d : m.prio[h]) out << ' ' << m.applicants[d];
    out << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------- helpers

std::vector<int> rank_table(const std::vector<int>& list, int universe,
                            int unranked) {
  std::vector<int> rank(universe, unranked);
  for (int i = 0; i < static_cast<int>(list.size()); ++i) rank[list[i]] = i;
  return rank;
}

bool is_feasible(const Market& m, const Matching& mu, bool mutual) {
  if (mu.size() != m.num_applicants()) return false;
  std::vector<int> load(m.num_institutions(), 0);
  for (int d = 0; d < mu.size(); ++d) {
    int h = mu[d];
    if (h == kUnmatched) continue;
    if (h < 0 || h >= m.num_institutions()) return false;
    if (++load[h] > m.capacity[h]) return false;
    if (mutual) {
      const auto& p = m.pref[d];
      const auto& q = m.prio[h];
      if (std::find(p.begin(), p.end(), h) == p.end()) return false;
      if (std::find(q.begin(), q.end(), d) == q.end()) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------- capacities

Expansion expand_capacities(const Market& m) {
  Expansion e;
  e.slots.resize(m.num_institutions());
  e.market.applicants = m.applicants;
  for (int h = 0; h < m.num_institutions(); ++h) {
    for (int s = 1; s <= m.capacity[h]; ++s) {
      std::string name = m.capacity[h] == 1
                             ? m.institutions[h]
                             : m.institutions[h] + "_" + std::to_string(s);
      int slot = e.market.add_institution(std::move(name), 1);
      e.market.prio[slot] = m.prio[h];
      e.slot_parent.push_back(h);
      e.slots[h].push_back(slot);
    }
  }
  e.market.pref.resize(m.num_applicants());
  for (int d = 0; d < m.num_applicants(); ++d) {
    e.market.pref[d] = expand_list(e, m.pref[d]);
  }
  return e;
}

PreferenceList expand_list(const Expansion& e, const PreferenceList& list) {
  PreferenceList out;
  for (int h : list) {
    out.insert(out.end(), e.slots[h].begin(), e.slots[h].end());
  }
  return out;
}

Matching contract_matching(const Matching& mu,
                           const std::vector<int>& slot_parent) {
  Matching out(mu.size());
  for (int d = 0; d < mu.size(); ++d) {
    int s = mu[d];
    if (s == kUnmatched) continue;
    if (s < 0 || s >= static_cast<int>(slot_parent.size())) {
      throw std::out_of_range("slot " + std::to_string(s) +
                              " absent from slot map");
    }
    out.to[d] = slot_parent[s];
  }
  return out;
}

// ---------------------------------------------------------------- enumeration

int ceil_log2(std::uint64_t x) {
  int b = 0;
  while (b < 64 && (std::uint64_t{1} << b) < x) ++b;
  return b;
}

std::uint64_t count_preferences(int n, int max_len) {
  std::uint64_t total = 0;
  std::uint64_t term = 1;
  for (int k = 0; k <= max_len && k <= n; ++k) {
    total += term;
    term *= static_cast<std::uint64_t>(n - k);
    if (total > (std::uint64_t{1} << 62)) return total;
  }
  return total;
}

namespace {

void extend_lists(const std::vector<int>& items, int len, PreferenceList& cur,
                  std::vector<char>& used, std::vector<PreferenceList>& out) {
  if (static_cast<int>(cur.size()) == len) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (used[i]) continue;
    used[i] = 1;
    cur.push_back(items[i]);
    extend_lists(items, len, cur, used, out);
    cur.pop_back();
    used[i] = 0;
  }
}

}  // namespace

std::vector<PreferenceList> enumerate_preferences(std::vector<int> institutions,
                                                  int max_len,
                                                  std::uint64_t ceiling) {
  std::sort(institutions.begin(), institutions.end());
  institutions.erase(std::unique(institutions.begin(), institutions.end()),
                     institutions.end());
  const int n = static_cast<int>(institutions.size());
  if (max_len < 0 || max_len > n) {
    throw std::invalid_argument("max_len must lie in [0, |institutions|]");
  }
  std::uint64_t count = count_preferences(n, max_len);
  if (count > ceiling) {
    throw CeilingExceeded("preference enumeration", count, ceiling);
  }
  std::vector<PreferenceList> out;
  out.reserve(count);
  PreferenceList cur;
  std::vector<char> used(n, 0);
  for (int len = 0; len <= max_len; ++len) {
    extend_lists(institutions, len, cur, used, out);
  }
  return out;
}

bool canonical_less(const PreferenceList& a, const PreferenceList& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

// ---------------------------------------------------------------- random

namespace {

std::vector<int> random_truncated_permutation(std::mt19937_64& rng, int n,
                                              int min_len, int max_len) {
  std::vector<int> items(n);
  for (int i = 0; i < n; ++i) items[i] = i;
  std::shuffle(items.begin(), items.end(), rng);
  if (max_len < 0 || max_len > n) max_len = n;
  min_len = std::clamp(min_len, 0, max_len);
  std::uniform_int_distribution<int> len(min_len, max_len);
  items.resize(len(rng));
  return items;
}

}  // namespace

Market random_market(std::uint64_t seed, const RandomMarketSpec& spec) {
  if (spec.applicants < 1 || spec.institutions < 1) {
    throw std::invalid_argument("random_market needs both sides non-empty");
  }
  std::mt19937_64 rng(seed);
  Market m;
  for (int d = 0; d < spec.applicants; ++d) {
    m.add_applicant("d" + std::to_string(d + 1));
  }
  std::uniform_int_distribution<int> cap(spec.cap_min,
                                         std::max(spec.cap_min, spec.cap_max));
  for (int h = 0; h < spec.institutions; ++h) {
    m.add_institution("h" + std::to_string(h + 1), cap(rng));
  }
  for (int d = 0; d < spec.applicants; ++d) {
    m.pref[d] = random_truncated_permutation(rng, spec.institutions,
                                             spec.pref_min, spec.pref_max);
  }
  for (int h = 0; h < spec.institutions; ++h) {
    m.prio[h] = random_truncated_permutation(rng, spec.applicants,
                                             spec.prio_min, spec.prio_max);
  }
  return m;
}

}  // namespace matchlab
