#pragma once

// Brute-force reference implementations. None of them calls into the
// library's mechanisms, menus or enumeration code.

#include <cstdint>
#include <functional>
#include <vector>

#include "matchlab/market.hpp"
#include "matchlab/protocols.hpp"

namespace oracle {

using matchlab::Market;
using matchlab::Matching;

// Every ordered list of distinct elements of {0..n-1} with length <= max_len.
std::vector<std::vector<int>> all_lists(int n, int max_len);

// Position in list, or -1.
int pos(const std::vector<int>& list, int x);

bool individually_rational(const Market& m, const Matching& mu);
bool blocks(const Market& m, const Matching& mu, int d, int h);
bool stable(const Market& m, const Matching& mu);

// Every feasible, individually rational matching that is stable.
std::vector<Matching> stable_set(const Market& m);

// Applicant-best and applicant-worst stable matchings, read off stable_set.
Matching applicant_optimal(const Market& m);
Matching applicant_pessimal(const Market& m);

Matching serial_dictatorship(const Market& m, const std::vector<int>& order);

// Plain point-and-trade loop; an applicant whose list has no remaining
// institution leaves unmatched.
Matching top_trading_cycles(const Market& m);

// Gale-Shapley with the proposing side's lists taken at face value.
Matching applicant_proposing(const Market& m);
Matching institution_proposing(const Market& m);

using Mech = std::function<Matching(const Market&)>;

// Union of d's matches over every list of every length.
std::vector<int> full_menu(const Mech& f, const Market& m, int d);

// d's match read off a TTC cutoff table: her favourite h2 for which some
// h1 ranks her at or above the cutoff (h1, h2).
int ttc_reconstruct(const matchlab::TTCCutoffCertificate& c, const Market& m, int d);

// Small deterministic generator, independent of random_market.
Market random_small(std::uint64_t seed, int na, int ni, int cap_max = 1);

}  // namespace oracle
