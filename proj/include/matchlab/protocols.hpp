#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "matchlab/market.hpp"
#include "matchlab/mechanisms.hpp"

namespace matchlab {

// Applicants decode using the public priorities in `Q` (a market whose
// preference lists are ignored) and their own list.

struct DACutoffCertificate {
  int num_applicants = 0;
  std::vector<int> d_min;  // per institution; kUnmatched marks slack

  bool operator==(const DACutoffCertificate&) const = default;
};

inline constexpr int kClosed = -2;

struct TTCCutoffCertificate {
  int num_applicants = 0;
  int num_institutions = 0;
  std::vector<int> cutoff;  // [h1 * I + h2]: applicant or kClosed

  int at(int h1, int h2) const { return cutoff[h1 * num_institutions + h2]; }
  bool operator==(const TTCCutoffCertificate&) const = default;
};

class CutoffValidationError : public std::runtime_error {
 public:
  CutoffValidationError(const std::string& what, Market market)
      : std::runtime_error(what), market_(std::move(market)) {}
  const Market& market() const { return market_; }

 private:
  Market market_;
};

// Cutoffs of the applicant-proposing stable outcome.
DACutoffCertificate encode_da_representation(const Market& m);
int decode_da_representation(const DACutoffCertificate& c, const Market& Q,
                             int d, const PreferenceList& P_d);

// Pair cutoffs recorded during a lowest-index TTC run. Throws
// CutoffValidationError if some applicant would decode a wrong match.
TTCCutoffCertificate encode_ttc_representation(const Market& m);
int decode_ttc_representation(const TTCCutoffCertificate& c, const Market& Q,
                              int d, const PreferenceList& P_d);

enum class ImprSide { Inst, Appl };

// INST side: vertices are applicants, labels institutions.
// APPL side: vertices are institutions, labels applicants.
// Edge v --label--> mu(label); kUnmatched where a vertex has no edge.
struct ImprovementGraph {
  ImprSide side = ImprSide::Inst;
  std::vector<int> label;
  std::vector<int> target;

  int num_edges() const;
  bool operator==(const ImprovementGraph&) const = default;
};

ImprovementGraph build_improvement_graph(ImprSide side, const Market& m,
                                         const Matching& mu);
bool is_acyclic(const ImprovementGraph& g);

// One pointing action of the deterministic TTC protocol. target is an
// applicant for institution events and an institution for applicant
// events; kUnmatched is an applicant announcing she has nothing left.
struct TranscriptEvent {
  bool by_applicant;
  int actor;
  int target;
  bool operator==(const TranscriptEvent&) const = default;
};

struct VerificationCertificate {
  Mechanism mech = Mechanism::IPDA;
  // DA payload, on the unit-capacity expansion when capacities exceed 1.
  Matching matching;
  ImprovementGraph graph;
  // TTC payload.
  std::vector<TranscriptEvent> transcript;
};

VerificationCertificate encode_verification(Mechanism mech, const Market& m);

struct CheckResult {
  bool ok = false;
  int my_match = kUnmatched;
};

CheckResult check_verification(Mechanism mech, const Market& Q, int d,
                               const PreferenceList& P_d,
                               const VerificationCertificate& c);

// Matching announced by the certificate, in the original market.
Matching certificate_matching(const VerificationCertificate& c,
                              const Market& Q);

std::uint64_t certificate_bit_size(const DACutoffCertificate& c);
std::uint64_t certificate_bit_size(const TTCCutoffCertificate& c);
// Needs the public market for the side sizes.
std::uint64_t certificate_bit_size(const VerificationCertificate& c,
                                   const Market& Q);


}  // namespace matchlab
