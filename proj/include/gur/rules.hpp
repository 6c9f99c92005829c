#pragma once

#include <memory>
#include <string>
#include <vector>

#include "gur/state.hpp"

namespace gur {

// A state-update rule maps (outcome, sub-normalized state) to a Gemenge of
// sub-normalized post-measurement states. All rules here are 1-homogeneous
// and Born-consistent: the total output trace equals Tr(Q rho) with Q the
// embedded outcome projector.
class UpdateRule {
 public:
  virtual ~UpdateRule() = default;

  virtual std::string name() const = 0;
  virtual Gemenge apply(const Outcome& o, const QuantumState& s) const = 0;

  // True when the output depends on extra context beyond (outcome, state),
  // i.e. on the chosen refinement of a degenerate outcome.
  virtual bool refinement_dependent() const { return false; }

  // Apply with an explicit refinement (projectors on the outcome's own
  // space, summing to the outcome projector). Rules without refinement
  // context ignore it.
  virtual Gemenge apply_refined(const Outcome& o, const QuantumState& s,
                                const std::vector<CMat>& refinement) const;
};

using RulePtr = std::shared_ptr<const UpdateRule>;

// --- the five valid rules ---

// Q rho Q.
Gemenge luders(const Outcome& o, const QuantumState& s);

// Single-system update on the measured factor, tensored with the joint
// reduced state of the untouched factors divided by Tr(rho).
Gemenge locally_luders(const Outcome& o, const QuantumState& s);

// Tr(Q rho) rho / Tr(rho).
Gemenge passive(const Outcome& o, const QuantumState& s);

// Measured factor replaced by I/d, conditioned remainder kept:
// (I_k/d_k) (x) Tr_k[Q rho Q]; global outcomes give Tr(Q rho) I/d.
Gemenge depolarising(const Outcome& o, const QuantumState& s);

// Tr(P rho) M rho M / Tr(G rho) with G = (1-lambda) P + lambda I and
// M = G^{1/2} = P + sqrt(lambda) (I-P), applied on the measured factor for
// local outcomes (remainder as in locally_luders) and on the whole space
// for global outcomes. lambda = 0 is locally_luders, lambda = 1 single
// system is passive.
Gemenge lambda_rule(double lambda, const Outcome& o, const QuantumState& s);

// --- the five invalid rules ---

// Local outcome handled as the global outcome embed(P): Tr(Q rho) I/d_total.
Gemenge cc_extended_depolarising(const Outcome& o, const QuantumState& s);

// Local outcome handled as global: the lambda formula on the full space.
Gemenge cc_extended_lambda(double lambda, const Outcome& o,
                           const QuantumState& s);

// Two-branch proper mixture {(1-mu, luders), (mu, passive)}.
Gemenge mu_mixture(double mu, const Outcome& o, const QuantumState& s);

// One branch P_i rho P_i per refinement projector P_i of the outcome.
Gemenge von_neumann(const Outcome& o, const QuantumState& s,
                    const std::vector<CMat>& refinement);

// Tr(P rho_k) U rho U^dag / Tr(rho) with a fixed non-identity unitary U on
// the measured space.
Gemenge unitary_kick(const CMat& u, const Outcome& o, const QuantumState& s);

// --- helpers ---

// Rank-1 spectral refinement of a projector (deterministic basis choice).
std::vector<CMat> canonical_refinement(const CMat& projector);

// Cyclic-shift unitary U|j> = |j+1 mod d|, the fixed kick family (equals
// Pauli X at d = 2).
CMat cyclic_shift(int dim);

// Itemwise update of a proper mixture: weights stay fixed, each member
// state is replaced by the rule's output; multi-branch outputs multiply
// weights into the expanded list.
Gemenge apply_gemenge(const UpdateRule& rule, const Outcome& o,
                      const Gemenge& g);

// Left-to-right fold of apply_gemenge.
Gemenge apply_sequence(const UpdateRule& rule,
                       const std::vector<Outcome>& outcomes, const Gemenge& g);

// Registry: luders, loc-luders, passive, dep, lambda:<l>, cc-dep,
// cc-lambda:<l>, mu:<m>, von-neumann, unitary-kick. Throws
// std::invalid_argument for unknown names or out-of-range parameters.
RulePtr make_rule(const std::string& spec);

// The ten rules at their reference parameters (lambda 1/4 for the valid
// family, lambda 1/2, mu 1/2 for the invalid ones).
std::vector<std::string> catalog_rule_names();

}  // namespace gur
