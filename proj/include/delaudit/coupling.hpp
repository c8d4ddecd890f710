#pragma once

#include <map>
#include <optional>
#include <variant>

#include "delaudit/pmf.hpp"

namespace delaudit {

// Outcome of the coupling sampler: either a value of Y', or the default
// element standing in for an empty preimage g^{-1}(f(x)).
struct NoPreimage {
  bool operator==(const NoPreimage&) const { return true; }
};
using CouplingOutcome = std::variant<Bytes, NoPreimage>;

using FiniteMap = std::map<Bytes, Bytes>;

// Q conditioned on {y : g(y) == target}; nullopt when the event is empty.
std::optional<FinitePmf> coupling_conditional(const FiniteMap& g, const FinitePmf& q,
                                              const Bytes& target);

// Joint sampler of the coupling behind the approximate-indistinguishability
// coupling argument: draws y' from Q conditioned on g(y') = f(x). Uses exact
// conditional enumeration when support(Q) fits under `support_cap`, rejection
// sampling otherwise (throws CappedSamplingError past attempt_cap; that means
// "don't know", unlike the definite NoPreimage).
CouplingOutcome coupling_sample(const FiniteMap& f, const FiniteMap& g, const FinitePmf& p,
                                const FinitePmf& q, const Bytes& x, uint64_t support_cap,
                                uint64_t attempt_cap, Rng& rng);

// Exact marginal law of the sampler's output when X ~ P (NoPreimage atoms
// keyed by an out-of-band marker). Used by tests and exact audits.
FinitePmf coupling_marginal(const FiniteMap& f, const FiniteMap& g, const FinitePmf& p,
                            const FinitePmf& q);

// Exact probability that g(Y') == f(X) under the coupling.
Rat coupling_agreement(const FiniteMap& f, const FiniteMap& g, const FinitePmf& p,
                       const FinitePmf& q);

// Marker value distinct from every real atom (real atoms are length-prefixed).
Bytes no_preimage_marker();

}  // namespace delaudit
