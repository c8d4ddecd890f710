#include "delaudit/coupling.hpp"

#include "delaudit/errors.hpp"

namespace delaudit {

Bytes no_preimage_marker() { return Bytes("\xff\x00\xffNO_PREIMAGE", 14); }

static const Bytes& apply(const FiniteMap& m, const Bytes& x, const char* which) {
  auto it = m.find(x);
  if (it == m.end()) throw ParameterError(std::string(which) + " is not total on the support");
  return it->second;
}

std::optional<FinitePmf> coupling_conditional(const FiniteMap& g, const FinitePmf& q,
                                              const Bytes& target) {
  return q.conditioned_on([&](const Bytes& y) { return apply(g, y, "g") == target; });
}

CouplingOutcome coupling_sample(const FiniteMap& f, const FiniteMap& g, const FinitePmf& p,
                                const FinitePmf& q, const Bytes& x, uint64_t support_cap,
                                uint64_t attempt_cap, Rng& rng) {
  (void)p;  // the premise's X-law; the conditional itself only involves Q
  const Bytes& target = apply(f, x, "f");
  if (q.support_size() <= support_cap) {
    auto cond = coupling_conditional(g, q, target);
    if (!cond) return NoPreimage{};
    return cond->sample(rng);
  }
  // Preimage emptiness is still decidable from the finite map.
  bool any = false;
  for (const auto& [y, gy] : g) {
    if (gy == target && !q.mass_of(y).is_zero()) {
      any = true;
      break;
    }
  }
  if (!any) return NoPreimage{};
  for (uint64_t a = 0; a < attempt_cap; ++a) {
    Bytes y = q.sample(rng);
    if (apply(g, y, "g") == target) return y;
  }
  throw CappedSamplingError("rejection sampling exceeded attempt cap");
}

FinitePmf coupling_marginal(const FiniteMap& f, const FiniteMap& g, const FinitePmf& p,
                            const FinitePmf& q) {
  std::vector<std::pair<Bytes, Rat>> atoms;
  for (const auto& [x, px] : p.atoms()) {
    const Bytes& target = apply(f, x, "f");
    auto cond = coupling_conditional(g, q, target);
    if (!cond) {
      atoms.emplace_back(no_preimage_marker(), px);
      continue;
    }
    for (const auto& [y, qy] : cond->atoms()) atoms.emplace_back(y, px * qy);
  }
  return FinitePmf::from_atoms(std::move(atoms));
}

Rat coupling_agreement(const FiniteMap& f, const FiniteMap& g, const FinitePmf& p,
                       const FinitePmf& q) {
  Rat agree(0);
  for (const auto& [x, px] : p.atoms()) {
    const Bytes& target = apply(f, x, "f");
    auto cond = coupling_conditional(g, q, target);
    if (cond) agree += px;  // conditioned on the fiber, g(y') == f(x) surely
  }
  return agree;
}

}  // namespace delaudit
