#include "delaudit/pmf.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <json.hpp>

#include "delaudit/errors.hpp"

namespace delaudit {

FinitePmf FinitePmf::from_atoms(std::vector<std::pair<Bytes, Rat>> atoms) {
  std::map<Bytes, Rat> merged;
  for (auto& [v, m] : atoms) {
    if (m.is_negative()) throw ParameterError("negative pmf mass");
    if (m.is_zero()) continue;
    auto [it, fresh] = merged.emplace(v, m);
    if (!fresh) it->second += m;
  }
  FinitePmf p;
  p.atoms_.assign(merged.begin(), merged.end());
  return p;
}

FinitePmf FinitePmf::from_counts(const std::unordered_map<Bytes, uint64_t>& counts,
                                 uint64_t denominator) {
  if (denominator == 0) throw ParameterError("zero denominator");
  std::vector<std::pair<Bytes, Rat>> atoms;
  atoms.reserve(counts.size());
  for (const auto& [v, c] : counts) {
    if (c > 0) atoms.emplace_back(v, Rat::from_ratio(c, denominator));
  }
  return from_atoms(std::move(atoms));
}

FinitePmf FinitePmf::point_mass(const Bytes& value) {
  return from_atoms({{value, Rat(1)}});
}

Rat FinitePmf::mass_of(const Bytes& value) const {
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), value,
                             [](const auto& a, const Bytes& v) { return a.first < v; });
  if (it != atoms_.end() && it->first == value) return it->second;
  return Rat(0);
}

Rat FinitePmf::total_mass() const {
  Rat t(0);
  for (const auto& [v, m] : atoms_) t += m;
  return t;
}

bool FinitePmf::is_normalized() const { return total_mass() == Rat(1); }

FinitePmf FinitePmf::normalized() const {
  Rat t = total_mass();
  if (t.is_zero()) throw ParameterError("cannot normalize empty pmf");
  FinitePmf p = *this;
  for (auto& [v, m] : p.atoms_) m = m / t;
  return p;
}

std::optional<FinitePmf> FinitePmf::conditioned_on(
    const std::function<bool(const Bytes&)>& event) const {
  std::vector<std::pair<Bytes, Rat>> kept;
  for (const auto& [v, m] : atoms_) {
    if (event(v)) kept.emplace_back(v, m);
  }
  if (kept.empty()) return std::nullopt;
  return FinitePmf::from_atoms(std::move(kept)).normalized();
}

FinitePmf FinitePmf::map_atoms(const std::function<Bytes(const Bytes&)>& f) const {
  std::vector<std::pair<Bytes, Rat>> out;
  out.reserve(atoms_.size());
  for (const auto& [v, m] : atoms_) out.emplace_back(f(v), m);
  return from_atoms(std::move(out));
}

Bytes FinitePmf::sample(Rng& rng) const {
  if (atoms_.empty()) throw ParameterError("sampling from empty pmf");
  // Inverse CDF on a high-resolution uniform; exact enough for the sampled
  // path which never feeds back into exact verdicts.
  double u = rng.uniform01();
  double acc = 0;
  for (const auto& [v, m] : atoms_) {
    acc += m.to_double();
    if (u < acc) return v;
  }
  return atoms_.back().first;
}

std::string FinitePmf::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [v, m] : atoms_) {
    nlohmann::json j;
    j["value_hex"] = to_hex(v);
    j["mass"] = m.to_double();
    arr.push_back(j);
  }
  return arr.dump();
}

Rat hockey_stick_exact(const FinitePmf& p, const FinitePmf& q, double eps) {
  if (eps < 0) throw ParameterError("hockey_stick requires eps >= 0");
  Rat e_eps = eps == 0 ? Rat(1) : Rat::lower_bound_of(expl(static_cast<long double>(eps)));
  Rat out(0);
  const auto& pa = p.atoms();
  const auto& qa = q.atoms();
  size_t i = 0, j = 0;
  while (i < pa.size()) {
    while (j < qa.size() && qa[j].first < pa[i].first) ++j;
    if (j < qa.size() && qa[j].first == pa[i].first) {
      Rat d = pa[i].second - e_eps * qa[j].second;
      if (!d.is_negative()) out += d;
    } else {
      out += pa[i].second;
    }
    ++i;
  }
  return out;
}

double hockey_stick(const FinitePmf& p, const FinitePmf& q, double eps) {
  return hockey_stick_exact(p, q, eps).to_double();
}

ClosenessReport check_indisting(const FinitePmf& p, const FinitePmf& q, double eps,
                                double delta) {
  Rat fwd = hockey_stick_exact(p, q, eps);
  Rat bwd = hockey_stick_exact(q, p, eps);
  ClosenessReport r;
  r.eps = eps;
  r.delta_forward = fwd.to_double();
  r.delta_backward = bwd.to_double();
  r.method = "exact";
  r.passed = max(fwd, bwd) <= Rat::from_double_exact(delta);
  return r;
}

double hockey_stick_counts(const std::vector<double>& p, const std::vector<double>& q,
                           double e_eps) {
  double out = 0;
  for (size_t i = 0; i < p.size(); ++i) {
    double d = p[i] - e_eps * q[i];
    if (d > 0) out += d;
  }
  return out;
}

ClosenessReport estimate_indisting(const Sampler& sampler_p, const Sampler& sampler_q,
                                   double eps, double delta, const EstimateOptions& opt) {
  if (opt.trials < 1000) throw ParameterError("estimate_indisting requires >= 1000 trials");
  if (!(opt.confidence > 0 && opt.confidence < 1)) {
    throw ParameterError("confidence must lie in (0,1)");
  }
  Rng rng_p = Rng(opt.seed).child("estimate-p");
  Rng rng_q = Rng(opt.seed).child("estimate-q");
  Rng rng_boot = Rng(opt.seed).child("estimate-bootstrap");

  // Index outcomes over the union of observed values.
  std::unordered_map<Bytes, size_t> index;
  std::vector<uint64_t> counts_p, counts_q;
  auto slot = [&](const Bytes& v) {
    auto [it, fresh] = index.emplace(v, index.size());
    if (fresh) {
      counts_p.push_back(0);
      counts_q.push_back(0);
    }
    return it->second;
  };
  for (uint64_t t = 0; t < opt.trials; ++t) counts_p[slot(sampler_p(rng_p))]++;
  for (uint64_t t = 0; t < opt.trials; ++t) counts_q[slot(sampler_q(rng_q))]++;

  const double n = static_cast<double>(opt.trials);
  const double e_eps = std::exp(eps);
  std::vector<double> freq_p(counts_p.size()), freq_q(counts_q.size());
  for (size_t i = 0; i < counts_p.size(); ++i) {
    freq_p[i] = counts_p[i] / n;
    freq_q[i] = counts_q[i] / n;
  }
  double point_fwd = hockey_stick_counts(freq_p, freq_q, e_eps);
  double point_bwd = hockey_stick_counts(freq_q, freq_p, e_eps);

  // Nonparametric bootstrap: resample each empirical pmf, take the upper
  // confidence quantile of the directional maxima.
  auto resample = [&](const std::vector<uint64_t>& counts, std::vector<double>* out) {
    std::vector<double> cdf(counts.size());
    double acc = 0;
    for (size_t i = 0; i < counts.size(); ++i) {
      acc += counts[i] / n;
      cdf[i] = acc;
    }
    std::fill(out->begin(), out->end(), 0.0);
    for (uint64_t t = 0; t < opt.trials; ++t) {
      double u = rng_boot.uniform01();
      size_t lo = std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin();
      if (lo >= out->size()) lo = out->size() - 1;
      (*out)[lo] += 1.0 / n;
    }
  };

  std::vector<double> boot_max(opt.bootstrap_resamples);
  std::vector<double> rp(counts_p.size()), rq(counts_q.size());
  for (int b = 0; b < opt.bootstrap_resamples; ++b) {
    resample(counts_p, &rp);
    resample(counts_q, &rq);
    boot_max[b] = std::max(hockey_stick_counts(rp, rq, e_eps),
                           hockey_stick_counts(rq, rp, e_eps));
  }
  std::sort(boot_max.begin(), boot_max.end());
  size_t k = static_cast<size_t>(std::ceil(opt.confidence * opt.bootstrap_resamples));
  if (k >= boot_max.size()) k = boot_max.size() - 1;
  double upper = std::max(boot_max[k], std::max(point_fwd, point_bwd));

  ClosenessReport r;
  r.eps = eps;
  r.delta_forward = point_fwd;
  r.delta_backward = point_bwd;
  r.method = "sampled";
  r.confidence = opt.confidence;
  r.trials = opt.trials;
  r.passed = upper <= delta;
  return r;
}

std::string ClosenessReport::to_json() const {
  nlohmann::json j;
  j["eps"] = eps;
  j["delta_forward"] = delta_forward;
  j["delta_backward"] = delta_backward;
  j["passed"] = passed;
  j["method"] = method;
  if (method == "sampled") {
    j["confidence"] = confidence;
    j["trials"] = trials;
  }
  return j.dump();
}

}  // namespace delaudit
