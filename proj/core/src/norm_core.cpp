#include "linf/norm_core.hpp"

#include <algorithm>

#include "linf/subres.hpp"

namespace linf {

std::string_view to_string(NormSource source) {
  switch (source) {
    case NormSource::critical_point: return "critical_point";
    case NormSource::leading_coeff: return "leading_coeff";
    case NormSource::omega_free: return "omega_free";
  }
  return "unknown";
}

SparsePoly critical_resultant(const CurveData& c) {
  const SparsePoly& n = c.n_squarefree;
  if (n.degree(kOmegaVar) < 1) {
    throw Error(ErrorKind::invalid_argument, "curve does not depend on omega");
  }
  SparsePoly r = resultant(n, derivative(n, kOmegaVar), kOmegaVar);
  if (r.is_zero()) {
    throw Error(ErrorKind::not_well_behaved, "critical resultant vanishes identically");
  }
  return primitive_part(r);
}

namespace {

struct Candidate {
  AlgebraicNumber value;
  bool from_r = false;
  bool from_lc = false;
  bool from_content = false;
  int r_index = 0;
};

// Merges a sorted root list into the sorted candidate list, fusing equal values.
void merge(std::vector<Candidate>& out, const std::vector<AlgebraicNumber>& roots, int kind) {
  for (std::size_t i = 0; i < roots.size(); ++i) {
    auto it = out.begin();
    bool fused = false;
    for (; it != out.end(); ++it) {
      auto cmp = compare(roots[i], it->value);
      if (cmp == std::strong_ordering::equal) {
        fused = true;
        break;
      }
      if (cmp == std::strong_ordering::less) break;
    }
    if (!fused) it = out.insert(it, Candidate{roots[i]});
    if (kind == 0) {
      it->from_r = true;
      it->r_index = int(i) + 1;
      // Keep R's defining polynomial so the reported root refers to R.
      it->value = roots[i];
    } else if (kind == 1) {
      it->from_lc = true;
    } else {
      it->from_content = true;
    }
  }
}

}  // namespace

NormResult linf_norm(const CurveData& c, const std::map<std::string, Rational>& params,
                     const NormOptions& options) {
  for (const auto& p : c.params) {
    if (!params.count(p)) throw Error(ErrorKind::invalid_argument, "parameter '" + p + "' is not fixed");
  }
  SparsePoly ns = substitute(c.n, params);
  if (ns.is_zero()) throw Error(ErrorKind::degenerate, "curve numerator vanishes at the parameter point");
  if (!ns.depends_on(kGammaVar)) {
    throw Error(ErrorKind::degenerate, "curve numerator does not depend on gamma at the parameter point");
  }

  // Split off factors free of omega: each of their roots is attained at every omega.
  SparsePoly content = content_in(ns, kOmegaVar);
  if (!ns.depends_on(kOmegaVar)) {
    auto roots = isolate(ns);
    if (roots.empty()) throw Error(ErrorKind::degenerate, "curve has no real gamma");
    NormResult out{refine(roots.back(), options.precision), std::nullopt, NormSource::omega_free,
                   SparsePoly(ns.ring()), 0};
    return out;
  }
  SparsePoly pp = content.is_constant() ? ns : divide_or_throw(ns, content);
  pp = squarefree_part(pp, kOmegaVar);

  SparsePoly r = resultant(pp, derivative(pp, kOmegaVar), kOmegaVar);
  if (r.is_zero()) {
    throw Error(ErrorKind::not_well_behaved, "critical resultant vanishes at the parameter point");
  }
  r = primitive_part(r);
  SparsePoly lc = leading_coefficient(pp, kOmegaVar);

  std::vector<Candidate> candidates;
  std::vector<AlgebraicNumber> r_roots = r.is_constant() ? std::vector<AlgebraicNumber>{} : isolate(r);
  merge(candidates, r_roots, 0);
  if (!lc.is_constant()) merge(candidates, isolate(lc), 1);
  if (!content.is_constant()) merge(candidates, isolate(content), 2);

  SturmHabichtSequence seq = sturm_habicht(pp, kOmegaVar);
  for (auto it = candidates.rbegin(); it != candidates.rend(); ++it) {
    bool attained = false;
    if (it->from_r) attained = count_real_roots_at(seq, {{std::string(kGammaVar), it->value}}) >= 1;
    if (!attained && !it->from_lc && !it->from_content) continue;
    NormSource source = attained          ? NormSource::critical_point
                        : it->from_lc     ? NormSource::leading_coeff
                                          : NormSource::omega_free;
    NormResult out{refine(it->value, options.precision),
                   it->from_r ? std::optional<int>(it->r_index) : std::nullopt, source, r,
                   int(r_roots.size())};
    return out;
  }
  throw Error(ErrorKind::degenerate, "no real candidate for the norm");
}

NormResult linf_norm(const TransferMatrix& g, const NormOptions& options) {
  if (!g.params.empty()) {
    throw Error(ErrorKind::invalid_argument, "transfer matrix has unbound parameters");
  }
  return linf_norm(build_curve(g), {}, options);
}

}  // namespace linf
