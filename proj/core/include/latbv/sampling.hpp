#pragma once

#include "latbv/model.hpp"

namespace latbv {

struct SampleOpts {
  int max_terms = 3;
  int max_degree = 2;
  bool fields_only = false;
  int bulk_extra = 1;
  int want_parity = -1;  // -1 any, 0 even, 1 odd
};

// deterministic random bulk-supported polynomial for property checks
inline Poly random_poly(const Model& m, Rng& rng, const SampleOpts& o = {}) {
  std::vector<GenId> pool;
  for (GenId g = 0; g < m.tab->size(); ++g) {
    if (o.fields_only && !m.tab->is_field(g)) continue;
    if (!m.bulk_gen(g, o.bulk_extra)) continue;
    pool.push_back(g);
  }
  Poly p(m.tab, m.win);
  if (pool.empty()) return p;
  int terms = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(o.max_terms)));
  for (int t = 0; t < terms; ++t) {
    int deg = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(o.max_degree)));
    Mono mono;
    int parity = 0;
    bool dead = false;
    for (int d = 0; d < deg; ++d) {
      GenId g = pool[rng.below(pool.size())];
      // odd generators must not repeat
      if (m.tab->parity(g) && std::count(mono.g.begin(), mono.g.end(), g)) {
        dead = true;
        break;
      }
      mono.g.push_back(g);
      parity ^= m.tab->parity(g);
    }
    if (dead) continue;
    if (o.want_parity >= 0 && parity != o.want_parity) continue;
    std::sort(mono.g.begin(), mono.g.end());
    long num = rng.small(3);
    if (num == 0) num = 1;
    long den = 1 + static_cast<long>(rng.below(2));
    p.add_term(mono, Coeff(m.win, Scalar(Rat(num, den))));
  }
  if (p.is_zero() && o.want_parity <= 0) p.add_term(Mono{}, Coeff(m.win, Scalar(1)));
  return p;
}

}  // namespace latbv
