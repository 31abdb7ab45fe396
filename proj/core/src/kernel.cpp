#include "latbv/kernel.hpp"

#include <sstream>

namespace latbv {

void Kernel::set(GenId i, GenId j, const Scalar& v) {
  if (v.is_zero())
    e_.erase({i, j});
  else
    e_[{i, j}] = v;
}

void Kernel::add(GenId i, GenId j, const Scalar& v) {
  auto key = std::make_pair(i, j);
  auto it = e_.find(key);
  if (it == e_.end()) {
    if (!v.is_zero()) e_.emplace(key, v);
  } else {
    it->second += v;
    if (it->second.is_zero()) e_.erase(it);
  }
}

Scalar Kernel::get(GenId i, GenId j) const {
  auto it = e_.find({i, j});
  return it == e_.end() ? Scalar() : it->second;
}

Kernel& Kernel::operator+=(const Kernel& o) {
  for (const auto& [ij, v] : o.e_) add(ij.first, ij.second, v);
  return *this;
}

Kernel& Kernel::operator-=(const Kernel& o) {
  for (const auto& [ij, v] : o.e_) add(ij.first, ij.second, -v);
  return *this;
}

Kernel& Kernel::scale(const Scalar& s) {
  if (s.is_zero()) {
    e_.clear();
    return *this;
  }
  for (auto& [ij, v] : e_) v *= s;
  return *this;
}

Kernel compose(const Kernel& a, const Kernel& b) {
  Kernel r(a.tab_ ? a.tab_ : b.tab_);
  const GenTable& tab = *r.table();
  // group b's entries by row for the inner sum
  std::map<GenId, std::vector<std::pair<GenId, const Scalar*>>> brows;
  for (const auto& [ij, v] : b.e_) brows[ij.first].push_back({ij.second, &v});
  for (const auto& [ij, v] : a.e_) {
    auto it = brows.find(ij.second);
    if (it == brows.end()) continue;
    Scalar w = v * Scalar(tab.info(ij.second).mu);
    for (const auto& [k, bv] : it->second) r.add(ij.first, k, w * (*bv));
  }
  return r;
}

Kernel Kernel::graded_transpose() const {
  Kernel r(tab_);
  for (const auto& [ij, v] : e_) {
    Scalar w = v;
    if (tab_->parity(ij.first) && tab_->parity(ij.second)) w = -w;
    r.add(ij.second, ij.first, w);
  }
  return r;
}

Kernel Kernel::graded_adjoint() const {
  // bilinear transpose w.r.t. the signed multiplet duality:
  // (O*)[j][i] = (sign_i / sign_j) O[i][j], then the graded sign
  Kernel r(tab_);
  for (const auto& [ij, v] : e_) {
    const GenInfo& gi = tab_->info(ij.first);
    const GenInfo& gj = tab_->info(ij.second);
    Scalar w = v;
    Rat ratio = gi.metric / gj.metric;
    w *= Scalar(ratio);
    if (gi.parity && gj.parity) w = -w;
    r.add(ij.second, ij.first, w);
  }
  return r;
}

Kernel Kernel::hermitian_transpose() const {
  Kernel r(tab_);
  for (const auto& [ij, v] : e_) r.add(ij.second, ij.first, v.conj());
  return r;
}

Kernel Kernel::restricted(const std::function<bool(GenId)>& keep) const {
  Kernel r(tab_);
  for (const auto& [ij, v] : e_)
    if (keep(ij.first) && keep(ij.second)) r.add(ij.first, ij.second, v);
  return r;
}

Rat Kernel::norm1() const {
  Rat n = 0;
  for (const auto& [ij, v] : e_) {
    Rat m = v.norm1();
    if (m > n) n = m;
  }
  return n;
}

Rat Kernel::norm1_over(const std::function<bool(GenId, GenId)>& keep) const {
  Rat n = 0;
  for (const auto& [ij, v] : e_) {
    if (!keep(ij.first, ij.second)) continue;
    Rat m = v.norm1();
    if (m > n) n = m;
  }
  return n;
}

std::string Kernel::dump() const {
  // one line per nonzero entry: alpha x beta y re im
  std::ostringstream os;
  for (const auto& [ij, v] : e_) {
    const GenInfo& gi = tab_->info(ij.first);
    const GenInfo& gj = tab_->info(ij.second);
    os << gi.name << (gi.kind == GenKind::Antifield ? "+" : "") << " " << gi.cell << " "
       << gj.name << (gj.kind == GenKind::Antifield ? "+" : "") << " " << gj.cell << " "
       << rat_str(v.re) << " " << rat_str(v.im) << "\n";
  }
  return os.str();
}

Kernel identity_kernel(const GenTablePtr& tab, const std::function<bool(GenId)>& domain) {
  Kernel r(tab);
  for (GenId g = 0; g < tab->size(); ++g) {
    if (!domain || domain(g)) r.set(g, g, Scalar(Rat(1) / tab->info(g).mu));
  }
  return r;
}

}  // namespace latbv
