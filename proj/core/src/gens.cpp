#include "latbv/gens.hpp"

namespace latbv {

GenId GenTable::add(GenInfo info) {
  if (frozen_) fail(Err::ConfigInvalid, "generator table is frozen");
  gens_.push_back(std::move(info));
  return static_cast<GenId>(gens_.size() - 1);
}

void GenTable::freeze() { frozen_ = true; }

std::string GenTable::display(GenId g) const {
  const GenInfo& gi = gens_[g];
  std::string s = gi.name;
  if (gi.kind == GenKind::Antifield) s += "+";
  s += "@" + std::to_string(gi.cell);
  return s;
}

std::vector<GenId> GenTable::fields() const {
  std::vector<GenId> out;
  for (GenId g = 0; g < gens_.size(); ++g)
    if (gens_[g].kind == GenKind::Field) out.push_back(g);
  return out;
}

std::vector<GenId> GenTable::antifields() const {
  std::vector<GenId> out;
  for (GenId g = 0; g < gens_.size(); ++g)
    if (gens_[g].kind == GenKind::Antifield) out.push_back(g);
  return out;
}

}  // namespace latbv
