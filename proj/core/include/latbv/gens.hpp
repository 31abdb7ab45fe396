#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "latbv/rational.hpp"
#include "latbv/util.hpp"

namespace latbv {

using GenId = std::uint32_t;
inline constexpr GenId kNoGen = 0xffffffffu;

enum class GenKind : std::uint8_t { Field, Antifield };

struct GenInfo {
  std::string name;        // e.g. "A", "C"; antifields get a "+" suffix in printing
  int member = 0;          // index into the model's multiplet
  std::uint32_t cell = 0;  // lattice cell id carrying this component
  GenKind kind = GenKind::Field;
  int parity = 0;  // 0 even, 1 odd
  int gh = 0;
  int af = 0;
  int ta = 0;           // 1 exactly for antifields
  int time2 = 0;        // doubled time coordinate of the cell (micro-slice)
  Rat mu = 1;           // measure weight of the site sum
  Rat metric = 1;       // signed weight of the multiplet duality (Hodge pairing)
  GenId partner = kNoGen;  // field <-> antifield
};

// Immutable registry of all field and antifield generators of one model.
// Ids are assigned in lexicographic (cell, member, kind) order so monomial
// normal forms group generators by site.
class GenTable {
 public:
  GenId add(GenInfo info);
  void freeze();

  const GenInfo& info(GenId g) const { return gens_[g]; }
  std::size_t size() const { return gens_.size(); }
  int parity(GenId g) const { return gens_[g].parity; }
  bool is_field(GenId g) const { return gens_[g].kind == GenKind::Field; }
  GenId partner(GenId g) const { return gens_[g].partner; }

  std::string display(GenId g) const;

  std::vector<GenId> fields() const;
  std::vector<GenId> antifields() const;

 private:
  std::vector<GenInfo> gens_;
  bool frozen_ = false;
};

using GenTablePtr = std::shared_ptr<const GenTable>;

}  // namespace latbv
