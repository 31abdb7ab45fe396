#include "latbv/lattice.hpp"

namespace latbv {

void SparseMat::set(CellId r, CellId c, const Rat& v) {
  if (v == 0)
    e_.erase({r, c});
  else
    e_[{r, c}] = v;
}

void SparseMat::add(CellId r, CellId c, const Rat& v) {
  auto key = std::make_pair(r, c);
  auto it = e_.find(key);
  if (it == e_.end()) {
    if (v != 0) e_.emplace(key, v);
  } else {
    it->second += v;
    if (it->second == 0) e_.erase(it);
  }
}

Rat SparseMat::get(CellId r, CellId c) const {
  auto it = e_.find({r, c});
  return it == e_.end() ? Rat(0) : it->second;
}

std::vector<Rat> SparseMat::apply(const std::vector<Rat>& v, std::size_t rows) const {
  std::vector<Rat> out(rows, Rat(0));
  for (const auto& [rc, val] : e_) {
    if (rc.second < v.size() && v[rc.second] != 0) out[rc.first] += val * v[rc.second];
  }
  return out;
}

Lattice::Lattice(int nt, int nx, Rat dt, Rat dx) : nt_(nt), nx_(nx), dt_(std::move(dt)), dx_(std::move(dx)) {
  if (nt < 6 || nx < 2) fail(Err::TooSmall, "lattice needs Nt >= 6 and Nx >= 2");
  if (dt_ <= 0 || dx_ <= 0) fail(Err::TooSmall, "spacings must be positive");
  build_cells();
  build_d();
}

void Lattice::build_cells() {
  v0_ = 0;
  for (int t = 0; t < nt_; ++t)
    for (int x = 0; x < nx_; ++x) cells_.push_back({CellType::Vertex, t, x});
  te0_ = static_cast<CellId>(cells_.size());
  for (int t = 0; t < nt_; ++t)
    for (int x = 0; x < nx_; ++x) cells_.push_back({CellType::TEdge, t, x});
  xe0_ = static_cast<CellId>(cells_.size());
  for (int t = 0; t < nt_; ++t)
    for (int x = 0; x < nx_; ++x) cells_.push_back({CellType::XEdge, t, x});
  pl0_ = static_cast<CellId>(cells_.size());
  for (int t = 0; t < nt_; ++t)
    for (int x = 0; x < nx_; ++x) cells_.push_back({CellType::Plaq, t, x});
}

CellId Lattice::vertex(int t, int x) const {
  return v0_ + static_cast<CellId>(((t % nt_ + nt_) % nt_) * nx_ + ((x % nx_ + nx_) % nx_));
}
CellId Lattice::tedge(int t, int x) const {
  return te0_ + static_cast<CellId>(((t % nt_ + nt_) % nt_) * nx_ + ((x % nx_ + nx_) % nx_));
}
CellId Lattice::xedge(int t, int x) const {
  return xe0_ + static_cast<CellId>(((t % nt_ + nt_) % nt_) * nx_ + ((x % nx_ + nx_) % nx_));
}
CellId Lattice::plaq(int t, int x) const {
  return pl0_ + static_cast<CellId>(((t % nt_ + nt_) % nt_) * nx_ + ((x % nx_ + nx_) % nx_));
}

std::size_t Lattice::count(CellType) const { return static_cast<std::size_t>(nt_ * nx_); }

std::vector<CellId> Lattice::cells_of(CellType ty) const {
  std::vector<CellId> out;
  for (CellId id = 0; id < cells_.size(); ++id)
    if (cells_[id].type == ty) out.push_back(id);
  return out;
}

int Lattice::time2(CellId id) const {
  const Cell& c = cells_[id];
  switch (c.type) {
    case CellType::Vertex:
    case CellType::XEdge:
      return 2 * c.t;
    default:
      return 2 * c.t + 1;
  }
}

Rat Lattice::metric_sign(CellId id) const {
  switch (cells_[id].type) {
    case CellType::Vertex:
      return 1;
    case CellType::TEdge:
      return 1;
    case CellType::XEdge:
      return -1;
    case CellType::Plaq:
      return -1;
  }
  return 1;
}

void Lattice::build_d() {
  // d0: (du)_tedge(t,x) = (u(t+1,x)-u(t,x))/dt ; similarly in x
  for (int t = 0; t < nt_; ++t) {
    for (int x = 0; x < nx_; ++x) {
      d0_.add(tedge(t, x), vertex(t + 1, x), Rat(1) / dt_);
      d0_.add(tedge(t, x), vertex(t, x), Rat(-1) / dt_);
      d0_.add(xedge(t, x), vertex(t, x + 1), Rat(1) / dx_);
      d0_.add(xedge(t, x), vertex(t, x), Rat(-1) / dx_);
      // d1: (du)_plaq = d_t u_x - d_x u_t
      d1_.add(plaq(t, x), xedge(t + 1, x), Rat(1) / dt_);
      d1_.add(plaq(t, x), xedge(t, x), Rat(-1) / dt_);
      d1_.add(plaq(t, x), tedge(t, x + 1), Rat(-1) / dx_);
      d1_.add(plaq(t, x), tedge(t, x), Rat(1) / dx_);
    }
  }
  // codifferentials: delta = G_{p-1}^{-1} d^T G_p (measure factors cancel)
  for (const auto& [rc, v] : d0_.entries()) {
    Rat w = metric_sign(rc.first) * v / metric_sign(rc.second);
    cod1_.add(rc.second, rc.first, w);
  }
  for (const auto& [rc, v] : d1_.entries()) {
    Rat w = metric_sign(rc.first) * v / metric_sign(rc.second);
    cod2_.add(rc.second, rc.first, w);
  }
}

const SparseMat& Lattice::d(int p) const {
  if (p == 0) return d0_;
  if (p == 1) return d1_;
  fail(Err::ConfigInvalid, "no coboundary from degree " + std::to_string(p));
}

const SparseMat& Lattice::codiff(int p) const {
  if (p == 1) return cod1_;
  if (p == 2) return cod2_;
  fail(Err::ConfigInvalid, "no codifferential from degree " + std::to_string(p));
}

Rat Lattice::pairing(int p, const std::vector<Rat>& u, const std::vector<Rat>& v) const {
  Rat acc = 0;
  for (CellId id = 0; id < cells_.size(); ++id) {
    if (degree(cells_[id].type) != p) continue;
    std::size_t i = id;
    if (i < u.size() && i < v.size() && u[i] != 0 && v[i] != 0)
      acc += metric_sign(id) * measure() * u[i] * v[i];
  }
  return acc;
}

std::vector<CellId> Lattice::p_cells(int p) const {
  std::vector<CellId> out;
  for (CellId id = 0; id < cells_.size(); ++id)
    if (degree(cells_[id].type) == p) out.push_back(id);
  return out;
}

}  // namespace latbv
