#include "gksplit/bracket.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>
#include <utility>

namespace gksplit {

std::string to_string(BoundaryRule::Kind kind) {
  switch (kind) {
    case BoundaryRule::Kind::Periodic: return "periodic";
    case BoundaryRule::Kind::DirichletZero: return "dirichlet";
    case BoundaryRule::Kind::Extrapolation: return "extrapolation";
  }
  return "unknown";
}

BoundaryRule::Kind parse_boundary_kind(const std::string& name) {
  if (name == "periodic") return BoundaryRule::Kind::Periodic;
  if (name == "dirichlet") return BoundaryRule::Kind::DirichletZero;
  if (name == "extrapolation") return BoundaryRule::Kind::Extrapolation;
  throw std::invalid_argument("unknown boundary kind '" + name + "'");
}

namespace {

std::ptrdiff_t wrap(std::ptrdiff_t i, std::ptrdiff_t n) {
  const std::ptrdiff_t m = i % n;
  return m < 0 ? m + n : m;
}

// Where a (possibly exterior) node index lands after applying the closures.
struct Resolved {
  enum Kind { Interior, Zero, Exterior } kind;
  std::ptrdiff_t i, j;
  const BoundaryRule* supplier_rule;
};

Resolved resolve(std::ptrdiff_t i, std::ptrdiff_t j, const Grid2D& g, const FieldBoundary& rules) {
  const auto ni = static_cast<std::ptrdiff_t>(g.first.size());
  const auto nj = static_cast<std::ptrdiff_t>(g.second.size());
  if (rules.first.kind == BoundaryRule::Kind::Periodic) i = wrap(i, ni);
  if (rules.second.kind == BoundaryRule::Kind::Periodic) j = wrap(j, nj);
  const bool out_i = i < 0 || i >= ni;
  const bool out_j = j < 0 || j >= nj;
  if ((out_i && rules.first.kind == BoundaryRule::Kind::DirichletZero) ||
      (out_j && rules.second.kind == BoundaryRule::Kind::DirichletZero))
    return {Resolved::Zero, i, j, nullptr};
  if (!out_i && !out_j) return {Resolved::Interior, i, j, nullptr};
  return {Resolved::Exterior, i, j, out_i ? &rules.first : &rules.second};
}

// Stencil offsets: the first eight form the nine-point neighbourhood, the
// last four extend it to thirteen points.
constexpr std::array<std::pair<int, int>, 12> kOffsets{{{1, 0},
                                                         {-1, 0},
                                                         {0, 1},
                                                         {0, -1},
                                                         {1, 1},
                                                         {1, -1},
                                                         {-1, 1},
                                                         {-1, -1},
                                                         {2, 0},
                                                         {-2, 0},
                                                         {0, 2},
                                                         {0, -2}}};

// Coefficients c_k such that J_h(phi, f)(i, j) = sum_k c_k f(i + di_k, j + dj_k),
// in kOffsets order.
void bracket_coefficients(const HaloField& a, std::ptrdiff_t i, std::ptrdiff_t j, double dx,
                          double dy, StencilOrder order, std::array<double, 12>& c) {
  auto A = [&](int p, int q) { return a.at(i + p, j + q); };
  const double p1 = 1.0 / (12.0 * dx * dy);
  std::array<double, 12> j1{};
  j1[0] = -(A(0, 1) - A(0, -1)) + (A(1, -1) - A(1, 1));
  j1[1] = (A(0, 1) - A(0, -1)) + (A(-1, 1) - A(-1, -1));
  j1[2] = (A(1, 0) - A(-1, 0)) + (A(1, 1) - A(-1, 1));
  j1[3] = -(A(1, 0) - A(-1, 0)) + (A(-1, -1) - A(1, -1));
  j1[4] = A(1, 0) - A(0, 1);
  j1[5] = A(0, -1) - A(1, 0);
  j1[6] = A(0, 1) - A(-1, 0);
  j1[7] = A(-1, 0) - A(0, -1);
  if (order == StencilOrder::Order2) {
    for (std::size_t k = 0; k < 12; ++k) c[k] = p1 * j1[k];
    return;
  }
  const double p2 = 1.0 / (24.0 * dx * dy);
  std::array<double, 12> j2{};
  j2[4] = -(A(-1, 1) - A(1, -1)) + (A(2, 0) - A(0, 2));
  j2[5] = -(A(1, 1) - A(-1, -1)) + (A(0, -2) - A(2, 0));
  j2[6] = (A(1, 1) - A(-1, -1)) + (A(0, 2) - A(-2, 0));
  j2[7] = (A(-1, 1) - A(1, -1)) + (A(-2, 0) - A(0, -2));
  j2[8] = A(1, -1) - A(1, 1);
  j2[9] = A(-1, 1) - A(-1, -1);
  j2[10] = A(1, 1) - A(-1, 1);
  j2[11] = A(-1, -1) - A(1, -1);
  for (std::size_t k = 0; k < 12; ++k) c[k] = 2.0 * p1 * j1[k] - p2 * j2[k];
}

double metric_factor(const Grid2D& g, std::size_t i) {
  return g.metric == Metric::Polar ? 1.0 / g.first.node(static_cast<std::ptrdiff_t>(i)) : 1.0;
}

}  // namespace

HaloField::HaloField(const Field2D& interior, const FieldBoundary& rules)
    : grid_(interior.grid()), rows_(interior.rows()), cols_(interior.cols()) {
  padded_cols_ = static_cast<std::ptrdiff_t>(cols_) + 2 * width;
  const auto ni = static_cast<std::ptrdiff_t>(rows_);
  const auto nj = static_cast<std::ptrdiff_t>(cols_);
  values_.assign(static_cast<std::size_t>((ni + 2 * width) * padded_cols_), 0.0);
  for (std::ptrdiff_t i = -width; i < ni + width; ++i) {
    for (std::ptrdiff_t j = -width; j < nj + width; ++j) {
      const Resolved r = resolve(i, j, grid_, rules);
      double v = 0.0;
      if (r.kind == Resolved::Interior) {
        v = interior(static_cast<std::size_t>(r.i), static_cast<std::size_t>(r.j));
      } else if (r.kind == Resolved::Exterior) {
        if (!r.supplier_rule->supplier)
          throw std::invalid_argument("HaloField: extrapolation rule without supplier");
        v = r.supplier_rule->supplier(grid_.first.node(r.i), grid_.second.node(r.j));
      }
      values_[static_cast<std::size_t>((i + width) * padded_cols_ + (j + width))] = v;
    }
  }
}

double eval_j1(const HaloField& f, const HaloField& g, std::ptrdiff_t i, std::ptrdiff_t j,
               double dx, double dy) {
  auto F = [&](int p, int q) { return f.at(i + p, j + q); };
  auto G = [&](int p, int q) { return g.at(i + p, j + q); };
  const double pp = (F(1, 0) - F(-1, 0)) * (G(0, 1) - G(0, -1)) -
                    (F(0, 1) - F(0, -1)) * (G(1, 0) - G(-1, 0));
  const double px = F(1, 0) * (G(1, 1) - G(1, -1)) - F(-1, 0) * (G(-1, 1) - G(-1, -1)) -
                    F(0, 1) * (G(1, 1) - G(-1, 1)) + F(0, -1) * (G(1, -1) - G(-1, -1));
  const double xp = F(1, 1) * (G(0, 1) - G(1, 0)) - F(-1, -1) * (G(-1, 0) - G(0, -1)) -
                    F(-1, 1) * (G(0, 1) - G(-1, 0)) + F(1, -1) * (G(1, 0) - G(0, -1));
  return (pp + px + xp) / (12.0 * dx * dy);
}

double eval_j2(const HaloField& f, const HaloField& g, std::ptrdiff_t i, std::ptrdiff_t j,
               double dx, double dy) {
  auto F = [&](int p, int q) { return f.at(i + p, j + q); };
  auto G = [&](int p, int q) { return g.at(i + p, j + q); };
  const double xx = (F(1, 1) - F(-1, -1)) * (G(-1, 1) - G(1, -1)) -
                    (F(-1, 1) - F(1, -1)) * (G(1, 1) - G(-1, -1));
  const double xp = F(1, 1) * (G(0, 2) - G(2, 0)) - F(-1, -1) * (G(-2, 0) - G(0, -2)) -
                    F(-1, 1) * (G(0, 2) - G(-2, 0)) + F(1, -1) * (G(2, 0) - G(0, -2));
  const double px = F(2, 0) * (G(1, 1) - G(1, -1)) - F(-2, 0) * (G(-1, 1) - G(-1, -1)) -
                    F(0, 2) * (G(1, 1) - G(-1, 1)) + F(0, -2) * (G(1, -1) - G(-1, -1));
  return (xx + xp + px) / (24.0 * dx * dy);
}

double eval_jh(const HaloField& f, const HaloField& g, std::ptrdiff_t i, std::ptrdiff_t j,
               double dx, double dy, StencilOrder order) {
  const double j1 = eval_j1(f, g, i, j, dx, dy);
  if (order == StencilOrder::Order2) return j1;
  return 2.0 * j1 - eval_j2(f, g, i, j, dx, dy);
}

BracketOperator::BracketOperator(const Field2D& phi, StencilOrder order, BracketBoundary boundary)
    : grid_(phi.grid()),
      order_(order),
      boundary_(std::move(boundary)),
      stencil_width_(order == StencilOrder::Order2 ? 8 : 12) {
  build_pattern();
  const bool first_sup = boundary_.f.first.kind == BoundaryRule::Kind::Extrapolation &&
                         static_cast<bool>(boundary_.f.first.supplier);
  const bool second_sup = boundary_.f.second.kind == BoundaryRule::Kind::Extrapolation &&
                          static_cast<bool>(boundary_.f.second.supplier);
  halo_values_.assign(halo_nodes_.size(), 0.0);
  for (std::size_t h = 0; h < halo_nodes_.size(); ++h) {
    const Resolved r = resolve(halo_nodes_[h].i, halo_nodes_[h].j, grid_, boundary_.f);
    if ((r.supplier_rule == &boundary_.f.first && first_sup) ||
        (r.supplier_rule == &boundary_.f.second && second_sup))
      halo_values_[h] = r.supplier_rule->supplier(grid_.first.node(r.i), grid_.second.node(r.j));
  }
  update(phi);
}

void BracketOperator::build_pattern() {
  const std::size_t ni = grid_.first.size(), nj = grid_.second.size();
  const std::size_t n = ni * nj;
  std::map<std::pair<std::ptrdiff_t, std::ptrdiff_t>, std::size_t> halo_index;
  std::vector<std::size_t> in_ptr{0}, in_col, h_ptr{0}, h_col;
  slots_.assign(n * stencil_width_, -1);

  for (std::size_t i = 0; i < ni; ++i) {
    for (std::size_t j = 0; j < nj; ++j) {
      const std::size_t row = i * nj + j;
      std::vector<std::size_t> cols, hcols;
      std::vector<std::ptrdiff_t> tag(stencil_width_, -1);
      for (std::size_t k = 0; k < stencil_width_; ++k) {
        const auto [di, dj] = kOffsets[k];
        const Resolved r = resolve(static_cast<std::ptrdiff_t>(i) + di,
                                   static_cast<std::ptrdiff_t>(j) + dj, grid_, boundary_.f);
        if (r.kind == Resolved::Interior) {
          cols.push_back(static_cast<std::size_t>(r.i) * nj + static_cast<std::size_t>(r.j));
        } else if (r.kind == Resolved::Exterior) {
          auto [it, inserted] = halo_index.emplace(std::make_pair(r.i, r.j), halo_nodes_.size());
          if (inserted) halo_nodes_.push_back({r.i, r.j});
          hcols.push_back(it->second);
        }
      }
      std::sort(cols.begin(), cols.end());
      cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
      std::sort(hcols.begin(), hcols.end());
      hcols.erase(std::unique(hcols.begin(), hcols.end()), hcols.end());

      for (std::size_t k = 0; k < stencil_width_; ++k) {
        const auto [di, dj] = kOffsets[k];
        const Resolved r = resolve(static_cast<std::ptrdiff_t>(i) + di,
                                   static_cast<std::ptrdiff_t>(j) + dj, grid_, boundary_.f);
        std::int64_t slot = -1;
        if (r.kind == Resolved::Interior) {
          const std::size_t c = static_cast<std::size_t>(r.i) * nj + static_cast<std::size_t>(r.j);
          slot = static_cast<std::int64_t>(in_col.size() +
                                           (std::lower_bound(cols.begin(), cols.end(), c) -
                                            cols.begin()));
        } else if (r.kind == Resolved::Exterior) {
          const std::size_t c = halo_index.at({r.i, r.j});
          slot = -2 - static_cast<std::int64_t>(h_col.size() +
                                                (std::lower_bound(hcols.begin(), hcols.end(), c) -
                                                 hcols.begin()));
        }
        slots_[row * stencil_width_ + k] = slot;
      }
      in_col.insert(in_col.end(), cols.begin(), cols.end());
      in_ptr.push_back(in_col.size());
      h_col.insert(h_col.end(), hcols.begin(), hcols.end());
      h_ptr.push_back(h_col.size());
    }
  }
  interior_ = CsrMatrix(n, n, std::move(in_ptr), std::move(in_col));
  halo_ = CsrMatrix(n, halo_nodes_.size(), std::move(h_ptr), std::move(h_col));
}

void BracketOperator::update(const Field2D& phi) {
  if (!(phi.grid() == grid_)) throw std::invalid_argument("BracketOperator::update: grid mismatch");
  if (!phi.all_finite()) throw std::invalid_argument("BracketOperator: non-finite potential");
  const HaloField a(phi, boundary_.phi);
  const std::size_t ni = grid_.first.size(), nj = grid_.second.size();
  const double dx = grid_.first.spacing(), dy = grid_.second.spacing();
  auto vin = interior_.values();
  auto vh = halo_.values();
  std::fill(vin.begin(), vin.end(), 0.0);
  std::fill(vh.begin(), vh.end(), 0.0);

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(ni); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    const double scale = metric_factor(grid_, i);
    std::array<double, 12> c{};
    for (std::size_t j = 0; j < nj; ++j) {
      bracket_coefficients(a, ii, static_cast<std::ptrdiff_t>(j), dx, dy, order_, c);
      const std::size_t row = i * nj + j;
      for (std::size_t k = 0; k < stencil_width_; ++k) {
        const std::int64_t s = slots_[row * stencil_width_ + k];
        if (s >= 0)
          vin[static_cast<std::size_t>(s)] += scale * c[k];
        else if (s <= -2)
          vh[static_cast<std::size_t>(-2 - s)] += scale * c[k];
      }
    }
  }
  recompute_offset();
}

void BracketOperator::recompute_offset() {
  offset_.assign(size(), 0.0);
  if (has_offset()) halo_.multiply(halo_values_, offset_);
}

void BracketOperator::apply(std::span<const double> f, std::span<double> out) const {
  interior_.multiply(f, out);
  if (has_offset())
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += offset_[k];
}

void BracketOperator::apply_linear(std::span<const double> f, std::span<double> out) const {
  interior_.multiply(f, out);
}

std::vector<double> BracketOperator::halo_values(const BoundaryRule::Supplier& supplier) const {
  std::vector<double> v(halo_nodes_.size());
  for (std::size_t h = 0; h < v.size(); ++h)
    v[h] = supplier(grid_.first.node(halo_nodes_[h].i), grid_.second.node(halo_nodes_[h].j));
  return v;
}

void BracketOperator::compute_offset(std::span<const double> halo_values,
                                     std::span<double> out) const {
  if (has_offset())
    halo_.multiply(halo_values, out);
  else
    std::fill(out.begin(), out.end(), 0.0);
}

void BracketOperator::set_halo_values(std::span<const double> halo_values) {
  if (halo_values.size() != halo_nodes_.size())
    throw std::invalid_argument("set_halo_values: size mismatch");
  halo_values_.assign(halo_values.begin(), halo_values.end());
  recompute_offset();
}

void BracketOperator::write_dump(std::ostream& os) const {
  interior_.write_triplets(os);
  os << "offset\n";
  const auto old = os.precision(17);
  for (std::size_t k = 0; k < offset_.size(); ++k)
    if (offset_[k] != 0.0) os << k << ',' << offset_[k] << '\n';
  os.precision(old);
}

Indicators algebraic_indicators(const BracketOperator& op, const Field2D& phi, const Field2D& f,
                                std::span<const double> weights) {
  const std::size_t n = op.size();
  if (phi.size() != n || f.size() != n || weights.size() != n)
    throw std::invalid_argument("algebraic_indicators: shape mismatch");
  std::vector<double> jf(n), t(n);
  op.apply(f.values(), jf);
  Indicators out;
  for (std::size_t k = 0; k < n; ++k) t[k] = weights[k] * jf[k];
  out.raw.mass = compensated_sum(t);
  for (std::size_t k = 0; k < n; ++k) t[k] = weights[k] * f.values()[k] * jf[k];
  out.raw.l2 = compensated_sum(t);
  for (std::size_t k = 0; k < n; ++k) t[k] = weights[k] * phi.values()[k] * jf[k];
  out.raw.energy = compensated_sum(t);

  double sp = 0.0, sf = 0.0, sw = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sp += phi.values()[k] * phi.values()[k];
    sf += f.values()[k] * f.values()[k];
    sw += weights[k];
  }
  const double scale = std::sqrt(sp) * std::sqrt(sf) * sw;
  if (scale > 0.0)
    out.normalized = {out.raw.mass / scale, out.raw.l2 / scale, out.raw.energy / scale};
  return out;
}

}  // namespace gksplit
