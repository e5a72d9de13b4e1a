#include "gramspec/polytope.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace gramspec {

namespace {

long long floor_div(long long a, long long b) {
  long long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

long long ceil_div(long long a, long long b) { return -floor_div(-a, b); }

// Calls fn(idx) for every k-subset of {0..n-1} in lexicographic order.
template <typename Fn>
void for_each_subset(int n, int k, Fn&& fn) {
  if (k > n) return;
  std::vector<int> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  for (;;) {
    fn(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

// Enumerates integer points of the box [lo, hi] in odometer order.
template <typename Fn>
void for_each_box_point(const Exponent& lo, const Exponent& hi, Fn&& fn) {
  const std::size_t n = lo.size();
  for (std::size_t i = 0; i < n; ++i)
    if (lo[i] > hi[i]) return;
  Exponent q = lo;
  for (;;) {
    fn(q);
    std::size_t i = 0;
    while (i < n) {
      if (q[i] < hi[i]) {
        ++q[i];
        break;
      }
      q[i] = lo[i];
      ++i;
    }
    if (i == n) return;
  }
}

void sort_grlex(std::vector<Exponent>& v) {
  std::sort(v.begin(), v.end(), GrlexGreater());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

IntVector Hull::project(const Exponent& q) const {
  IntVector y(dim);
  for (int i = 0; i < dim; ++i) y(i) = q[proj_coords[i]];
  return y;
}

bool Hull::contains(const Exponent& q) const {
  if (q.size() != base.size()) throw Error(ErrorKind::kNvarsMismatch, "point dimension mismatch");
  for (Eigen::Index r = 0; r < equalities.rows(); ++r) {
    long long s = 0;
    for (std::size_t j = 0; j < q.size(); ++j) s += equalities(r, j) * (q[j] - base[j]);
    if (s != 0) return false;
  }
  const IntVector y = project(q);
  for (const Facet& f : facets)
    if (f.normal.dot(y) > f.offset) return false;
  return true;
}

Hull compute_hull(const std::vector<Exponent>& points) {
  if (points.empty()) throw Error(ErrorKind::kInvalidArgument, "hull of an empty point set");
  const std::size_t n = points.front().size();
  for (const auto& p : points)
    if (p.size() != n) throw Error(ErrorKind::kNvarsMismatch, "points of different dimension");

  Hull h;
  h.base = points.front();

  MatrixQ diff(static_cast<Eigen::Index>(points.size()), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = 0; j < n; ++j) diff(i, j) = points[i][j] - h.base[j];
  rref(diff, &h.proj_coords);
  h.dim = static_cast<int>(h.proj_coords.size());

  const auto eqs = nullspace(diff);
  h.equalities.resize(static_cast<Eigen::Index>(eqs.size()), static_cast<Eigen::Index>(n));
  for (std::size_t r = 0; r < eqs.size(); ++r) h.equalities.row(r) = primitive_integer(eqs[r]).transpose();

  // Unique points, remembering the first input index of each.
  std::vector<int> uniq;
  {
    std::set<Exponent> seen;
    for (std::size_t i = 0; i < points.size(); ++i)
      if (seen.insert(points[i]).second) uniq.push_back(static_cast<int>(i));
  }
  std::vector<IntVector> proj(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) proj[i] = h.project(points[i]);

  const int k = h.dim;
  if (k == 0) {
    h.vertex_indices = {uniq.front()};
    return h;
  }

  std::set<std::pair<std::vector<long long>, long long>> seen_facets;
  for_each_subset(static_cast<int>(uniq.size()), k, [&](const std::vector<int>& sub) {
    const IntVector& p0 = proj[uniq[sub[0]]];
    IntMatrix d(k - 1, k);
    for (int r = 1; r < k; ++r) d.row(r - 1) = (proj[uniq[sub[r]]] - p0).transpose();
    VectorQ normal(k);
    bool nonzero = false;
    for (int i = 0; i < k; ++i) {
      IntMatrix minor(k - 1, k - 1);
      for (int c = 0, cc = 0; c < k; ++c) {
        if (c == i) continue;
        minor.col(cc++) = d.col(c);
      }
      const long long det = determinant(minor);
      normal(i) = (i % 2 == 0) ? det : -det;
      if (det != 0) nonzero = true;
    }
    if (!nonzero) return;
    IntVector a = primitive_integer(normal);
    long long b = a.dot(p0);
    bool below = true, above = true;
    for (int u : uniq) {
      const long long s = a.dot(proj[u]) - b;
      if (s > 0) below = false;
      if (s < 0) above = false;
    }
    if (!below && !above) return;
    if (!below) {
      a = -a;
      b = -b;
    }
    std::vector<long long> key(a.data(), a.data() + a.size());
    if (!seen_facets.insert({key, b}).second) return;
    Facet f{a, b, {}};
    for (std::size_t i = 0; i < points.size(); ++i)
      if (a.dot(proj[i]) == b) f.on.push_back(static_cast<int>(i));
    h.facets.push_back(std::move(f));
  });

  for (int u : uniq) {
    MatrixQ active(0, k);
    for (const Facet& f : h.facets) {
      if (std::find(f.on.begin(), f.on.end(), u) == f.on.end()) continue;
      active.conservativeResize(active.rows() + 1, Eigen::NoChange);
      for (int i = 0; i < k; ++i) active(active.rows() - 1, i) = f.normal(i);
    }
    if (rank(active) == k) h.vertex_indices.push_back(u);
  }
  return h;
}

LatticePolytope LatticePolytope::from_points(const std::vector<Exponent>& points) {
  const Hull all = compute_hull(points);
  LatticePolytope p;
  for (int i : all.vertex_indices) p.vertices_.push_back(points[i]);
  sort_grlex(p.vertices_);
  p.hull_ = std::make_shared<const Hull>(compute_hull(p.vertices_));

  const std::size_t n = p.vertices_.front().size();
  Exponent lo = p.vertices_.front(), hi = lo;
  for (const auto& v : p.vertices_)
    for (std::size_t i = 0; i < n; ++i) {
      lo[i] = std::min(lo[i], v[i]);
      hi[i] = std::max(hi[i], v[i]);
    }
  for_each_box_point(lo, hi, [&](const Exponent& q) {
    if (p.hull_->contains(q)) p.lattice_points_.push_back(q);
  });
  sort_grlex(p.lattice_points_);
  return p;
}

LatticePolytope LatticePolytope::dilate(int k) const {
  if (k <= 0) throw Error(ErrorKind::kInvalidArgument, "dilation factor must be positive");
  std::vector<Exponent> v = vertices_;
  for (auto& e : v)
    for (int& x : e) x *= k;
  return from_points(v);
}

LatticePolytope half_polytope(const LatticePolytope& q) {
  const std::size_t n = static_cast<std::size_t>(q.ambient_dim());
  Exponent lo(n), hi(n);
  for (std::size_t i = 0; i < n; ++i) {
    int mn = q.vertices().front()[i], mx = mn;
    for (const auto& v : q.vertices()) {
      mn = std::min(mn, v[i]);
      mx = std::max(mx, v[i]);
    }
    lo[i] = static_cast<int>(floor_div(mn, 2));
    hi[i] = static_cast<int>(ceil_div(mx, 2));
  }
  std::vector<Exponent> pts;
  for_each_box_point(lo, hi, [&](const Exponent& x) {
    Exponent twice = x;
    for (int& c : twice) c *= 2;
    if (q.contains(twice)) pts.push_back(x);
  });
  if (pts.empty())
    throw Error(ErrorKind::kInvalidArgument, "Q/2 contains no lattice point");
  return LatticePolytope::from_points(pts);
}

TwoNormalResult is_two_normal(const LatticePolytope& p) {
  std::set<Exponent> sums;
  const auto& pts = p.lattice_points();
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i; j < pts.size(); ++j) sums.insert(pts[i] + pts[j]);
  const LatticePolytope doubled = p.dilate(2);
  for (const auto& b : doubled.lattice_points())
    if (!sums.count(b)) return {false, b};
  return {true, std::nullopt};
}

namespace {

// Pulling triangulation of conv(points[idx]); returns simplices as index lists.
std::vector<std::vector<int>> triangulate(const std::vector<Exponent>& points,
                                          const std::vector<int>& idx, int apex_pos) {
  std::vector<Exponent> sub;
  for (int i : idx) sub.push_back(points[i]);
  const Hull h = compute_hull(sub);
  if (h.dim == 0) return {{idx[h.vertex_indices.front()]}};
  const int apex_local =
      h.vertex_indices[static_cast<std::size_t>(apex_pos) % h.vertex_indices.size()];
  std::vector<std::vector<int>> out;
  for (const Facet& f : h.facets) {
    if (std::find(f.on.begin(), f.on.end(), apex_local) != f.on.end()) continue;
    std::vector<int> face;
    for (int local : f.on)
      if (std::find(h.vertex_indices.begin(), h.vertex_indices.end(), local) != h.vertex_indices.end())
        face.push_back(idx[local]);
    for (auto s : triangulate(points, face, 0)) {
      s.push_back(idx[apex_local]);
      out.push_back(std::move(s));
    }
  }
  return out;
}

}  // namespace

long long normalized_volume(const LatticePolytope& p, int apex) {
  const auto& v = p.vertices();
  const int k = p.dim();
  if (k == 0) return 1;
  const std::size_t n = v.front().size();
  IntMatrix diff(static_cast<Eigen::Index>(v.size()), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < n; ++j) diff(i, j) = v[i][j] - v[0][j];
  const LatticeDiagonalization lat = diagonalize(diff);
  // Lattice coordinates of every vertex in a basis of the saturated span.
  std::vector<IntVector> y(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const IntVector w = diff.row(i) * lat.column_transform;
    y[i] = w.head(k);
  }
  std::vector<int> all(v.size());
  std::iota(all.begin(), all.end(), 0);
  long long total = 0;
  for (const auto& s : triangulate(v, all, apex)) {
    IntMatrix m(k, k);
    for (int r = 0; r < k; ++r) m.col(r) = y[s[r]] - y[s[k]];
    total += std::llabs(determinant(m));
  }
  return total;
}

const char* to_string(ToricClass c) {
  switch (c) {
    case ToricClass::kMinimalDegree: return "minimal-degree";
    case ToricClass::kAlmostMinimalDegree: return "almost-minimal-degree";
    case ToricClass::kOther: return "other";
    case ToricClass::kDegenerate: return "degenerate";
  }
  return "unknown";
}

ToricProfile toric_profile(const LatticePolytope& p) {
  ToricProfile t;
  const auto& pts = p.lattice_points();
  t.lattice_points = static_cast<int>(pts.size());
  t.dim = p.dim();
  t.codim = t.lattice_points - 1 - t.dim;
  t.degree = normalized_volume(p);
  t.epsilon = t.degree - t.codim - 1;

  const std::size_t n = pts.front().size();
  IntMatrix diff(static_cast<Eigen::Index>(pts.size()), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = 0; j < n; ++j) diff(i, j) = pts[i][j] - pts[0][j];
  t.spanning = diagonalize(diff).saturated();
  t.two_normal = is_two_normal(p).two_normal;

  if (!t.spanning) {
    t.classification = ToricClass::kDegenerate;
    return t;
  }
  if (t.epsilon == 0) {
    t.classification = ToricClass::kMinimalDegree;
    if (t.two_normal) t.predicted_generic_length = t.dim + 1;
  } else if (t.epsilon == 1) {
    t.classification = ToricClass::kAlmostMinimalDegree;
    if (t.two_normal) t.predicted_generic_length = t.dim + 2;
  } else {
    t.classification = ToricClass::kOther;
  }
  return t;
}

namespace {
long long binom2(long long k) { return k * (k - 1) / 2; }  // C(k, 2)
}  // namespace

PatakiInterval pataki_interval(int n, int m) {
  if (n <= 0 || m < 0 || m > n * (n + 1) / 2)
    throw Error(ErrorKind::kInvalidArgument, "need N > 0 and 0 <= m <= N(N+1)/2");
  PatakiInterval out{-1, -1, n, m, "m = dimension of the affine section of Sym_N"};
  for (int r = 0; r <= n; ++r) {
    const bool upper = binom2(r + 1) + m <= binom2(n + 1);
    const bool lower = m >= binom2(n - r + 1);
    if (upper && lower) {
      if (out.r_min < 0) out.r_min = r;
      out.r_max = r;
    }
  }
  if (out.r_min < 0) throw Error(ErrorKind::kInvalidArgument, "empty Pataki interval");
  return out;
}

PatakiInterval hermitian_pataki_interval(int n, int c) {
  if (n <= 0 || c < 0 || c > n * n)
    throw Error(ErrorKind::kInvalidArgument, "need N > 0 and 0 <= c <= N^2");
  PatakiInterval out{-1, -1, n, c, "c = real codimension of the affine section of Herm_N"};
  for (int r = 0; r <= n; ++r) {
    if ((n - r) * (n - r) + c <= n * n && r * r <= c) {
      if (out.r_min < 0) out.r_min = r;
      out.r_max = r;
    }
  }
  if (out.r_min < 0) throw Error(ErrorKind::kInvalidArgument, "empty Hermitian Pataki interval");
  return out;
}

LatticePolytope scaled_simplex(int nvars, int d) {
  std::vector<Exponent> v;
  for (int i = 0; i < nvars; ++i) {
    Exponent e(nvars, 0);
    e[i] = d;
    v.push_back(e);
  }
  return LatticePolytope::from_points(v);
}

LatticePolytope cayley_polytope(const std::vector<int>& d) {
  const int m = static_cast<int>(d.size());
  std::vector<Exponent> v;
  for (int i = 0; i < m; ++i) {
    Exponent lo(m + 1, 0);
    lo[1 + i] = 1;
    Exponent hi = lo;
    hi[0] = d[i];
    v.push_back(lo);
    v.push_back(hi);
  }
  return LatticePolytope::from_points(v);
}

LatticePolytope product_of_simplices(int r, int s) {
  std::vector<Exponent> v;
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < s; ++j) {
      Exponent e(r + s, 0);
      e[i] = 1;
      e[r + j] = 1;
      v.push_back(e);
    }
  return LatticePolytope::from_points(v);
}

}  // namespace gramspec
