#include "gramspec/kummer.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <unordered_map>
#include <random>
#include <thread>

#include <Eigen/Eigenvalues>

#include "gramspec/sdp.hpp"

namespace gramspec {

SexticCoeffs sextic_coeffs(const BinaryForm& f) {
  if (f.degree() != 6) throw Error(ErrorKind::kInvalidArgument, "expected a binary sextic");
  std::array<double, 7> c{};
  for (int k = 0; k <= 6; ++k) c[k] = f.coeffs()[k];
  return SexticCoeffs::from_binomial_coeffs(c);
}

BinaryForm to_binary_form(const SexticCoeffs& a) {
  const auto c = a.binomial_coeffs();
  return BinaryForm(std::vector<double>(c.begin(), c.end()));
}

namespace {

PolynomialD partial(const PolynomialD& p, int var) {
  PolynomialD d(p.nvars());
  for (const auto& [e, c] : p.terms()) {
    if (e[var] == 0) continue;
    Exponent e2 = e;
    --e2[var];
    d.add_term(e2, c * e[var]);
  }
  return d;
}

KummerCandidate make_candidate(const SexticCoeffs& a, const Eigen::Vector3d& c, const Eigen::Vector3d& xyz,
                               double psd_tol) {
  KummerCandidate k;
  k.xyz = xyz;
  k.value = c.dot(xyz);
  k.matrix = gram_parametrization(a, xyz(0), xyz(1), xyz(2));
  const Eigen::Vector4d ev = Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d>(k.matrix, Eigen::EigenvaluesOnly).eigenvalues();
  k.lambda_min = ev(0);
  k.psd = ev(0) >= -psd_tol * std::max(1.0, ev(3));
  k.rank = numerical_rank(k.matrix);
  return k;
}

}  // namespace

ClosedFormResult optimize_closed_form(const SexticCoeffs& a, const Eigen::Vector3d& c, double psd_tol) {
  const DualKummer<double> dk = dual_kummer(a);
  const std::vector<double> cv{c(0), c(1), c(2)};
  ClosedFormResult r;
  r.f2 = dk.f2.eval(cv);
  r.f1 = dk.f1.eval(cv);
  r.f0 = dk.f0.eval(cv);
  if (std::abs(r.f2) <= 1e-12 * c.squaredNorm())
    throw Error(ErrorKind::kDegenerateDirection, "F2(c) = 4XZ - Y^2 vanishes at the objective");
  r.discriminant = r.f1 * r.f1 - r.f0 * r.f2;
  const Complex root = std::sqrt(Complex(r.discriminant, 0.0));
  for (int k = 0; k < 2; ++k) {
    const Complex w = (-r.f1 + (k == 0 ? 1.0 : -1.0) * root) / r.f2;
    r.critical_values[k] = -w;
  }
  r.real_critical = r.discriminant > 0;

  if (r.real_critical) {
    const PolynomialD full = dk.full();
    std::array<PolynomialD, 4> grad{partial(full, 0), partial(full, 1), partial(full, 2), partial(full, 3)};
    for (int k = 0; k < 2; ++k) {
      const double w = -r.critical_values[k].real();
      const std::vector<double> pt{c(0), c(1), c(2), w};
      const double dw = grad[3].eval(pt);
      const Eigen::Vector3d xyz(grad[0].eval(pt) / dw, grad[1].eval(pt) / dw, grad[2].eval(pt) / dw);
      r.rank3.push_back(make_candidate(a, c, xyz, psd_tol));
    }
  } else {
    r.message = r.discriminant < 0 ? "complex critical pair; optimum at a rank-2 vertex"
                                   : "double critical value";
  }

  const KummerNodeSet nodes = kummer_nodes(to_binary_form(a));
  for (std::size_t i = 0; i < nodes.rank2.size(); ++i) {
    const Eigen::Vector3cd xyz = gram_coordinates(a, nodes.rank2[i]);
    r.rank2_values.push_back(c.cast<Complex>().dot(xyz));
    if (nodes.partitions[i].kind == PartitionKind::kConjugateSwapped)
      r.rank2.push_back(make_candidate(a, c, xyz.real(), psd_tol));
  }

  bool any = false;
  auto consider = [&](const KummerCandidate& k) {
    if (!k.psd) return;
    if (!any || k.value > r.maximum.value) r.maximum = k;
    if (!any || k.value < r.minimum.value) r.minimum = k;
    any = true;
  };
  for (const auto& k : r.rank3) consider(k);
  for (const auto& k : r.rank2) consider(k);
  if (!any) throw Error(ErrorKind::kNumericalFailure, "no PSD critical point found");
  return r;
}

ChartCheck chart_check(const SexticCoeffs& a, int points, std::uint64_t seed, double tol) {
  const PolynomialD full = dual_kummer(a).full();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> fv, dv;
  for (int i = 0; i < points; ++i) {
    const double X = u(rng), Y = u(rng), Z = u(rng);
    const double W = 1 - X + Y / 5 + Z;
    fv.push_back(full.eval(std::vector<double>{X, Y, Z, W}));
    dv.push_back(gram_parametrization(a, X + Y + Z + 1, X + Y - Z - 0.2, X - Y - 3 * Z - 1).determinant());
  }
  double fd = 0, dd = 0, fmax = 0, dmax = 0;
  for (int i = 0; i < points; ++i) {
    fd += fv[i] * dv[i];
    dd += dv[i] * dv[i];
    fmax = std::max(fmax, std::abs(fv[i]));
    dmax = std::max(dmax, std::abs(dv[i]));
  }
  if (dmax == 0.0 || fmax == 0.0) throw Error(ErrorKind::kNumericalFailure, "chart restriction vanishes identically");
  ChartCheck out;
  out.points = points;
  out.ratio = fd / dd;
  for (int i = 0; i < points; ++i) out.residual = std::max(out.residual, std::abs(fv[i] - out.ratio * dv[i]));
  out.residual /= fmax;
  if (out.residual > tol)
    throw Error(ErrorKind::kNumericalFailure,
                "F on the chart is not proportional to det (residual " + std::to_string(out.residual) + ")");
  return out;
}

std::string Mesh::to_obj(const std::string& name) const {
  std::string s;
  if (!name.empty()) s += "o " + name + "\n";
  char buf[96];
  for (const auto& v : vertices) {
    std::snprintf(buf, sizeof buf, "v %.10g %.10g %.10g\n", v(0), v(1), v(2));
    s += buf;
  }
  for (const auto& f : faces) {
    std::snprintf(buf, sizeof buf, "f %d %d %d\n", f[0] + 1, f[1] + 1, f[2] + 1);
    s += buf;
  }
  return s;
}

namespace {

using Field = std::function<double(const Eigen::Vector3d&)>;

// Marching tetrahedra for {g = 0}; each cube is split into six tetrahedra
// around its main diagonal and crossing points are refined on the edge.
Mesh march(const Field& g, const Eigen::Vector3d& lo, const Eigen::Vector3d& hi, int res, int threads) {
  const int n = res + 1;
  const Eigen::Vector3d h = (hi - lo) / res;
  auto pos = [&](int i, int j, int k) { return Eigen::Vector3d(lo(0) + i * h(0), lo(1) + j * h(1), lo(2) + k * h(2)); };
  auto id = [&](int i, int j, int k) { return (static_cast<long long>(i) * n + j) * n + k; };

  std::vector<double> val(static_cast<std::size_t>(n) * n * n);
  {
    std::vector<std::thread> pool;
    const int nt = std::max(1, std::min(threads, n));
    for (int t = 0; t < nt; ++t)
      pool.emplace_back([&, t] {
        for (int i = t; i < n; i += nt)
          for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) val[id(i, j, k)] = g(pos(i, j, k));
      });
    for (auto& th : pool) th.join();
  }

  Mesh mesh;
  struct Edge {
    long long a, b;
    Eigen::Vector3d pa, pb;
  };
  std::vector<Edge> edges;
  std::unordered_map<long long, int> edge_vertex;
  const long long total = static_cast<long long>(n) * n * n;
  auto crossing = [&](long long ga, const Eigen::Vector3d& pa, long long gb, const Eigen::Vector3d& pb) {
    const long long key = std::min(ga, gb) * total + std::max(ga, gb);
    auto [it, fresh] = edge_vertex.emplace(key, static_cast<int>(edges.size()));
    if (fresh) edges.push_back({ga, gb, pa, pb});
    return it->second;
  };
  static constexpr int kTets[6][4] = {{0, 1, 3, 7}, {0, 3, 2, 7}, {0, 2, 6, 7}, {0, 6, 4, 7}, {0, 4, 5, 7}, {0, 5, 1, 7}};
  for (int i = 0; i < res; ++i)
    for (int j = 0; j < res; ++j)
      for (int k = 0; k < res; ++k) {
        long long gid[8];
        Eigen::Vector3d p[8];
        for (int c = 0; c < 8; ++c) {
          const int ci = i + (c & 1), cj = j + ((c >> 1) & 1), ck = k + ((c >> 2) & 1);
          gid[c] = id(ci, cj, ck);
          p[c] = pos(ci, cj, ck);
        }
        for (const auto& tet : kTets) {
          int in[4], out[4], ni = 0, no = 0;
          for (int c : tet) {
            if (val[gid[c]] > 0) in[ni++] = c;
            else out[no++] = c;
          }
          if (ni == 0 || no == 0) continue;
          auto cross = [&](int a, int b) { return crossing(gid[a], p[a], gid[b], p[b]); };
          if (ni == 1 || no == 1) {
            const int* lone = ni == 1 ? in : out;
            const int* rest = ni == 1 ? out : in;
            mesh.faces.push_back({cross(lone[0], rest[0]), cross(lone[0], rest[1]), cross(lone[0], rest[2])});
          } else {
            const int a = cross(in[0], out[0]), b = cross(in[0], out[1]);
            const int c = cross(in[1], out[1]), d = cross(in[1], out[0]);
            mesh.faces.push_back({a, b, c});
            mesh.faces.push_back({a, c, d});
          }
        }
      }
  // Illinois variant of regula falsi on each crossing edge, in parallel.
  mesh.vertices.resize(edges.size());
  auto refine = [&](const Edge& e) {
    double ta = 0, tb = 1, fa = val[e.a], fb = val[e.b];
    int side = 0;
    double t = 0.5;
    for (int iter = 0; iter < 60; ++iter) {
      t = (ta * fb - tb * fa) / (fb - fa);
      const double ft = g(e.pa + t * (e.pb - e.pa));
      if (ft == 0.0 || std::abs(ft) < 1e-13 || tb - ta < 1e-14) break;
      if ((ft > 0) == (fb > 0)) {
        tb = t;
        fb = ft;
        if (side == -1) fa /= 2;
        side = -1;
      } else {
        ta = t;
        fa = ft;
        if (side == 1) fb /= 2;
        side = 1;
      }
    }
    return Eigen::Vector3d(e.pa + t * (e.pb - e.pa));
  };
  {
    std::vector<std::thread> pool;
    const std::size_t nt = static_cast<std::size_t>(std::max(1, threads));
    for (std::size_t t = 0; t < nt; ++t)
      pool.emplace_back([&, t] {
        for (std::size_t i = t; i < edges.size(); i += nt) mesh.vertices[i] = refine(edges[i]);
      });
    for (auto& th : pool) th.join();
  }
  return mesh;
}

AffineSection sextic_section(const SexticCoeffs& a) {
  AffineSection s;
  s.offset = gram_parametrization(a, 0.0, 0.0, 0.0);
  for (int k = 0; k < 3; ++k) {
    Eigen::Vector3d e = Eigen::Vector3d::Zero();
    e(k) = 1;
    s.basis.push_back(gram_parametrization(a, e(0), e(1), e(2)) - s.offset);
  }
  return s;
}

}  // namespace

SurfaceSample sample_surface(const SexticCoeffs& a, const SurfaceOptions& opts) {
  if (opts.resolution < 2) throw Error(ErrorKind::kInvalidArgument, "resolution must be at least 2");
  const AffineSection sec = sextic_section(a);
  SurfaceSample out;
  for (int k = 0; k < 3; ++k) {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(3);
    c(k) = 1;
    const SdpSolution up = solve_linear(sec, c);
    const SdpSolution down = solve_linear(sec, -c);
    if (up.status == SdpStatus::kInfeasible || down.status == SdpStatus::kInfeasible)
      throw Error(ErrorKind::kInfeasible, "the sextic has no PSD Gram matrix");
    out.upper(k) = up.coordinates(k);
    out.lower(k) = down.coordinates(k);
  }
  const Eigen::Vector3d pad = (0.05 * (out.upper - out.lower)).cwiseMax(1e-3);
  out.lower -= pad;
  out.upper += pad;
  out.spacing = ((out.upper - out.lower) / opts.resolution).maxCoeff();

  const int threads = opts.threads > 0 ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
  const Field lambda_min = [&](const Eigen::Vector3d& p) {
    const Eigen::Matrix4d m = gram_parametrization(a, p(0), p(1), p(2));
    return Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d>(m, Eigen::EigenvaluesOnly).eigenvalues()(0);
  };
  out.primal = march(lambda_min, out.lower, out.upper, opts.resolution, threads);

  if (opts.include_dual) {
    const DualKummer<double> dk = dual_kummer(a);
    const double half = (out.upper - out.lower).minCoeff() / 2;
    const double extent = opts.dual_extent > 0 ? opts.dual_extent : 2.0 / half;
    const Field f = [&](const Eigen::Vector3d& p) {
      const std::vector<double> v{p(0), p(1), p(2)};
      return dk.f2.eval(v) + 2 * dk.f1.eval(v) + dk.f0.eval(v);
    };
    out.dual = march(f, Eigen::Vector3d::Constant(-extent), Eigen::Vector3d::Constant(extent), opts.resolution, threads);
  }
  return out;
}

}  // namespace gramspec
