#include "gramspec/binary.hpp"

#include <cmath>

namespace gramspec {

const char* to_string(PartitionKind k) {
  switch (k) {
    case PartitionKind::kConjugateSwapped: return "conjugate-swapped";
    case PartitionKind::kConjugateFixed: return "conjugate-fixed";
    case PartitionKind::kComplex: return "complex";
  }
  return "unknown";
}

long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

RootList checked_roots(const BinaryForm& f, double separation_tol) {
  RootList r = roots(f);
  if (r.roots_at_infinity > 0) throw Error(ErrorKind::kRealRoot, "binary form vanishes at (1:0)");
  double scale = 1.0;
  for (const auto& root : r.roots) {
    if (root.value.imag() == 0.0)
      throw Error(ErrorKind::kRealRoot, "binary form has the real root " + std::to_string(root.value.real()));
    if (root.multiplicity > 1) throw Error(ErrorKind::kRepeatedRoot, "binary form has a repeated root");
    scale = std::max(scale, std::abs(root.value));
  }
  for (std::size_t i = 0; i < r.roots.size(); ++i)
    for (std::size_t j = i + 1; j < r.roots.size(); ++j)
      if (std::abs(r.roots[i].value - r.roots[j].value) <= separation_tol * scale)
        throw Error(ErrorKind::kRepeatedRoot, "binary form has nearly coincident roots");
  if (r.leading <= 0) throw Error(ErrorKind::kRealRoot, "binary form is not positive");
  return r;
}

std::vector<Complex> upper_roots(const RootList& r) {
  std::vector<Complex> up;
  for (const auto& root : r.roots)
    if (root.value.imag() > 0) up.push_back(root.value);
  return up;
}

VectorC factor_vector(const std::vector<Complex>& w, Complex scale) {
  const auto c = product_of_linear_factors(w);
  VectorC v(static_cast<Eigen::Index>(c.size()));
  for (std::size_t k = 0; k < c.size(); ++k) v(static_cast<Eigen::Index>(k)) = scale * c[k];
  return v;
}

namespace {

PolynomialD binary_poly(const Eigen::VectorXd& v) {
  const int d = static_cast<int>(v.size()) - 1;
  PolynomialD p(2);
  for (int k = 0; k <= d; ++k) p.add_term({d - k, k}, v(k));
  return p;
}

}  // namespace

Rank2Enumeration enumerate_rank2(const BinaryForm& f, Rank2Which which) {
  Rank2Enumeration out;
  out.roots = checked_roots(f);
  const int d = f.half_degree();
  const std::vector<Complex> up = upper_roots(out.roots);
  const double sl = std::sqrt(out.roots.leading);
  out.complex_count = binomial(2 * d, d) / 2;

  // Root i of the flattened list: pair i/2, upper when i is even.
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (d - 1)); ++mask) {
    std::vector<Complex> w{up[0]};
    RootPartition part;
    part.kind = PartitionKind::kConjugateSwapped;
    part.block.push_back(0);
    for (int i = 1; i < d; ++i) {
      const bool conj = (mask >> (i - 1)) & 1;
      w.push_back(conj ? std::conj(up[i]) : up[i]);
      part.block.push_back(2 * i + (conj ? 1 : 0));
    }
    for (int idx : part.block) part.mask |= std::uint64_t{1} << idx;
    const VectorC g = factor_vector(w, sl);
    const Eigen::VectorXd re = g.real(), im = g.imag();
    RankTwoGram r;
    r.matrix = re * re.transpose() + im * im.transpose();
    r.partition = part;
    r.psd = true;
    r.p = binary_poly(re);
    r.q = binary_poly(im);
    out.psd.push_back(std::move(r));
  }

  if (which != Rank2Which::kPsd && d % 2 == 0) {
    // Blocks are unions of d/2 conjugate pairs containing pair 0.
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (d - 1)); ++mask) {
      if (__builtin_popcountll(mask) != d / 2 - 1) continue;
      std::vector<Complex> wg, wh;
      RootPartition part;
      part.kind = PartitionKind::kConjugateFixed;
      for (int i = 0; i < d; ++i) {
        const bool in = (i == 0) || ((mask >> (i - 1)) & 1);
        auto& tgt = in ? wg : wh;
        tgt.push_back(up[i]);
        tgt.push_back(std::conj(up[i]));
        if (in) {
          part.block.push_back(2 * i);
          part.block.push_back(2 * i + 1);
        }
      }
      for (int idx : part.block) part.mask |= std::uint64_t{1} << idx;
      const Eigen::VectorXd g = factor_vector(wg, sl).real(), h = factor_vector(wh, sl).real();
      RankTwoGram r;
      r.matrix = 0.5 * (g * h.transpose() + h * g.transpose());
      r.partition = part;
      r.psd = false;
      r.p = binary_poly(0.5 * (g + h));
      r.q = binary_poly(0.5 * (g - h));
      out.indefinite.push_back(std::move(r));
    }
  }
  return out;
}

KummerNodeSet kummer_nodes(const BinaryForm& f) {
  if (f.degree() != 6) throw Error(ErrorKind::kInvalidArgument, "Kummer nodes need a binary sextic");
  const RootList r = checked_roots(f);
  const std::vector<Complex> up = upper_roots(r);
  std::vector<Complex> all;
  for (const Complex& u : up) {
    all.push_back(u);
    all.push_back(std::conj(u));
  }
  KummerNodeSet out;
  for (const Complex& u : all) out.rank3.push_back(Eigen::Vector4cd(u * u, u, 1.0, 0.0));

  const Complex sl = std::sqrt(r.leading);
  for (std::uint64_t mask = 0; mask < 64; ++mask) {
    if (!(mask & 1) || __builtin_popcountll(mask) != 3) continue;
    std::vector<Complex> wg, wh;
    RootPartition part;
    part.mask = mask;
    for (int i = 0; i < 6; ++i) {
      if ((mask >> i) & 1) {
        wg.push_back(all[i]);
        part.block.push_back(i);
      } else {
        wh.push_back(all[i]);
      }
    }
    // Conjugation maps root 2k <-> 2k+1.
    std::uint64_t conj_mask = 0;
    for (int i = 0; i < 6; ++i)
      if ((mask >> i) & 1) conj_mask |= std::uint64_t{1} << (i ^ 1);
    part.kind = (conj_mask == (~mask & 63)) ? PartitionKind::kConjugateSwapped
                : (conj_mask == mask)       ? PartitionKind::kConjugateFixed
                                            : PartitionKind::kComplex;
    const VectorC g = factor_vector(wg, sl), h = factor_vector(wh, sl);
    out.rank2.push_back(0.5 * (g * h.transpose() + h * g.transpose()));
    out.partitions.push_back(part);
  }
  return out;
}

}  // namespace gramspec
