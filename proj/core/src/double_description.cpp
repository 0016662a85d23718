#include "superhedge/double_description.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace superhedge {
namespace {

// Set of constraint indices at which a ray is tight.
class ZeroSet {
 public:
  void set(std::size_t i) {
    if (i / 64 >= words_.size()) words_.resize(i / 64 + 1, 0);
    words_[i / 64] |= std::uint64_t{1} << (i % 64);
  }

  void set_first(std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) set(i);
  }

  ZeroSet operator&(const ZeroSet& other) const {
    ZeroSet out;
    const std::size_t n = std::min(words_.size(), other.words_.size());
    out.words_.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.words_[i] = words_[i] & other.words_[i];
    return out;
  }

  ZeroSet operator|(const ZeroSet& other) const {
    ZeroSet out;
    out.words_.resize(std::max(words_.size(), other.words_.size()), 0);
    for (std::size_t i = 0; i < out.words_.size(); ++i) {
      if (i < words_.size()) out.words_[i] |= words_[i];
      if (i < other.words_.size()) out.words_[i] |= other.words_[i];
    }
    return out;
  }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(__builtin_popcountll(w));
    return c;
  }

  bool subset_of(const ZeroSet& other) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      const std::uint64_t o = i < other.words_.size() ? other.words_[i] : 0;
      if ((words_[i] & ~o) != 0) return false;
    }
    return true;
  }

 private:
  std::vector<std::uint64_t> words_;
};

struct Ray {
  Eigen::VectorXd v;
  ZeroSet zeros;
};

bool normalize_max(Eigen::VectorXd& v) {
  const double m = v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
  if (m == 0.0 || !std::isfinite(m)) return false;
  v /= m;
  return true;
}

bool lex_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a(i) < b(i)) return true;
    if (a(i) > b(i)) return false;
  }
  return false;
}

std::vector<Eigen::VectorXd> orthonormal_basis(
    int dim, const std::vector<Eigen::VectorXd>& vectors, double tol) {
  if (vectors.empty()) return {};
  Eigen::MatrixXd m(dim, static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    m.col(static_cast<Eigen::Index>(j)) = vectors[j];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
  qr.setThreshold(tol);
  const Eigen::Index rank = qr.rank();
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(dim, rank);
  std::vector<Eigen::VectorXd> out;
  for (Eigen::Index j = 0; j < rank; ++j) out.emplace_back(q.col(j));
  return out;
}

class DoubleDescription {
 public:
  DoubleDescription(int dim, double tol) : dim_(dim), tol_(tol) {
    for (int i = 0; i < dim; ++i) {
      lineality_.push_back(Eigen::VectorXd::Unit(dim, i));
    }
  }

  void add(const ConeConstraint& c) {
    if (c.normal.size() != dim_) {
      throw std::invalid_argument("constraint dimension mismatch");
    }
    const std::size_t k = processed_++;
    Eigen::VectorXd a = c.normal;
    if (!normalize_max(a)) {
      for (auto& r : rays_) r.zeros.set(k);
      return;
    }

    std::size_t pivot = lineality_.size();
    double best = tol_;
    for (std::size_t i = 0; i < lineality_.size(); ++i) {
      const double s = std::abs(a.dot(lineality_[i]));
      if (s > best) {
        best = s;
        pivot = i;
      }
    }
    if (pivot < lineality_.size()) {
      cut_lineality(a, c.equality, k, pivot);
    } else {
      cut_rays(a, c.equality, k);
    }
  }

  ConeGenerators finish() {
    ConeGenerators out;
    out.lineality = lineality_;
    std::vector<Eigen::VectorXd> rays;
    for (auto& r : rays_) {
      Eigen::VectorXd v = project_out_lineality(r.v);
      if (!normalize_max(v)) continue;
      rays.push_back(std::move(v));
    }
    std::sort(rays.begin(), rays.end(), lex_less);
    for (auto& v : rays) {
      if (!out.rays.empty() && (out.rays.back() - v).cwiseAbs().maxCoeff() <= 1e-9) {
        continue;
      }
      out.rays.push_back(std::move(v));
    }
    return out;
  }

 private:
  Eigen::VectorXd project_out_lineality(const Eigen::VectorXd& v) const {
    Eigen::VectorXd out = v;
    for (const auto& l : lineality_) out -= l.dot(out) * l;
    return out;
  }

  void cut_lineality(const Eigen::VectorXd& a, bool equality, std::size_t k,
                     std::size_t pivot) {
    const Eigen::VectorXd lstar = lineality_[pivot];
    const double s = a.dot(lstar);

    std::vector<Eigen::VectorXd> projected;
    for (std::size_t i = 0; i < lineality_.size(); ++i) {
      if (i == pivot) continue;
      projected.push_back(lineality_[i] - (a.dot(lineality_[i]) / s) * lstar);
    }
    lineality_ = orthonormal_basis(dim_, projected, tol_);

    for (auto& r : rays_) {
      r.v -= (a.dot(r.v) / s) * lstar;
      r.zeros.set(k);
    }
    if (!equality) {
      Ray fresh;
      fresh.v = s > 0 ? Eigen::VectorXd(-lstar) : lstar;
      fresh.zeros.set_first(k);
      rays_.push_back(std::move(fresh));
    }
    for (auto& r : rays_) {
      r.v = project_out_lineality(r.v);
      normalize_max(r.v);
    }
    dedupe();
  }

  void cut_rays(const Eigen::VectorXd& a, bool equality, std::size_t k) {
    std::vector<std::size_t> pos, neg;
    std::vector<double> val(rays_.size());
    std::vector<Ray> next;
    for (std::size_t i = 0; i < rays_.size(); ++i) {
      val[i] = a.dot(rays_[i].v);
      if (val[i] > tol_) {
        pos.push_back(i);
      } else if (val[i] < -tol_) {
        neg.push_back(i);
        if (!equality) next.push_back(rays_[i]);
      } else {
        Ray r = rays_[i];
        r.zeros.set(k);
        next.push_back(std::move(r));
      }
    }

    const std::size_t pointed_dim = static_cast<std::size_t>(dim_) - lineality_.size();
    const std::size_t needed = pointed_dim >= 2 ? pointed_dim - 2 : 0;
    for (std::size_t p : pos) {
      for (std::size_t q : neg) {
        ZeroSet common = rays_[p].zeros & rays_[q].zeros;
        if (common.count() < needed) continue;
        bool adjacent = true;
        for (std::size_t r = 0; r < rays_.size() && adjacent; ++r) {
          if (r == p || r == q) continue;
          if (common.subset_of(rays_[r].zeros)) adjacent = false;
        }
        if (!adjacent) continue;
        Ray combo;
        combo.v = val[p] * rays_[q].v - val[q] * rays_[p].v;
        if (!normalize_max(combo.v)) continue;
        combo.zeros = common;
        combo.zeros.set(k);
        next.push_back(std::move(combo));
      }
    }
    rays_ = std::move(next);
    dedupe();
  }

  void dedupe() {
    std::vector<Ray> kept;
    for (auto& r : rays_) {
      bool merged = false;
      for (auto& existing : kept) {
        if ((existing.v - r.v).cwiseAbs().maxCoeff() <= 1e-9) {
          existing.zeros = existing.zeros | r.zeros;
          merged = true;
          break;
        }
      }
      if (!merged) kept.push_back(std::move(r));
    }
    rays_ = std::move(kept);
  }

  int dim_;
  double tol_;
  std::size_t processed_ = 0;
  std::vector<Eigen::VectorXd> lineality_;
  std::vector<Ray> rays_;
};

}  // namespace

ConeGenerators halfspaces_to_generators(
    int dim, const std::vector<ConeConstraint>& constraints, double tol) {
  DoubleDescription dd(dim, tol);
  // Equalities first: they only shrink the lineality space and keep the
  // intermediate ray sets small.
  for (const auto& c : constraints) {
    if (c.equality) dd.add(c);
  }
  for (const auto& c : constraints) {
    if (!c.equality) dd.add(c);
  }
  return dd.finish();
}

std::vector<ConeConstraint> generators_to_halfspaces(
    int dim, const std::vector<Eigen::VectorXd>& rays,
    const std::vector<Eigen::VectorXd>& lineality, double tol) {
  std::vector<ConeConstraint> dual;
  for (const auto& r : rays) dual.push_back({r, false});
  for (const auto& l : lineality) dual.push_back({l, true});
  ConeGenerators polar = halfspaces_to_generators(dim, dual, tol);
  std::vector<ConeConstraint> out;
  for (auto& r : polar.rays) out.push_back({std::move(r), false});
  for (auto& l : polar.lineality) out.push_back({std::move(l), true});
  return out;
}

}  // namespace superhedge
