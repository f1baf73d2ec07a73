// SPDX-License-Identifier: Apache-2.0
//
// Barrier path-following for
//
//   maximize t  s.t.  T_i(C, t, mu_i) >= 0   (eps_i > 0)
//                     h_i^H C h_i - t >= 0   (eps_i = 0)
//                     C >= 0, tr C <= P, mu_i >= 0
//
// C is parametrized by K^2 real coordinates in an orthonormal Hermitian basis.
// Every LMI depends on C through a congruence T_i = A_i^H C A_i + mu_i D_i - t e e^T
// with A_i = [I | h_i], so the C-block of each barrier Hessian reduces to the
// K x K form <E_k, V E_l V> with V = A W A^H, W = T^-1.
#include <cmath>
#include <limits>

#include "wet/robust.hpp"

namespace wet {
namespace {

// Orthonormal basis of K x K Hermitian matrices under <A, B> = Re tr(A^H B).
struct HermitianBasis {
  struct Term {
    int row, col;
    complex value;
  };
  int k = 0;
  std::vector<std::vector<Term>> terms;  // nonzeros of each basis element

  explicit HermitianBasis(int dim) : k(dim) {
    const real s = 1 / std::sqrt(real(2));
    for (int a = 0; a < k; ++a) terms.push_back({{a, a, 1}});
    for (int a = 0; a < k; ++a)
      for (int b = a + 1; b < k; ++b) terms.push_back({{a, b, s}, {b, a, s}});
    for (int a = 0; a < k; ++a)
      for (int b = a + 1; b < k; ++b) terms.push_back({{a, b, complex(0, s)}, {b, a, complex(0, -s)}});
  }

  int size() const { return static_cast<int>(terms.size()); }

  MatrixC matrix(const VectorR& coords) const {
    MatrixC m = MatrixC::Zero(k, k);
    for (int i = 0; i < size(); ++i)
      for (const auto& t : terms[i]) m(t.row, t.col) += coords[i] * t.value;
    return m;
  }

  // <E_i, M> for every i.
  VectorR coords(const MatrixC& m) const {
    VectorR c(size());
    for (int i = 0; i < size(); ++i) {
      real s = 0;
      for (const auto& t : terms[i]) s += (std::conj(t.value) * m(t.row, t.col)).real();
      c[i] = s;
    }
    return c;
  }

  // H(i, j) += <E_i, V E_j V> for Hermitian V.
  void add_congruence_hessian(const MatrixC& v, Eigen::Ref<MatrixR> h) const {
    MatrixC vev(k, k);
    for (int j = 0; j < size(); ++j) {
      vev.setZero();
      for (const auto& t : terms[j]) vev.noalias() += t.value * v.col(t.row) * v.row(t.col);
      h.col(j) += coords(vev);
    }
  }
};

struct Problem {
  int k = 0;
  real power = 1;  // normalized to 1 internally
  std::vector<VectorC> robust_h;
  std::vector<real> robust_eps;
  std::vector<VectorC> plain_h;
  std::vector<VectorR> plain_coords;  // <E_i, h h^H>
};

class BarrierSolver {
 public:
  BarrierSolver(const Problem& p, const SolverOptions& opt)
      : p_(p), opt_(opt), basis_(p.k), nc_(basis_.size()), nr_(static_cast<int>(p.robust_h.size())),
        n_(nc_ + nr_ + 1) {
    degree_ = p.k + 1 + nr_ + nr_ * (p.k + 1) + static_cast<int>(p.plain_h.size());
  }

  int t_index() const { return nc_ + nr_; }

  VectorR initial_point() const {
    VectorR z = VectorR::Zero(n_);
    const MatrixC c0 = MatrixC::Identity(p_.k, p_.k) * (p_.power / (2 * p_.k));
    z.head(nc_) = basis_.coords(c0);
    const real mu0 = p_.power / (2 * p_.k);
    real lowest = std::numeric_limits<real>::infinity();
    for (int i = 0; i < nr_; ++i) {
      z[nc_ + i] = mu0;
      const MatrixC blk = lmi_block(c0, 0, mu0, p_.robust_h[i], p_.robust_eps[i]);
      const Eigen::Index m = p_.k;
      const VectorC u = blk.topRightCorner(m, 1);
      const MatrixC a = blk.topLeftCorner(m, m);
      const real schur = blk(m, m).real() - u.dot(a.llt().solve(u)).real();
      lowest = std::min(lowest, schur);
    }
    for (const auto& h : p_.plain_h) lowest = std::min(lowest, h.dot(c0 * h).real());
    z[t_index()] = lowest - 0.5;
    return z;
  }

  // Barrier value; +inf outside the domain. Fills gradient and Hessian on request.
  real barrier(const VectorR& z, VectorR* grad, MatrixR* hess) const {
    constexpr real inf = std::numeric_limits<real>::infinity();
    const int k = p_.k;
    const MatrixC c = basis_.matrix(z.head(nc_));
    const real t = z[t_index()];
    if (grad) grad->setZero(n_);
    if (hess) hess->setZero(n_, n_);
    real phi = 0;

    // C >= 0
    {
      Eigen::LLT<MatrixC> llt(c);
      if (llt.info() != Eigen::Success) return inf;
      const auto& l = llt.matrixL();
      real logdet = 0;
      for (int a = 0; a < k; ++a) {
        const real d = std::real(l(a, a));
        if (!(d > 0)) return inf;
        logdet += 2 * std::log(d);
      }
      phi -= logdet;
      if (grad || hess) {
        MatrixC w = llt.solve(MatrixC::Identity(k, k));
        w = 0.5 * (w + w.adjoint()).eval();
        if (grad) grad->head(nc_) -= basis_.coords(w);
        if (hess) basis_.add_congruence_hessian(w, hess->topLeftCorner(nc_, nc_));
      }
    }

    // tr C <= P
    {
      const real slack = p_.power - c.trace().real();
      if (!(slack > 0)) return inf;
      phi -= std::log(slack);
      for (int a = 0; a < k; ++a) {
        if (grad) (*grad)[a] += 1 / slack;
        if (hess)
          for (int b = 0; b < k; ++b) (*hess)(a, b) += 1 / (slack * slack);
      }
    }

    // mu_i >= 0 and T_i >= 0
    for (int i = 0; i < nr_; ++i) {
      const int im = nc_ + i;
      const real mu = z[im];
      if (!(mu > 0)) return inf;
      phi -= std::log(mu);
      if (grad) (*grad)[im] -= 1 / mu;
      if (hess) (*hess)(im, im) += 1 / (mu * mu);

      const VectorC& h = p_.robust_h[i];
      const real eps2 = p_.robust_eps[i] * p_.robust_eps[i];
      const MatrixC blk = lmi_block(c, t, mu, h, p_.robust_eps[i]);
      Eigen::LLT<MatrixC> llt(blk);
      if (llt.info() != Eigen::Success) return inf;
      real logdet = 0;
      for (int a = 0; a <= k; ++a) {
        const real d = std::real(llt.matrixL()(a, a));
        if (!(d > 0)) return inf;
        logdet += 2 * std::log(d);
      }
      phi -= logdet;
      if (!grad && !hess) continue;

      MatrixC w = llt.solve(MatrixC::Identity(k + 1, k + 1));
      w = 0.5 * (w + w.adjoint()).eval();
      // A W A^H with A = [I | h]
      const MatrixC aw = w.topRows(k) + h * w.bottomRows(1);  // A W, k x (k+1)
      MatrixC v = aw.leftCols(k) + aw.col(k) * h.adjoint();
      v = 0.5 * (v + v.adjoint()).eval();
      const real wnn = w(k, k).real();
      // D = diag(I_k, -eps^2)
      MatrixC dw = w;
      dw.row(k) *= -eps2;
      const real tr_wd = w.topLeftCorner(k, k).trace().real() - eps2 * wnn;

      if (grad) {
        grad->head(nc_) -= basis_.coords(v);
        (*grad)[im] -= tr_wd;
        (*grad)[t_index()] += wnn;
      }
      if (hess) {
        auto& hm = *hess;
        basis_.add_congruence_hessian(v, hm.topLeftCorner(nc_, nc_));
        const MatrixC wdw = w * dw;  // W D W
        const MatrixC awdwa = [&] {
          const MatrixC x = wdw.topRows(k) + h * wdw.bottomRows(1);
          return MatrixC(x.leftCols(k) + x.col(k) * h.adjoint());
        }();
        const VectorR hc_mu = basis_.coords(0.5 * (awdwa + awdwa.adjoint()));
        const VectorC awe = aw.col(k);
        const VectorR hc_t = -basis_.coords(awe * awe.adjoint());
        hm.block(0, im, nc_, 1) += hc_mu;
        hm.block(im, 0, 1, nc_) += hc_mu.transpose();
        hm.block(0, t_index(), nc_, 1) += hc_t;
        hm.block(t_index(), 0, 1, nc_) += hc_t.transpose();
        // tr(W D W D)
        real wdwd = 0;
        for (int a = 0; a <= k; ++a)
          for (int b = 0; b <= k; ++b) {
            const real da = a == k ? -eps2 : 1;
            const real db = b == k ? -eps2 : 1;
            wdwd += da * db * std::norm(w(a, b));
          }
        hm(im, im) += wdwd;
        const real mt = -wdw(k, k).real();
        hm(im, t_index()) += mt;
        hm(t_index(), im) += mt;
        hm(t_index(), t_index()) += wnn * wnn;
      }
    }

    // h^H C h - t >= 0
    for (std::size_t i = 0; i < p_.plain_h.size(); ++i) {
      const VectorR& a = p_.plain_coords[i];
      const real r = a.dot(z.head(nc_)) - t;
      if (!(r > 0)) return inf;
      phi -= std::log(r);
      if (grad) {
        grad->head(nc_) -= a / r;
        (*grad)[t_index()] += 1 / r;
      }
      if (hess) {
        VectorR g(n_);
        g.setZero();
        g.head(nc_) = a;
        g[t_index()] = -1;
        *hess += g * g.transpose() / (r * r);
      }
    }
    return phi;
  }

  struct Result {
    VectorR z;
    SolverStatus status = SolverStatus::optimal;
    int steps = 0;
    real gap = 0;
  };

  Result run() const {
    Result res;
    VectorR z = initial_point();
    if (!std::isfinite(barrier(z, nullptr, nullptr))) {
      res.z = z;
      res.status = SolverStatus::infeasible_numerics;
      return res;
    }
    const real target_gap = opt_.gap_tolerance * p_.power;
    real tau = degree_ / p_.power;
    VectorR g(n_), dz(n_);
    MatrixR hess(n_, n_);

    while (true) {
      // centering
      for (int inner = 0; inner < 100; ++inner) {
        if (res.steps >= opt_.max_newton_steps) {
          res.z = z;
          res.status = SolverStatus::max_iterations;
          res.gap = degree_ / tau;
          return res;
        }
        const real f0 = -tau * z[t_index()] + barrier(z, &g, &hess);
        g[t_index()] -= tau;
        if (!g.allFinite() || !hess.allFinite()) {
          res.z = z;
          res.status = SolverStatus::infeasible_numerics;
          return res;
        }
        if (!newton_direction(hess, g, dz)) {
          res.z = z;
          res.status = SolverStatus::infeasible_numerics;
          return res;
        }
        const real decrement = -g.dot(dz);
        ++res.steps;
        if (decrement < 0) break;  // Hessian lost definiteness to rounding
        if (decrement / 2 <= 1e-10) break;

        real step = 1;
        bool moved = false;
        for (int ls = 0; ls < 60; ++ls, step *= 0.5) {
          const VectorR trial = z + step * dz;
          const real b = barrier(trial, nullptr, nullptr);
          if (!std::isfinite(b)) continue;
          const real f1 = -tau * trial[t_index()] + b;
          if (f1 <= f0 - 0.25 * step * decrement || step * step * decrement < 1e-24) {
            z = trial;
            moved = true;
            break;
          }
        }
        if (!moved) break;
      }
      const real gap = degree_ / tau;
      if (gap <= target_gap) {
        res.gap = gap;
        break;
      }
      tau *= opt_.barrier_growth;
    }
    res.z = z;
    return res;
  }

  // Solves H dz = -g on the diagonally equilibrated system, adding a small ridge if
  // rounding has cost H its definiteness.
  static bool newton_direction(const MatrixR& hess, const VectorR& g, VectorR& dz) {
    const VectorR d = hess.diagonal().cwiseMax(std::numeric_limits<real>::min()).cwiseSqrt().cwiseInverse();
    MatrixR scaled = d.asDiagonal() * hess * d.asDiagonal();
    const VectorR rhs = -d.cwiseProduct(g);
    for (real ridge : {0.0, 1e-14, 1e-12, 1e-10}) {
      if (ridge > 0) scaled.diagonal().array() += ridge;
      Eigen::LDLT<MatrixR> ldlt(scaled);
      if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) continue;
      dz = d.cwiseProduct(ldlt.solve(rhs));
      if (dz.allFinite()) return true;
    }
    return false;
  }

  MatrixC covariance(const VectorR& z) const {
    MatrixC c = basis_.matrix(z.head(nc_));
    return 0.5 * (c + c.adjoint());
  }

 private:
  const Problem& p_;
  SolverOptions opt_;
  HermitianBasis basis_;
  int nc_, nr_, n_;
  int degree_ = 0;
};

}  // namespace

CovarianceSolution solve_maxmin(const RobustSpec& spec, const SolverOptions& options) {
  spec.validate();
  const auto k = static_cast<int>(spec.channels.front().estimate.size());
  CovarianceSolution sol;
  sol.duals.assign(spec.channels.size(), 0);
  sol.cov.power_budget = spec.power;

  real hmax = 0;
  std::vector<int> kept;
  for (std::size_t i = 0; i < spec.channels.size(); ++i) {
    const auto& c = spec.channels[i];
    const real n = c.estimate.norm();
    if (n == 0 && c.epsilon == 0) {
      sol.dropped.push_back(static_cast<int>(i));
      sol.warnings.push_back("ER " + std::to_string(i) + " has a zero channel estimate and no uncertainty; dropped");
      continue;
    }
    hmax = std::max(hmax, n + c.epsilon);
    kept.push_back(static_cast<int>(i));
  }
  if (kept.empty()) {
    sol.cov.entries = MatrixC::Identity(k, k) * (spec.power / k);
    sol.t = 0;
    sol.status = SolverStatus::infeasible_numerics;
    sol.warnings.push_back("no ER with usable channel information");
    return sol;
  }

  // Normalize to P = 1 and max |h| + eps = 1.
  Problem p;
  p.k = k;
  p.power = 1;
  const HermitianBasis basis(k);
  std::vector<int> robust_index;
  for (int i : kept) {
    const auto& c = spec.channels[i];
    const VectorC h = c.estimate / hmax;
    if (c.epsilon > 0) {
      p.robust_h.push_back(h);
      p.robust_eps.push_back(c.epsilon / hmax);
      robust_index.push_back(i);
    } else {
      p.plain_h.push_back(h);
      p.plain_coords.push_back(basis.coords(h * h.adjoint()));
    }
  }

  const BarrierSolver solver(p, options);
  const auto res = solver.run();
  const real scale_t = spec.power * hmax * hmax;
  sol.cov.entries = solver.covariance(res.z) * spec.power;
  sol.t = std::max(res.z[solver.t_index()] * scale_t, real(0));
  for (std::size_t j = 0; j < robust_index.size(); ++j)
    sol.duals[robust_index[j]] = res.z[basis.size() + static_cast<int>(j)] * spec.power;
  sol.status = res.status;
  sol.newton_steps = res.steps;
  sol.gap = res.gap * scale_t;
  return sol;
}

}  // namespace wet
