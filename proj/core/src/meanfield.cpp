#include "cbo/meanfield.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <sstream>

#include "cbo/errors.hpp"
#include "cbo/numerics.hpp"

namespace cbo {
namespace {

// Legendre basis values tabulated at the volume quadrature nodes.
struct BasisTables {
  int modes = 0;
  int nq = 0;
  const Quadrature* quad = nullptr;
  std::vector<double> val;   // modes x nq: P_m(xi_q)
  std::vector<double> dval;  // modes x nq: P'_m(xi_q)
  std::vector<double> val_r;         // P_m(+1) == 1
  std::vector<double> val_l;         // P_m(-1) == (-1)^m
  std::vector<double> dval_r;        // P'_m(+1)
  std::vector<double> dval_l;        // P'_m(-1)

  static BasisTables make(int degree, int nq) {
    BasisTables t;
    t.modes = degree + 1;
    t.nq = nq;
    t.quad = &Quadrature::gauss_legendre(nq);
    t.val.resize(t.modes * nq);
    t.dval.resize(t.modes * nq);
    t.val_r.resize(t.modes);
    t.val_l.resize(t.modes);
    t.dval_r.resize(t.modes);
    t.dval_l.resize(t.modes);
    for (int m = 0; m < t.modes; ++m) {
      for (int q = 0; q < nq; ++q) {
        t.val[m * nq + q] = legendre(m, t.quad->nodes[q]);
        t.dval[m * nq + q] = legendre_deriv(m, t.quad->nodes[q]);
      }
      t.val_r[m] = 1.0;
      t.val_l[m] = (m % 2 == 0) ? 1.0 : -1.0;
      t.dval_r[m] = legendre_deriv(m, 1.0);
      t.dval_l[m] = legendre_deriv(m, -1.0);
    }
    return t;
  }
};

// Objective samples on the fixed mesh; computed once per solve.
struct MeshSamples {
  int nq = 0;
  std::vector<double> x_q, f_q;        // cells x nq
  std::vector<double> x_edge, f_edge;  // cells+1
};

int volume_nq(int degree) { return std::max(degree + 2, 4); }

MeshSamples sample_mesh(const DensityField1D& rho, const Objective& f) {
  if (f.dim != 1) throw ConfigError("mean-field solver requires a 1D objective");
  MeshSamples s;
  s.nq = volume_nq(rho.poly_degree());
  const Quadrature& quad = Quadrature::gauss_legendre(s.nq);
  const int n = rho.num_cells();
  s.x_q.resize(static_cast<std::size_t>(n) * s.nq);
  s.f_q.resize(s.x_q.size());
  for (int k = 0; k < n; ++k) {
    const double xc = rho.cell_center(k);
    for (int q = 0; q < s.nq; ++q) {
      const double x = xc + 0.5 * rho.h() * quad.nodes[q];
      s.x_q[k * s.nq + q] = x;
      s.f_q[k * s.nq + q] = f(std::span<const double>(&x, 1));
    }
  }
  s.x_edge.resize(n + 1);
  s.f_edge.resize(n + 1);
  for (int e = 0; e <= n; ++e) {
    const double x = rho.a() + e * rho.h();
    s.x_edge[e] = x;
    s.f_edge[e] = f(std::span<const double>(&x, 1));
  }
  return s;
}

double consensus_from_samples(const DensityField1D& rho, const MeshSamples& s,
                              const BasisTables& t, double alpha) {
  const int n = rho.num_cells();
  double fmin = std::numeric_limits<double>::infinity();
  for (double fv : s.f_q) fmin = std::min(fmin, fv);

  std::vector<double> den(static_cast<std::size_t>(n) * s.nq), num(den.size());
  for (int k = 0; k < n; ++k) {
    for (int q = 0; q < s.nq; ++q) {
      double rq = 0.0;
      for (int m = 0; m < t.modes; ++m) rq += rho.coeff(k, m) * t.val[m * s.nq + q];
      const double w = 0.5 * rho.h() * t.quad->weights[q] * rq *
                       std::exp(-alpha * (s.f_q[k * s.nq + q] - fmin));
      den[k * s.nq + q] = w;
      num[k * s.nq + q] = w * s.x_q[k * s.nq + q];
    }
  }
  const double d = pairwise_sum(den);
  if (!(d > 0.0)) throw ConvergenceError("mean-field consensus weight degenerated");
  return pairwise_sum(num) / d;
}

FieldCoefficients fields_from_samples(const DensityField1D& rho, const MeshSamples& s,
                                      const BasisTables& t, const Objective& f,
                                      const CboParams& p, bool want_mu) {
  FieldCoefficients F;
  F.nq = s.nq;
  F.vf = consensus_from_samples(rho, s, t, p.alpha);
  F.f_at_vf = f(std::span<const double>(&F.vf, 1));

  const double sig2 = p.sigma * p.sigma;
  const bool gate_open = p.heaviside_mode == HeavisideMode::AlwaysOne;
  auto fill = [&](double x, double fx, double& mu, double& ka, double& kadx) {
    const double dx = x - F.vf;
    if (want_mu) {
      const double gate = gate_open ? 1.0 : smoothed_heaviside(fx - F.f_at_vf, p.epsilon);
      mu = -p.lambda * dx * gate;
      F.max_abs_mu = std::max(F.max_abs_mu, std::abs(mu));
    }
    ka = sig2 * dx * dx;
    kadx = 2.0 * sig2 * dx;
    F.max_kappa = std::max(F.max_kappa, ka);
  };

  const std::size_t nn = s.x_q.size();
  F.mu_q.assign(nn, 0.0);
  F.kappa_q.resize(nn);
  F.kappa_dx_q.resize(nn);
  for (std::size_t i = 0; i < nn; ++i)
    fill(s.x_q[i], s.f_q[i], F.mu_q[i], F.kappa_q[i], F.kappa_dx_q[i]);

  const std::size_t ne = s.x_edge.size();
  F.mu_edge.assign(ne, 0.0);
  F.kappa_edge.resize(ne);
  F.kappa_dx_edge.resize(ne);
  for (std::size_t e = 0; e < ne; ++e)
    fill(s.x_edge[e], s.f_edge[e], F.mu_edge[e], F.kappa_edge[e], F.kappa_dx_edge[e]);
  return F;
}

// Semi-discrete convection operator: dc/dt = L(c) for d/dt rho + (mu rho)' = 0
// with the local Lax-Friedrichs interface flux and zero boundary flux.
void convection_rhs(const DensityField1D& u, const FieldCoefficients& F, const BasisTables& t,
                    std::vector<double>& L, std::vector<double>& flux,
                    std::vector<double>& rq) {
  const int n = u.num_cells();
  const int modes = t.modes;
  const int nq = t.nq;
  const double h = u.h();

  flux.assign(n + 1, 0.0);
  for (int e = 1; e < n; ++e) {
    double rm = 0.0, rp = 0.0;
    for (int m = 0; m < modes; ++m) {
      rm += u.coeff(e - 1, m) * t.val_r[m];
      rp += u.coeff(e, m) * t.val_l[m];
    }
    const double mu = F.mu_edge[e];
    flux[e] = mu * 0.5 * (rm + rp) + 0.5 * std::abs(mu) * (rm - rp);
  }

  L.resize(static_cast<std::size_t>(n) * modes);
  rq.resize(nq);
  for (int k = 0; k < n; ++k) {
    for (int q = 0; q < nq; ++q) {
      double v = 0.0;
      for (int m = 0; m < modes; ++m) v += u.coeff(k, m) * t.val[m * nq + q];
      rq[q] = v * F.mu_q[k * nq + q] * t.quad->weights[q];
    }
    for (int m = 0; m < modes; ++m) {
      double vol = 0.0;
      for (int q = 0; q < nq; ++q) vol += rq[q] * t.dval[m * nq + q];
      const double surf = flux[k + 1] * t.val_r[m] - flux[k] * t.val_l[m];
      L[k * modes + m] = (2 * m + 1) / h * (vol - surf);
    }
  }
}

void apply_minmod(DensityField1D& u) {
  if (u.poly_degree() < 1) return;
  const int n = u.num_cells();
  std::vector<double> avg(n);
  for (int k = 0; k < n; ++k) avg[k] = u.cell_average(k);
  auto minmod = [](double a, double b, double c) {
    if (a > 0 && b > 0 && c > 0) return std::min({a, b, c});
    if (a < 0 && b < 0 && c < 0) return std::max({a, b, c});
    return 0.0;
  };
  for (int k = 1; k + 1 < n; ++k) {
    double dev = 0.0;
    for (int m = 1; m <= u.poly_degree(); ++m) dev += u.coeff(k, m);
    const double lim = minmod(dev, avg[k + 1] - avg[k], avg[k] - avg[k - 1]);
    if (lim != dev) {
      u.coeff(k, 1) = lim;
      for (int m = 2; m <= u.poly_degree(); ++m) u.coeff(k, m) = 0.0;
    }
  }
}

// Scales the non-mean modes of any cell whose polynomial dips negative so the
// sampled minimum is lifted to zero.  Cell averages are untouched, so mass is
// conserved exactly and cells that are already nonnegative are left alone.
void apply_positivity_scaling(DensityField1D& u) {
  if (u.poly_degree() < 1) return;
  const int n = u.num_cells();
  const int p = u.poly_degree();
  const Quadrature q = Quadrature::gauss_legendre(p + 2);
  for (int k = 0; k < n; ++k) {
    const double avg = u.cell_average(k);
    if (!(avg > 0.0)) continue;
    double mn = std::min(u.eval_ref(k, -1.0), u.eval_ref(k, 1.0));
    for (std::size_t j = 0; j < q.nodes.size(); ++j)
      mn = std::min(mn, u.eval_ref(k, q.nodes[j]));
    if (mn >= 0.0) continue;
    const double theta = avg / (avg - mn);
    for (int m = 1; m <= p; ++m) u.coeff(k, m) *= theta;
  }
}

// LAPACK general-band storage with the extra kl fill rows dgbsv needs.
struct BandMatrix {
  int n, kl, ku, ldab;
  std::vector<double> ab;  // column-major, ldab x n

  BandMatrix(int n_, int kl_, int ku_)
      : n(n_), kl(kl_), ku(ku_), ldab(2 * kl_ + ku_ + 1),
        ab(static_cast<std::size_t>(ldab) * n_, 0.0) {}

  double& at(int i, int j) { return ab[static_cast<std::size_t>(j) * ldab + (kl + ku + i - j)]; }
  double get(int i, int j) const {
    return ab[static_cast<std::size_t>(j) * ldab + (kl + ku + i - j)];
  }
  void add_entry(int i, int j, double v) { at(i, j) += v; }

  void matvec(const double* x, double* y) const {
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      const int j0 = std::max(0, i - kl);
      const int j1 = std::min(n - 1, i + ku);
      for (int j = j0; j <= j1; ++j) s += get(i, j) * x[j];
      y[i] = s;
    }
  }
};

// Interior-penalty bilinear form B for d/dt rho = (kappa rho)'' :
//   B(rho,phi) = sum_K ∫ (kappa rho)' phi'
//              - sum_e ( [[phi]]{(kappa rho)'} + [[kappa rho]]{phi'} )
//              + penalty * (p+1)^2/h * sum_e [[kappa rho]][[phi]]
// with [[g]] = g^- - g^+ and {g} = (g^- + g^+)/2; boundary faces carry no
// flux. kappa is globally smooth, so face values are single-valued. The
// (p+1)^2/h factor is the usual interior-penalty mesh scaling; without it the
// form is indefinite and the theta-scheme amplifies the negative modes (the
// heat-kernel unit test blows up by ~e^3 per step at 240 cells).
BandMatrix assemble_diffusion(const DensityField1D& u, const FieldCoefficients& F,
                              const BasisTables& t, double penalty) {
  const int n = u.num_cells();
  const int modes = t.modes;
  const int nq = t.nq;
  const double h = u.h();
  const int band = 2 * modes - 1;
  BandMatrix B(n * modes, band, band);
  const double sigma0 = penalty * modes * modes / h;

  for (int k = 0; k < n; ++k) {
    for (int m = 0; m < modes; ++m) {
      for (int mp_ = 0; mp_ < modes; ++mp_) {
        double s = 0.0;
        for (int q = 0; q < nq; ++q) {
          const double trial =
              F.kappa_dx_q[k * nq + q] * t.val[mp_ * nq + q] +
              F.kappa_q[k * nq + q] * t.dval[mp_ * nq + q] * 2.0 / h;
          s += t.quad->weights[q] * trial * t.dval[m * nq + q];
        }
        B.add_entry(k * modes + m, k * modes + mp_, s);
      }
    }
  }

  for (int e = 1; e < n; ++e) {
    const int cl = e - 1, cr = e;
    const double ke = F.kappa_edge[e];
    const double kpe = F.kappa_dx_edge[e];
    for (int side_t = 0; side_t < 2; ++side_t) {  // 0: test from left cell, 1: right
      const int kt = side_t == 0 ? cl : cr;
      for (int m = 0; m < modes; ++m) {
        const double jphi = side_t == 0 ? t.val_r[m] : -t.val_l[m];
        const double aphi = 0.5 * (side_t == 0 ? t.dval_r[m] : t.dval_l[m]) * 2.0 / h;
        for (int side_u = 0; side_u < 2; ++side_u) {
          const int ku_ = side_u == 0 ? cl : cr;
          for (int mp_ = 0; mp_ < modes; ++mp_) {
            const double rv = side_u == 0 ? t.val_r[mp_] : t.val_l[mp_];
            const double drv = (side_u == 0 ? t.dval_r[mp_] : t.dval_l[mp_]) * 2.0 / h;
            const double avg_dkr = 0.5 * (kpe * rv + ke * drv);
            const double jump_kr = ke * (side_u == 0 ? rv : -rv);
            B.add_entry(kt * modes + m, ku_ * modes + mp_,
                        -jphi * avg_dkr - jump_kr * aphi + sigma0 * jump_kr * jphi);
          }
        }
      }
    }
  }
  return B;
}

}  // namespace

FieldCoefficients compute_fields(const DensityField1D& rho, const Objective& f,
                                 const CboParams& p) {
  const MeshSamples s = sample_mesh(rho, f);
  const BasisTables t = BasisTables::make(rho.poly_degree(), s.nq);
  return fields_from_samples(rho, s, t, f, p, /*want_mu=*/true);
}

double step_size(const FieldCoefficients& fields, double h, const MeanfieldParams& mp) {
  if (!(h > 0.0)) throw ConfigError("step_size: h must be > 0");
  if (!(mp.tau_max > 0.0)) throw ConfigError("step_size: tau_max must be > 0");
  if (fields.max_abs_mu <= 0.0) return mp.tau_max;
  return std::min(mp.cfl * h / fields.max_abs_mu, mp.tau_max);
}

DensityField1D convection_halfstep(const DensityField1D& rho, const FieldCoefficients& fields,
                                   double tau, const MeanfieldParams& mp) {
  if (!(tau >= 0.0)) throw ConfigError("convection_halfstep: tau must be >= 0");
  const double h = rho.h();
  if (fields.max_abs_mu > 0.0 && tau > mp.cfl * h / fields.max_abs_mu * (1.0 + 1e-9))
    throw ConfigError("convection_halfstep: tau exceeds the CFL bound");
  const double target = 0.5 * tau;
  if (target == 0.0 || fields.max_abs_mu == 0.0) return rho;

  const int degree = rho.poly_degree();
  const BasisTables t = BasisTables::make(degree, fields.nq);

  // SSP-RK2 subcycling at the explicit scheme's own stability limit
  // (Courant ~ 1/(2p+1) for degree-p elements, with a 0.9 safety factor).
  const double inner = 0.9 / (2 * degree + 1) * h / fields.max_abs_mu;
  const long nsub = std::max(1L, static_cast<long>(std::ceil(target / inner - 1e-12)));
  const double dt = target / static_cast<double>(nsub);

  DensityField1D u = rho;
  DensityField1D u1 = rho;
  std::vector<double> L1, L2, flux, rq;
  const std::size_t nc = u.coeffs().size();
  for (long s = 0; s < nsub; ++s) {
    convection_rhs(u, fields, t, L1, flux, rq);
    for (std::size_t i = 0; i < nc; ++i) u1.coeffs()[i] = u.coeffs()[i] + dt * L1[i];
    convection_rhs(u1, fields, t, L2, flux, rq);
    for (std::size_t i = 0; i < nc; ++i)
      u.coeffs()[i] = 0.5 * (u.coeffs()[i] + u1.coeffs()[i] + dt * L2[i]);
    if (mp.use_limiter) apply_minmod(u);
    apply_positivity_scaling(u);
  }
  return u;
}

DensityField1D diffusion_step(const DensityField1D& rho, const FieldCoefficients& fields,
                              double tau, const MeanfieldParams& mp) {
  if (!(tau >= 0.0)) throw ConfigError("diffusion_step: tau must be >= 0");
  if (fields.max_kappa < 0.0) throw ConfigError("diffusion_step: kappa must be >= 0");
  if (tau == 0.0 || fields.max_kappa == 0.0) return rho;

  const int modes = rho.poly_degree() + 1;
  const int n = rho.num_cells();
  const int N = n * modes;
  const BasisTables t = BasisTables::make(rho.poly_degree(), fields.nq);
  BandMatrix B = assemble_diffusion(rho, fields, t, mp.penalty);

  std::vector<double> mdiag(N);
  for (int k = 0; k < n; ++k)
    for (int m = 0; m < modes; ++m) mdiag[k * modes + m] = rho.h() / (2 * m + 1);

  const double* c = rho.coeffs().data();
  std::vector<double> bx(N), rhs(N);
  B.matvec(c, bx.data());
  for (int i = 0; i < N; ++i) rhs[i] = mdiag[i] * c[i] - (1.0 - mp.theta) * tau * bx[i];

  BandMatrix A(N, B.kl, B.ku);
  for (std::size_t i = 0; i < A.ab.size(); ++i) A.ab[i] = mp.theta * tau * B.ab[i];
  for (int i = 0; i < N; ++i) A.at(i, i) += mdiag[i];
  const std::vector<double> a_copy = A.ab;

  std::vector<double> sol = rhs;
  std::vector<lapack_int> ipiv(N);
  const lapack_int info = LAPACKE_dgbsv(LAPACK_COL_MAJOR, N, A.kl, A.ku, 1, A.ab.data(), A.ldab,
                                        ipiv.data(), sol.data(), N);
  if (info != 0) {
    std::ostringstream msg;
    msg << "diffusion_step: banded solve failed (dgbsv info=" << info << ")";
    throw ConvergenceError(msg.str());
  }

  // Residual check against the untouched matrix.
  BandMatrix A0(N, A.kl, A.ku);
  A0.ab = a_copy;
  std::vector<double> r(N);
  A0.matvec(sol.data(), r.data());
  double rn = 0.0, bn = 0.0;
  for (int i = 0; i < N; ++i) {
    rn += (r[i] - rhs[i]) * (r[i] - rhs[i]);
    bn += rhs[i] * rhs[i];
  }
  if (std::sqrt(rn) > 1e-10 * std::max(std::sqrt(bn), 1e-300)) {
    double anorm = 0.0;
    for (int j = 0; j < N; ++j) {
      double col = 0.0;
      for (int i = std::max(0, j - A.ku); i <= std::min(N - 1, j + A.kl); ++i)
        col += std::abs(A0.get(i, j));
      anorm = std::max(anorm, col);
    }
    double rcond = 0.0;
    LAPACKE_dgbcon(LAPACK_COL_MAJOR, '1', N, A.kl, A.ku, A.ab.data(), A.ldab, ipiv.data(), anorm,
                   &rcond);
    std::ostringstream msg;
    msg << "diffusion_step: solve residual above 1e-10 (rcond=" << rcond << ")";
    throw ConvergenceError(msg.str());
  }

  DensityField1D out = rho;
  std::copy(sol.begin(), sol.end(), out.coeffs().begin());
  if (mp.use_limiter) apply_minmod(out);
  apply_positivity_scaling(out);
  return out;
}

namespace {

DensityField1D strang_impl(const DensityField1D& rho, const MeshSamples& s, const BasisTables& t,
                           const Objective& f, const CboParams& p, double tau,
                           const MeanfieldParams& mp, const FieldCoefficients& fields0) {
  DensityField1D mid = convection_halfstep(rho, fields0, tau, mp);
  if (p.sigma != 0.0) {
    const FieldCoefficients fstar = fields_from_samples(mid, s, t, f, p, /*want_mu=*/false);
    mid = diffusion_step(mid, fstar, tau, mp);
  }
  return convection_halfstep(mid, fields0, tau, mp);
}

double l2_increment(const DensityField1D& a, const DensityField1D& b) {
  double s = 0.0;
  for (int k = 0; k < a.num_cells(); ++k)
    for (int m = 0; m <= a.poly_degree(); ++m) {
      const double d = a.coeff(k, m) - b.coeff(k, m);
      s += d * d * a.h() / (2 * m + 1);
    }
  return std::sqrt(s);
}

}  // namespace

DensityField1D strang_step(const DensityField1D& rho, const Objective& f, const CboParams& p,
                           double tau, const MeanfieldParams& mp) {
  const MeshSamples s = sample_mesh(rho, f);
  const BasisTables t = BasisTables::make(rho.poly_degree(), s.nq);
  const FieldCoefficients fields0 = fields_from_samples(rho, s, t, f, p, /*want_mu=*/true);
  return strang_impl(rho, s, t, f, p, tau, mp, fields0);
}

MeanfieldResult solve_to_stationarity(const DensityField1D& rho0, const Objective& f,
                                      const CboParams& p, double tol,
                                      const MeanfieldParams& mp) {
  if (!(tol > 0.0)) throw ConfigError("solve_to_stationarity: tol must be > 0");
  const MeshSamples s = sample_mesh(rho0, f);
  const BasisTables t = BasisTables::make(rho0.poly_degree(), s.nq);

  MeanfieldResult res(rho0);
  DensityField1D rho = rho0;
  const double mass0 = rho.mass();
  if (!(mass0 > 0.0)) throw ConfigError("solve_to_stationarity: initial mass must be > 0");

  double time = 0.0;
  double tau_min = mp.tau_max;
  long positivity_flags = 0;
  bool converged = false;

  auto record = [&](const FieldCoefficients& fields) {
    res.t_series.push_back(time);
    res.vf_series.push_back(fields.vf);
    res.variance_series.push_back(2.0 * rho.variance());
    res.mass_series.push_back(rho.mass());
  };

  for (long iter = 1;; ++iter) {
    const FieldCoefficients fields = fields_from_samples(rho, s, t, f, p, /*want_mu=*/true);
    const long stride = std::max(mp.series_stride, 1L);
    if ((iter - 1) % stride == 0) record(fields);
    if (mp.snapshot_stride > 0 && (iter - 1) % mp.snapshot_stride == 0)
      res.snapshots.emplace_back(time, rho);

    const double tau = step_size(fields, rho.h(), mp);
    DensityField1D next = strang_impl(rho, s, t, f, p, tau, mp, fields);
    const double inc = l2_increment(next, rho);
    time += tau;
    ++res.iterations;

    const double max_avg = std::max(next.max_cell_average(), 1e-300);
    const double min_avg = next.min_cell_average();
    if (min_avg < -1e-4 * max_avg) {
      std::ostringstream msg;
      msg << "solve_to_stationarity: cell average dropped to " << min_avg << " (max " << max_avg
          << ") at t=" << time;
      throw ConvergenceError(msg.str());
    }
    if (min_avg < -1e-8 * max_avg) ++positivity_flags;

    rho = std::move(next);
    if ((iter - 1) % stride == 0) res.increment_series.push_back(inc);

    if (iter > 1 && inc < tol) {
      converged = true;
    } else {
      tau_min = std::min(tau_min, tau);
      if (static_cast<double>(iter) > 10.0 * (100.0 / tau_min)) {
        std::ostringstream msg;
        msg << "solve_to_stationarity: no stationary state after " << iter << " steps (t=" << time
            << ", increment=" << inc << ", target=" << tol << ")";
        throw ConvergenceError(msg.str());
      }
    }
    if (converged) {
      const FieldCoefficients final_fields =
          fields_from_samples(rho, s, t, f, p, /*want_mu=*/true);
      res.rho = rho;
      record(final_fields);
      res.increment_series.push_back(inc);
      break;
    }
  }

  res.stop_time = time;
  res.support = res.rho.support(mp.support_threshold);
  res.mass_drift = std::abs(res.rho.mass() - mass0) / mass0;
  if (positivity_flags > 0) {
    std::ostringstream msg;
    msg << "positivity monitor flagged " << positivity_flags << " steps (undershoot beyond 1e-8 "
        << "of the peak cell average)";
    res.warnings.push_back(msg.str());
  }
  if (res.mass_drift > 1e-6) {
    std::ostringstream msg;
    msg << "cumulative mass drift " << res.mass_drift << " exceeds 1e-6";
    res.warnings.push_back(msg.str());
  }
  return res;
}

}  // namespace cbo
