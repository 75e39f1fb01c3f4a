#include "topoderiv/solver.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

#include "topoderiv/threads.hpp"

namespace topoderiv {

namespace {

// Free index range [first, last] along each axis: whole Dirichlet faces
// only remove end nodes, so the free set is a tensor product.
struct FreeBox {
  std::array<int, 3> first{0, 0, 0}, count{1, 1, 1};
};

FreeBox free_box(const GridSpec& g) {
  FreeBox b;
  for (int a = 0; a < g.dim; ++a) {
    const int lo = g.faces[2 * a] == 'D' ? 1 : 0;
    const int hi = g.faces[2 * a + 1] == 'D' ? g.n[a] - 2 : g.n[a] - 1;
    b.first[a] = lo;
    b.count[a] = hi - lo + 1;
  }
  return b;
}

// Exact inverse of the free-node stiffness by separation of variables:
// K = sum_a K_a (x) M_others, with V_a^T K_a V_a = diag(lambda_a) and
// V_a^T M_a V_a = I per axis.
class FastDiagonal {
 public:
  explicit FastDiagonal(const GridSpec& g) : dim_(g.dim), box_(free_box(g)) {
    for (int a = 0; a < dim_; ++a) {
      const int m = box_.count[a];
      Eigen::MatrixXd K = Eigen::MatrixXd::Zero(m, m);
      Eigen::VectorXd w(m);
      const double ih = 1.0 / g.h(a);
      for (int r = 0; r < m; ++r) {
        const int i = box_.first[a] + r;
        w(r) = g.dual_width(a, i);
        K(r, r) = ((i > 0) + (i < g.n[a] - 1)) * ih;
        if (r > 0) K(r, r - 1) = -ih;
        if (r < m - 1) K(r, r + 1) = -ih;
      }
      const Eigen::VectorXd s = w.cwiseSqrt().cwiseInverse();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s.asDiagonal() * K * s.asDiagonal());
      V_[a] = s.asDiagonal() * es.eigenvectors();
      lambda_[a] = es.eigenvalues();
    }
    for (int a = dim_; a < 3; ++a) {
      V_[a] = Eigen::MatrixXd::Identity(1, 1);
      lambda_[a] = Eigen::VectorXd::Zero(1);
    }
  }

  const FreeBox& box() const { return box_; }

  // In place: data <- K_FF^{-1} data, packed x fastest.
  void apply(std::vector<double>& data) const {
    transform(data, true);
    const int nx = box_.count[0], ny = box_.count[1], nz = box_.count[2];
    std::size_t p = 0;
    for (int k = 0; k < nz; ++k)
      for (int j = 0; j < ny; ++j) {
        const double lyz = lambda_[1](j) + lambda_[2](k);
        for (int i = 0; i < nx; ++i, ++p) data[p] /= lambda_[0](i) + lyz;
      }
    transform(data, false);
  }

 private:
  void transform(std::vector<double>& data, bool transpose) const {
    const int nx = box_.count[0], ny = box_.count[1], nz = box_.count[2];
    using Map = Eigen::Map<Eigen::MatrixXd>;
    Map X(data.data(), nx, static_cast<Eigen::Index>(ny) * nz);
    Eigen::MatrixXd t = transpose ? Eigen::MatrixXd(V_[0].transpose() * X) : Eigen::MatrixXd(V_[0] * X);
    X = t;
    for (int k = 0; k < nz; ++k) {
      Map S(data.data() + static_cast<std::size_t>(k) * nx * ny, nx, ny);
      Eigen::MatrixXd u = transpose ? Eigen::MatrixXd(S * V_[1]) : Eigen::MatrixXd(S * V_[1].transpose());
      S = u;
    }
    if (dim_ == 3) {
      Map Z(data.data(), static_cast<Eigen::Index>(nx) * ny, nz);
      Eigen::MatrixXd u = transpose ? Eigen::MatrixXd(Z * V_[2]) : Eigen::MatrixXd(Z * V_[2].transpose());
      Z = u;
    }
  }

  int dim_;
  FreeBox box_;
  std::array<Eigen::MatrixXd, 3> V_;
  std::array<Eigen::VectorXd, 3> lambda_;
};

std::shared_ptr<const FastDiagonal> fast_diagonal_for(const GridSpec& g) {
  static std::mutex mu;
  static std::map<std::string, std::shared_ptr<const FastDiagonal>> cache;
  std::ostringstream key;
  key.precision(17);
  key << g.dim;
  for (int a = 0; a < g.dim; ++a) key << ' ' << g.lo[a] << ' ' << g.hi[a] << ' ' << g.n[a];
  key << ' ' << std::string(g.faces.begin(), g.faces.begin() + 2 * g.dim);
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key.str());
    if (it != cache.end()) return it->second;
  }
  auto fd = std::make_shared<const FastDiagonal>(g);
  std::lock_guard<std::mutex> lock(mu);
  if (cache.size() > 16) cache.clear();
  return cache.emplace(key.str(), fd).first->second;
}

double dot_masked(const std::vector<double>& a, const std::vector<double>& b, const std::vector<char>& dir) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!dir[i]) s += a[i] * b[i];
  return s;
}

const Vec kNormals[6] = {{-1, 0, 0}, {1, 0, 0}, {0, -1, 0}, {0, 1, 0}, {0, 0, -1}, {0, 0, 1}};

std::vector<double> nodal(const GridSpec& g, const Polynomial& p) { return sample(g, p).values; }

}  // namespace

std::vector<double> assemble_rhs(const PoissonProblem& pb) {
  const GridSpec& g = pb.grid;
  std::vector<double> b(g.size(), 0.0);
  if (!pb.source.empty()) {
    if (pb.source.size() != g.size()) throw std::invalid_argument("source size does not match grid");
    const auto m = lumped_mass(g);
    for (std::size_t i = 0; i < b.size(); ++i) b[i] = m[i] * pb.source[i];
  }
  if (!pb.load.empty()) {
    if (pb.load.size() != g.size()) throw std::invalid_argument("load size does not match grid");
    for (std::size_t i = 0; i < b.size(); ++i) b[i] += pb.load[i];
  }
  if (pb.bc.neumann) {
    for (int a = 0; a < g.dim; ++a)
      for (int side = 0; side < 2; ++side) {
        const int face = 2 * a + side;
        if (g.faces[face] != 'N') continue;
        const int fixed = side ? g.n[a] - 1 : 0;
        for (std::size_t p = 0; p < g.size(); ++p) {
          const auto c = g.ijk(p);
          if (c[a] != fixed) continue;
          double area = 1.0;
          for (int o = 0; o < g.dim; ++o)
            if (o != a) area *= g.dual_width(o, c[o]);
          b[p] += area * pb.bc.neumann(g.node(p), face);
        }
      }
  }
  return b;
}

ScalarField solve(const PoissonProblem& pb, const SolverOptions& opts, SolveStats* stats) {
  const GridSpec& g = pb.grid;
  g.validate();
  const auto dir = g.dirichlet_mask();
  const std::size_t n = g.size();
  std::vector<double> u(n, 0.0);
  if (pb.bc.dirichlet)
    for (std::size_t i = 0; i < n; ++i)
      if (dir[i]) u[i] = pb.bc.dirichlet(g.node(i));

  std::vector<double> b = assemble_rhs(pb), ku;
  apply_stiffness(g, u, ku);
  for (std::size_t i = 0; i < n; ++i) b[i] = dir[i] ? 0.0 : b[i] - ku[i];
  for (double v : b)
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite right-hand side");

  const double bnorm = std::sqrt(dot_masked(b, b, dir));
  std::size_t unknowns = 0;
  for (char d : dir) unknowns += !d;
  const int max_it = opts.max_iterations > 0 ? opts.max_iterations
                                             : static_cast<int>(200.0 * std::sqrt(static_cast<double>(unknowns))) + 10;
  if (stats) *stats = {};
  if (bnorm == 0.0) return ScalarField(g, u);

  std::shared_ptr<const FastDiagonal> fd;
  std::vector<double> diag;
  if (opts.preconditioner == Preconditioner::FastDiagonal) fd = fast_diagonal_for(g);
  else diag = stiffness_diagonal(g);

  std::vector<double> packed;
  auto precondition = [&](const std::vector<double>& r, std::vector<double>& z) {
    z.assign(n, 0.0);
    if (!fd) {
      for (std::size_t i = 0; i < n; ++i)
        if (!dir[i]) z[i] = r[i] / diag[i];
      return;
    }
    const FreeBox& fb = fd->box();
    packed.resize(static_cast<std::size_t>(fb.count[0]) * fb.count[1] * fb.count[2]);
    std::size_t p = 0;
    for (int k = 0; k < fb.count[2]; ++k)
      for (int j = 0; j < fb.count[1]; ++j)
        for (int i = 0; i < fb.count[0]; ++i) packed[p++] = r[g.index(fb.first[0] + i, fb.first[1] + j, fb.first[2] + k)];
    fd->apply(packed);
    p = 0;
    for (int k = 0; k < fb.count[2]; ++k)
      for (int j = 0; j < fb.count[1]; ++j)
        for (int i = 0; i < fb.count[0]; ++i) z[g.index(fb.first[0] + i, fb.first[1] + j, fb.first[2] + k)] = packed[p++];
  };

  std::vector<double> x(n, 0.0), r = b, z, pdir, q;
  precondition(r, z);
  pdir = z;
  double rz = dot_masked(r, z, dir);
  double rel = 1.0;
  int it = 0;
  while (it < max_it) {
    apply_stiffness(g, pdir, q);
    for (std::size_t i = 0; i < n; ++i)
      if (dir[i]) q[i] = 0.0;
    const double alpha = rz / dot_masked(pdir, q, dir);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * pdir[i];
      r[i] -= alpha * q[i];
    }
    ++it;
    rel = std::sqrt(dot_masked(r, r, dir)) / bnorm;
    if (rel <= opts.rel_tol) break;
    precondition(r, z);
    const double rz_new = dot_masked(r, z, dir);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i) pdir[i] = z[i] + beta * pdir[i];
  }
  if (stats) *stats = {it, rel};
  if (!(rel <= opts.rel_tol))
    throw std::runtime_error("PCG did not converge: relative residual " + std::to_string(rel) + " after " +
                             std::to_string(it) + " iterations");
  for (std::size_t i = 0; i < n; ++i)
    if (!dir[i]) u[i] = x[i];
  return ScalarField(g, u);
}

SolverOptions solver_options(const ProblemConfig& cfg) {
  SolverOptions o;
  o.preconditioner = cfg.preconditioner;
  return o;
}

namespace {

// min(1, chi_Omega + chi_eps) and chi_Omega at the nodes.
std::pair<std::vector<double>, std::vector<double>> indicator(const ProblemConfig& cfg, double eps) {
  const GridSpec& g = cfg.grid;
  std::vector<double> base(g.size(), 0.0);
  if (cfg.omega_box) base = box_fraction(g, cfg.omega_box->first, cfg.omega_box->second).values;
  std::vector<double> pert = base;
  if (eps > 0.0) {
    const auto chi = char_fraction(g, cfg.x0, eps, cfg.shape);
    for (std::size_t i = 0; i < pert.size(); ++i) pert[i] = std::min(1.0, pert[i] + chi.values[i]);
  }
  return {pert, base};
}

}  // namespace

std::vector<double> state_source(const ProblemConfig& cfg, double eps) {
  const auto chi = indicator(cfg, eps).first;
  const auto f1 = nodal(cfg.grid, cfg.f1), f2 = nodal(cfg.grid, cfg.f2);
  std::vector<double> f(chi.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = f2[i] + (f1[i] - f2[i]) * chi[i];
  return f;
}

ScalarField solve_state(const ProblemConfig& cfg, double eps) {
  PoissonProblem pb;
  pb.grid = cfg.grid;
  pb.source = state_source(cfg, eps);
  const Polynomial uD = cfg.u_D, uN = cfg.u_N;
  pb.bc.dirichlet = [uD](const Vec& x) { return uD(x); };
  if (!uN.is_zero()) pb.bc.neumann = [uN](const Vec& x, int) { return uN(x); };
  return solve(pb, solver_options(cfg));
}

ScalarField solve_delta(const ProblemConfig& cfg, double eps) {
  const auto [pert, base] = indicator(cfg, eps);
  const auto f1 = nodal(cfg.grid, cfg.f1), f2 = nodal(cfg.grid, cfg.f2);
  PoissonProblem pb;
  pb.grid = cfg.grid;
  pb.source.resize(pert.size());
  for (std::size_t i = 0; i < pert.size(); ++i) pb.source[i] = (f1[i] - f2[i]) * (pert[i] - base[i]);
  return solve(pb, solver_options(cfg));
}

ScalarField solve_adjoint_p0(const ProblemConfig& cfg, const ScalarField& u0) {
  if (!u0.grid.same_as(cfg.grid)) throw std::invalid_argument("state and config grids differ");
  const auto us = nodal(cfg.grid, cfg.u_star);
  std::vector<double> e(us.size());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = u0.values[i] - us[i];
  PoissonProblem pb;
  pb.grid = cfg.grid;
  if (cfg.cost == CostKind::L2) {
    pb.source.resize(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) pb.source[i] = -2.0 * cfg.alpha1 * e[i];
  } else {
    apply_stiffness(cfg.grid, e, pb.load);
    for (double& v : pb.load) v *= -2.0 * cfg.alpha2;
  }
  return solve(pb, solver_options(cfg));
}

CorrectorContext make_corrector_context(const ProblemConfig& cfg) {
  CorrectorContext ctx;
  ctx.cfg = &cfg;
  ctx.jet = make_data_jet(cfg.f1, cfg.f2, cfg.u_star, cfg.x0, cfg.n_max);
  ctx.moments = compute_moments(cfg.shape, cfg.n_max);
  return ctx;
}

bool CorrectorData::is_zero() const {
  for (const auto& t : terms)
    if (!t.is_zero()) return false;
  return source == 0.0 && (source_field.empty() || source_scale == 0.0);
}

MultipoleTerm times_log(const MultipoleTerm& t) {
  MultipoleTerm out(t.dim(), t.label(), t.index(), t.source_order());
  for (const auto& p : t.pieces()) {
    if (p.log) throw std::invalid_argument("term already carries ln|x|");
    out.add_piece(p.r_pow, true, p.q);
  }
  return out;
}

CorrectorData corrector_data(const std::string& name, int k, const CorrectorContext& ctx) {
  const ProblemConfig& cfg = *ctx.cfg;
  const int dim = cfg.dim;
  if (k < 1) throw std::invalid_argument("corrector order must be >= 1");
  CorrectorData d;
  if (name == "v") {
    for (int j = 1; j <= k; ++j) d.terms.push_back(multipole_R(k - j + 1, j, ctx.jet, ctx.moments).scaled(-1.0));
    return d;
  }
  if (cfg.cost == CostKind::H1) throw std::invalid_argument("corrector '" + name + "' is not part of the H1 cascade");
  if (name == "w") {
    for (int l = 1; l <= k; ++l)
      d.terms.push_back(multipole_S(k - l, l, ctx.jet, ctx.moments, cfg.alpha1).scaled(-1.0));
    return d;
  }
  if (name == "m") {
    d.source_field = "v";
    d.source_scale = -cfg.alpha1;
    if (k == 1) d.source_scale = 0.0;  // v^(1) = 0
    return d;
  }
  if (name == "n") {
    d.source = -cfg.alpha1 * log_constant_b(k, ctx.jet, ctx.moments);
    return d;
  }
  if (name.size() == 2 && name[0] == 's' && name[1] >= '1' && name[1] <= '9') {
    const int i = name[1] - '0';
    if (k < 2) return d;
    const auto ab = leading_AB(k, ctx.jet, ctx.moments, cfg.alpha1);
    if (dim == 3) {
      if (i > 3) throw std::invalid_argument("3-d has correctors s1..s3 only");
      d.terms.push_back(ab[i - 1].scaled(-1.0));
      return d;
    }
    // ab = {A2, A1, A0, B2, B1, B0}
    if (i <= 6) {
      const MultipoleTerm& A = ab[(i - 1) / 2];
      d.terms.push_back(i % 2 == 1 ? times_log(A).scaled(-1.0) : A);
    } else {
      d.terms.push_back(ab[3 + (i - 7)].scaled(-1.0));
    }
    return d;
  }
  throw std::invalid_argument("unknown corrector '" + name + "'");
}

BoundaryData boundary_from_terms(const std::vector<MultipoleTerm>& terms, const Vec& x0, int dim) {
  BoundaryData bc;
  bc.dirichlet = [terms, x0](const Vec& x) { return eval_sum(terms, sub(x, x0)); };
  bc.neumann = [terms, x0, dim](const Vec& x, int face) {
    return dot(gradient_sum(terms, sub(x, x0)), kNormals[face], dim);
  };
  return bc;
}

const ScalarField& CorrectorSet::at(const std::string& name, int k) const {
  auto it = fields_.find({name, k});
  if (it == fields_.end()) throw std::out_of_range("corrector " + name + "^(" + std::to_string(k) + ") not solved");
  return it->second;
}

void CorrectorSet::put(const std::string& name, int k, ScalarField f, bool zero) {
  fields_[{name, k}] = std::move(f);
  zero_[{name, k}] = zero;
}

bool CorrectorSet::is_zero(const std::string& name, int k) const {
  auto it = zero_.find({name, k});
  if (it == zero_.end()) throw std::out_of_range("corrector " + name + "^(" + std::to_string(k) + ") not solved");
  return it->second;
}

CorrectorSet solve_correctors(const std::vector<CorrectorKey>& plan, const CorrectorContext& ctx) {
  const ProblemConfig& cfg = *ctx.cfg;
  std::vector<CorrectorKey> first, second;
  auto add = [](std::vector<CorrectorKey>& v, const CorrectorKey& key) {
    if (std::find(v.begin(), v.end(), key) == v.end()) v.push_back(key);
  };
  for (const auto& key : plan) {
    if (key.first == "m") {
      add(second, key);
      add(first, {"v", key.second});
    } else {
      add(first, key);
    }
  }
  CorrectorSet set(cfg.dim);
  auto run_phase = [&](const std::vector<CorrectorKey>& keys) {
    std::vector<ScalarField> out(keys.size());
    std::vector<char> zero(keys.size(), 0);
    std::vector<CorrectorData> data(keys.size());
    for (std::size_t i = 0; i < keys.size(); ++i) {
      data[i] = corrector_data(keys[i].first, keys[i].second, ctx);
      if (!data[i].source_field.empty() && data[i].source_scale != 0.0 &&
          set.is_zero(data[i].source_field, keys[i].second))
        data[i].source_scale = 0.0;
    }
    parallel_for(keys.size(), [&](std::size_t i) {
      const CorrectorData& d = data[i];
      if (d.is_zero()) {
        out[i] = ScalarField(cfg.grid);
        zero[i] = 1;
        return;
      }
      PoissonProblem pb;
      pb.grid = cfg.grid;
      if (!d.terms.empty()) pb.bc = boundary_from_terms(d.terms, cfg.x0, cfg.dim);
      if (d.source != 0.0) pb.source.assign(cfg.grid.size(), d.source);
      if (!d.source_field.empty() && d.source_scale != 0.0) {
        const ScalarField& src = set.at(d.source_field, keys[i].second);
        pb.source.resize(cfg.grid.size());
        for (std::size_t p = 0; p < pb.source.size(); ++p) pb.source[p] = d.source_scale * src.values[p];
      }
      out[i] = solve(pb, solver_options(cfg));
    });
    for (std::size_t i = 0; i < keys.size(); ++i) set.put(keys[i].first, keys[i].second, std::move(out[i]), zero[i]);
  };
  run_phase(first);
  run_phase(second);
  return set;
}

std::vector<CorrectorKey> full_corrector_plan(int max_k, CostKind cost, int dim) {
  std::vector<CorrectorKey> plan;
  for (int k = 1; k <= max_k; ++k) plan.push_back({"v", k});
  if (cost == CostKind::L2) {
    for (int k = 1; k <= max_k; ++k) {
      plan.push_back({"w", k});
      plan.push_back({"m", k});
      plan.push_back({"n", k});
      for (int i = 1; i <= (dim == 2 ? 9 : 3); ++i) plan.push_back({"s" + std::to_string(i), k});
    }
  }
  return plan;
}

}  // namespace topoderiv
