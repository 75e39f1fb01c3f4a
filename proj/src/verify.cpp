#include "topoderiv/verify.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "topoderiv/io.hpp"
#include "topoderiv/potentials.hpp"
#include "topoderiv/threads.hpp"

namespace topoderiv {

double delta_J(const ProblemConfig& cfg, const ScalarField& u0, const ScalarField& delta) {
  if (!u0.grid.same_as(delta.grid)) throw std::invalid_argument("state and perturbation grids differ");
  const GridSpec& g = u0.grid;
  std::vector<double> e(g.size()), w(g.size());
  for (std::size_t i = 0; i < e.size(); ++i) {
    e[i] = u0.values[i] - cfg.u_star(g.node(i));
    w[i] = 2.0 * e[i] + delta.values[i];
  }
  // 2 e.A d + d.A d = (2e + d).A d
  if (cfg.cost == CostKind::H1) return cfg.alpha2 * energy_product(g, w, delta.values);
  const auto m = lumped_mass(g);
  double s = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) s += m[i] * w[i] * delta.values[i];
  return cfg.alpha1 * s;
}

ScalarField ball_delta(const ProblemConfig& cfg, const ScalarField& v2, double eps) {
  if (cfg.shape.kind != InclusionShape::Kind::Ball) throw std::invalid_argument("ball_delta needs the unit ball");
  if (cfg.f1.degree() > 0 || cfg.f2.degree() > 0) throw std::invalid_argument("ball_delta needs constant f1, f2");
  if (cfg.omega_box) throw std::invalid_argument("ball_delta needs an empty baseline Omega");
  const int d = cfg.dim;
  const double jump = cfg.f1({0, 0, 0}) - cfg.f2({0, 0, 0});
  const double b2 = -jump / 2.0;  // -(1/2 pi) int_B (f1 - f2)
  ScalarField out = v2;
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    const Vec y = scale(sub(v2.grid.node(i), cfg.x0), 1.0 / eps);
    const double U = ball_U2_closed(y, d, jump);
    out.values[i] = d == 2 ? eps * eps * (U + v2.values[i] + std::log(eps) * b2)
                           : eps * eps * U + eps * eps * eps * v2.values[i];
  }
  return out;
}

void check_resolved(const ProblemConfig& cfg, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  const auto chi = char_fraction(cfg.grid, cfg.x0, eps, cfg.shape);
  const auto m = lumped_mass(cfg.grid);
  double vol = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) vol += m[i] * chi.values[i];
  const double exact = std::pow(eps, cfg.dim) * compute_moments(cfg.shape, 0).measure();
  if (std::abs(vol - exact) > 1e-3 * exact)
    throw std::invalid_argument("unresolved inclusion at eps = " + std::to_string(eps) + ": discrete volume " +
                                std::to_string(vol) + " vs " + std::to_string(exact));
}

double direct_delta_J(const ProblemConfig& cfg, const ScalarField& u0, double eps) {
  check_resolved(cfg, eps);
  return delta_J(cfg, u0, solve_delta(cfg, eps));
}

std::vector<double> direct_delta_J(const ProblemConfig& cfg, const ScalarField& u0, const std::vector<double>& eps) {
  std::vector<double> out(eps.size());
  parallel_for(eps.size(), [&](std::size_t i) { out[i] = direct_delta_J(cfg, u0, eps[i]); });
  return out;
}

OrderFit fit_order(const std::vector<double>& eps, const std::vector<double>& residual, const ScaleFunction& next,
                   const std::vector<double>& noise, double floor_factor) {
  if (eps.size() != residual.size()) throw std::invalid_argument("eps and residual sizes differ");
  if (!noise.empty() && noise.size() != eps.size()) throw std::invalid_argument("eps and noise sizes differ");
  if (eps.size() < 4) throw std::invalid_argument("order fit needs at least 4 eps points");
  std::vector<std::size_t> idx(eps.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return eps[a] > eps[b]; });

  std::vector<double> xs, ys;
  for (std::size_t i : idx) {
    const double floor = noise.empty() ? 0.0 : floor_factor * std::abs(noise[i]);
    if (!(std::abs(residual[i]) > floor)) break;
    xs.push_back(std::log(std::abs(next(eps[i]))));
    ys.push_back(std::log(std::abs(residual[i])));
  }
  OrderFit f;
  f.points = static_cast<int>(xs.size());
  if (xs.size() < 3) {
    f.noise_limited = true;
    f.slope = f.intercept = std::numeric_limits<double>::quiet_NaN();
    return f;
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) mx += xs[i] / n, my += ys[i] / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy > 0 ? sxy * sxy / (sxx * syy) : 1.0;
  f.noise_limited = f.r2 < 0.9;
  return f;
}

Extraction extract_coefficients(const std::vector<double>& eps, const std::vector<double>& data,
                                const std::vector<ScaleFunction>& scales, const std::vector<int>& slots) {
  const std::size_t n = eps.size(), p = scales.size();
  if (data.size() != n) throw std::invalid_argument("eps and data sizes differ");
  if (p == 0) throw std::invalid_argument("no ladder columns to extract");
  if (!slots.empty() && slots.size() != p) throw std::invalid_argument("one slot label per column");
  if (n < p + 2) throw std::invalid_argument("extraction needs at least columns + 2 eps points");
  const auto [mn, mx] = std::minmax_element(eps.begin(), eps.end());
  if (*mx < 4.0 * *mn * (1 - 1e-12)) throw std::invalid_argument("eps points must span at least two octaves");

  Eigen::MatrixXd A(n, p);
  Eigen::VectorXd b(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = 1.0 / std::abs(scales[0](eps[i]));
    for (std::size_t k = 0; k < p; ++k) A(i, k) = w * scales[k](eps[i]);
    b(i) = w * data[i];
  }
  Eigen::VectorXd colscale(p);
  for (std::size_t k = 0; k < p; ++k) {
    colscale(k) = A.col(k).norm();
    if (colscale(k) == 0.0) colscale(k) = 1.0;
    A.col(k) /= colscale(k);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  Extraction ex;
  ex.condition = sv(p - 1) > 0 ? sv(0) / sv(p - 1) : std::numeric_limits<double>::infinity();
  ex.ill_conditioned = ex.condition > 1e10;
  if (ex.ill_conditioned) ex.guidance = "ill-conditioned ladder design; widen the eps span or extract fewer slots";
  const Eigen::VectorXd c = svd.solve(b);
  const Eigen::VectorXd r = A * c - b;
  const double dof = static_cast<double>(n - p);
  const double sigma2 = r.squaredNorm() / dof;
  // cov = sigma2 (A^T A)^-1 = sigma2 V S^-2 V^T
  const Eigen::MatrixXd V = svd.matrixV();
  for (std::size_t k = 0; k < p; ++k) {
    double var = 0.0;
    for (std::size_t j = 0; j < p; ++j) var += V(k, j) * V(k, j) / (sv(j) * sv(j));
    ex.coeff.push_back(c(k) / colscale(k));
    ex.stderr_.push_back(std::sqrt(sigma2 * var) / colscale(k));
    ex.slots.push_back(slots.empty() ? static_cast<int>(k) + 1 : slots[k]);
  }
  return ex;
}

SweepResult sweep(const std::vector<double>& eps_in, const std::vector<double>& dJ_in, const ExpansionLedger& ledger,
                  const std::vector<double>& noise_in) {
  const std::size_t n = eps_in.size();
  if (dJ_in.size() != n || (!noise_in.empty() && noise_in.size() != n))
    throw std::invalid_argument("sweep column sizes differ");
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return eps_in[a] > eps_in[b]; });
  SweepResult s;
  s.ledger = ledger;
  std::vector<double> noise;
  for (std::size_t i : idx) {
    if (!s.eps.empty() && !(eps_in[i] < s.eps.back())) throw std::invalid_argument("duplicate eps in sweep");
    s.eps.push_back(eps_in[i]);
    s.dJ.push_back(dJ_in[i]);
    if (!noise_in.empty()) noise.push_back(noise_in[i]);
  }
  const int order = ledger.order;
  s.predicted.assign(order + 1, std::vector<double>(n, 0.0));
  s.residual.assign(order + 1, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    s.residual[0][i] = s.dJ[i];
    for (int N = 1; N <= order; ++N) {
      for (const auto& e : ledger.entries)
        if (e.k == N) acc += e.scale(s.eps[i]) * e.coeff;
      s.predicted[N][i] = acc;
      s.residual[N][i] = s.dJ[i] - acc;
    }
  }
  const double measure = ledger.entries.empty() ? 1.0 : ledger.entries[0].scale.measure;
  if (n >= 4)
    for (int N = 0; N <= order; ++N) {
      OrderFit f = fit_order(s.eps, s.residual[N], ladder(N + 1, ledger.dim, measure), noise);
      f.N = N;
      s.fits.push_back(f);
    }
  const int slots = std::min<int>(order, static_cast<int>(n) - 2);
  if (slots >= 1 && s.eps.front() >= 4.0 * s.eps.back() * (1 - 1e-12)) {
    std::vector<ScaleFunction> cols;
    for (int k = 1; k <= slots; ++k) cols.push_back(ladder(k, ledger.dim, measure));
    s.extraction = extract_coefficients(s.eps, s.dJ, cols);
  }
  return s;
}

SweepResult sweep(const ProblemConfig& cfg, const ScalarField& u0, const ExpansionLedger& ledger,
                  const std::vector<double>& noise) {
  return sweep(cfg.eps, direct_delta_J(cfg, u0, cfg.eps), ledger, noise);
}

namespace {

nlohmann::json number_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); }

}  // namespace

std::string sweep_csv(const SweepResult& s) {
  const int order = static_cast<int>(s.predicted.size()) - 1;
  std::string out = "eps,dJ_direct";
  for (int N = 1; N <= order; ++N) out += ",pred_" + std::to_string(N);
  for (int N = 0; N <= order; ++N) out += ",r_" + std::to_string(N);
  out += "\n";
  for (std::size_t i = 0; i < s.eps.size(); ++i) {
    out += format_double(s.eps[i]) + "," + format_double(s.dJ[i]);
    for (int N = 1; N <= order; ++N) out += "," + format_double(s.predicted[N][i]);
    for (int N = 0; N <= order; ++N) out += "," + format_double(s.residual[N][i]);
    out += "\n";
  }
  return out;
}

nlohmann::json sweep_summary(const SweepResult& s) {
  nlohmann::json j;
  j["eps"] = s.eps;
  j["dJ_direct"] = s.dJ;
  j["fits"] = nlohmann::json::array();
  for (const auto& f : s.fits)
    j["fits"].push_back({{"N", f.N},
                         {"slope", number_or_null(f.slope)},
                         {"intercept", number_or_null(f.intercept)},
                         {"r2", f.r2},
                         {"points", f.points},
                         {"noise_limited", f.noise_limited}});
  nlohmann::json ex;
  ex["slots"] = s.extraction.slots;
  ex["coeff"] = s.extraction.coeff;
  ex["stderr"] = nlohmann::json::array();
  for (double v : s.extraction.stderr_) ex["stderr"].push_back(number_or_null(v));
  ex["condition"] = number_or_null(s.extraction.condition);
  ex["ill_conditioned"] = s.extraction.ill_conditioned;
  if (!s.extraction.guidance.empty()) ex["guidance"] = s.extraction.guidance;
  j["extraction"] = ex;
  j["ledger"] = ledger_to_json(s.ledger);
  return j;
}

}  // namespace topoderiv
