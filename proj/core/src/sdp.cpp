#include "qed/sdp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "qed/rng.hpp"

namespace qed {

using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

double SdpInstance::abs_sum() const {
  double s = 0;
  for (double x : a) s += std::abs(x);
  return s;
}

double edge_rate_scale(const LeafGraph& graph, const SdpModel& model) {
  const double n = graph.leaf_count();
  const double big_n = graph.active_count();
  if (model.finite_size) {
    const double pairs = (big_n - 2.0) * (big_n - 3.0) / 2.0;
    return model.c_prime / (n * n * n) * std::max(pairs, 0.0) / 2.0;
  }
  const double gamma = graph.gamma();
  return gamma * gamma * model.c_prime / 4.0 / n;
}

SdpInstance build_sdp(const LeafGraph& graph, double delta_hat, const SdpModel& model) {
  if (graph.active_count() < 2) throw QedError("build_sdp: need at least 2 active leaves");
  if (!(delta_hat > 0.0 && delta_hat < 1.0)) throw QedError("build_sdp: delta_hat must lie in (0,1)");
  SdpInstance inst;
  inst.leaves = graph.active_leaves();
  inst.n = graph.leaf_count();
  inst.delta_hat = delta_hat;
  inst.c_over_n = edge_rate_scale(graph, model);
  const double rho = rho_bounds(delta_hat + 4.0 * delta_hat * delta_hat, inst.c_over_n, model.eta, model.err).lower;
  inst.q = (model.finite_size && model.weighting == EdgeWeighting::Presence) ? -std::expm1(-rho) : rho;

  const auto mult = multiplicity_matrix(graph);
  const size_t k = inst.leaves.size();
  inst.a.assign(k * k, 0.0);
  for (size_t i = 0; i < k; ++i)
    for (size_t j = 0; j < k; ++j) {
      if (i == j) continue;
      const int m = mult[i][j];
      const double w = model.weighting == EdgeWeighting::Presence ? (m > 0 ? 1.0 : 0.0) : static_cast<double>(m);
      inst.a[i * k + j] = w - inst.q;
    }
  return inst;
}

void parse_penalty_schedule(const std::string& text, SdpOptions& opts) {
  std::istringstream in(text);
  std::string kind, init, growth;
  std::getline(in, kind, ':');
  std::getline(in, init, ':');
  std::getline(in, growth);
  if (kind != "geometric" || init.empty() || growth.empty())
    throw std::invalid_argument("penalty schedule must look like geometric:<init>:<growth>");
  opts.penalty_init = std::stod(init);
  opts.penalty_growth = std::stod(growth);
  if (!(opts.penalty_init > 0) || !(opts.penalty_growth >= 1))
    throw std::invalid_argument("penalty schedule needs init > 0 and growth >= 1");
}

double GramSolution::inner(int i, int j) const {
  const double* u = vectors.data() + static_cast<size_t>(i) * static_cast<size_t>(rank);
  const double* v = vectors.data() + static_cast<size_t>(j) * static_cast<size_t>(rank);
  double s = 0;
  for (int t = 0; t < rank; ++t) s += u[t] * v[t];
  return s;
}

namespace {

using Dense = Eigen::MatrixXd;

// Euclidean projection of z (entry `skip` excluded and set to 1) onto {z >= 0, sum <= cap}.
void project_capped(double* z, int n, int skip, double cap, std::vector<double>& buf) {
  double sum = 0;
  for (int j = 0; j < n; ++j) {
    if (j == skip) continue;
    z[j] = std::max(0.0, z[j]);
    sum += z[j];
  }
  z[skip] = 1.0;
  if (sum <= cap) return;
  buf.clear();
  for (int j = 0; j < n; ++j)
    if (j != skip && z[j] > 0) buf.push_back(z[j]);
  std::sort(buf.begin(), buf.end(), std::greater<>());
  double cum = 0, tau = 0;
  for (size_t k = 0; k < buf.size(); ++k) {
    cum += buf[k];
    tau = (cum - cap) / static_cast<double>(k + 1);
    if (k + 1 == buf.size() || buf[k + 1] <= tau) break;
  }
  for (int j = 0; j < n; ++j)
    if (j != skip) z[j] = std::max(0.0, z[j] - tau);
}

void normalize_rows(Mat& v) {
  for (Eigen::Index i = 0; i < v.rows(); ++i) {
    const double nrm = v.row(i).norm();
    if (nrm > 0) v.row(i) /= nrm;
    else {
      v.row(i).setZero();
      v(i, 0) = 1.0;
    }
  }
}

double objective_of(const SdpInstance& inst, const Mat& v) {
  Mat g = v * v.transpose();
  double obj = 0;
  const int n = inst.size();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) obj += inst.at(i, j) * g(i, j);
  return obj;
}

// Lifts every row by a shared extra coordinate so all inner products become nonnegative.
void lift_nonnegative(Mat& v) {
  Mat g = v * v.transpose();
  double worst = 0;
  for (Eigen::Index i = 0; i < g.rows(); ++i)
    for (Eigen::Index j = i + 1; j < g.cols(); ++j) worst = std::max(worst, -g(i, j));
  if (worst <= 0) return;
  const double s2 = worst / (1.0 + worst);
  Mat out(v.rows(), v.cols() + 1);
  out.leftCols(v.cols()) = std::sqrt(1.0 - s2) * v;
  out.col(v.cols()).setConstant(std::sqrt(s2));
  v = std::move(out);
}

// Mixes each row with a private coordinate, scaling every off-diagonal inner product by the
// same factor so no row sum exceeds b. Nonnegativity and unit norms are preserved.
void shrink_to_spread(Mat& v, double b) {
  Mat g = v * v.transpose();
  double scale = 1.0;
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    const double off = g.row(i).sum() - g(i, i);
    if (1.0 + off > b && off > 0) scale = std::min(scale, std::max(0.0, b - 1.0) / off);
  }
  if (scale >= 1.0) return;
  const Eigen::Index n = v.rows(), k = v.cols();
  Mat out = Mat::Zero(n, k + n);
  out.leftCols(k) = std::sqrt(scale) * v;
  for (Eigen::Index i = 0; i < n; ++i) out(i, k + i) = std::sqrt(1.0 - scale);
  v = std::move(out);
}

// Factor of the PSD iterate: eigenvectors scaled by sqrt(eigenvalue), largest first.
Mat factor(const Eigen::SelfAdjointEigenSolver<Dense>& es, int rank_cap) {
  const Eigen::Index n = es.eigenvalues().size();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = n - 1; i >= 0; --i)
    if (es.eigenvalues()(i) > 1e-12) keep.push_back(i);
  if (rank_cap > 0 && static_cast<int>(keep.size()) > rank_cap) keep.resize(static_cast<size_t>(rank_cap));
  if (keep.empty()) keep.push_back(n - 1);
  Mat v(n, static_cast<Eigen::Index>(keep.size()));
  for (size_t c = 0; c < keep.size(); ++c)
    v.col(static_cast<Eigen::Index>(c)) =
        es.eigenvectors().col(keep[c]) * std::sqrt(std::max(0.0, es.eigenvalues()(keep[c])));
  return v;
}

}  // namespace

void audit_solution(const SdpInstance& inst, GramSolution& sol) {
  const int n = sol.size();
  double neg = 0, norm = 0, spread = 0;
  for (int i = 0; i < n; ++i) {
    double row = 0;
    for (int j = 0; j < n; ++j) {
      const double g = sol.inner(i, j);
      row += g;
      if (i == j) norm = std::max(norm, std::abs(g - 1.0));
      else neg = std::max(neg, -g);
    }
    spread = std::max(spread, (row - inst.spread_bound()) / n);
  }
  sol.nonneg_violation = neg;
  sol.norm_violation = norm;
  sol.spread_violation = std::max(0.0, spread);
}
GramSolution solve_sdp(const SdpInstance& inst, const SdpOptions& opts) {
  const int n = inst.size();
  if (n < 1) throw QedError("solve_sdp: empty instance");
  // ADMM on X = Z with X PSD and every row of Z in {diag 1, offdiag >= 0, row sum <= b}.
  // Z need not be symmetric; the consensus makes it so at the fixed point.
  const Dense a = Eigen::Map<const Mat>(inst.a.data(), n, n);
  // The penalty is relative to the mean off-diagonal |A|.
  const double a_scale = n > 1 ? std::max(1e-12, a.cwiseAbs().sum() / (static_cast<double>(n) * (n - 1))) : 1.0;
  const double cap = inst.spread_bound() - 1.0;
  Dense z = Dense::Identity(n, n), u = Dense::Zero(n, n), x(n, n), z_old;
  Eigen::SelfAdjointEigenSolver<Dense> es;
  std::vector<double> buf;
  double sigma = opts.penalty_init;
  GramSolution sol;
  int it = 0;
  for (; it < opts.max_iters; ++it) {
    Dense m = z - u + a / (sigma * a_scale);
    m = (m + m.transpose()) * 0.5;
    es.compute(m);
    x.noalias() = es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).asDiagonal() * es.eigenvectors().transpose();
    z_old = z;
    z = x + u;
    for (int j = 0; j < n; ++j) project_capped(z.col(j).data(), n, j, cap, buf);
    u += x - z;
    const double primal = (x - z).cwiseAbs().maxCoeff();
    const double dual = sigma * (z - z_old).cwiseAbs().maxCoeff();
    if (primal <= opts.tol_feas && dual <= opts.tol_feas) {
      sol.converged = true;
      ++it;
      break;
    }
    // Residual balancing.
    if (it % 20 == 19 && opts.penalty_growth > 1.0) {
      if (primal > 10 * dual) {
        sigma *= opts.penalty_growth;
        u /= opts.penalty_growth;
      } else if (dual > 10 * primal) {
        sigma /= opts.penalty_growth;
        u *= opts.penalty_growth;
      }
    }
  }
  es.compute((z + z.transpose()) * 0.5);
  const double raw = (a.array() * x.array()).sum();
  Mat v = factor(es, opts.rank);
  normalize_rows(v);
  lift_nonnegative(v);
  shrink_to_spread(v, inst.spread_bound());

  sol.leaves = inst.leaves;
  sol.rank = static_cast<int>(v.cols());
  sol.vectors.assign(v.data(), v.data() + v.size());
  sol.objective = objective_of(inst, v);
  sol.iterations = it;
  audit_solution(inst, sol);
  if (!sol.converged) sol.warning = "ADMM stopped at max_iters";
  if (raw - sol.objective > opts.tol_obj * std::max(1.0, inst.abs_sum())) {
    if (!sol.warning.empty()) sol.warning += "; ";
    sol.warning += "feasibility polish lost more than tol_obj";
  }
  return sol;
}

Rounding round_solution(const GramSolution& sol, std::uint64_t seed) {
  Rounding r;
  if (sol.size() == 0) return r;
  Rng rng(seed);
  const int u = static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(sol.size())));
  r.pivot = sol.leaves[static_cast<size_t>(u)];
  for (int v = 0; v < sol.size(); ++v) {
    // |u - v|^2 = 2 - 2<u,v> for unit vectors
    const double d2 = sol.inner(u, u) + sol.inner(v, v) - 2.0 * sol.inner(u, v);
    if (v == u || d2 <= 1.0) r.ball.push_back(sol.leaves[static_cast<size_t>(v)]);
  }
  std::sort(r.ball.begin(), r.ball.end());
  return r;
}

std::pair<int, int> cluster_size_bounds(int n, double delta) {
  const int lo = static_cast<int>(std::ceil(delta * n - 1e-9));
  const int hi = static_cast<int>(std::floor(2.0 * delta * n + 1e-9));
  return {std::max(lo, 1), std::max(hi, std::max(lo, 1))};
}

QedResult qed(const LeafGraph& graph, const std::vector<bool>& active, double delta, double delta_hat,
              const SdpModel& model, const SdpOptions& opts, std::uint64_t seed) {
  const LeafGraph g = restrict(graph, active);
  const auto [lo, hi] = cluster_size_bounds(graph.leaf_count(), delta);
  if (g.active_count() < lo) {
    std::ostringstream msg;
    msg << "qed: active set of " << g.active_count() << " leaves is smaller than delta*n = " << lo;
    throw QedError(msg.str());
  }
  QedResult res;
  if (g.active_count() == 1) {
    res.cluster = g.active_leaves();
    res.pivot = res.cluster[0];
    res.ball_size = 1;
    return res;
  }
  SdpInstance inst = build_sdp(g, delta_hat, model);
  res.q = inst.q;
  res.solution = solve_sdp(inst, opts);
  res.objective = res.solution.objective;
  Rounding rnd = round_solution(res.solution, derive_seed(seed, "round"));
  res.pivot = rnd.pivot;
  res.ball_size = static_cast<int>(rnd.ball.size());

  const int want = std::clamp(res.ball_size, lo, std::min(hi, inst.size()));
  res.clamped = want != res.ball_size;
  if (!res.clamped) {
    res.cluster = rnd.ball;
    return res;
  }
  // Nearest to the pivot first; ties by leaf id.
  const int u = static_cast<int>(std::find(inst.leaves.begin(), inst.leaves.end(), rnd.pivot) - inst.leaves.begin());
  std::vector<int> order(static_cast<size_t>(inst.size()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
    if (x == u || y == u) return x == u && y != u;
    return res.solution.inner(u, x) > res.solution.inner(u, y);
  });
  for (int i = 0; i < want; ++i) res.cluster.push_back(inst.leaves[static_cast<size_t>(order[static_cast<size_t>(i)])]);
  std::sort(res.cluster.begin(), res.cluster.end());
  return res;
}

}  // namespace qed
