#include "helixguard/qp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace helixguard {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// In-place inverse of an upper-triangular block by recursive 2x2 splitting:
// inv([A B; 0 D]) = [inv(A), -inv(A) B inv(D); 0, inv(D)].
void invert_upper_in_place(Eigen::Ref<Eigen::MatrixXd> U, Eigen::MatrixXd& work) {
  const auto n = U.rows();
  if (n <= 16) {
    for (Eigen::Index j = n - 1; j >= 0; --j) {
      U(j, j) = 1.0 / U(j, j);
      for (Eigen::Index i = j - 1; i >= 0; --i) {
        double acc = 0.0;
        for (Eigen::Index k = i + 1; k <= j; ++k) {
          acc += U(i, k) * U(k, j);
        }
        U(i, j) = -acc / U(i, i);
      }
    }
    return;
  }
  const auto h = n / 2;
  invert_upper_in_place(U.topLeftCorner(h, h), work);
  invert_upper_in_place(U.bottomRightCorner(n - h, n - h), work);
  work.resize(h, n - h);
  work.noalias() = U.topLeftCorner(h, h).triangularView<Eigen::Upper>() *
                   U.topRightCorner(h, n - h);
  U.topRightCorner(h, n - h).noalias() =
      -work * U.bottomRightCorner(n - h, n - h).triangularView<Eigen::Upper>();
}

Eigen::MatrixXd upper_inverse(const Eigen::MatrixXd& U) {
  Eigen::MatrixXd X = U.triangularView<Eigen::Upper>();
  Eigen::MatrixXd work;
  invert_upper_in_place(X, work);
  return X;
}

// Working data of the Goldfarb-Idnani iteration. J = L^-T Q, R upper
// triangular such that the first q columns of J span the active normals.
class DualActiveSet {
 public:
  DualActiveSet(const QpProblem& qp, const QpOptions& opts)
      : qp_(qp), opts_(opts), n_(qp.num_vars()), m_(static_cast<int>(qp.lbA.size())),
        me_(static_cast<int>(qp.b_eq.size())) {}

  QpSolution run();

 private:
  // Constraint in the one-sided form n'z >= b.
  [[nodiscard]] bool exists(int id) const;
  [[nodiscard]] double rhs(int id) const;
  [[nodiscard]] double slack(int id, const Eigen::VectorXd& z, const Eigen::VectorXd& az) const;
  void normal(int id, Eigen::VectorXd& out) const;
  void compute_d(int id);

  void update_z();
  void update_r();
  bool hot_start(Eigen::VectorXd& x, std::vector<char>& is_active);
  bool add_constraint();
  void delete_constraint(int id);
  /// Recomputes the primal point and multipliers of the final working set
  /// from the factors, dropping the drift of the incremental updates.
  void polish(Eigen::VectorXd& x);

  const QpProblem& qp_;
  const QpOptions& opts_;
  int n_;
  int m_;
  int me_;

  Eigen::MatrixXd J_;
  Eigen::MatrixXd R_;
  Eigen::VectorXd d_;
  Eigen::VectorXd z_;
  Eigen::VectorXd r_;
  Eigen::VectorXd u_;
  Eigen::VectorXd np_;
  std::vector<int> active_;  // active constraint ids, equalities encoded as -(e+1)
  int q_ = 0;
  double r_norm_ = 1.0;
};

bool DualActiveSet::exists(int id) const {
  if (id < 0) {
    return true;
  }
  return std::isfinite(rhs(id));
}

double DualActiveSet::rhs(int id) const {
  if (id < 0) {
    return qp_.b_eq[-id - 1];
  }
  if (id < n_) {
    return qp_.lb.size() ? qp_.lb[id] : -kInf;
  }
  if (id < 2 * n_) {
    return qp_.ub.size() ? -qp_.ub[id - n_] : -kInf;
  }
  if (id < 2 * n_ + m_) {
    return qp_.lbA[id - 2 * n_];
  }
  return -qp_.ubA[id - 2 * n_ - m_];
}

double DualActiveSet::slack(int id, const Eigen::VectorXd& z, const Eigen::VectorXd& az) const {
  if (id < n_) {
    return z[id] - rhs(id);
  }
  if (id < 2 * n_) {
    return -z[id - n_] - rhs(id);
  }
  if (id < 2 * n_ + m_) {
    return az[id - 2 * n_] - rhs(id);
  }
  return -az[id - 2 * n_ - m_] - rhs(id);
}

void DualActiveSet::normal(int id, Eigen::VectorXd& out) const {
  if (id < 0) {
    out = qp_.A_eq.row(-id - 1).transpose();
  } else if (id < n_) {
    out.setZero(n_);
    out[id] = 1.0;
  } else if (id < 2 * n_) {
    out.setZero(n_);
    out[id - n_] = -1.0;
  } else if (id < 2 * n_ + m_) {
    out = qp_.A.row(id - 2 * n_).transpose();
  } else {
    out = -qp_.A.row(id - 2 * n_ - m_).transpose();
  }
}

void DualActiveSet::compute_d(int id) {
  if (id >= 0 && id < n_) {
    d_ = J_.row(id).transpose();
  } else if (id >= n_ && id < 2 * n_) {
    d_ = -J_.row(id - n_).transpose();
  } else {
    d_.noalias() = J_.transpose() * np_;
  }
}

void DualActiveSet::update_z() {
  const int free = n_ - q_;
  if (free > 0) {
    z_.noalias() = J_.rightCols(free) * d_.tail(free);
  } else {
    z_.setZero();
  }
}

void DualActiveSet::update_r() {
  if (q_ > 0) {
    r_.head(q_) =
        R_.topLeftCorner(q_, q_).triangularView<Eigen::Upper>().solve(d_.head(q_));
  }
}

bool DualActiveSet::add_constraint() {
  for (int j = n_ - 1; j >= q_ + 1; --j) {
    double cc = d_[j - 1];
    double ss = d_[j];
    const double h = std::hypot(cc, ss);
    if (h == 0.0) {
      continue;
    }
    d_[j] = 0.0;
    ss /= h;
    cc /= h;
    if (cc < 0.0) {
      cc = -cc;
      ss = -ss;
      d_[j - 1] = -h;
    } else {
      d_[j - 1] = h;
    }
    const double xny = ss / (1.0 + cc);
    auto c0 = J_.col(j - 1);
    auto c1 = J_.col(j);
    for (int k = 0; k < n_; ++k) {
      const double t1 = c0[k];
      const double t2 = c1[k];
      c0[k] = t1 * cc + t2 * ss;
      c1[k] = xny * (t1 + c0[k]) - t2;
    }
  }
  ++q_;
  R_.col(q_ - 1).head(q_) = d_.head(q_);
  if (std::abs(d_[q_ - 1]) <= std::numeric_limits<double>::epsilon() * r_norm_) {
    return false;
  }
  r_norm_ = std::max(r_norm_, std::abs(d_[q_ - 1]));
  return true;
}

void DualActiveSet::delete_constraint(int id) {
  int qq = -1;
  for (int i = me_; i < q_; ++i) {
    if (active_[i] == id) {
      qq = i;
      break;
    }
  }
  if (qq < 0) {
    throw std::logic_error("qp: attempt to drop a constraint that is not active");
  }
  for (int i = qq; i < q_ - 1; ++i) {
    active_[i] = active_[i + 1];
    u_[i] = u_[i + 1];
    R_.col(i) = R_.col(i + 1);
  }
  active_[q_ - 1] = active_[q_];
  u_[q_ - 1] = u_[q_];
  active_[q_] = 0;
  u_[q_] = 0.0;
  R_.col(q_ - 1).setZero();
  --q_;
  if (q_ == 0) {
    return;
  }
  for (int j = qq; j < q_; ++j) {
    double cc = R_(j, j);
    double ss = R_(j + 1, j);
    const double h = std::hypot(cc, ss);
    if (h == 0.0) {
      continue;
    }
    cc /= h;
    ss /= h;
    R_(j + 1, j) = 0.0;
    if (cc < 0.0) {
      R_(j, j) = -h;
      cc = -cc;
      ss = -ss;
    } else {
      R_(j, j) = h;
    }
    const double xny = ss / (1.0 + cc);
    for (int k = j + 1; k < q_; ++k) {
      const double t1 = R_(j, k);
      const double t2 = R_(j + 1, k);
      R_(j, k) = t1 * cc + t2 * ss;
      R_(j + 1, k) = xny * (t1 + R_(j, k)) - t2;
    }
    auto c0 = J_.col(j);
    auto c1 = J_.col(j + 1);
    for (int k = 0; k < n_; ++k) {
      const double t1 = c0[k];
      const double t2 = c1[k];
      c0[k] = t1 * cc + t2 * ss;
      c1[k] = xny * (c0[k] + t1) - t2;
    }
  }
}


// Builds J, R, multipliers and the iterate for an initial working set of
// hinted simple bounds. With H ordered as [F B], J = [J1 J2] where
// J2 = [L_FF^-T; 0] and J1 = [-H_FF^-1 H_FB; I] U^-T, S = H_BB - H_BF H_FF^-1 H_FB = U U'.
bool DualActiveSet::hot_start(Eigen::VectorXd& x, std::vector<char>& is_active) {
  std::vector<int> bounds;
  for (int id : *opts_.hint) {
    if (id >= 0 && id < 2 * n_ && exists(id)) {
      bounds.push_back(id);
    }
  }
  std::vector<int> var_side(n_, -1);
  for (int round = 0; round < 3 && !bounds.empty(); ++round) {
    std::fill(var_side.begin(), var_side.end(), -1);
    std::vector<int> kept;
    for (int id : bounds) {
      const int v = id < n_ ? id : id - n_;
      if (var_side[v] < 0) {
        var_side[v] = id;
        kept.push_back(id);
      }
    }
    bounds.swap(kept);
    std::vector<int> free_vars;
    std::vector<int> fixed_vars;
    for (int v = 0; v < n_; ++v) {
      (var_side[v] < 0 ? free_vars : fixed_vars).push_back(v);
    }
    const int nf = static_cast<int>(free_vars.size());
    const int nb = static_cast<int>(fixed_vars.size());
    if (nf == 0) {
      return false;
    }
    const Eigen::MatrixXd H_ff = qp_.H(free_vars, free_vars);
    const Eigen::MatrixXd H_fb = qp_.H(free_vars, fixed_vars);
    Eigen::LLT<Eigen::MatrixXd> llt(H_ff);
    if (llt.info() != Eigen::Success) {
      return false;
    }
    Eigen::VectorXd xb(nb);
    for (int k = 0; k < nb; ++k) {
      const int id = var_side[fixed_vars[k]];
      xb[k] = id < n_ ? rhs(id) : -rhs(id);
    }
    Eigen::VectorXd rhs_f = -qp_.g(free_vars);
    rhs_f.noalias() -= H_fb * xb;
    const Eigen::VectorXd xf = llt.solve(rhs_f);
    Eigen::VectorXd cand(n_);
    cand(free_vars) = xf;
    cand(fixed_vars) = xb;
    const Eigen::VectorXd grad = qp_.H * cand + qp_.g;

    std::vector<int> negative;
    Eigen::VectorXd mult(nb);
    for (int k = 0; k < nb; ++k) {
      const int v = fixed_vars[k];
      mult[k] = var_side[v] < n_ ? grad[v] : -grad[v];
      if (mult[k] < 0.0) {
        negative.push_back(var_side[v]);
      }
    }
    if (!negative.empty()) {
      std::erase_if(bounds, [&](int id) {
        return std::find(negative.begin(), negative.end(), id) != negative.end();
      });
      continue;
    }

    const bool coupled = !H_fb.isZero(0.0);
    const Eigen::MatrixXd HinvHfb =
        coupled ? Eigen::MatrixXd(llt.solve(H_fb)) : Eigen::MatrixXd::Zero(nf, nb);
    Eigen::MatrixXd S = qp_.H(fixed_vars, fixed_vars);
    if (coupled) {
      S.noalias() -= H_fb.transpose() * HinvHfb;
    }
    // Upper factor S = U U' from the Cholesky factor of the reversed matrix.
    const Eigen::MatrixXd S_rev = S.reverse();
    Eigen::LLT<Eigen::MatrixXd> llt_s(S_rev);
    if (llt_s.info() != Eigen::Success) {
      return false;
    }
    const Eigen::MatrixXd U = Eigen::MatrixXd(llt_s.matrixL()).reverse();
    const Eigen::MatrixXd U_inv_t = U.transpose().triangularView<Eigen::Lower>().solve(
        Eigen::MatrixXd::Identity(nb, nb));

    J_.setZero(n_, n_);
    Eigen::MatrixXd top = -HinvHfb * U_inv_t;
    for (int k = 0; k < nb; ++k) {
      for (int i = 0; i < nf; ++i) {
        J_(free_vars[i], k) = top(i, k);
      }
      for (int i = 0; i < nb; ++i) {
        J_(fixed_vars[i], k) = U_inv_t(i, k);
      }
    }
    const Eigen::MatrixXd Lff_inv_t = upper_inverse(llt.matrixU());
    for (int c = 0; c < nf; ++c) {
      for (int i = 0; i < nf; ++i) {
        J_(free_vars[i], nb + c) = Lff_inv_t(i, c);
      }
    }
    for (int k = 0; k < nb; ++k) {
      const int id = var_side[fixed_vars[k]];
      const double sign = id < n_ ? 1.0 : -1.0;
      // Column k of R holds J1' n_k, upper triangular by construction.
      R_.col(k).head(k + 1) = sign * J_.row(fixed_vars[k]).head(k + 1).transpose();
      active_[k] = id;
      u_[k] = mult[k];
      is_active[id] = 1;
      r_norm_ = std::max(r_norm_, std::abs(R_(k, k)));
    }
    q_ = nb;
    x = cand;
    return true;
  }
  return false;
}

void DualActiveSet::polish(Eigen::VectorXd& x) {
  const auto J1 = J_.leftCols(q_);
  const auto J2 = J_.rightCols(n_ - q_);
  Eigen::VectorXd b(q_);
  for (int k = 0; k < q_; ++k) {
    b[k] = rhs(active_[k]);
  }
  const auto R = R_.topLeftCorner(q_, q_).triangularView<Eigen::Upper>();
  Eigen::VectorXd z = -J2 * (J2.transpose() * qp_.g);
  if (q_ > 0) {
    z.noalias() += J1 * R.transpose().solve(b);
  }
  if (!z.allFinite() || (z - x).lpNorm<Eigen::Infinity>() > 1e-6 * (1.0 + x.lpNorm<Eigen::Infinity>())) {
    return;
  }
  x = z;
  if (q_ > 0) {
    const Eigen::VectorXd u = R.solve(J1.transpose() * (qp_.H * x + qp_.g));
    for (int k = 0; k < q_; ++k) {
      u_[k] = active_[k] < 0 ? u[k] : std::max(0.0, u[k]);
    }
  }
}

QpSolution DualActiveSet::run() {
  QpSolution sol;
  const int n_one_sided = 2 * n_ + 2 * m_;
  const int max_iter =
      opts_.max_iterations > 0 ? opts_.max_iterations : 10 * (n_ + n_one_sided) + 10;

  R_ = Eigen::MatrixXd::Zero(n_, n_);
  d_.resize(n_);
  z_.resize(n_);
  r_ = Eigen::VectorXd::Zero(n_ + 1);
  u_ = Eigen::VectorXd::Zero(n_ + 1);
  active_.assign(n_ + 1, 0);
  r_norm_ = 1.0;
  q_ = 0;

  std::vector<char> is_active(n_one_sided, 0);
  std::vector<char> excluded(n_one_sided, 0);
  std::vector<char> hinted(n_one_sided, 0);
  Eigen::VectorXd x;
  const bool hot = opts_.hint != nullptr && me_ == 0 && hot_start(x, is_active);
  if (!hot) {
    R_.setZero(n_, n_);
    std::fill(active_.begin(), active_.end(), 0);
    std::fill(is_active.begin(), is_active.end(), 0);
    u_.setZero();
    r_norm_ = 1.0;
    q_ = 0;
    Eigen::LLT<Eigen::MatrixXd> llt(qp_.H);
    if (llt.info() != Eigen::Success) {
      sol.status = QpStatus::kNotConvex;
      sol.z = Eigen::VectorXd::Zero(n_);
      return sol;
    }
    J_ = upper_inverse(llt.matrixU());
    x = llt.solve(-qp_.g);
  }

  // Equality constraints: full steps, never dropped.
  for (int e = 0; e < me_; ++e) {
    const int id = -(e + 1);
    normal(id, np_);
    compute_d(id);
    update_z();
    update_r();
    const double ztn = z_.dot(np_);
    const double viol = np_.dot(x) - rhs(id);
    if (std::abs(ztn) <= std::numeric_limits<double>::epsilon() * np_.norm()) {
      sol.status = QpStatus::kInfeasible;  // dependent equality rows
      sol.z = x;
      return sol;
    }
    const double t2 = -viol / ztn;
    x += t2 * z_;
    u_[q_] = t2;
    u_.head(q_) -= t2 * r_.head(q_);
    active_[q_] = id;
    if (!add_constraint()) {
      sol.status = QpStatus::kInfeasible;
      sol.z = x;
      return sol;
    }
  }

  if (opts_.hint != nullptr) {
    for (int id : *opts_.hint) {
      if (id >= 0 && id < n_one_sided) {
        hinted[id] = 1;
      }
    }
  }

  Eigen::VectorXd az(m_);
  int iter = 0;
  QpStatus status = QpStatus::kOptimal;

  while (true) {
    if (++iter > max_iter) {
      status = QpStatus::kMaxIterations;
      break;
    }
    if (m_ > 0) {
      az.noalias() = qp_.A * x;
    }
    // Select the violated constraint to add: hinted ones first.
    int p = -1;
    double worst = 0.0;
    bool worst_hinted = false;
    for (int id = 0; id < n_one_sided; ++id) {
      if (is_active[id] || excluded[id] || !exists(id)) {
        continue;
      }
      const double s = slack(id, x, az);
      const double tol = opts_.feasibility_tol * (1.0 + std::abs(rhs(id)));
      if (s >= -tol) {
        continue;
      }
      const bool h = hinted[id] != 0;
      if (p < 0 || (h && !worst_hinted) || (h == worst_hinted && s < worst)) {
        p = id;
        worst = s;
        worst_hinted = h;
      }
    }
    if (p < 0) {
      break;
    }

    normal(p, np_);
    u_[q_] = 0.0;
    active_[q_] = p;
    double sp = worst;
    bool restart = false;

    while (!restart) {
      compute_d(p);
      update_z();
      update_r();

      // Partial (dual) step length.
      double t1 = kInf;
      int drop = -1;
      for (int k = me_; k < q_; ++k) {
        if (r_[k] > 0.0) {
          const double ratio = u_[k] / r_[k];
          if (ratio < t1) {
            t1 = ratio;
            drop = active_[k];
          }
        }
      }
      // Full (primal) step length.
      double t2 = kInf;
      const double ztn = z_.dot(np_);
      if (z_.squaredNorm() > std::numeric_limits<double>::epsilon() && ztn > 0.0) {
        t2 = -sp / ztn;
      }
      const double t = std::min(t1, t2);
      if (!std::isfinite(t)) {
        status = QpStatus::kInfeasible;
        sol.z = x;
        sol.status = status;
        sol.iterations = iter;
        return sol;
      }
      if (!std::isfinite(t2)) {
        u_.head(q_) -= t * r_.head(q_);
        u_[q_] += t;
        is_active[drop] = 0;
        delete_constraint(drop);
        continue;
      }
      x += t * z_;
      u_.head(q_) -= t * r_.head(q_);
      u_[q_] += t;
      if (t == t2) {
        if (!add_constraint()) {
          // Linearly dependent with the active set: exclude and retry.
          --q_;
          R_.col(q_).setZero();
          excluded[p] = 1;
          u_[q_] = 0.0;
        } else {
          is_active[p] = 1;
        }
        restart = true;
      } else {
        is_active[drop] = 0;
        delete_constraint(drop);
        if (m_ > 0 && p >= 2 * n_) {
          az.noalias() = qp_.A * x;
        }
        sp = slack(p, x, az);
      }
    }
  }

  if (status == QpStatus::kOptimal) {
    polish(x);
  }
  sol.status = status;
  sol.iterations = iter;
  sol.z = x;
  sol.objective = 0.5 * x.dot(qp_.H * x) + qp_.g.dot(x);
  sol.y_bounds = Eigen::VectorXd::Zero(n_);
  sol.y_general = Eigen::VectorXd::Zero(m_);
  sol.y_eq = Eigen::VectorXd::Zero(me_);
  for (int k = 0; k < q_; ++k) {
    const int id = active_[k];
    const double mult = u_[k];
    if (id < 0) {
      sol.y_eq[-id - 1] = mult;
      continue;
    }
    sol.active.push_back(id);
    if (id < n_) {
      sol.y_bounds[id] += mult;
    } else if (id < 2 * n_) {
      sol.y_bounds[id - n_] -= mult;
    } else if (id < 2 * n_ + m_) {
      sol.y_general[id - 2 * n_] += mult;
    } else {
      sol.y_general[id - 2 * n_ - m_] -= mult;
    }
  }
  std::sort(sol.active.begin(), sol.active.end());
  return sol;
}

}  // namespace

QpProblem QpProblem::unconstrained(const Eigen::MatrixXd& H, const Eigen::VectorXd& g) {
  QpProblem qp;
  qp.H = H;
  qp.g = g;
  const auto n = g.size();
  qp.A_eq.resize(0, n);
  qp.A.resize(0, n);
  qp.lb = Eigen::VectorXd::Constant(n, -kInf);
  qp.ub = Eigen::VectorXd::Constant(n, kInf);
  return qp;
}

const char* to_string(QpStatus s) {
  switch (s) {
    case QpStatus::kOptimal:
      return "optimal";
    case QpStatus::kInfeasible:
      return "infeasible";
    case QpStatus::kMaxIterations:
      return "max_iterations";
    case QpStatus::kNotConvex:
      return "not_convex";
  }
  return "unknown";
}

QpSolution solve_qp(const QpProblem& qp, const QpOptions& opts) {
  const auto n = qp.g.size();
  if (qp.H.rows() != n || qp.H.cols() != n) {
    throw std::invalid_argument("qp: Hessian dimension mismatch");
  }
  if (qp.A.rows() != qp.lbA.size() || qp.A.rows() != qp.ubA.size() ||
      (qp.A.rows() > 0 && qp.A.cols() != n)) {
    throw std::invalid_argument("qp: general constraint dimension mismatch");
  }
  if (qp.A_eq.rows() != qp.b_eq.size() || (qp.A_eq.rows() > 0 && qp.A_eq.cols() != n)) {
    throw std::invalid_argument("qp: equality constraint dimension mismatch");
  }
  if ((qp.lb.size() != 0 && qp.lb.size() != n) || (qp.ub.size() != 0 && qp.ub.size() != n)) {
    throw std::invalid_argument("qp: bound dimension mismatch");
  }
  DualActiveSet solver(qp, opts);
  return solver.run();
}

double KktReport::max() const {
  return std::max({stationarity, primal, dual, complementarity});
}

KktReport kkt_residuals(const QpProblem& qp, const QpSolution& sol) {
  const Eigen::VectorXd& z = sol.z;
  const auto n = z.size();
  KktReport rep;
  if (n != qp.num_vars() || sol.y_bounds.size() != n ||
      sol.y_general.size() != qp.A.rows()) {
    rep.stationarity = std::numeric_limits<double>::infinity();
    return rep;
  }
  Eigen::VectorXd grad = qp.H * z + qp.g;
  if (sol.y_eq.size() > 0) {
    grad -= qp.A_eq.transpose() * sol.y_eq;
  }
  if (sol.y_general.size() > 0) {
    grad -= qp.A.transpose() * sol.y_general;
  }
  grad -= sol.y_bounds;
  rep.stationarity = grad.lpNorm<Eigen::Infinity>();

  auto side = [&](double value, double lo, double hi, double y) {
    double viol = 0.0;
    if (std::isfinite(lo)) viol = std::max(viol, lo - value);
    if (std::isfinite(hi)) viol = std::max(viol, value - hi);
    rep.primal = std::max(rep.primal, viol);
    if (y > 0.0) {
      rep.dual = std::max(rep.dual, std::isfinite(lo) ? 0.0 : y);
      if (std::isfinite(lo)) rep.complementarity = std::max(rep.complementarity, y * (value - lo));
    } else if (y < 0.0) {
      rep.dual = std::max(rep.dual, std::isfinite(hi) ? 0.0 : -y);
      if (std::isfinite(hi)) rep.complementarity = std::max(rep.complementarity, -y * (hi - value));
    }
  };
  for (Eigen::Index i = 0; i < n; ++i) {
    const double lo = qp.lb.size() ? qp.lb[i] : -kInf;
    const double hi = qp.ub.size() ? qp.ub[i] : kInf;
    side(z[i], lo, hi, sol.y_bounds[i]);
  }
  if (qp.A.rows() > 0) {
    const Eigen::VectorXd az = qp.A * z;
    for (Eigen::Index k = 0; k < az.size(); ++k) {
      side(az[k], qp.lbA[k], qp.ubA[k], sol.y_general[k]);
    }
  }
  if (qp.A_eq.rows() > 0) {
    rep.primal = std::max(rep.primal, (qp.A_eq * z - qp.b_eq).lpNorm<Eigen::Infinity>());
  }
  return rep;
}

}  // namespace helixguard
