#include "helixguard/condense.hpp"

#include <limits>
#include <stdexcept>

namespace helixguard {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

void check(bool ok, const char* what) {
  if (!ok) {
    throw std::invalid_argument(what);
  }
}
}  // namespace

void LqSubproblem::validate() const {
  check(N >= 1 && nx >= 1 && nu >= 1, "lq: empty dimensions");
  check(static_cast<int>(A.size()) == N && static_cast<int>(B.size()) == N &&
            static_cast<int>(d.size()) == N,
        "lq: dynamics blocks must have N entries");
  check(dx0.size() == nx, "lq: initial deviation dimension");
  check(static_cast<int>(C.size()) == N + 1 && static_cast<int>(res.size()) == N + 1 &&
            static_cast<int>(W.size()) == N + 1,
        "lq: output blocks must have N+1 entries");
  check(static_cast<int>(Ru.size()) == N && static_cast<int>(u_lin.size()) == N &&
            static_cast<int>(du_lb.size()) == N && static_cast<int>(du_ub.size()) == N,
        "lq: input blocks must have N entries");
  for (int i = 0; i <= N; ++i) {
    check(C[i].cols() == nx && C[i].rows() == res[i].size() && W[i].size() == res[i].size(),
          "lq: output block dimension");
  }
  if (!bounded_states.empty()) {
    check(static_cast<int>(x_lin.size()) == N + 1, "lq: bounded states need x_lin");
    check(x_lb.size() == static_cast<Eigen::Index>(bounded_states.size()) &&
              x_ub.size() == x_lb.size(),
          "lq: state bound dimension");
  }
  check(soft.empty() || static_cast<int>(soft.size()) == N + 1, "lq: soft rows must be N+1");
}

QpProblem condense(const LqSubproblem& lq) {
  lq.validate();
  const int N = lq.N;
  const int nx = lq.nx;
  const int nu = lq.nu;
  const int n_u = N * nu;
  const int n_s = lq.num_soft();
  const int n = n_u + n_s;
  const int n_xb = static_cast<int>(lq.bounded_states.size());
  const int m = N * n_xb + n_s;

  QpProblem qp;
  qp.H = Eigen::MatrixXd::Zero(n, n);
  qp.g = Eigen::VectorXd::Zero(n);
  qp.A_eq.resize(0, n);
  qp.b_eq.resize(0);
  qp.A = Eigen::MatrixXd::Zero(m, n);
  qp.lbA = Eigen::VectorXd::Constant(m, -kInf);
  qp.ubA = Eigen::VectorXd::Constant(m, kInf);
  qp.lb = Eigen::VectorXd::Constant(n, -kInf);
  qp.ub = Eigen::VectorXd::Constant(n, kInf);

  // G maps du to dx_i; only its first i*nu columns are non-zero at stage i.
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(nx, n_u);
  Eigen::MatrixXd G_next(nx, n_u);
  Eigen::VectorXd c = lq.dx0;
  Eigen::MatrixXd Y;
  Eigen::MatrixXd WY;

  int row = 0;
  for (int i = 0; i <= N; ++i) {
    const int cols = i * nu;
    const Eigen::VectorXd y0 = lq.res[i] + lq.C[i] * c;
    if (cols > 0) {
      Y.noalias() = lq.C[i] * G.leftCols(cols);
      WY = lq.W[i].cwiseSqrt().asDiagonal() * Y;
      qp.H.topLeftCorner(cols, cols).selfadjointView<Eigen::Lower>().rankUpdate(
          WY.transpose(), 2.0);
      qp.g.head(cols).noalias() +=
          2.0 * WY.transpose() * (lq.W[i].cwiseSqrt().cwiseProduct(y0));

      for (int k = 0; k < n_xb; ++k) {
        const int j = lq.bounded_states[k];
        qp.A.row(row).head(cols) = G.row(j).head(cols);
        const double value = lq.x_lin[i][j] + c[j];
        qp.lbA[row] = lq.x_lb[k] - value;
        qp.ubA[row] = lq.x_ub[k] - value;
        ++row;
      }
    }
    if (n_s > 0) {
      const SoftRow& sr = lq.soft[i];
      const int r = N * n_xb + i;
      if (cols > 0) {
        qp.A.row(r).head(cols).noalias() = sr.a.transpose() * G.leftCols(cols);
      }
      qp.A(r, n_u + i) = 1.0;
      qp.lbA[r] = -(sr.c + sr.a.dot(c));
    }
    if (i < N) {
      if (cols > 0) {
        G_next.leftCols(cols).noalias() = lq.A[i] * G.leftCols(cols);
      }
      G_next.middleCols(cols, nu) = lq.B[i];
      G.leftCols(cols + nu) = G_next.leftCols(cols + nu);
      c = lq.A[i] * c + lq.d[i];
    }
  }

  for (int i = 0; i < N; ++i) {
    const int off = i * nu;
    qp.H.diagonal().segment(off, nu) += 2.0 * lq.Ru[i];
    qp.g.segment(off, nu) += 2.0 * lq.Ru[i].cwiseProduct(lq.u_lin[i]);
    qp.lb.segment(off, nu) = lq.du_lb[i];
    qp.ub.segment(off, nu) = lq.du_ub[i];
  }
  for (int i = 0; i < n_s; ++i) {
    qp.g[n_u + i] = lq.soft_weight;
    qp.lb[n_u + i] = 0.0;
  }
  qp.H.diagonal().array() += lq.reg;
  qp.H.topLeftCorner(n_u, n_u).triangularView<Eigen::StrictlyUpper>() =
      qp.H.topLeftCorner(n_u, n_u).transpose();
  return qp;
}

QpProblem sparse_qp(const LqSubproblem& lq, double state_reg) {
  lq.validate();
  const int N = lq.N;
  const int nx = lq.nx;
  const int nu = lq.nu;
  const int n_x = (N + 1) * nx;
  const int n_u = N * nu;
  const int n_s = lq.num_soft();
  const int n = n_x + n_u + n_s;
  const int n_xb = static_cast<int>(lq.bounded_states.size());
  const int m = N * n_xb + n_s;
  const int me = (N + 1) * nx;

  QpProblem qp;
  qp.H = Eigen::MatrixXd::Zero(n, n);
  qp.g = Eigen::VectorXd::Zero(n);
  qp.A_eq = Eigen::MatrixXd::Zero(me, n);
  qp.b_eq = Eigen::VectorXd::Zero(me);
  qp.A = Eigen::MatrixXd::Zero(m, n);
  qp.lbA = Eigen::VectorXd::Constant(m, -kInf);
  qp.ubA = Eigen::VectorXd::Constant(m, kInf);
  qp.lb = Eigen::VectorXd::Constant(n, -kInf);
  qp.ub = Eigen::VectorXd::Constant(n, kInf);

  for (int i = 0; i <= N; ++i) {
    const int xo = i * nx;
    const Eigen::MatrixXd WC = lq.W[i].asDiagonal() * lq.C[i];
    qp.H.block(xo, xo, nx, nx) += 2.0 * lq.C[i].transpose() * WC;
    qp.g.segment(xo, nx) += 2.0 * WC.transpose() * lq.res[i];
    qp.H.block(xo, xo, nx, nx).diagonal().array() += state_reg;
  }
  for (int i = 0; i < N; ++i) {
    const int uo = n_x + i * nu;
    qp.H.block(uo, uo, nu, nu).diagonal() += 2.0 * lq.Ru[i];
    qp.H.block(uo, uo, nu, nu).diagonal().array() += lq.reg;
    qp.g.segment(uo, nu) += 2.0 * lq.Ru[i].cwiseProduct(lq.u_lin[i]);
    qp.lb.segment(uo, nu) = lq.du_lb[i];
    qp.ub.segment(uo, nu) = lq.du_ub[i];
  }
  for (int i = 0; i < n_s; ++i) {
    const int so = n_x + n_u + i;
    qp.H(so, so) += lq.reg;
    qp.g[so] = lq.soft_weight;
    qp.lb[so] = 0.0;
  }

  // dx_0 = dx0; dx_{i+1} - A dx_i - B du_i = d_i.
  qp.A_eq.block(0, 0, nx, nx).setIdentity();
  qp.b_eq.head(nx) = lq.dx0;
  for (int i = 0; i < N; ++i) {
    const int r = (i + 1) * nx;
    qp.A_eq.block(r, (i + 1) * nx, nx, nx).setIdentity();
    qp.A_eq.block(r, i * nx, nx, nx) = -lq.A[i];
    qp.A_eq.block(r, n_x + i * nu, nx, nu) = -lq.B[i];
    qp.b_eq.segment(r, nx) = lq.d[i];
  }

  int row = 0;
  for (int i = 1; i <= N; ++i) {
    for (int k = 0; k < n_xb; ++k) {
      const int j = lq.bounded_states[k];
      qp.A(row, i * nx + j) = 1.0;
      qp.lbA[row] = lq.x_lb[k] - lq.x_lin[i][j];
      qp.ubA[row] = lq.x_ub[k] - lq.x_lin[i][j];
      ++row;
    }
  }
  for (int i = 0; i < n_s; ++i) {
    const int r = N * n_xb + i;
    qp.A.row(r).segment(i * nx, nx) = lq.soft[i].a.transpose();
    qp.A(r, n_x + n_u + i) = 1.0;
    qp.lbA[r] = -lq.soft[i].c;
  }
  return qp;
}

std::vector<Eigen::VectorXd> expand_states(const LqSubproblem& lq, const Eigen::VectorXd& du) {
  std::vector<Eigen::VectorXd> dx(lq.N + 1);
  dx[0] = lq.dx0;
  for (int i = 0; i < lq.N; ++i) {
    dx[i + 1] = lq.A[i] * dx[i] + lq.B[i] * du.segment(i * lq.nu, lq.nu) + lq.d[i];
  }
  return dx;
}

}  // namespace helixguard
