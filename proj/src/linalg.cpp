#include "qlat/linalg.hpp"

#include <unsupported/Eigen/MatrixFunctions>

namespace qlat {

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

double op_norm(const Mat& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(a);
  return svd.singularValues()(0);
}

double trace_norm(const Mat& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(a);
  return svd.singularValues().sum();
}

cplx gns_inner(const Mat& rho, const Mat& a, const Mat& b) {
  return (rho * a.adjoint() * b).trace();
}

Vec vec_stack(const Mat& a) {
  Vec v(a.size());
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i) v(k++) = a(i, j);
  return v;
}

Mat unvec(const Vec& v, Eigen::Index rows, Eigen::Index cols) {
  Mat a(rows, cols);
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) a(i, j) = v(k++);
  return a;
}

Mat sop_left(const Mat& a) {
  return kron(Mat::Identity(a.rows(), a.rows()), a);
}

Mat sop_right(const Mat& b) {
  return kron(b.transpose(), Mat::Identity(b.rows(), b.rows()));
}

Mat sop_sandwich(const Mat& a, const Mat& b) { return kron(b.transpose(), a); }

Mat sop_comm(const Mat& k) { return sop_left(k) - sop_right(k); }

Mat sop_dissipator(const Mat& l) {
  const Mat ll = l.adjoint() * l;
  return 2.0 * sop_sandwich(l.adjoint(), l) - sop_left(ll) - sop_right(ll);
}

Mat sop_dissipator_dual(const Mat& l) {
  const Mat ll = l.adjoint() * l;
  return 2.0 * sop_sandwich(l, l.adjoint()) - sop_left(ll) - sop_right(ll);
}

Mat expm(const Mat& a) { return a.exp(); }

void accumulate_kron(Mat& acc, const Mat& x, const Mat& y, cplx w) {
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      const cplx c = w * x(i, j);
      if (c == cplx(0.0)) continue;
      acc.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) += c * y;
    }
}

Mat random_matrix(Eigen::Index n, std::mt19937_64& gen) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Mat a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = cplx(nd(gen), nd(gen));
  return a;
}

Mat random_hermitian(Eigen::Index n, std::mt19937_64& gen) {
  return hermitize(random_matrix(n, gen));
}

Mat random_density(Eigen::Index n, std::mt19937_64& gen) {
  const Mat g = random_matrix(n, gen);
  Mat rho = g * g.adjoint();
  rho /= rho.trace();
  return hermitize(rho);
}

Mat pauli(int j) {
  Mat s(2, 2);
  switch (j) {
    case 0: s << 1, 0, 0, 1; break;
    case 1: s << 0, 1, 1, 0; break;
    case 2: s << 0, cplx(0, -1), cplx(0, 1), 0; break;
    case 3: s << 1, 0, 0, -1; break;
    default: throw std::invalid_argument("pauli index out of range");
  }
  return s;
}

Mat matrix_unit(Eigen::Index n, Eigen::Index i, Eigen::Index j) {
  Mat e = Mat::Zero(n, n);
  e(i, j) = 1.0;
  return e;
}

}  // namespace qlat
