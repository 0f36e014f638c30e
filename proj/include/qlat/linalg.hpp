#ifndef QLAT_LINALG_HPP
#define QLAT_LINALG_HPP

#include <Eigen/Dense>
#include <complex>
#include <random>
#include <vector>

namespace qlat {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

inline Mat dagger(const Mat& a) { return a.adjoint(); }
inline Mat comm(const Mat& a, const Mat& b) { return a * b - b * a; }
inline Mat acomm(const Mat& a, const Mat& b) { return a * b + b * a; }
inline Mat hermitize(const Mat& a) { return 0.5 * (a + a.adjoint()); }

Mat kron(const Mat& a, const Mat& b);

// largest singular value / sum of singular values
double op_norm(const Mat& a);
double trace_norm(const Mat& a);

// tr(rho a^* b)
cplx gns_inner(const Mat& rho, const Mat& a, const Mat& b);

// column-stacking vectorization and its inverse
Vec vec_stack(const Mat& a);
Mat unvec(const Vec& v, Eigen::Index rows, Eigen::Index cols);

// superoperators in column-stacking coordinates: vec(a X b) = (b^T (x) a) vec(X)
Mat sop_left(const Mat& a);              // X -> a X
Mat sop_right(const Mat& b);             // X -> X b
Mat sop_sandwich(const Mat& a, const Mat& b);  // X -> a X b
Mat sop_comm(const Mat& k);              // X -> [k, X]

// Heisenberg-picture dissipator of a single jump operator,
//   X -> l^*[X, l] + [l^*, X] l = 2 l^* X l - l^* l X - X l^* l
Mat sop_dissipator(const Mat& l);
// its trace dual acting on states, rho -> 2 l rho l^* - l^* l rho - rho l^* l
Mat sop_dissipator_dual(const Mat& l);

Mat expm(const Mat& a);

// acc += w * kron(x, y) without forming the product; zero entries of x are
// skipped, which keeps superoperator assembly cheap for embedded operators
void accumulate_kron(Mat& acc, const Mat& x, const Mat& y, cplx w);

// deterministic pseudo-random test data
Mat random_matrix(Eigen::Index n, std::mt19937_64& gen);
Mat random_hermitian(Eigen::Index n, std::mt19937_64& gen);
Mat random_density(Eigen::Index n, std::mt19937_64& gen);

// convenience generators
Mat pauli(int j);                        // j = 0..3
Mat matrix_unit(Eigen::Index n, Eigen::Index i, Eigen::Index j);

}  // namespace qlat

#endif
