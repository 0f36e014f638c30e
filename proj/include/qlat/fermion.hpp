#ifndef QLAT_FERMION_HPP
#define QLAT_FERMION_HPP

#include <string>
#include <vector>

#include "qlat/dynamics.hpp"
#include "qlat/lattice.hpp"
#include "qlat/linalg.hpp"

namespace qlat {

// Jordan-Wigner representation of the modes of a finite volume on C^{2^m}.
// Basis vectors are occupation states indexed by bitmasks with mode p stored
// in bit p, so the state for the occupied set X sits at index sum_{p in X} 2^p.
// Annihilators carry the alternating sign (-1)^{#{q in X : q < p}}, w flips
// the sign of odd states, and the dressed operators v_p = w a_p commute with
// every a_q, a_q* at q != p.
struct CarRep {
  Volume vol;
  double h = 0.0;      // field of the reference single-mode dynamics
  std::vector<Mat> a;  // annihilator per mode
  std::vector<Mat> ad; // creator per mode
  std::vector<Mat> v;  // w * a
  std::vector<Mat> vd; // ad * w
  Mat w;               // parity sign operator

  int modes() const { return static_cast<int>(a.size()); }
  long dim() const { return 1L << modes(); }
};

CarRep build_car(const Volume& vol, double h);

// Twisted derivations attached to mode x.  The first pair uses the dressed
// operators v, v*; the "bare" pair uses a, a* and shows up in the interaction
// bounds.  All four annihilate anything supported away from x.
Mat grad(const CarRep& rep, int x, const Mat& f);          //  w [v_x, f]
Mat grad_bar(const CarRep& rep, int x, const Mat& f);      // -w [v_x*, f]
Mat grad_bare(const CarRep& rep, int x, const Mat& f);     //  w [a_x, f]
Mat grad_bare_bar(const CarRep& rep, int x, const Mat& f); // -w [a_x*, f]

// Conditional expectation onto the algebra away from mode x (normalized
// single-mode trace in the dressed factorization).
Mat mode_expectation(const CarRep& rep, int x, const Mat& f);

// Residual of the gradient decomposition
//   f = E_x f + a_x* grad_x f + a_x grad_bar_x f - (D Dbar + Dbar D) f / 2
// with D_x = a_x* grad_x and Dbar_x = a_x grad_bar_x.
double decomposition_residual(const CarRep& rep, int x, const Mat& f);

RVec grad_profile(const CarRep& rep, const Mat& f);     // ||grad_x f|| per mode
RVec grad_bar_profile(const CarRep& rep, const Mat& f); // ||grad_bar_x f||
double fermi_seminorm(const CarRep& rep, const Mat& f); // sum of both profiles

double fermi_gap(double h); // 2 cosh(h/2)

// One thermalizing mode: amplitude e^{h/2} on the jump v*, e^{-h/2} on v.
Mat fermi_ou_mode(const CarRep& rep, int x);
Mat fermi_ou_generator(const CarRep& rep); // Heisenberg picture, sum over modes
Mat fermi_ou_dual(const CarRep& rep);      // Schroedinger picture counterpart
Mat gibbs_state(const CarRep& rep);        // product state e^{h n}/(1+e^h) per mode

// One interaction term; matrices live in the representation of the target
// volume.  k must be self-adjoint and even, jump must have definite parity.
struct FermionTerm {
  std::vector<int> sites; // support, ascending mode indices
  Mat k;                  // Hamiltonian part (0x0 when absent)
  Mat jump;               // jump operator (0x0 when absent)
  int parity = 0;         // declared parity of the jump
};

struct FermionModelSpec {
  std::string name = "fermion";
  double h = 1.0;
  std::vector<FermionTerm> terms;
};

// Nearest-neighbour hopping J (a_x* a_y + a_y* a_x), one term per unordered
// pair at distance one.
FermionModelSpec fermion_hopping(double J, double h, const CarRep& rep);

struct FermionVolumeGenerator {
  CarRep rep;
  FermionModelSpec spec;
  Mat l_free;  // sum of single-mode generators
  Mat l_pert;  // interaction part
  Mat l_total;
};

FermionVolumeGenerator fermion_assemble(const FermionModelSpec& spec, const CarRep& rep);
Mat fermion_schrodinger(const FermionVolumeGenerator& g);

// Interaction-commutation weights: theta bounds the defect of grad against
// the perturbation, theta_bar the defect of grad_bar.  Entry (x, y) collects
// the terms whose support contains y, differentiated at x.
RMat fermion_theta(const FermionVolumeGenerator& g);
RMat fermion_theta_bar(const FermionVolumeGenerator& g);
double fermion_C0(const FermionVolumeGenerator& g);

struct FermionCertificateReport {
  std::string model;
  int volume_sites = 0;
  bool periodic = false;
  double h = 0.0;
  double gap = 0.0;    // relaxation rate of the free dynamics, 2 cosh(h/2)
  double C0 = 0.0;
  double M = 0.0;      // max over columns y of sum_x (theta + theta_bar)
  double margin = 0.0; // gap - M
  bool pass = false;
};

FermionCertificateReport fermion_certify(const FermionModelSpec& spec, const CarRep& rep);

// Algebraic identity suite: anticommutation relations, sign operator,
// v-commutation, derivation tables, basis action.  Exact up to rounding.
CheckResult fermion_car_suite(const CarRep& rep, double tol);
// Gradient decomposition residual on random observables, every mode.
CheckResult fermion_decomposition_check(const CarRep& rep, int nobs, unsigned seed, double tol);
// grad/grad_bar shift the free generator by exactly -2 cosh(h/2).
CheckResult fermion_intertwining(const CarRep& rep, double tol);
// Norm inequalities for commutators against local dressed operators.
CheckResult fermion_commutator_bounds(const CarRep& rep, int nobs, unsigned seed, double tol);
// Defect of grad against the assembled interaction vs. the theta weights.
CheckResult fermion_generator_commutator(const FermionVolumeGenerator& g, int nobs, unsigned seed,
                                         double tol);
// Seminorm contraction at rate gap - M.
CheckResult fermion_contraction(const FermionVolumeGenerator& g, double t0, double t1, int npts,
                                int nobs, unsigned seed, double tol);
// Uniform convergence to the stationary value at rate gap - M with
// prefactor C0/(gap - M); observables are kept away from open boundaries.
CheckResult fermion_convergence(const FermionVolumeGenerator& g, double t0, double t1, int npts,
                                int nobs, unsigned seed, double tol);
// Stationarity and symmetry of the free dynamics in the product state.
CheckResult fermion_stationarity(const FermionVolumeGenerator& g, double tol);

std::vector<CheckResult> fermion_checks(const FermionModelSpec& spec, const CarRep& rep,
                                        unsigned seed, double tol_scale);

} // namespace qlat

#endif
