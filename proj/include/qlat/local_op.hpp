#ifndef QLAT_LOCAL_OP_HPP
#define QLAT_LOCAL_OP_HPP

#include "qlat/lattice.hpp"
#include "qlat/linalg.hpp"

namespace qlat {

// A finite volume of qudits: geometry plus the local Hilbert dimension n.
// The full Hilbert space is the tensor product over sites in enumeration
// order, the first site being the most significant tensor factor.
struct Space {
  Volume vol;
  int n = 2;

  Space() = default;
  Space(Volume v, int n_) : vol(std::move(v)), n(n_) {
    require(n >= 2, "local dimension must be at least 2");
    require(dim_check() <= (1L << 24), "full space too large");
  }

  int num_sites() const { return vol.num_sites(); }
  long dim() const { return dim_check(); }
  long stride(int p) const {  // weight of site p in the product index
    long s = 1;
    for (int q = p + 1; q < num_sites(); ++q) s *= n;
    return s;
  }

 private:
  long dim_check() const {
    long d = 1;
    for (int p = 0; p < vol.num_sites(); ++p) d *= n;
    return d;
  }
};

// Extend an operator living on the listed sites (strictly increasing site
// indices, tensor factors in that order) by the identity elsewhere.
Mat embed(const Mat& op, const std::vector<int>& sites, const Space& sp);

// Partial trace over the listed sites with one weight matrix per traced
// site; an empty weight list means plain (unweighted) partial trace.  The
// result acts on the remaining sites in enumeration order.
Mat partial_trace(const Mat& f, const std::vector<int>& traced,
                  const std::vector<Mat>& weights, const Space& sp);

// Weighted conditional expectation onto the complement of one site:
// f -> (partial trace of weight*f over the site) tensor identity at the site,
// returned in full dimension.
Mat cond_expectation(const Mat& f, int site, const Mat& weight,
                     const Space& sp);

}  // namespace qlat

#endif
