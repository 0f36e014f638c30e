#include "qlat/local_op.hpp"

namespace qlat {

namespace {

std::vector<int> complement(const std::vector<int>& sites, int m) {
  std::vector<int> rest;
  rest.reserve(m - sites.size());
  std::size_t p = 0;
  for (int s = 0; s < m; ++s) {
    if (p < sites.size() && sites[p] == s) {
      ++p;
    } else {
      rest.push_back(s);
    }
  }
  return rest;
}

void check_sites(const std::vector<int>& sites, const Space& sp) {
  for (std::size_t p = 0; p < sites.size(); ++p) {
    require(sites[p] >= 0 && sites[p] < sp.num_sites(),
            "site index out of range");
    require(p == 0 || sites[p - 1] < sites[p],
            "site list must be strictly increasing");
  }
}

// base-n digit expansion of a subspace index into full-space offsets,
// first listed site = most significant digit
std::vector<long> subspace_offsets(const std::vector<int>& sites,
                                   const Space& sp) {
  long dloc = 1;
  for (std::size_t p = 0; p < sites.size(); ++p) dloc *= sp.n;
  std::vector<long> strides(sites.size());
  for (std::size_t p = 0; p < sites.size(); ++p)
    strides[p] = sp.stride(sites[p]);
  std::vector<long> base(dloc, 0);
  for (long i = 0; i < dloc; ++i) {
    long rem = i;
    for (std::size_t p = sites.size(); p-- > 0;) {
      base[i] += (rem % sp.n) * strides[p];
      rem /= sp.n;
    }
  }
  return base;
}

}  // namespace

Mat embed(const Mat& op, const std::vector<int>& sites, const Space& sp) {
  check_sites(sites, sp);
  long dloc = 1;
  for (std::size_t p = 0; p < sites.size(); ++p) dloc *= sp.n;
  require(op.rows() == dloc && op.cols() == dloc,
          "operator dimension does not match the site list");
  const std::vector<int> rest = complement(sites, sp.num_sites());
  const std::vector<long> loc = subspace_offsets(sites, sp);
  const std::vector<long> env = subspace_offsets(rest, sp);
  Mat out = Mat::Zero(sp.dim(), sp.dim());
  for (long r : env)
    for (long i = 0; i < dloc; ++i)
      for (long j = 0; j < dloc; ++j) out(r + loc[i], r + loc[j]) = op(i, j);
  return out;
}

Mat partial_trace(const Mat& f, const std::vector<int>& traced,
                  const std::vector<Mat>& weights, const Space& sp) {
  check_sites(traced, sp);
  require(f.rows() == sp.dim() && f.cols() == sp.dim(),
          "operator dimension does not match the volume");
  require(weights.empty() || weights.size() == traced.size(),
          "need one weight per traced site (or none)");
  long dloc = 1;
  for (std::size_t p = 0; p < traced.size(); ++p) dloc *= sp.n;
  Mat w;
  if (weights.empty()) {
    w = Mat::Identity(dloc, dloc);
  } else {
    w = Mat::Ones(1, 1);
    for (const Mat& wi : weights) {
      require(wi.rows() == sp.n && wi.cols() == sp.n,
              "weight dimension must equal the local dimension");
      w = kron(w, wi);
    }
  }
  const std::vector<int> kept = complement(traced, sp.num_sites());
  const std::vector<long> loc = subspace_offsets(traced, sp);
  const std::vector<long> env = subspace_offsets(kept, sp);
  const long dkept = static_cast<long>(env.size());
  Mat out = Mat::Zero(dkept, dkept);
  for (long ir = 0; ir < dkept; ++ir)
    for (long jr = 0; jr < dkept; ++jr) {
      cplx acc = 0.0;
      for (long t = 0; t < dloc; ++t)
        for (long s = 0; s < dloc; ++s)
          acc += w(t, s) * f(env[ir] + loc[s], env[jr] + loc[t]);
      out(ir, jr) = acc;
    }
  return out;
}

Mat cond_expectation(const Mat& f, int site, const Mat& weight,
                     const Space& sp) {
  const Mat reduced = partial_trace(f, {site}, {weight}, sp);
  return embed(reduced, complement({site}, sp.num_sites()), sp);
}

}  // namespace qlat
