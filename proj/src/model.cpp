#include "qlat/model.hpp"

#include <algorithm>
#include <numeric>

namespace qlat {

namespace {

// reorder tensor factors: order[p] = original position of the p-th new factor
Mat permute_factors(const Mat& op, const std::vector<int>& order, int n) {
  const int k = static_cast<int>(order.size());
  long d = 1;
  for (int p = 0; p < k; ++p) d *= n;
  require(op.rows() == d && op.cols() == d, "factor permutation size mismatch");
  std::vector<long> map(d);  // new index -> old index
  for (long i = 0; i < d; ++i) {
    std::vector<int> digits(k);
    long rem = i;
    for (int p = k - 1; p >= 0; --p) {
      digits[p] = static_cast<int>(rem % n);
      rem /= n;
    }
    long old = 0;
    std::vector<int> old_digits(k);
    for (int p = 0; p < k; ++p) old_digits[order[p]] = digits[p];
    for (int p = 0; p < k; ++p) old = old * n + old_digits[p];
    map[i] = old;
  }
  Mat out(d, d);
  for (long i = 0; i < d; ++i)
    for (long j = 0; j < d; ++j) out(i, j) = op(map[i], map[j]);
  return out;
}

int term_count(const InteractionBlock& b) {
  if (!b.jumps.empty()) return static_cast<int>(b.jumps.size());
  return b.k.size() > 0 ? 1 : 0;
}

// Heisenberg-picture mixed dissipator a^*[., b] + [a^*, .]b accumulated into
// the superoperator; the usual dissipator is the diagonal case a = b.
void add_pair_dissipator(Mat& acc, const Mat& a, const Mat& b) {
  const long d = a.rows();
  const Mat ab = a.adjoint() * b;
  accumulate_kron(acc, b.transpose(), a.adjoint(), 2.0);
  accumulate_kron(acc, Mat::Identity(d, d), ab, -1.0);
  accumulate_kron(acc, ab.transpose(), Mat::Identity(d, d), -1.0);
}

void add_commutator(Mat& acc, const Mat& k, cplx w) {
  const long d = k.rows();
  accumulate_kron(acc, Mat::Identity(d, d), k, w);
  accumulate_kron(acc, k.transpose(), Mat::Identity(d, d), -w);
}

// trace dual of the single-jump dissipator, acting on states
void add_dissipator_dual(Mat& acc, const Mat& l) {
  const long d = l.rows();
  const Mat ll = l.adjoint() * l;
  accumulate_kron(acc, l.conjugate(), l, 2.0);
  accumulate_kron(acc, Mat::Identity(d, d), ll, -1.0);
  accumulate_kron(acc, ll.transpose(), Mat::Identity(d, d), -1.0);
}

}  // namespace

std::vector<int> translate_term(const InteractionBlock& b, int site,
                                const Volume& vol) {
  require(!b.offsets.empty(), "interaction block needs a nonempty support");
  require(b.anchor >= 0 && b.anchor < static_cast<int>(b.offsets.size()),
          "anchor index out of range");
  const Site base = vol.coords(site);
  std::vector<int> out;
  out.reserve(b.offsets.size());
  for (const Site& off : b.offsets) {
    Site target(base.size());
    for (std::size_t c = 0; c < base.size(); ++c)
      target[c] = base[c] + off[c] - b.offsets[b.anchor][c];
    const int idx = vol.index(target);
    if (idx < 0) return {};
    out.push_back(idx);
  }
  std::vector<int> sorted = out;
  std::sort(sorted.begin(), sorted.end());
  require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(),
          "volume too small: interaction support wraps onto itself");
  return out;
}

FiniteVolumeGenerator assemble(const ModelSpec& spec, const Volume& vol) {
  FiniteVolumeGenerator g;
  g.space = Space(vol, spec.n);
  g.spec = spec;
  g.site_gen =
      make_single_site(spec.n, spec.rho, spec.site_jumps, spec.basis_override);

  const int m = vol.num_sites();
  const int nj = static_cast<int>(spec.site_jumps.size());
  std::vector<bool> slot_deformed(nj, false);
  for (const InteractionBlock& b : spec.blocks)
    if (b.match_site_jumps) {
      require(static_cast<int>(b.jumps.size()) <= nj,
              "deforming block has more jumps than the one-site generator");
      for (std::size_t j = 0; j < b.jumps.size(); ++j) slot_deformed[j] = true;
    }

  std::vector<std::vector<bool>> covered(m, std::vector<bool>(nj, false));
  for (const InteractionBlock& b : spec.blocks) {
    require(term_count(b) > 0, "interaction block is empty");
    for (int x = 0; x < m; ++x) {
      const std::vector<int> raw = translate_term(b, x, vol);
      if (raw.empty()) {
        g.excluded_terms += term_count(b);
        continue;
      }
      // sort the support and permute the operators accordingly
      std::vector<int> order(raw.size());
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(),
                [&raw](int a, int c) { return raw[a] < raw[c]; });
      std::vector<int> sites(raw.size());
      for (std::size_t p = 0; p < raw.size(); ++p) sites[p] = raw[order[p]];
      const bool trivial_order =
          std::is_sorted(order.begin(), order.end());
      auto adapt = [&](const Mat& op) {
        return trivial_order ? op : permute_factors(op, order, spec.n);
      };

      if (b.jumps.empty()) {
        InteractionTerm t;
        t.sites = sites;
        t.k = adapt(b.k);
        g.terms.push_back(std::move(t));
        continue;
      }
      for (std::size_t j = 0; j < b.jumps.size(); ++j) {
        InteractionTerm t;
        t.sites = sites;
        if (j == 0 && b.k.size() > 0) t.k = adapt(b.k);
        t.jump = adapt(b.jumps[j]);
        if (b.match_site_jumps) {
          t.site = x;
          t.slot = static_cast<int>(j);
          covered[x][j] = true;
        }
        g.terms.push_back(std::move(t));
      }
    }
  }

  // one-site channels not deformed by any live block instance
  for (int x = 0; x < m; ++x)
    for (int j = 0; j < nj; ++j) {
      if (covered[x][j]) continue;
      InteractionTerm t;
      t.sites = {x};
      t.site = x;
      t.slot = j;
      t.jump = slot_deformed[j] ? Mat::Zero(spec.n, spec.n).eval()
                                : spec.site_jumps[j];
      g.terms.push_back(std::move(t));
    }
  return g;
}

Mat FiniteVolumeGenerator::embed_k(const InteractionTerm& t) const {
  require(t.k.size() > 0, "term has no hamiltonian part");
  return embed(t.k, t.sites, space);
}

Mat FiniteVolumeGenerator::embed_jump(const InteractionTerm& t) const {
  require(t.jump.size() > 0, "term has no jump operator");
  return embed(t.jump, t.sites, space);
}

Mat FiniteVolumeGenerator::embed_reference(const InteractionTerm& t) const {
  require(t.site >= 0, "term does not deform a one-site jump");
  return embed(spec.site_jumps[t.slot], {t.site}, space);
}

Mat heisenberg_generator(const FiniteVolumeGenerator& g) {
  const long d = g.dim();
  Mat l = Mat::Zero(d * d, d * d);
  for (const InteractionTerm& t : g.terms) {
    if (t.k.size() > 0) add_commutator(l, g.embed_k(t), cplx(0.0, 1.0));
    if (t.jump.size() > 0 && t.jump.cwiseAbs().maxCoeff() > 0.0) {
      const Mat lf = g.embed_jump(t);
      add_pair_dissipator(l, lf, lf);
    }
  }
  return l;
}

std::pair<Mat, Mat> split_perturbation(const FiniteVolumeGenerator& g) {
  const long d = g.dim();
  Mat l0 = Mat::Zero(d * d, d * d);
  for (int x = 0; x < g.num_sites(); ++x)
    for (const Mat& lj : g.spec.site_jumps) {
      const Mat lf = embed(lj, {x}, g.space);
      add_pair_dissipator(l0, lf, lf);
    }
  Mat l1 = Mat::Zero(d * d, d * d);
  for (const InteractionTerm& t : g.terms) {
    if (t.k.size() > 0) add_commutator(l1, g.embed_k(t), cplx(0.0, 1.0));
    if (t.jump.size() == 0) continue;
    if (t.site >= 0) {
      // deformed one-site channel: subtract the reference jump
      const Mat ref = g.embed_reference(t);
      const Mat dev = g.embed_jump(t) - ref;
      if (dev.cwiseAbs().maxCoeff() == 0.0) continue;
      add_pair_dissipator(l1, ref, dev);
      add_pair_dissipator(l1, dev, ref);
      add_pair_dissipator(l1, dev, dev);
    } else if (t.jump.cwiseAbs().maxCoeff() > 0.0) {
      const Mat lf = g.embed_jump(t);
      add_pair_dissipator(l1, lf, lf);
    }
  }
  return {std::move(l0), std::move(l1)};
}

Mat schrodinger_generator(const FiniteVolumeGenerator& g) {
  const long d = g.dim();
  Mat l = Mat::Zero(d * d, d * d);
  for (const InteractionTerm& t : g.terms) {
    if (t.k.size() > 0) add_commutator(l, g.embed_k(t), cplx(0.0, -1.0));
    if (t.jump.size() > 0 && t.jump.cwiseAbs().maxCoeff() > 0.0)
      add_dissipator_dual(l, g.embed_jump(t));
  }
  return l;
}

}  // namespace qlat
