#ifndef QLAT_MODEL_HPP
#define QLAT_MODEL_HPP

#include "qlat/local_op.hpp"
#include "qlat/single_site.hpp"

namespace qlat {

// Translation-covariant interaction block.  The offsets are relative lattice
// positions in increasing lexicographic order; k and the jump operators act
// on the tensor product of those positions in that order.  A block is
// instantiated once per lattice site by translating the offsets.
//
// If match_site_jumps is set, jump slot j of the block replaces the
// single-site jump j at the anchor offset (offsets[anchor]): the block
// defines the deformed version of that jump rather than an additional
// dissipative channel.
struct InteractionBlock {
  std::vector<Site> offsets;
  Mat k;                    // 0x0 when absent
  std::vector<Mat> jumps;   // may be empty
  bool match_site_jumps = false;
  int anchor = 0;
};

struct ModelSpec {
  std::string name;
  int n = 2;
  int dims = 1;  // lattice dimension
  Mat rho;
  std::vector<Mat> site_jumps;
  std::optional<std::vector<Mat>> basis_override;
  std::vector<InteractionBlock> blocks;
  int range = 0;  // sup-metric interaction radius
};

// One instantiated generator term: an optional Hamiltonian piece and an
// optional jump operator supported on `sites` (increasing volume indices).
// site >= 0 marks a term that deforms single-site jump `slot` at `site`.
struct InteractionTerm {
  std::vector<int> sites;
  Mat k;      // 0x0 when absent
  Mat jump;   // 0x0 when absent
  int site = -1;
  int slot = -1;
};

struct FiniteVolumeGenerator {
  Space space;
  ModelSpec spec;
  SingleSiteGenerator site_gen;
  std::vector<InteractionTerm> terms;
  int excluded_terms = 0;  // dropped because their support leaves the box

  const SpectralData& sd() const { return site_gen.spec; }
  int num_sites() const { return space.num_sites(); }
  long dim() const { return space.dim(); }

  // full-volume matrices for a term's operators
  Mat embed_k(const InteractionTerm& t) const;
  Mat embed_jump(const InteractionTerm& t) const;
  // reference single-site jump attached to a deforming term, embedded
  Mat embed_reference(const InteractionTerm& t) const;
};

// Shift a block instance so its anchor lands on the given site; returns the
// site indices of the translated support or an empty list if it leaves an
// open volume.
std::vector<int> translate_term(const InteractionBlock& b, int site,
                                const Volume& vol);

// Instantiate a covariant model on a finite volume.  Blocks are translated
// over all sites; instances whose support leaves an open box are dropped and
// counted.  Every (site, jump slot) pair not covered by a match_site_jumps
// block instance receives its reference single-site jump; pairs covered only
// by a dropped instance receive a zero jump so that the splitting into free
// and interacting parts stays exact.
FiniteVolumeGenerator assemble(const ModelSpec& spec, const Volume& vol);

// Generator of the full dynamics on observables (column-stacking form).
Mat heisenberg_generator(const FiniteVolumeGenerator& g);

// Splitting into the free part (sum of one-site generators) and the
// interacting remainder; the two return values sum to the full generator.
std::pair<Mat, Mat> split_perturbation(const FiniteVolumeGenerator& g);

// Trace-dual generator acting on states.
Mat schrodinger_generator(const FiniteVolumeGenerator& g);

}  // namespace qlat

#endif
