#ifndef QLAT_LATTICE_HPP
#define QLAT_LATTICE_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace qlat {

using Site = std::vector<int>;  // lattice coordinates

// Finite box [0,shape[0]) x ... x [0,shape[d-1]) with open or periodic
// boundary.  Sites are enumerated lexicographically, first coordinate most
// significant, and referred to by their index in that enumeration.
struct Volume {
  std::vector<int> shape;
  bool periodic = false;

  Volume() = default;
  Volume(std::vector<int> shape_, bool periodic_ = false);

  int dim() const { return static_cast<int>(shape.size()); }
  int num_sites() const { return total_; }

  Site coords(int idx) const;
  // index of the site with the given coordinates; -1 if outside the box
  // (periodic volumes wrap coordinates first, so they never return -1)
  int index(const Site& s) const;

  // sup-metric distance between two sites; periodic volumes take the
  // minimum over wrap-arounds
  int distance(int i, int j) const;

  // translate site index i by the offset; -1 if it leaves an open box
  int translate(int i, const Site& offset) const;

 private:
  int total_ = 0;
};

void require(bool cond, const std::string& msg);

}  // namespace qlat

#endif
