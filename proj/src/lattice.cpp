#include "qlat/lattice.hpp"

#include <cmath>
#include <cstdlib>

namespace qlat {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

Volume::Volume(std::vector<int> shape_, bool periodic_)
    : shape(std::move(shape_)), periodic(periodic_) {
  require(!shape.empty(), "volume needs at least one dimension");
  total_ = 1;
  for (int s : shape) {
    require(s >= 1, "volume side lengths must be positive");
    total_ *= s;
  }
}

Site Volume::coords(int idx) const {
  Site s(shape.size());
  for (int k = dim() - 1; k >= 0; --k) {
    s[k] = idx % shape[k];
    idx /= shape[k];
  }
  return s;
}

int Volume::index(const Site& s) const {
  require(static_cast<int>(s.size()) == dim(), "site dimension mismatch");
  int idx = 0;
  for (int k = 0; k < dim(); ++k) {
    int c = s[k];
    if (periodic) {
      c %= shape[k];
      if (c < 0) c += shape[k];
    } else if (c < 0 || c >= shape[k]) {
      return -1;
    }
    idx = idx * shape[k] + c;
  }
  return idx;
}

int Volume::distance(int i, int j) const {
  const Site a = coords(i), b = coords(j);
  int d = 0;
  for (int k = 0; k < dim(); ++k) {
    int dk = std::abs(a[k] - b[k]);
    if (periodic) dk = std::min(dk, shape[k] - dk);
    d = std::max(d, dk);
  }
  return d;
}

int Volume::translate(int i, const Site& offset) const {
  Site s = coords(i);
  require(offset.size() == s.size(), "offset dimension mismatch");
  for (int k = 0; k < dim(); ++k) s[k] += offset[k];
  return index(s);
}

}  // namespace qlat
