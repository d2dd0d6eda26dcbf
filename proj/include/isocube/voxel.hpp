#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace isocube {

/// Indicator over a regular grid on (0,1)^d with cached volume and discrete
/// relative perimeter. Only interior cell faces count; faces on the cube
/// boundary are free, matching Per(E, (0,1)^d).
class VoxelSet {
 public:
  VoxelSet(int dimension, int grid_n)
      : dim_(dimension), n_(grid_n), indicator_(cell_count(dimension, grid_n), 0) {
    if (dimension < 1) throw std::domain_error("VoxelSet: dimension must be >= 1");
    if (grid_n < 1) throw std::domain_error("VoxelSet: grid_n must be >= 1");
    strides_.resize(dim_);
    strides_[0] = 1;
    for (int a = 1; a < dim_; ++a) strides_[a] = strides_[a - 1] * n_;
  }

  static long cell_count(int dimension, int grid_n) {
    long c = 1;
    for (int a = 0; a < dimension; ++a) c *= grid_n;
    return c;
  }

  int dimension() const { return dim_; }
  int grid_n() const { return n_; }
  long cells() const { return static_cast<long>(indicator_.size()); }
  bool get(long i) const { return indicator_[i] != 0; }
  long filled() const { return filled_; }
  long interior_faces() const { return faces_; }

  double cell_volume() const { return std::pow(1.0 / n_, dim_); }
  double face_area() const { return std::pow(1.0 / n_, dim_ - 1); }
  double volume() const { return filled_ * cell_volume(); }
  double perimeter() const { return faces_ * face_area(); }

  /// O(d) update of the cached face count.
  void flip(long i) {
    if (i < 0 || i >= cells()) throw std::out_of_range("VoxelSet::flip: bad index");
    const int self = indicator_[i];
    for (int a = 0; a < dim_; ++a) {
      const long coord = (i / strides_[a]) % n_;
      for (int s = -1; s <= 1; s += 2) {
        const long c = coord + s;
        if (c < 0 || c >= n_) continue;  // cube face, free
        const int nb = indicator_[i + s * strides_[a]];
        // Face existed iff self != nb; after the flip it exists iff self == nb.
        faces_ += (self == nb) ? +1 : -1;
      }
    }
    indicator_[i] = 1 - self;
    filled_ += indicator_[i] ? +1 : -1;
  }

  /// Full recomputation of the interior face count (fuzz reference).
  long recompute_faces() const {
    long f = 0;
    for (long i = 0; i < cells(); ++i) {
      if (!indicator_[i]) continue;
      for (int a = 0; a < dim_; ++a) {
        const long coord = (i / strides_[a]) % n_;
        if (coord + 1 < n_ && !indicator_[i + strides_[a]]) ++f;
        if (coord - 1 >= 0 && !indicator_[i - strides_[a]]) ++f;
      }
    }
    return f;
  }

  const std::vector<std::uint8_t>& indicator() const { return indicator_; }

  /// Portable bit-matrix text: one '0'/'1' line per grid row, blank line
  /// between higher-dimensional sheets.
  std::string to_text() const {
    std::ostringstream os;
    for (long i = 0; i < cells(); ++i) {
      os << (indicator_[i] ? '1' : '0');
      if ((i + 1) % n_ == 0) {
        os << '\n';
        if (dim_ >= 3 && (i + 1) % (strides_[2]) == 0 && i + 1 < cells()) os << '\n';
      }
    }
    return os.str();
  }

 private:
  int dim_;
  int n_;
  std::vector<std::uint8_t> indicator_;
  std::vector<long> strides_;
  long filled_ = 0;
  long faces_ = 0;
};

struct ExhaustiveResult {
  double min_perimeter = 0.0;
  long min_faces = 0;
  std::vector<std::vector<std::uint8_t>> optima;  // deterministic order
  long subsets_scanned = 0;
};

namespace detail {

// Cell permutations generated by axis permutations and per-axis reflections
// (the hyperoctahedral symmetries of the grid).
inline std::vector<std::vector<long>> grid_symmetries(int dim, int n) {
  std::vector<int> axes(dim);
  std::iota(axes.begin(), axes.end(), 0);
  const long cells = VoxelSet::cell_count(dim, n);
  std::vector<std::vector<long>> perms;
  std::vector<long> strides(dim, 1);
  for (int a = 1; a < dim; ++a) strides[a] = strides[a - 1] * n;
  do {
    for (int refl = 0; refl < (1 << dim); ++refl) {
      std::vector<long> p(cells);
      for (long i = 0; i < cells; ++i) {
        long j = 0;
        for (int a = 0; a < dim; ++a) {
          long c = (i / strides[a]) % n;
          if (refl & (1 << a)) c = n - 1 - c;
          j += c * strides[axes[a]];
        }
        p[i] = j;
      }
      perms.push_back(std::move(p));
    }
  } while (std::next_permutation(axes.begin(), axes.end()));
  return perms;
}

inline bool is_orbit_canonical(const std::vector<std::uint8_t>& ind,
                               const std::vector<std::vector<long>>& perms) {
  std::vector<std::uint8_t> img(ind.size());
  for (const auto& p : perms) {
    for (std::size_t i = 0; i < ind.size(); ++i) img[p[i]] = ind[i];
    if (std::lexicographical_compare(img.begin(), img.end(), ind.begin(), ind.end()))
      return false;
  }
  return true;
}

}  // namespace detail

/// Exact minimum of the discrete relative perimeter over all k-cell subsets.
/// Enumerates combinations in lexicographic index order with incremental
/// flips. With symmetry_reduction the cap rises to 30 cells and the optima
/// list keeps only the lexicographically-least representative per orbit of
/// the grid symmetry group.
inline ExhaustiveResult exhaustive_min(int dim, int grid_n, int k,
                                       bool symmetry_reduction = false) {
  const long cells = VoxelSet::cell_count(dim, grid_n);
  const long cap = symmetry_reduction ? 30 : 25;
  if (cells > cap)
    throw std::domain_error("exhaustive_min: instance too large (" +
                            std::to_string(cells) + " cells; cap " +
                            std::to_string(cap) + ")");
  if (k < 0 || k > cells)
    throw std::domain_error("exhaustive_min: k out of range");

  const auto perms = symmetry_reduction
                         ? detail::grid_symmetries(dim, grid_n)
                         : std::vector<std::vector<long>>{};

  VoxelSet v(dim, grid_n);
  ExhaustiveResult res;
  if (k == 0) {
    res.min_perimeter = 0.0;
    res.optima.push_back(v.indicator());
    res.subsets_scanned = 1;
    return res;
  }

  std::vector<long> comb(k);
  std::iota(comb.begin(), comb.end(), 0);
  for (long c : comb) v.flip(c);

  long best = v.interior_faces();
  res.optima.push_back(v.indicator());
  res.subsets_scanned = 1;

  while (true) {
    // Next combination in lexicographic order.
    int pos = k - 1;
    while (pos >= 0 && comb[pos] == cells - k + pos) --pos;
    if (pos < 0) break;
    std::vector<long> next(comb);
    ++next[pos];
    for (int i = pos + 1; i < k; ++i) next[i] = next[pos] + (i - pos);
    for (int i = pos; i < k; ++i) {
      if (comb[i] != next[i]) {
        v.flip(comb[i]);
        v.flip(next[i]);
      }
    }
    comb.swap(next);
    ++res.subsets_scanned;

    const long f = v.interior_faces();
    if (f < best) {
      best = f;
      res.optima.clear();
      res.optima.push_back(v.indicator());
    } else if (f == best) {
      res.optima.push_back(v.indicator());
    }
  }

  if (symmetry_reduction) {
    std::vector<std::vector<std::uint8_t>> canon;
    for (auto& ind : res.optima)
      if (detail::is_orbit_canonical(ind, perms)) canon.push_back(std::move(ind));
    res.optima.swap(canon);
  }
  res.min_faces = best;
  res.min_perimeter = best * v.face_area();
  return res;
}

}  // namespace isocube
