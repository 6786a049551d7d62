#pragma once

#include <vector>

#include "gibbslab/types.hpp"

namespace gibbslab {

// Finite open chain of n_sites, each carrying a local_dim-dimensional space.
struct Lattice {
  int n_sites = 0;
  int local_dim = 2;

  std::int64_t dim() const { return ipow(local_dim, n_sites); }
};

Lattice make_chain(int n_sites, int local_dim, std::int64_t dim_cap = kDefaultDimCap);

// Sorted duplicate-free set of site indices.
class Region {
 public:
  Region() = default;
  explicit Region(std::vector<int> sites);  // sorts, rejects duplicates/negatives

  static Region interval(int first, int last);  // [first, last] inclusive
  static Region full(const Lattice& lat) { return interval(0, lat.n_sites - 1); }

  const std::vector<int>& sites() const { return sites_; }
  int size() const { return static_cast<int>(sites_.size()); }
  bool empty() const { return sites_.empty(); }
  bool contains(int site) const;
  bool contains(const Region& other) const;
  bool disjoint_from(const Region& other) const;
  Region complement_in(const Lattice& lat) const;
  Region complement_in(const Region& whole) const;

  friend bool operator==(const Region&, const Region&) = default;
  auto operator<=>(const Region& o) const { return sites_ <=> o.sites_; }

 private:
  std::vector<int> sites_;
};

Region region_union(const Region& a, const Region& b);
Region region_intersection(const Region& a, const Region& b);

struct RegionDistance {
  int distance = 0;
  bool overlap_warning = false;  // overlapping inputs report 0 with this flag
};

// min |x-y| over x in c, y in d (the 1D Euclidean distance on Z).
RegionDistance region_distance(const Region& c, const Region& d);

// dA = { x not in A : d(x, A) < k }.  Chain ends truncate naturally.
Region boundary(const Lattice& lat, const Region& region, int k);

// A_i/B_i cover of the chain: 2n blocks of 2(k+l)-1 sites laid left to right,
// consecutive overlaps of exactly l sites, total n(4k+2l-2)+l sites.  The
// leftover segments C_i (components of B^c), D_i (components of A^c) and the
// l-site separators E_i (between C_i and D_i) / F_i (between D_i and C_{i+1})
// are precomputed for the mixing-condition machinery.
struct Splitting {
  int k = 1;
  int l = 1;
  int n_blocks = 1;
  int n_sites = 0;
  std::vector<Region> a_blocks;
  std::vector<Region> b_blocks;
  Region a;    // union of a_blocks
  Region b;    // union of b_blocks
  Region a_c;  // chain minus a
  Region b_c;  // chain minus b
  std::vector<Region> c_segments;  // components of b_c, left to right
  std::vector<Region> d_segments;  // components of a_c, left to right
  std::vector<Region> e_segments;  // separator between C_i and D_i
  std::vector<Region> f_segments;  // separator between D_i and C_{i+1}
};

Splitting standard_splitting(int k, int l, int n_blocks);

}  // namespace gibbslab
