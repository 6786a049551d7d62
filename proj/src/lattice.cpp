#include "gibbslab/lattice.hpp"

#include <algorithm>
#include <cstdlib>

namespace gibbslab {

Lattice make_chain(int n_sites, int local_dim, std::int64_t dim_cap) {
  if (n_sites < 1) throw Error("make_chain: n_sites must be >= 1");
  if (local_dim < 2) throw Error("make_chain: local_dim must be >= 2");
  std::int64_t dim = 1;
  for (int i = 0; i < n_sites; ++i) {
    dim *= local_dim;
    if (dim > dim_cap) {
      throw CapError("make_chain: total dimension " + std::to_string(local_dim) + "^" +
                     std::to_string(n_sites) + " exceeds cap " + std::to_string(dim_cap));
    }
  }
  return Lattice{n_sites, local_dim};
}

Region::Region(std::vector<int> sites) : sites_(std::move(sites)) {
  std::sort(sites_.begin(), sites_.end());
  if (std::adjacent_find(sites_.begin(), sites_.end()) != sites_.end())
    throw Error("Region: duplicate site index");
  if (!sites_.empty() && sites_.front() < 0) throw Error("Region: negative site index");
}

Region Region::interval(int first, int last) {
  std::vector<int> s;
  for (int i = first; i <= last; ++i) s.push_back(i);
  return Region(std::move(s));
}

bool Region::contains(int site) const {
  return std::binary_search(sites_.begin(), sites_.end(), site);
}

bool Region::contains(const Region& other) const {
  return std::includes(sites_.begin(), sites_.end(), other.sites_.begin(), other.sites_.end());
}

bool Region::disjoint_from(const Region& other) const {
  return region_intersection(*this, other).empty();
}

Region Region::complement_in(const Lattice& lat) const {
  std::vector<int> s;
  for (int i = 0; i < lat.n_sites; ++i)
    if (!contains(i)) s.push_back(i);
  return Region(std::move(s));
}

Region Region::complement_in(const Region& whole) const {
  std::vector<int> s;
  for (int i : whole.sites())
    if (!contains(i)) s.push_back(i);
  return Region(std::move(s));
}

Region region_union(const Region& a, const Region& b) {
  std::vector<int> s;
  std::set_union(a.sites().begin(), a.sites().end(), b.sites().begin(), b.sites().end(),
                 std::back_inserter(s));
  return Region(std::move(s));
}

Region region_intersection(const Region& a, const Region& b) {
  std::vector<int> s;
  std::set_intersection(a.sites().begin(), a.sites().end(), b.sites().begin(), b.sites().end(),
                        std::back_inserter(s));
  return Region(std::move(s));
}

RegionDistance region_distance(const Region& c, const Region& d) {
  if (c.empty() || d.empty()) throw Error("region_distance: empty region");
  if (!c.disjoint_from(d)) return {0, true};
  int best = std::numeric_limits<int>::max();
  for (int x : c.sites())
    for (int y : d.sites()) best = std::min(best, std::abs(x - y));
  return {best, false};
}

Region boundary(const Lattice& lat, const Region& region, int k) {
  if (region.empty()) throw Error("boundary: empty region");
  if (k < 1) throw Error("boundary: k must be >= 1");
  std::vector<int> s;
  for (int x = 0; x < lat.n_sites; ++x) {
    if (region.contains(x)) continue;
    int dist = std::numeric_limits<int>::max();
    for (int y : region.sites()) dist = std::min(dist, std::abs(x - y));
    if (dist < k) s.push_back(x);
  }
  return Region(std::move(s));
}

namespace {

// Maximal runs of consecutive sites, left to right.
std::vector<Region> connected_components(const Region& r) {
  std::vector<Region> out;
  std::vector<int> run;
  for (int s : r.sites()) {
    if (!run.empty() && s != run.back() + 1) {
      out.emplace_back(run);
      run.clear();
    }
    run.push_back(s);
  }
  if (!run.empty()) out.emplace_back(run);
  return out;
}

}  // namespace

Splitting standard_splitting(int k, int l, int n_blocks) {
  if (k < 1 || l < 1 || n_blocks < 1) throw Error("standard_splitting: k, l, n must be >= 1");
  const int block = 2 * (k + l) - 1;
  const int n_sites = n_blocks * (4 * k + 2 * l - 2) + l;

  Splitting sp;
  sp.k = k;
  sp.l = l;
  sp.n_blocks = n_blocks;
  sp.n_sites = n_sites;

  // Block t (alternating A_1, B_1, A_2, ...) starts at t*(block - l).
  std::vector<int> a_sites, b_sites;
  for (int t = 0; t < 2 * n_blocks; ++t) {
    const int start = t * (block - l);
    Region r = Region::interval(start, start + block - 1);
    if (t % 2 == 0) {
      sp.a_blocks.push_back(r);
      for (int s : r.sites()) a_sites.push_back(s);
    } else {
      sp.b_blocks.push_back(r);
      for (int s : r.sites()) b_sites.push_back(s);
    }
  }
  std::sort(a_sites.begin(), a_sites.end());
  a_sites.erase(std::unique(a_sites.begin(), a_sites.end()), a_sites.end());
  std::sort(b_sites.begin(), b_sites.end());
  b_sites.erase(std::unique(b_sites.begin(), b_sites.end()), b_sites.end());
  sp.a = Region(a_sites);
  sp.b = Region(b_sites);

  Lattice chain{n_sites, 2};  // local_dim irrelevant for geometry
  sp.a_c = sp.a.complement_in(chain);
  sp.b_c = sp.b.complement_in(chain);
  sp.c_segments = connected_components(sp.b_c);
  sp.d_segments = connected_components(sp.a_c);

  // The complement of C u D is A n B: 2n-1 separators of l sites each, in
  // chain order E_1, F_1, E_2, F_2, ..., E_n.
  Region overlap = region_intersection(sp.a, sp.b);
  std::vector<Region> seps = connected_components(overlap);
  for (std::size_t i = 0; i < seps.size(); ++i) {
    if (i % 2 == 0)
      sp.e_segments.push_back(seps[i]);
    else
      sp.f_segments.push_back(seps[i]);
  }
  return sp;
}

}  // namespace gibbslab
