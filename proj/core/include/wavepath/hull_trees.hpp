#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wavepath/decomposition.hpp"
#include "wavepath/geometry.hpp"

namespace wavepath {

struct BhtNode;
struct HullNode;

// Balanced tree over the wavefront segments of one bunch. Leaves hold the
// chain vertices v_z..v_n in chain order; a leaf's wpupdate is the negated
// perimeter distance from v_z, so validity at radius d' reduces to
// d' - shortestdist + wpupdate > 0. Internal wpupdate is the max of the
// children, letting the valid prefix be located in O(log n).
class Bht {
 public:
  struct Leaf {
    int vid = -1;
    Point site;
    double wpupdate = 0.0;
  };

  Bht() = default;
  Bht(Bht&&) noexcept;
  Bht& operator=(Bht&&) noexcept;
  ~Bht();

  static Bht build(const std::vector<Leaf>& leaves, double shortestdist, int tangentstart,
                   bool split_flag = false);

  std::size_t size() const;
  bool empty() const { return size() == 0; }
  Leaf leaf(std::size_t i) const;

  double shortestdist() const { return shortestdist_; }
  int tangentstart() const { return tangentstart_; }
  bool split_flag() const { return split_flag_; }

  // d(s, v_i): the weight carried by segment i.
  double weight(std::size_t i) const;
  bool valid(std::size_t i, double dprime) const;
  // Number of valid leaves at d' (always a prefix).
  std::size_t valid_count(double dprime) const;

  // Splits off leaves [k, size) into a new bunch whose shortestdist is
  // rebased by the perimeter up to v_k and whose tangentstart is v_k with
  // the split flag set. This bunch keeps [0, k).
  Bht split(std::size_t k);

  // Valid segments as grown arcs at radius d'.
  ArcHull arc_hull(double dprime) const;

  std::uint64_t take_touches() const {
    std::uint64_t t = touches_;
    touches_ = 0;
    return t;
  }

 private:
  BhtNode* root_ = nullptr;
  double shortestdist_ = 0.0;
  int tangentstart_ = -1;
  bool split_flag_ = false;
  mutable std::uint64_t touches_ = 0;
};

Bht bht_build(const Chain& chain, std::size_t z, double shortestdist, int tangentstart);

// Live bunches per chain, ordered by their vertex ranges.
struct BunchRegistry {
  struct Entry {
    std::size_t start = 0, end = 0; // chain vertex index range [start, end)
    std::shared_ptr<Bht> bht;
  };
  std::map<int, std::vector<Entry>> by_chain;

  const Entry* covering(int chain_id, std::size_t z) const;
};

enum class StrikeAction { Built, NoopDownstream, NoopValid, SplitRebuilt };

// Tangent strike of `striker` on chain vertex z at radius strike_d:
// dispatches the four initialization cases. dnow is the current radius used
// for the validity test of case 3 vs 4.
StrikeAction bht_tangent_strike(BunchRegistry& reg, int chain_id, const Chain& chain,
                                std::size_t z, double strike_d, int striker_vid, double dnow);

// A leaf of a WST or BST: either a live bunch (arc hull of its valid
// segments at the current radius) or a static piece of boundary (chain or
// door, a hull of zero-weight points).
struct HullUnit {
  std::vector<WeightedSite> sites; // static geometry; empty when bunch set
  std::shared_ptr<const Bht> bunch;
  int elem_id = -1;

  ArcHull hull_at(double d) const;
};

struct Bridge {
  bool exists = false; // separated hulls have a common tangent
  Segment seg;
  WeightedSite sup_a, sup_b; // supporting sites at built_d
  double built_d = 0.0;
  bool dirty = false;
  int splits = 0; // re-split counter (reported, not assumed zero)
};

// Balanced hull tree over an ordered run of HullUnits, with bridges at
// internal nodes; backs both waveform-section and boundary-section trees.
class HullTree {
 public:
  HullTree() = default;
  HullTree(HullTree&&) noexcept;
  HullTree& operator=(HullTree&&) noexcept;
  ~HullTree();

  static HullTree build(std::vector<HullUnit> units, double d);

  std::size_t size() const;
  bool empty() const { return size() == 0; }
  const HullUnit& unit(std::size_t i) const;

  void insert(std::size_t pos, HullUnit u, double d);
  void erase(std::size_t pos, double d);
  HullTree split(std::size_t pos, double d); // splits off [pos, size)
  static HullTree merge(HullTree left, HullTree right, double d);

  // Lazy time offset (negative means the subtree's waveform is invalid).
  void add_offset(double delta);
  double offset() const;

  // Upper hull of all live unit contents at radius d, extracted through the
  // stored bridges. Sites are returned in sequence order.
  std::vector<WeightedSite> hull_sites(double d) const;

  // Re-validates every bridge at radius d: a stale bridge whose endpoint
  // units are both still present is kept and marked dirty (its hull
  // contains the true hull); one with a deleted endpoint is recomputed.
  void refresh_bridges(double d);
  bool any_dirty() const;
  int resplit_count() const;

  std::uint64_t take_touches() const {
    std::uint64_t t = touches_;
    touches_ = 0;
    return t;
  }

  std::string dump(double d) const;

 private:
  friend struct MinDistAccess;
  HullNode* root_ = nullptr;
  mutable std::uint64_t touches_ = 0;
};

struct MinDistResult {
  bool found = false;
  double additional = 0.0; // wavefront expansion beyond d until the strike
  int elem_id = -1;        // struck element; -1 when the witness is a bridge
  Point point;             // struck point
  std::size_t segment = 0; // striking segment index (wst_min_dist)
};

// Minimum extra expansion for some valid segment of `bunch` to strike the
// boundary-section; descends outer hulls and splits intersected bridges.
MinDistResult bst_min_dist(const HullTree& bst, const Bht& bunch, double d);

// Minimum extra expansion for some segment in the waveform-section to
// strike the chain or door `elem`; symmetric descent, then a search over
// the winning bunch's valid segments. Points of elem already inside a hull
// report zero additional expansion.
MinDistResult wst_min_dist(const HullTree& wst, const std::vector<Point>& elem, double d);

// Brute-force hull of circles in sequence order (test oracle and overlap
// fallback): keeps exactly the sites supporting the hull. Site weights are
// the current radii.
std::vector<std::size_t> disc_hull_indices(const std::vector<WeightedSite>& sites);

} // namespace wavepath
