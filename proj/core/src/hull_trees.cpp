#include "wavepath/hull_trees.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace wavepath {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Argmin of a unimodal integer function on [0, n); ties to the lower index.
template <class F>
std::pair<std::size_t, double> unimodal_min(std::size_t n, F f) {
  if (n == 0) return {0, kInf};
  std::size_t lo = 0, hi = n - 1;
  while (hi - lo > 12) {
    std::size_t m1 = lo + (hi - lo) / 3;
    std::size_t m2 = hi - (hi - lo) / 3;
    if (f(m1) <= f(m2))
      hi = m2;
    else
      lo = m1 + 1;
  }
  std::size_t best = lo;
  double bv = f(lo);
  for (std::size_t i = lo + 1; i <= hi; ++i) {
    double v = f(i);
    if (v < bv) {
      bv = v;
      best = i;
    }
  }
  return {best, bv};
}

} // namespace

std::vector<std::size_t> disc_hull_indices(const std::vector<WeightedSite>& sites) {
  std::vector<std::size_t> st;
  auto contained = [&](std::size_t i, std::size_t j) {
    // disc i inside disc j
    return dist(sites[i].center, sites[j].center) + sites[i].weight <=
           sites[j].weight + kEpsGeom;
  };
  // Does disc b rise above the left-of-travel outer tangent of (a, c)?
  auto pokes = [&](std::size_t a, std::size_t b, std::size_t c) {
    Point ca = sites[a].center, cc = sites[c].center;
    double ra = sites[a].weight, rc = sites[c].weight;
    Point e = cc - ca;
    double D = norm(e);
    if (D <= std::abs(ra - rc) + kEpsGeom) {
      std::size_t big = ra >= rc ? a : c;
      return !contained(b, big);
    }
    Point u = (1.0 / D) * e;
    double al = (ra - rc) / D;
    double be = std::sqrt(std::max(0.0, 1.0 - al * al));
    Point nl = al * u + be * perp(u);
    double s = dot(ca, nl) + ra;
    return dot(sites[b].center, nl) + sites[b].weight > s + kEpsGeom;
  };

  for (std::size_t i = 0; i < sites.size(); ++i) {
    bool skip = false;
    while (!st.empty()) {
      if (contained(i, st.back())) {
        skip = true;
        break;
      }
      if (contained(st.back(), i)) {
        st.pop_back();
        continue;
      }
      if (st.size() >= 2 && !pokes(st[st.size() - 2], st.back(), i)) {
        st.pop_back();
        continue;
      }
      break;
    }
    if (!skip) st.push_back(i);
  }
  return st;
}

// ---------------------------------------------------------------- Bht ----

struct BhtNode {
  BhtNode* l = nullptr;
  BhtNode* r = nullptr;
  int h = 1;
  int n = 1;
  double wp_max = 0.0; // correct at this node; wp_add pending for children
  double wp_add = 0.0;
  int vid = -1; // leaf payload
  Point site;

  bool leaf() const { return l == nullptr; }
};

namespace {

void bht_free(BhtNode* x) {
  if (!x) return;
  bht_free(x->l);
  bht_free(x->r);
  delete x;
}

int bh(BhtNode* x) { return x ? x->h : 0; }

void bht_push(BhtNode* x, std::uint64_t& tc) {
  ++tc;
  if (x->leaf() || x->wp_add == 0.0) return;
  for (BhtNode* c : {x->l, x->r}) {
    c->wp_max += x->wp_add;
    c->wp_add += x->wp_add;
  }
  x->wp_add = 0.0;
}

BhtNode* bht_pull(BhtNode* x, std::uint64_t& tc) {
  ++tc;
  x->h = 1 + std::max(bh(x->l), bh(x->r));
  x->n = x->l->n + x->r->n;
  x->wp_max = std::max(x->l->wp_max, x->r->wp_max) + x->wp_add;
  return x;
}

BhtNode* bht_node(BhtNode* l, BhtNode* r, std::uint64_t& tc) {
  BhtNode* x = new BhtNode;
  x->l = l;
  x->r = r;
  return bht_pull(x, tc);
}

BhtNode* bht_rot_l(BhtNode* x, std::uint64_t& tc) {
  bht_push(x, tc);
  BhtNode* y = x->r;
  bht_push(y, tc);
  x->r = y->l;
  y->l = bht_pull(x, tc);
  return bht_pull(y, tc);
}

BhtNode* bht_rot_r(BhtNode* x, std::uint64_t& tc) {
  bht_push(x, tc);
  BhtNode* y = x->l;
  bht_push(y, tc);
  x->l = y->r;
  y->r = bht_pull(x, tc);
  return bht_pull(y, tc);
}

BhtNode* bht_fix(BhtNode* x, std::uint64_t& tc) {
  while (bh(x->r) - bh(x->l) > 1) {
    bht_push(x, tc);
    if (bh(x->r->l) > bh(x->r->r)) x->r = bht_rot_r(x->r, tc);
    x = bht_rot_l(x, tc);
  }
  while (bh(x->l) - bh(x->r) > 1) {
    bht_push(x, tc);
    if (bh(x->l->r) > bh(x->l->l)) x->l = bht_rot_l(x->l, tc);
    x = bht_rot_r(x, tc);
  }
  return bht_pull(x, tc);
}

BhtNode* bht_join(BhtNode* l, BhtNode* r, std::uint64_t& tc) {
  if (!l) return r;
  if (!r) return l;
  if (std::abs(bh(l) - bh(r)) <= 1) return bht_node(l, r, tc);
  if (bh(l) > bh(r)) {
    bht_push(l, tc);
    l->r = bht_join(l->r, r, tc);
    return bht_fix(l, tc);
  }
  bht_push(r, tc);
  r->l = bht_join(l, r->l, tc);
  return bht_fix(r, tc);
}

std::pair<BhtNode*, BhtNode*> bht_split_node(BhtNode* x, int k, std::uint64_t& tc) {
  if (!x) return {nullptr, nullptr};
  if (x->leaf()) return k == 0 ? std::pair<BhtNode*, BhtNode*>{nullptr, x}
                               : std::pair<BhtNode*, BhtNode*>{x, nullptr};
  bht_push(x, tc);
  BhtNode *l = x->l, *r = x->r;
  delete x;
  ++tc;
  if (k <= l->n) {
    auto [a, b] = bht_split_node(l, k, tc);
    return {a, bht_join(b, r, tc)};
  }
  auto [a, b] = bht_split_node(r, k - l->n, tc);
  return {bht_join(l, a, tc), b};
}

BhtNode* bht_build_range(const std::vector<Bht::Leaf>& leaves, std::size_t lo, std::size_t hi,
                         std::uint64_t& tc) {
  ++tc;
  if (hi - lo == 1) {
    BhtNode* x = new BhtNode;
    x->vid = leaves[lo].vid;
    x->site = leaves[lo].site;
    x->wp_max = leaves[lo].wpupdate;
    return x;
  }
  std::size_t mid = lo + (hi - lo) / 2;
  return bht_node(bht_build_range(leaves, lo, mid, tc), bht_build_range(leaves, mid, hi, tc),
                  tc);
}

} // namespace

Bht::Bht(Bht&& o) noexcept
    : root_(o.root_), shortestdist_(o.shortestdist_), tangentstart_(o.tangentstart_),
      split_flag_(o.split_flag_), touches_(o.touches_) {
  o.root_ = nullptr;
}

Bht& Bht::operator=(Bht&& o) noexcept {
  if (this != &o) {
    bht_free(root_);
    root_ = o.root_;
    shortestdist_ = o.shortestdist_;
    tangentstart_ = o.tangentstart_;
    split_flag_ = o.split_flag_;
    touches_ = o.touches_;
    o.root_ = nullptr;
  }
  return *this;
}

Bht::~Bht() { bht_free(root_); }

Bht Bht::build(const std::vector<Leaf>& leaves, double shortestdist, int tangentstart,
               bool split_flag) {
  Bht b;
  b.shortestdist_ = shortestdist;
  b.tangentstart_ = tangentstart;
  b.split_flag_ = split_flag;
  if (!leaves.empty()) b.root_ = bht_build_range(leaves, 0, leaves.size(), b.touches_);
  return b;
}

std::size_t Bht::size() const { return root_ ? static_cast<std::size_t>(root_->n) : 0; }

Bht::Leaf Bht::leaf(std::size_t i) const {
  if (i >= size()) throw std::out_of_range("bht leaf index");
  BhtNode* x = root_;
  double acc = 0.0;
  std::size_t k = i;
  while (!x->leaf()) {
    ++touches_;
    acc += x->wp_add;
    if (k < static_cast<std::size_t>(x->l->n)) {
      x = x->l;
    } else {
      k -= static_cast<std::size_t>(x->l->n);
      x = x->r;
    }
  }
  return {x->vid, x->site, x->wp_max + acc};
}

double Bht::weight(std::size_t i) const { return shortestdist_ - leaf(i).wpupdate; }

bool Bht::valid(std::size_t i, double dprime) const {
  return dprime - shortestdist_ + leaf(i).wpupdate > 0.0;
}

std::size_t Bht::valid_count(double dprime) const {
  double thr = shortestdist_ - dprime; // leaf valid iff wpupdate > thr
  std::size_t cnt = 0;
  BhtNode* x = root_;
  double acc = 0.0;
  while (x) {
    ++touches_;
    if (x->wp_max + acc <= thr) break;
    if (x->leaf()) {
      ++cnt;
      break;
    }
    acc += x->wp_add;
    // wpupdate decreases along the chain; the right subtree's max is its
    // first leaf, so a passing right subtree implies the whole left passes.
    if (x->r->wp_max + acc > thr) {
      cnt += static_cast<std::size_t>(x->l->n);
      x = x->r;
    } else {
      x = x->l;
    }
  }
  return cnt;
}

Bht Bht::split(std::size_t k) {
  if (k > size()) throw std::out_of_range("bht split index");
  Bht out;
  if (k == size()) return out;
  Leaf at = leaf(k);
  auto [l, r] = bht_split_node(root_, static_cast<int>(k), touches_);
  root_ = l;
  out.root_ = r;
  out.shortestdist_ = shortestdist_ - at.wpupdate; // rebased along the chain
  out.tangentstart_ = at.vid;
  out.split_flag_ = true;
  if (out.root_) {
    out.root_->wp_max -= at.wpupdate;
    out.root_->wp_add -= at.wpupdate;
  }
  return out;
}

ArcHull Bht::arc_hull(double dprime) const {
  ArcHull h;
  std::size_t n = valid_count(dprime);
  for (std::size_t i = 0; i < n; ++i) {
    Leaf lf = leaf(i);
    h.sites.push_back({lf.site, dprime - (shortestdist_ - lf.wpupdate)});
  }
  return h;
}

Bht bht_build(const Chain& chain, std::size_t z, double shortestdist, int tangentstart) {
  if (z >= chain.size()) throw std::out_of_range("chain start index");
  std::vector<Bht::Leaf> leaves;
  double per = 0.0;
  for (std::size_t i = z; i < chain.size(); ++i) {
    if (i > z) per += dist(chain.pts[i - 1], chain.pts[i]);
    leaves.push_back({chain.vids[i], chain.pts[i], -per});
  }
  return Bht::build(leaves, shortestdist, tangentstart);
}

const BunchRegistry::Entry* BunchRegistry::covering(int chain_id, std::size_t z) const {
  auto it = by_chain.find(chain_id);
  if (it == by_chain.end()) return nullptr;
  for (const auto& e : it->second)
    if (e.start <= z && z < e.end) return &e;
  return nullptr;
}

StrikeAction bht_tangent_strike(BunchRegistry& reg, int chain_id, const Chain& chain,
                                std::size_t z, double strike_d, int striker_vid, double dnow) {
  auto& entries = reg.by_chain[chain_id];
  for (std::size_t i = 0; i < entries.size(); ++i) {
    auto& e = entries[i];
    if (e.start <= z && z < e.end) {
      if (e.bht->valid(z - e.start, dnow)) return StrikeAction::NoopValid;
      // Case 4: the covering bunch cannot reach v_z first; it is torn down
      // and replaced by a bunch re-rooted at the strike, with d(s, v_z)
      // taken from the striker's tangent.
      std::vector<Bht::Leaf> leaves;
      double per = 0.0;
      for (std::size_t k = z; k < e.end; ++k) {
        if (k > z) per += dist(chain.pts[k - 1], chain.pts[k]);
        leaves.push_back({chain.vids[k], chain.pts[k], -per});
      }
      e.bht = std::make_shared<Bht>(Bht::build(leaves, strike_d, striker_vid, true));
      e.start = z;
      return StrikeAction::SplitRebuilt;
    }
  }
  for (const auto& e : entries)
    if (e.start > z) return StrikeAction::NoopDownstream; // Case 2
  // Case 1: fresh bunch covering v_z..end.
  entries.push_back({z, chain.size(),
                     std::make_shared<Bht>(bht_build(chain, z, strike_d, striker_vid))});
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.start < b.start; });
  return StrikeAction::Built;
}

// ----------------------------------------------------------- HullTree ----

ArcHull HullUnit::hull_at(double d) const {
  if (bunch) return bunch->arc_hull(d);
  ArcHull h;
  h.sites = sites;
  return h;
}

struct HullNode {
  HullNode* l = nullptr;
  HullNode* r = nullptr;
  int h = 1;
  int n = 1;
  double off_add = 0.0; // pending time offset for the whole subtree
  Bridge bridge;
  HullUnit unit; // leaf payload

  bool leaf() const { return l == nullptr; }
};

namespace {

void ht_free(HullNode* x) {
  if (!x) return;
  ht_free(x->l);
  ht_free(x->r);
  delete x;
}

int hh(HullNode* x) { return x ? x->h : 0; }

std::vector<WeightedSite> resolved_unit(const HullUnit& u, double d_eff) {
  if (u.bunch) {
    std::vector<WeightedSite> out;
    std::size_t n = u.bunch->valid_count(d_eff);
    for (std::size_t i = 0; i < n; ++i) {
      Bht::Leaf lf = u.bunch->leaf(i);
      out.push_back({lf.site, d_eff - (u.bunch->shortestdist() - lf.wpupdate)});
    }
    return out;
  }
  return u.sites;
}

std::vector<WeightedSite> hull_of(const HullNode* x, double d, double inh) {
  double off = inh + x->off_add;
  if (x->leaf()) {
    auto rs = resolved_unit(x->unit, d + off);
    std::vector<WeightedSite> out;
    for (std::size_t i : disc_hull_indices(rs)) out.push_back(rs[i]);
    return out;
  }
  auto L = hull_of(x->l, d, off);
  auto R = hull_of(x->r, d, off);
  if (x->bridge.exists) {
    std::size_t ia = L.size(), ib = R.size();
    for (std::size_t i = 0; i < L.size(); ++i)
      if (L[i].center == x->bridge.sup_a.center) ia = i;
    for (std::size_t i = R.size(); i-- > 0;)
      if (R[i].center == x->bridge.sup_b.center) ib = i;
    if (ia < L.size() && ib < R.size()) {
      std::vector<WeightedSite> out(L.begin(), L.begin() + static_cast<long>(ia) + 1);
      out.insert(out.end(), R.begin() + static_cast<long>(ib), R.end());
      return out;
    }
  }
  // Overlapping or stale bridge: conservative recombination.
  L.insert(L.end(), R.begin(), R.end());
  std::vector<WeightedSite> out;
  for (std::size_t i : disc_hull_indices(L)) out.push_back(L[i]);
  return out;
}

void collect_centers(const HullNode* x, double d, double inh, std::vector<Point>& out) {
  double off = inh + x->off_add;
  if (x->leaf()) {
    for (const auto& s : resolved_unit(x->unit, d + off)) out.push_back(s.center);
    return;
  }
  collect_centers(x->l, d, off, out);
  collect_centers(x->r, d, off, out);
}

void ht_push(HullNode* x, std::uint64_t& tc) {
  ++tc;
  if (x->leaf() || x->off_add == 0.0) return;
  x->l->off_add += x->off_add;
  x->r->off_add += x->off_add;
  x->off_add = 0.0;
}

void ht_make_bridge(HullNode* x, double d, std::uint64_t& tc) {
  auto L = hull_of(x->l, d, x->off_add);
  auto R = hull_of(x->r, d, x->off_add);
  ++tc;
  Bridge& b = x->bridge;
  int splits = b.splits;
  b = Bridge{};
  b.splits = splits;
  b.built_d = d;
  if (L.empty() || R.empty()) return;
  ArcHull ha, hb;
  ha.sites = L;
  hb.sites = R;
  BridgeResult cand = common_tangent(ha, hb);
  if (cand.overlap) return;
  b.exists = true;
  b.seg = cand.bridge;
  b.sup_a = L[cand.support_a];
  b.sup_b = R[cand.support_b];
}

HullNode* ht_pull(HullNode* x, double d, std::uint64_t& tc) {
  ++tc;
  x->h = 1 + std::max(hh(x->l), hh(x->r));
  x->n = x->l->n + x->r->n;
  ht_make_bridge(x, d, tc);
  return x;
}

HullNode* ht_node(HullNode* l, HullNode* r, double d, std::uint64_t& tc) {
  HullNode* x = new HullNode;
  x->l = l;
  x->r = r;
  return ht_pull(x, d, tc);
}

HullNode* ht_rot_l(HullNode* x, double d, std::uint64_t& tc) {
  ht_push(x, tc);
  HullNode* y = x->r;
  ht_push(y, tc);
  x->r = y->l;
  y->l = ht_pull(x, d, tc);
  return ht_pull(y, d, tc);
}

HullNode* ht_rot_r(HullNode* x, double d, std::uint64_t& tc) {
  ht_push(x, tc);
  HullNode* y = x->l;
  ht_push(y, tc);
  x->l = y->r;
  y->r = ht_pull(x, d, tc);
  return ht_pull(y, d, tc);
}

HullNode* ht_fix(HullNode* x, double d, std::uint64_t& tc) {
  while (hh(x->r) - hh(x->l) > 1) {
    ht_push(x, tc);
    if (hh(x->r->l) > hh(x->r->r)) x->r = ht_rot_r(x->r, d, tc);
    x = ht_rot_l(x, d, tc);
  }
  while (hh(x->l) - hh(x->r) > 1) {
    ht_push(x, tc);
    if (hh(x->l->r) > hh(x->l->l)) x->l = ht_rot_l(x->l, d, tc);
    x = ht_rot_r(x, d, tc);
  }
  return ht_pull(x, d, tc);
}

HullNode* ht_join(HullNode* l, HullNode* r, double d, std::uint64_t& tc) {
  if (!l) return r;
  if (!r) return l;
  if (std::abs(hh(l) - hh(r)) <= 1) return ht_node(l, r, d, tc);
  if (hh(l) > hh(r)) {
    ht_push(l, tc);
    l->r = ht_join(l->r, r, d, tc);
    return ht_fix(l, d, tc);
  }
  ht_push(r, tc);
  r->l = ht_join(l, r->l, d, tc);
  return ht_fix(r, d, tc);
}

std::pair<HullNode*, HullNode*> ht_split_node(HullNode* x, int k, double d, std::uint64_t& tc) {
  if (!x) return {nullptr, nullptr};
  if (x->leaf()) return k == 0 ? std::pair<HullNode*, HullNode*>{nullptr, x}
                               : std::pair<HullNode*, HullNode*>{x, nullptr};
  ht_push(x, tc);
  HullNode *l = x->l, *r = x->r;
  delete x;
  ++tc;
  if (k <= l->n) {
    auto [a, b] = ht_split_node(l, k, d, tc);
    return {a, ht_join(b, r, d, tc)};
  }
  auto [a, b] = ht_split_node(r, k - l->n, d, tc);
  return {ht_join(l, a, d, tc), b};
}

HullNode* ht_build_range(std::vector<HullUnit>& units, std::size_t lo, std::size_t hi, double d,
                         std::uint64_t& tc) {
  if (hi - lo == 1) {
    HullNode* x = new HullNode;
    x->unit = std::move(units[lo]);
    ++tc;
    return x;
  }
  std::size_t mid = lo + (hi - lo) / 2;
  return ht_node(ht_build_range(units, lo, mid, d, tc), ht_build_range(units, mid, hi, d, tc),
                 d, tc);
}

} // namespace

HullTree::HullTree(HullTree&& o) noexcept : root_(o.root_), touches_(o.touches_) {
  o.root_ = nullptr;
}

HullTree& HullTree::operator=(HullTree&& o) noexcept {
  if (this != &o) {
    ht_free(root_);
    root_ = o.root_;
    touches_ = o.touches_;
    o.root_ = nullptr;
  }
  return *this;
}

HullTree::~HullTree() { ht_free(root_); }

HullTree HullTree::build(std::vector<HullUnit> units, double d) {
  HullTree t;
  if (!units.empty()) t.root_ = ht_build_range(units, 0, units.size(), d, t.touches_);
  return t;
}

std::size_t HullTree::size() const { return root_ ? static_cast<std::size_t>(root_->n) : 0; }

const HullUnit& HullTree::unit(std::size_t i) const {
  if (i >= size()) throw std::out_of_range("hull tree index");
  HullNode* x = root_;
  std::size_t k = i;
  while (!x->leaf()) {
    ++touches_;
    if (k < static_cast<std::size_t>(x->l->n)) {
      x = x->l;
    } else {
      k -= static_cast<std::size_t>(x->l->n);
      x = x->r;
    }
  }
  return x->unit;
}

void HullTree::insert(std::size_t pos, HullUnit u, double d) {
  if (pos > size()) throw std::out_of_range("hull tree insert position");
  HullNode* leaf = new HullNode;
  leaf->unit = std::move(u);
  ++touches_;
  auto [l, r] = ht_split_node(root_, static_cast<int>(pos), d, touches_);
  root_ = ht_join(ht_join(l, leaf, d, touches_), r, d, touches_);
}

void HullTree::erase(std::size_t pos, double d) {
  if (pos >= size()) throw std::out_of_range("hull tree erase position");
  auto [l, rest] = ht_split_node(root_, static_cast<int>(pos), d, touches_);
  auto [doomed, r] = ht_split_node(rest, 1, d, touches_);
  ht_free(doomed);
  root_ = ht_join(l, r, d, touches_);
}

HullTree HullTree::split(std::size_t pos, double d) {
  if (pos > size()) throw std::out_of_range("hull tree split position");
  auto [l, r] = ht_split_node(root_, static_cast<int>(pos), d, touches_);
  root_ = l;
  HullTree out;
  out.root_ = r;
  return out;
}

HullTree HullTree::merge(HullTree left, HullTree right, double d) {
  HullTree out;
  out.touches_ = left.touches_ + right.touches_;
  out.root_ = ht_join(left.root_, right.root_, d, out.touches_);
  left.root_ = nullptr;
  right.root_ = nullptr;
  return out;
}

void HullTree::add_offset(double delta) {
  if (root_) root_->off_add += delta;
}

double HullTree::offset() const { return root_ ? root_->off_add : 0.0; }

std::vector<WeightedSite> HullTree::hull_sites(double d) const {
  if (!root_) return {};
  return hull_of(root_, d, 0.0);
}

namespace {

void ht_refresh(HullNode* x, double d, double inh, std::uint64_t& tc) {
  if (x->leaf()) return;
  double off = inh + x->off_add;
  ht_refresh(x->l, d, off, tc);
  ht_refresh(x->r, d, off, tc);
  ++tc;
  auto L = hull_of(x->l, d, off);
  auto R = hull_of(x->r, d, off);
  Bridge& b = x->bridge;
  auto alive = [&](const HullNode* side, Point c) {
    std::vector<Point> centers;
    collect_centers(side, d, off, centers);
    return std::find(centers.begin(), centers.end(), c) != centers.end();
  };
  bool endpoints_live = b.exists && alive(x->l, b.sup_a.center) && alive(x->r, b.sup_b.center);
  if (L.empty() || R.empty()) {
    b.exists = false;
    b.dirty = false;
    b.built_d = d;
    return;
  }
  ArcHull ha, hb;
  ha.sites = L;
  hb.sites = R;
  BridgeResult cand = common_tangent(ha, hb);
  bool cand_matches = !cand.overlap && b.exists &&
                      L[cand.support_a].center == b.sup_a.center &&
                      R[cand.support_b].center == b.sup_b.center;
  if (!b.exists || !endpoints_live || cand_matches) {
    int splits = b.splits;
    b = Bridge{};
    b.splits = splits;
    b.built_d = d;
    if (!cand.overlap) {
      b.exists = true;
      b.seg = cand.bridge;
      b.sup_a = L[cand.support_a];
      b.sup_b = R[cand.support_b];
    }
    return;
  }
  // Supports were overrun but their sites are still live: keep the bridge,
  // advance its endpoints radially, and mark it dirty.
  double grow = d - b.built_d;
  auto advance = [&](Point c, Point p) {
    if (dist(c, p) < kEpsGeom || grow == 0.0) return p;
    return p + grow * normalized(p - c);
  };
  Segment adv{advance(b.sup_a.center, b.seg.a), advance(b.sup_b.center, b.seg.b)};
  // A kept bridge must still bound the subtree from above; otherwise the
  // stale hull would lose containment and the bridge has to be rebuilt.
  bool bounds = !adv.degenerate();
  if (bounds) {
    Point nl = perp(normalized(adv.b - adv.a));
    double lim = dot(nl, adv.a);
    std::vector<WeightedSite> all = L;
    all.insert(all.end(), R.begin(), R.end());
    for (const auto& s : all)
      if (dot(nl, s.center) + s.weight > lim + 1e-9) bounds = false;
  }
  if (!bounds) {
    int splits = b.splits;
    b = Bridge{};
    b.splits = splits;
    b.built_d = d;
    if (!cand.overlap) {
      b.exists = true;
      b.seg = cand.bridge;
      b.sup_a = L[cand.support_a];
      b.sup_b = R[cand.support_b];
    }
    return;
  }
  b.seg = adv;
  b.sup_a.weight += grow;
  b.sup_b.weight += grow;
  b.built_d = d;
  b.dirty = true;
}

bool ht_any_dirty(const HullNode* x) {
  if (!x || x->leaf()) return false;
  return x->bridge.dirty || ht_any_dirty(x->l) || ht_any_dirty(x->r);
}

int ht_resplits(const HullNode* x) {
  if (!x || x->leaf()) return 0;
  return std::max(0, x->bridge.splits - 1) + ht_resplits(x->l) + ht_resplits(x->r);
}

} // namespace

void HullTree::refresh_bridges(double d) {
  if (root_) ht_refresh(root_, d, 0.0, touches_);
}

bool HullTree::any_dirty() const { return ht_any_dirty(root_); }

int HullTree::resplit_count() const { return ht_resplits(root_); }

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json ht_dump_node(const HullNode* x, double d, double inh) {
  ordered_json j;
  double off = inh + x->off_add;
  j["offset"] = off;
  if (x->leaf()) {
    j["kind"] = x->unit.bunch ? "bunch" : "boundary";
    j["elem_id"] = x->unit.elem_id;
    ordered_json sites = ordered_json::array();
    for (const auto& s : resolved_unit(x->unit, d + off))
      sites.push_back({s.center.x, s.center.y, s.weight});
    j["sites"] = sites;
    return j;
  }
  j["kind"] = "internal";
  const Bridge& b = x->bridge;
  j["bridge"] = {{"exists", b.exists},
                 {"dirty", b.dirty},
                 {"splits", b.splits},
                 {"a", {b.seg.a.x, b.seg.a.y}},
                 {"b", {b.seg.b.x, b.seg.b.y}}};
  j["left"] = ht_dump_node(x->l, d, off);
  j["right"] = ht_dump_node(x->r, d, off);
  return j;
}

} // namespace

std::string HullTree::dump(double d) const {
  if (!root_) return "{}";
  return ht_dump_node(root_, d, 0.0).dump(2);
}

// ----------------------------------------------------- distance queries ----

namespace {

double seg_seg_dist(const Segment& a, const Segment& b) {
  if (segments_properly_intersect(a.a, a.b, b.a, b.b)) return 0.0;
  return std::min({point_segment_distance(a.a, b), point_segment_distance(a.b, b),
                   point_segment_distance(b.a, a), point_segment_distance(b.b, a)});
}

// Minimum over the bunch's valid segments of (distance to seg - radius).
std::pair<std::size_t, double> bunch_seg_dist(const Bht& bunch, double d, const Segment& seg) {
  std::size_t n = bunch.valid_count(d);
  return unimodal_min(n, [&](std::size_t i) {
    Bht::Leaf lf = bunch.leaf(i);
    double r = d - (bunch.shortestdist() - lf.wpupdate);
    return point_segment_distance(lf.site, seg) - r;
  });
}

// Admissible lower bound: distance from the bunch to the hull region of a
// subtree (hull discs plus the tangent segments joining consecutive ones).
double bst_bound(const HullNode* x, double d, double inh, const Bht& bunch) {
  auto H = hull_of(x, d, inh);
  double best = kInf;
  std::size_t nb = bunch.valid_count(d);
  auto bunch_point = [&](Point p) {
    auto [i, v] = unimodal_min(nb, [&](std::size_t k) {
      Bht::Leaf lf = bunch.leaf(k);
      return dist(lf.site, p) - (d - (bunch.shortestdist() - lf.wpupdate));
    });
    (void)i;
    return v;
  };
  for (std::size_t i = 0; i < H.size(); ++i) {
    best = std::min(best, bunch_point(H[i].center) - H[i].weight);
    if (i + 1 < H.size()) {
      ArcHull a, b;
      a.sites = {H[i]};
      b.sites = {H[i + 1]};
      BridgeResult t = common_tangent(a, b);
      if (!t.overlap) best = std::min(best, bunch_seg_dist(bunch, d, t.bridge).second);
    }
  }
  return best;
}

MinDistResult bst_rec(HullNode* x, double inh, const Bht& bunch, double d,
                      std::uint64_t& tc) {
  ++tc;
  double off = inh + x->off_add;
  if (x->leaf()) {
    const auto& pts = x->unit.sites;
    MinDistResult res;
    if (pts.empty()) return res;
    std::size_t nedges = pts.size() > 1 ? pts.size() - 1 : 1;
    auto edge = [&](std::size_t j) {
      return pts.size() > 1 ? Segment{pts[j].center, pts[j + 1].center}
                            : Segment{pts[0].center, pts[0].center};
    };
    auto [j, v] = unimodal_min(nedges, [&](std::size_t e) {
      return bunch_seg_dist(bunch, d, edge(e)).second;
    });
    if (v == kInf) return res;
    auto [i, v2] = bunch_seg_dist(bunch, d, edge(j));
    res.found = true;
    res.additional = v2;
    res.elem_id = x->unit.elem_id;
    res.segment = i;
    res.point = closest_point_on_segment(bunch.leaf(i).site, edge(j));
    return res;
  }
  double bl = bst_bound(x->l, d, off, bunch);
  double br = bst_bound(x->r, d, off, bunch);
  double bb = x->bridge.exists ? bunch_seg_dist(bunch, d, x->bridge.seg).second : kInf;
  HullNode* first = bl <= br ? x->l : x->r;
  HullNode* second = bl <= br ? x->r : x->l;
  double second_bound = bl <= br ? br : bl;
  MinDistResult res = bst_rec(first, off, bunch, d, tc);
  bool through_bridge = bb < (res.found ? res.additional : kInf);
  if (second_bound < (res.found ? res.additional : kInf) || through_bridge) {
    if (through_bridge) ++x->bridge.splits;
    MinDistResult alt = bst_rec(second, off, bunch, d, tc);
    if (alt.found && (!res.found || alt.additional < res.additional)) res = alt;
  }
  return res;
}

} // namespace

struct MinDistAccess {
  static HullNode* root(const HullTree& t) { return t.root_; }
  static std::uint64_t& touches(const HullTree& t) { return t.touches_; }
};

MinDistResult bst_min_dist(const HullTree& bst, const Bht& bunch, double d) {
  MinDistResult res;
  if (bst.empty() || bunch.valid_count(d) == 0) return res;
  res = bst_rec(MinDistAccess::root(bst), 0.0, bunch, d, MinDistAccess::touches(bst));
  if (res.found) res.additional = std::max(0.0, res.additional);
  return res;
}

namespace {

double site_elem_dist(const WeightedSite& s, const std::vector<Segment>& E) {
  double best = kInf;
  for (const auto& e : E) best = std::min(best, point_segment_distance(s.center, e));
  return best - s.weight;
}

double wst_bound(const HullNode* x, double d, double inh, const std::vector<Segment>& E) {
  auto H = hull_of(x, d, inh);
  double best = kInf;
  for (std::size_t i = 0; i < H.size(); ++i) {
    best = std::min(best, site_elem_dist(H[i], E));
    if (i + 1 < H.size()) {
      ArcHull a, b;
      a.sites = {H[i]};
      b.sites = {H[i + 1]};
      BridgeResult t = common_tangent(a, b);
      if (!t.overlap)
        for (const auto& e : E) best = std::min(best, seg_seg_dist(t.bridge, e));
    }
  }
  return best;
}

MinDistResult wst_rec(HullNode* x, double inh, const std::vector<Segment>& E, double d,
                      std::uint64_t& tc) {
  ++tc;
  double off = inh + x->off_add;
  if (x->leaf()) {
    MinDistResult res;
    double d_eff = d + off;
    auto rs = resolved_unit(x->unit, d_eff);
    auto [i, v] = unimodal_min(rs.size(), [&](std::size_t k) { return site_elem_dist(rs[k], E); });
    if (v == kInf) return res;
    res.found = true;
    res.additional = v;
    res.elem_id = x->unit.elem_id;
    res.segment = i;
    double be = kInf;
    for (const auto& e : E) {
      double dd = point_segment_distance(rs[i].center, e);
      if (dd < be) {
        be = dd;
        res.point = closest_point_on_segment(rs[i].center, e);
      }
    }
    return res;
  }
  double bl = wst_bound(x->l, d, off, E);
  double br = wst_bound(x->r, d, off, E);
  double bb = kInf;
  if (x->bridge.exists)
    for (const auto& e : E) bb = std::min(bb, seg_seg_dist(x->bridge.seg, e));
  HullNode* first = bl <= br ? x->l : x->r;
  HullNode* second = bl <= br ? x->r : x->l;
  double second_bound = bl <= br ? br : bl;
  MinDistResult res = wst_rec(first, off, E, d, tc);
  bool through_bridge = bb < (res.found ? res.additional : kInf);
  if (second_bound < (res.found ? res.additional : kInf) || through_bridge) {
    if (through_bridge) ++x->bridge.splits;
    MinDistResult alt = wst_rec(second, off, E, d, tc);
    if (alt.found && (!res.found || alt.additional < res.additional)) res = alt;
  }
  return res;
}

} // namespace

MinDistResult wst_min_dist(const HullTree& wst, const std::vector<Point>& elem, double d) {
  MinDistResult res;
  if (wst.empty() || elem.empty()) return res;
  std::vector<Segment> E;
  if (elem.size() == 1) E.push_back({elem[0], elem[0]});
  for (std::size_t i = 0; i + 1 < elem.size(); ++i) E.push_back({elem[i], elem[i + 1]});
  res = wst_rec(MinDistAccess::root(wst), 0.0, E, d, MinDistAccess::touches(wst));
  if (res.found) res.additional = std::max(0.0, res.additional);
  return res;
}

} // namespace wavepath
