// Robust orientation predicate: floating-point filter plus an exact
// fallback built on Shewchuk-style nonoverlapping expansions (two_sum /
// two_product and expansion addition). The fallback evaluates the full
// determinant exactly, so the returned sign is correct for all finite
// double inputs.

#include "wavepath/predicates.hpp"

#include <cmath>
#include <cstddef>

namespace wavepath {
namespace {

struct TwoDouble {
  double hi, lo;
};

inline TwoDouble two_sum(double a, double b) {
  double x = a + b;
  double bv = x - a;
  double av = x - bv;
  double y = (a - av) + (b - bv);
  return {x, y};
}

inline TwoDouble two_diff(double a, double b) {
  double x = a - b;
  double bv = a - x;
  double av = x + bv;
  double y = (a - av) - (b - bv);
  return {x, y};
}

inline TwoDouble two_product(double a, double b) {
  double x = a * b;
  double y = std::fma(a, b, -x);
  return {x, y};
}

// Adds scalar b into expansion e (increasing magnitude order), writing to h.
// Returns the length of h. h may alias e.
std::size_t grow_expansion(const double* e, std::size_t elen, double b, double* h) {
  double q = b;
  std::size_t hidx = 0;
  for (std::size_t i = 0; i < elen; ++i) {
    TwoDouble s = two_sum(q, e[i]);
    if (s.lo != 0.0) h[hidx++] = s.lo;
    q = s.hi;
  }
  h[hidx++] = q;
  return hidx;
}

std::size_t expansion_sum(const double* e, std::size_t elen, const double* f,
                          std::size_t flen, double* h) {
  // Simple (not linear-time) but correct: grow by each component.
  std::size_t hlen = 0;
  double tmp[64];
  for (std::size_t i = 0; i < elen; ++i) tmp[i] = e[i];
  hlen = elen;
  for (std::size_t i = 0; i < flen; ++i) {
    hlen = grow_expansion(tmp, hlen, f[i], tmp);
  }
  for (std::size_t i = 0; i < hlen; ++i) h[i] = tmp[i];
  return hlen;
}

int expansion_sign(const double* e, std::size_t elen) {
  // Most significant (last) nonzero component carries the sign.
  for (std::size_t i = elen; i-- > 0;) {
    if (e[i] > 0.0) return 1;
    if (e[i] < 0.0) return -1;
  }
  return 0;
}

int orient_exact(double ax, double ay, double bx, double by, double cx, double cy) {
  // det = (ax-cx)(by-cy) - (ay-cy)(bx-cx), expanded over exact differences.
  TwoDouble acx = two_diff(ax, cx);
  TwoDouble bcy = two_diff(by, cy);
  TwoDouble acy = two_diff(ay, cy);
  TwoDouble bcx = two_diff(bx, cx);

  // Each product of two TwoDoubles yields four exact partial products.
  double pos[32], neg[32];
  std::size_t plen = 0, nlen = 0;
  double tmp[32];

  auto accumulate = [](double* dst, std::size_t dlen, double a, double b,
                       double* scratch) {
    TwoDouble p = two_product(a, b);
    dlen = grow_expansion(dst, dlen, p.lo, scratch);
    for (std::size_t i = 0; i < dlen; ++i) dst[i] = scratch[i];
    dlen = grow_expansion(dst, dlen, p.hi, scratch);
    for (std::size_t i = 0; i < dlen; ++i) dst[i] = scratch[i];
    return dlen;
  };

  plen = accumulate(pos, plen, acx.hi, bcy.hi, tmp);
  plen = accumulate(pos, plen, acx.hi, bcy.lo, tmp);
  plen = accumulate(pos, plen, acx.lo, bcy.hi, tmp);
  plen = accumulate(pos, plen, acx.lo, bcy.lo, tmp);

  nlen = accumulate(neg, nlen, acy.hi, bcx.hi, tmp);
  nlen = accumulate(neg, nlen, acy.hi, bcx.lo, tmp);
  nlen = accumulate(neg, nlen, acy.lo, bcx.hi, tmp);
  nlen = accumulate(neg, nlen, acy.lo, bcx.lo, tmp);

  for (std::size_t i = 0; i < nlen; ++i) neg[i] = -neg[i];
  double result[64];
  std::size_t rlen = expansion_sum(pos, plen, neg, nlen, result);
  return expansion_sign(result, rlen);
}

} // namespace

int orient(double ax, double ay, double bx, double by, double cx, double cy) {
  double detleft = (ax - cx) * (by - cy);
  double detright = (ay - cy) * (bx - cx);
  double det = detleft - detright;

  double detsum;
  if (detleft > 0.0) {
    if (detright <= 0.0) return det > 0.0 ? 1 : (det < 0.0 ? -1 : 0);
    detsum = detleft + detright;
  } else if (detleft < 0.0) {
    if (detright >= 0.0) return det > 0.0 ? 1 : (det < 0.0 ? -1 : 0);
    detsum = -detleft - detright;
  } else {
    return det > 0.0 ? 1 : (det < 0.0 ? -1 : 0);
  }

  // Error bound from Shewchuk's orient2d (ccwerrboundA).
  constexpr double kEps = 1.1102230246251565e-16; // 2^-53
  constexpr double kErrBound = (3.0 + 16.0 * kEps) * kEps;
  double errbound = kErrBound * detsum;
  if (det > errbound || -det > errbound) return det > 0.0 ? 1 : -1;

  return orient_exact(ax, ay, bx, by, cx, cy);
}

int det2_sign(double a, double b, double c, double d) {
  // sign(a*d - b*c) == orient((0,0), (a,b), (c,d))
  return orient(0.0, 0.0, a, b, c, d);
}

} // namespace wavepath
