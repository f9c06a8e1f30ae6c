#pragma once

namespace wavepath {

// Sign of the signed area of triangle (a, b, c): +1 for a left turn,
// -1 for a right turn, 0 for collinear. Uses a floating-point filter
// with an exact expansion-arithmetic fallback, so the sign is always
// correct for finite double inputs.
int orient(double ax, double ay, double bx, double by, double cx, double cy);

// Exact sign of the 2x2 determinant (a*d - b*c).
int det2_sign(double a, double b, double c, double d);

} // namespace wavepath
