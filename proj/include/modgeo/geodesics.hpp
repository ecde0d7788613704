#pragma once

#include "modgeo/qforms.hpp"

#include <complex>
#include <utility>
#include <vector>

namespace modgeo {

using cplx = std::complex<double>;

struct Geodesic {
	enum class Kind { semicircle, vertical };
	Kind kind = Kind::semicircle;
	double w_low = 0, w_high = 0;  // semicircle endpoints; for vertical, w_low = x
	int orientation = 1;           // +1: clockwise / upward (the normal form), -1 reversed
	QForm source;                  // semicircle
	Int d, c;                      // vertical line through -d/c

	static Geodesic of_form(const QForm& q);
	static Geodesic vertical(const Int& d, const Int& c);
	double center() const { return 0.5 * (w_low + w_high); }
	double radius() const { return 0.5 * (w_high - w_low); }
	// Oriented unit tangent at a point of the geodesic.
	cplx tangent(cplx p) const;
};

struct Intersection {
	cplx point;
	double cos_angle = 0;
	double angle = 0;
	int sign = 0;
	QForm witness_form;
};

// (w', w) with w' < w.
std::pair<double, double> roots(const QForm& q);
// Exact sign of q1(x, 1) at the lower (upper = false) or upper root x of q2.
int sign_at_root(const QForm& q1, const QForm& q2, bool upper);
// Exact sign of X + Y sqrt(D), D > 0.
int sign_surd(const Int& X, const Int& Y, const Int& D);

bool crosses(const QForm& q1, const QForm& q2);
bool crosses_vertical(const QForm& q, const Int& d, const Int& c);

// Angle measured counterclockwise from the line of the first geodesic to the line of the second.
Intersection intersection_data(const QForm& first, const QForm& second);
// Second geodesic vertical through -d/c; angle measured from the vertical line to the first geodesic.
Intersection intersection_data_vertical(const QForm& q, const Int& d, const Int& c);

// Normal form: positive trace, positive lower-left entry.
GroupElement normalize_hyperbolic(const GroupElement& g);

struct SegmentData {
	double center = 0, radius = 0;
	double phi_start = 0, phi_end = 0;  // a period of S_sigma, phi decreasing from start to end
	double y_min = 0;
};
SegmentData fundamental_segment(const GroupElement& sigma);

// Intersections of [S_gamma] and [S_sigma]; bound_scale > 1 widens every enumeration bound.
std::vector<Intersection> enumerate_closed_intersections(const FormClass& gamma_cls, const GroupElement& sigma,
                                                         double bound_scale = 1.0);
std::vector<Intersection> enumerate_vertical_intersections(const FormClass& cls, const Int& d, const Int& c,
                                                           double bound_scale = 1.0);

}  // namespace modgeo
