#include "modgeo/geodesics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace modgeo {

namespace {

int sgn(const Int& x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }

double line_angle(cplx from, cplx to) {
	double th = std::arg(to / from);
	th = std::fmod(th, std::numbers::pi);
	if (th < 0) th += std::numbers::pi;
	return th;
}

void sort_by_point(std::vector<Intersection>& v) {
	std::sort(v.begin(), v.end(), [](const Intersection& a, const Intersection& b) {
		if (a.point.real() != b.point.real()) return a.point.real() < b.point.real();
		return a.point.imag() < b.point.imag();
	});
}

}  // namespace

std::pair<double, double> roots(const QForm& q) {
	double A = to_double(q.A), B = to_double(q.B), C = to_double(q.C);
	double sD = std::sqrt(to_double(q.disc()));
	double t = -0.5 * (B + (B >= 0 ? sD : -sD));
	double r1 = t / A, r2 = C / t;
	return r1 < r2 ? std::make_pair(r1, r2) : std::make_pair(r2, r1);
}

int sign_surd(const Int& X, const Int& Y, const Int& D) {
	int sx = sgn(X), sy = sgn(Y);
	if (sy == 0) return sx;
	if (sx == 0 || sx == sy) return sy;
	Int lhs = X * X, rhs = Y * Y * D;
	if (lhs == rhs) return 0;
	return lhs > rhs ? sx : sy;
}

int sign_at_root(const QForm& q1, const QForm& q2, bool upper) {
	const Int D2 = q2.disc();
	Int X = q1.A * (q2.B * q2.B + D2) - 2 * q2.A * q1.B * q2.B + 4 * q2.A * q2.A * q1.C;
	Int Y = 2 * q2.A * q1.B - 2 * q1.A * q2.B;
	// root = (-B2 + s sqrt(D2)) / (2 A2); s = +1 gives the upper root iff A2 > 0
	int s = (upper == (q2.A > 0)) ? 1 : -1;
	return sign_surd(X, s * Y, D2);
}

bool crosses(const QForm& q1, const QForm& q2) {
	if (q1.A * q2.B == q2.A * q1.B && q1.A * q2.C == q2.A * q1.C)
		throw std::invalid_argument("crosses: geodesics of " + q1.str() + " and " + q2.str() + " coincide");
	Int t = q1.A * q2.C - q2.A * q1.C;
	Int res = t * t - (q1.A * q2.B - q2.A * q1.B) * (q1.B * q2.C - q2.B * q1.C);
	return res < 0;
}

bool crosses_vertical(const QForm& q, const Int& d, const Int& c) {
	Int v = q.A * d * d - q.B * d * c + q.C * c * c;  // c^2 Q(-d/c, 1)
	return q.A * v < 0;
}

Geodesic Geodesic::of_form(const QForm& q) {
	Geodesic g;
	g.kind = Kind::semicircle;
	auto [lo, hi] = roots(q);
	g.w_low = lo;
	g.w_high = hi;
	g.orientation = q.A > 0 ? 1 : -1;
	g.source = q;
	return g;
}

Geodesic Geodesic::vertical(const Int& d, const Int& c) {
	Geodesic g;
	g.kind = Kind::vertical;
	g.d = d;
	g.c = c;
	g.w_low = g.w_high = -to_double(d) / to_double(c);
	return g;
}

cplx Geodesic::tangent(cplx p) const {
	if (kind == Kind::vertical) return cplx(0, orientation);
	cplx t = cplx(0, -1) * (p - center()) * static_cast<double>(orientation);
	return t / std::abs(t);
}

Intersection intersection_data(const QForm& first, const QForm& second) {
	if (!crosses(first, second)) throw std::invalid_argument("intersection_data: geodesics do not cross");
	Geodesic g1 = Geodesic::of_form(first), g2 = Geodesic::of_form(second);
	double c1 = g1.center(), r1 = g1.radius(), c2 = g2.center(), r2 = g2.radius();
	double x = 0.5 * (c1 + c2) + 0.5 * (r1 * r1 - r2 * r2) / (c2 - c1);
	double y2 = r1 * r1 - (x - c1) * (x - c1);
	double y2b = r2 * r2 - (x - c2) * (x - c2);
	double y = std::sqrt(std::max(0.5 * (y2 + y2b), 0.0));
	Intersection I;
	I.point = cplx(x, y);
	I.angle = line_angle(g1.tangent(I.point), g2.tangent(I.point));
	I.cos_angle = std::cos(I.angle);
	int s = sign_at_root(first, second, false);
	I.sign = -(second.A > 0 ? 1 : -1) * s;
	I.witness_form = first;
	return I;
}

Intersection intersection_data_vertical(const QForm& q, const Int& d, const Int& c) {
	if (c <= 0 || gcd(abs(d), c) != 1) throw std::invalid_argument("vertical geodesic needs gcd(c,d) = 1 and c > 0");
	if (!crosses_vertical(q, d, c)) throw std::invalid_argument("intersection_data_vertical: no crossing");
	Geodesic g = Geodesic::of_form(q);
	double x0 = -to_double(d) / to_double(c);
	double r = g.radius(), dx = x0 - g.center();
	Intersection I;
	I.point = cplx(x0, std::sqrt(std::max(r * r - dx * dx, 0.0)));
	I.angle = line_angle(cplx(0, 1), g.tangent(I.point));
	I.cos_angle = std::cos(I.angle);
	I.sign = q.A > 0 ? 1 : -1;
	I.witness_form = q;
	return I;
}

GroupElement normalize_hyperbolic(const GroupElement& g) {
	if (!g.is_hyperbolic()) throw std::invalid_argument("element " + g.str() + " is not hyperbolic");
	GroupElement h = g.trace() < 0 ? -g : g;
	if (h.c < 0) h = h.inverse();
	if (h.c == 0) throw std::invalid_argument("hyperbolic element with c = 0");
	return h;
}

SegmentData fundamental_segment(const GroupElement& sigma_in) {
	GroupElement sigma = normalize_hyperbolic(sigma_in);
	QForm qs = form_from_matrix(sigma);
	Geodesic g = Geodesic::of_form(qs);
	double t = to_double(sigma.trace());
	double eps = 0.5 * (t + std::sqrt(t * t - 4));
	SegmentData s;
	s.center = g.center();
	s.radius = g.radius();
	// sigma divides tan(phi / 2) by eps^2. The start is moved off the apex by an irrational fraction of
	// the period so that crossings at quadratic irrational points never sit on the segment boundary.
	const double shift = std::pow(eps, -2 * 0.3819660112501051);
	s.phi_start = 2 * std::atan(shift);
	s.phi_end = 2 * std::atan(shift / (eps * eps));
	s.y_min = s.radius * std::sin(s.phi_end);
	return s;
}

std::vector<Intersection> enumerate_closed_intersections(const FormClass& gamma_cls, const GroupElement& sigma_in,
                                                         double bound_scale) {
	GroupElement sigma = normalize_hyperbolic(sigma_in);
	QForm qs = form_from_matrix(sigma);
	if (gamma_cls.contains(qs) || gamma_cls.contains(-qs))
		throw std::invalid_argument("enumerate_closed_intersections: classes are equivalent");
	SegmentData seg = fundamental_segment(sigma);
	const double D = to_double(gamma_cls.discriminant);
	const double sD = std::sqrt(D);
	const std::int64_t Di = to_i64(gamma_cls.discriminant);
	const auto amax = static_cast<std::int64_t>(std::floor(bound_scale * sD / (2 * seg.y_min))) + 1;
	const double x_lo = seg.center, x_hi = seg.center + seg.radius * std::cos(seg.phi_end);
	const double widen = (bound_scale - 1) * (x_hi - x_lo + 1);
	std::vector<Intersection> out;
	for (std::int64_t A = -amax; A <= amax; ++A) {
		if (A == 0) continue;
		double rq = sD / (2 * std::abs(static_cast<double>(A)));
		double clo = x_lo - bound_scale * rq - widen, chi = x_hi + bound_scale * rq + widen;
		// center = -B / (2A)
		double b1 = -2 * A * clo, b2 = -2 * A * chi;
		auto blo = static_cast<std::int64_t>(std::floor(std::min(b1, b2))) - 1;
		auto bhi = static_cast<std::int64_t>(std::ceil(std::max(b1, b2))) + 1;
		for (std::int64_t B = blo; B <= bhi; ++B) {
			if (((B - Di) % 2 + 2) % 2 != 0) continue;
			__int128 N = static_cast<__int128>(B) * B - Di;
			if (N % (4 * A) != 0) continue;
			auto C = static_cast<std::int64_t>(N / (4 * A));
			if (!gamma_cls.contains(SmallForm{A, B, C})) continue;
			QForm q{A, B, C};
			if (!crosses(q, qs)) continue;
			Intersection I = intersection_data(q, qs);
			double phi = std::arg(I.point - seg.center);
			if (phi > seg.phi_end && phi <= seg.phi_start) out.push_back(I);
		}
	}
	sort_by_point(out);
	return out;
}

std::vector<Intersection> enumerate_vertical_intersections(const FormClass& cls, const Int& d, const Int& c,
                                                           double bound_scale) {
	if (c <= 0 || gcd(abs(d), c) != 1) throw std::invalid_argument("vertical geodesic needs gcd(c,d) = 1 and c > 0");
	const std::int64_t Di = to_i64(cls.discriminant);
	const double sD = std::sqrt(static_cast<double>(Di));
	const double x0 = -to_double(d) / to_double(c);
	const double cd = to_double(c);
	const auto amax = static_cast<std::int64_t>(std::floor(bound_scale * Di * cd * cd / 4.0));
	std::vector<Intersection> out;
	for (std::int64_t A = -amax; A <= amax; ++A) {
		if (A == 0) continue;
		// the roots of Q separate x0 iff |B + 2 A x0| < sqrt(D)
		double mid = -2.0 * A * x0;
		auto blo = static_cast<std::int64_t>(std::floor(mid - bound_scale * sD)) - 1;
		auto bhi = static_cast<std::int64_t>(std::ceil(mid + bound_scale * sD)) + 1;
		for (std::int64_t B = blo; B <= bhi; ++B) {
			if (((B - Di) % 2 + 2) % 2 != 0) continue;
			__int128 N = static_cast<__int128>(B) * B - Di;
			if (N % (4 * A) != 0) continue;
			auto C = static_cast<std::int64_t>(N / (4 * A));
			QForm q{A, B, C};
			if (!crosses_vertical(q, d, c)) continue;
			if (!cls.contains(SmallForm{A, B, C})) continue;
			out.push_back(intersection_data_vertical(q, d, c));
		}
	}
	sort_by_point(out);
	return out;
}

}  // namespace modgeo
