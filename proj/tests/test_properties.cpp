#include "doctest.h"

#include "modgeo/cycles.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace modgeo;

namespace {

constexpr int kInstances = 100;

std::mt19937_64& rng() {
	static std::mt19937_64 r(20240611);
	return r;
}

long uniform(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng()); }

// Word in S and T^n with small n.
GroupElement random_sl2(int len = 4) {
	GroupElement g;
	for (int i = 0; i < len; ++i) {
		long n = uniform(-3, 3);
		g = g * GroupElement{1, n, 0, 1} * GroupElement::S();
	}
	return g;
}

QForm random_form() {
	for (;;) {
		QForm q{uniform(-9, 9), uniform(-9, 9), uniform(-9, 9)};
		Int D = q.disc();
		if (q.A != 0 && q.C != 0 && D > 0 && !is_square(D)) return q;
	}
}

const std::vector<FormClass>& classes() {
	static std::vector<FormClass> v = [] {
		std::vector<FormClass> out;
		for (long D : {5L, 8L, 12L, 13L, 17L, 21L})
			for (const FormClass& c : class_representatives(D)) out.push_back(c);
		return out;
	}();
	return v;
}

const std::vector<GroupElement>& sigmas() {
	static std::vector<GroupElement> v = [] {
		std::vector<GroupElement> out;
		for (long t = 3; t <= 9; ++t)
			for (const GroupElement& g : primitive_classes_of_trace(t)) out.push_back(normalize_hyperbolic(g));
		return out;
	}();
	return v;
}

bool same_line(const QForm& a, const QForm& b) { return a.A * b.B == b.A * a.B && a.A * b.C == b.A * a.C; }

std::pair<QForm, QForm> random_crossing_pair() {
	for (;;) {
		QForm a = random_form(), b = random_form();
		if (!same_line(a, b) && crosses(a, b)) return {a, b};
	}
}

bool equivalent_lines(const FormClass& cls, const GroupElement& s) {
	QForm q = form_from_matrix(s);
	Int g = q.content();
	q = QForm{q.A / g, q.B / g, q.C / g};
	return cls.contains(q) || cls.contains(-q);
}

std::vector<double> sorted_cosines(const std::vector<Intersection>& v) {
	std::vector<double> c;
	for (const Intersection& p : v) c.push_back(p.cos_angle);
	std::sort(c.begin(), c.end());
	return c;
}

}  // namespace

TEST_CASE("discriminant and class are invariant under the action") {
	int violations = 0;
	for (int i = 0; i < kInstances; ++i) {
		QForm q = random_form();
		QForm p = apply_sl2(q, random_sl2());
		if (p.disc() != q.disc()) ++violations;
		if (q.content() == 1 && !reduction_cycle(q).contains(p)) ++violations;
	}
	CHECK(violations == 0);
}

TEST_CASE("action law") {
	int violations = 0;
	for (int i = 0; i < kInstances; ++i) {
		QForm q = random_form();
		GroupElement g = random_sl2(3), h = random_sl2(3);
		if (!(apply_sl2(apply_sl2(q, g), h) == apply_sl2(q, g * h))) ++violations;
		cplx z(std::uniform_real_distribution<double>(-1, 1)(rng()), std::uniform_real_distribution<double>(0.2, 2)(rng()));
		cplx a = act(g, act(h, z)), b = act(g * h, z);
		if (std::abs(a - b) > 1e-9 * std::max(1.0, std::abs(b))) ++violations;
		// Q(g (x, 1)) = (c x + d)^2 (Q o g)(x, 1), checked at a rational point exactly
		QForm p = apply_sl2(q, g);
		Int x = uniform(-5, 5), y = 1;
		Int X = g.a * x + g.b * y, Y = g.c * x + g.d * y;
		if (q.A * X * X + q.B * X * Y + q.C * Y * Y != p.A * x * x + p.B * x * y + p.C * y * y) ++violations;
	}
	CHECK(violations == 0);
}

TEST_CASE("angle symmetry") {
	int violations = 0;
	for (int i = 0; i < kInstances; ++i) {
		auto [a, b] = random_crossing_pair();
		Intersection ab = intersection_data(a, b), ba = intersection_data(b, a);
		if (std::abs(ab.angle + ba.angle - M_PI) > 1e-9) ++violations;
		if (std::abs(ab.cos_angle + ba.cos_angle) > 1e-9) ++violations;
		if (std::abs(ab.point - ba.point) > 1e-9) ++violations;
		// conformal: the angle survives a simultaneous change of variables
		GroupElement g = random_sl2(2);
		Intersection gg = intersection_data(apply_sl2(a, g), apply_sl2(b, g));
		if (std::abs(gg.cos_angle - ab.cos_angle) > 1e-7) ++violations;
	}
	CHECK(violations == 0);
}

TEST_CASE("sign antisymmetry") {
	int violations = 0;
	for (int i = 0; i < kInstances; ++i) {
		auto [a, b] = random_crossing_pair();
		int s = intersection_data(a, b).sign;
		if (s == 0 || s != -intersection_data(b, a).sign) ++violations;
		if (intersection_data(-a, b).sign != -s) ++violations;
		GroupElement g = random_sl2(2);
		if (intersection_data(apply_sl2(a, g), apply_sl2(b, g)).sign != s) ++violations;
	}
	CHECK(violations == 0);
}

TEST_CASE("base-point independence of the completed cycle integral") {
	// I(z0) + int_{z0}^{w} r(sigma, z) Q_sigma(z)^{k-1} dz does not depend on z0
	const FormClass cls = reduction_cycle(QForm{1, 2, -2});
	ModularIntegral F(2, cls, Flavor::parson);
	QuadratureOptions qo;
	int violations = 0, done = 0;
	std::vector<GroupElement> ss(sigmas().begin(), sigmas().begin() + 4);
	std::vector<double> first(ss.size(), NAN), first_im(ss.size(), NAN);
	std::uniform_real_distribution<double> u(0, 1);
	while (done < kInstances) {
		std::size_t j = done % ss.size();
		const GroupElement& s = ss[j];
		QForm qs = form_from_matrix(s);
		auto [lo, hi] = roots(qs);
		cplx it(0.5 * (lo + hi), 1.0);
		for (int n = 0; n < 60; ++n) it = act(s, it);
		double w = std::abs(it.real() - hi) < std::abs(it.real() - lo) ? hi : lo;  // attracting fixed point
		cplx z0(lo + (hi - lo) * (0.2 + 0.6 * u(rng())), (hi - lo) * (0.1 + 0.5 * u(rng())));
		cplx I = single_cycle_integral(F, s, z0, qo, true);
		auto f = [&](cplx z) { return F.cocycle(s, z) * q_power(qs, z, 1); };
		cplx tail = contour_quadrature(f, Path{PathPiece::segment(z0, cplx(w, 0))}, qo).value;
		cplx J = I + tail;
		if (std::isnan(first[j])) {
			first[j] = J.real();
			first_im[j] = J.imag();
		} else if (std::abs(J - cplx(first[j], first_im[j])) > 1e-6 * std::max(1.0, std::abs(J))) {
			++violations;
		}
		++done;
	}
	CHECK(violations == 0);
}

TEST_CASE("intersection data are conjugacy invariant") {
	int violations = 0, done = 0;
	while (done < kInstances) {
		const FormClass& cls = classes()[uniform(0, long(classes().size()) - 1)];
		const GroupElement& s = sigmas()[uniform(0, long(sigmas().size()) - 1)];
		if (equivalent_lines(cls, s)) continue;
		++done;
		GroupElement h = random_sl2(3);
		GroupElement t = h * s * h.inverse();
		// the normal form replaces an element with c < 0 by its inverse, which reverses the geodesic
		GroupElement tp = t.trace() < 0 ? -t : t;
		const double flip = tp.c < 0 ? -1.0 : 1.0;
		auto a = sorted_cosines(enumerate_closed_intersections(cls, s));
		for (double& x : a) x *= flip;
		std::sort(a.begin(), a.end());
		auto b = sorted_cosines(enumerate_closed_intersections(cls, t));
		if (a.size() != b.size()) {
			++violations;
			continue;
		}
		for (std::size_t j = 0; j < a.size(); ++j)
			if (std::abs(a[j] - b[j]) > 1e-9) ++violations;
		// reversing the geodesic negates the odd Legendre terms, the form signs stay
		for (int k : {2, 3})
			if (std::abs(std::pow(flip, k - 1) * geometric_side(k, cls, s, ExponentMode::k_minus_1) -
			             geometric_side(k, cls, t, ExponentMode::k_minus_1)) > 1e-9 * std::pow(100.0 * a.size(), k))
				++violations;
	}
	CHECK(violations == 0);
}

TEST_CASE("enumeration is complete under bound doubling") {
	int violations = 0, closed = 0, vertical = 0;
	while (closed < kInstances) {
		const FormClass& cls = classes()[uniform(0, long(classes().size()) - 1)];
		const GroupElement& s = sigmas()[uniform(0, long(sigmas().size()) - 1)];
		if (equivalent_lines(cls, s)) continue;
		auto a = sorted_cosines(enumerate_closed_intersections(cls, s, 1.0));
		auto b = sorted_cosines(enumerate_closed_intersections(cls, s, 2.0));
		if (a != b) ++violations;
		++closed;
	}
	while (vertical < kInstances) {
		const FormClass& cls = classes()[uniform(0, long(classes().size()) - 1)];
		long c = uniform(1, 12), d = uniform(-12, 12);
		if (std::gcd(std::abs(d), c) != 1) continue;
		auto a = sorted_cosines(enumerate_vertical_intersections(cls, d, c, 1.0));
		auto b = sorted_cosines(enumerate_vertical_intersections(cls, d, c, 2.0));
		if (a != b) ++violations;
		++vertical;
	}
	CHECK(violations == 0);
}
