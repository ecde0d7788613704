#include "doctest.h"

#include "modgeo/geodesics.hpp"
#include "modgeo/poincare.hpp"

#include <cmath>

using namespace modgeo;

namespace {

double invariant(const QForm& a, const QForm& b) {
	return to_double(a.B * b.B - 2 * a.A * b.C - 2 * b.A * a.C) / std::sqrt(to_double(a.disc() * b.disc()));
}

// Brute-force box search for forms of discriminant D crossing the vertical line through -d/c.
int count_vertical_brute(long D, long d, long c, long box) {
	int n = 0;
	for (long A = -box; A <= box; ++A) {
		if (A == 0) continue;
		for (long B = -box; B <= box; ++B) {
			long N = B * B - D;
			if (N % (4 * A) != 0) continue;
			long C = N / (4 * A);
			if (C == 0) continue;
			if (A * (A * d * d - B * d * c + C * c * c) < 0) ++n;
		}
	}
	return n;
}

}  // namespace

TEST_CASE("roots are ordered and are roots") {
	for (QForm q : {QForm{1, 1, -1}, QForm{-3, 7, 2}, QForm{2, 4, -2}}) {
		auto [lo, hi] = roots(q);
		CHECK(lo < hi);
		for (double x : {lo, hi})
			CHECK(std::abs(to_double(q.A) * x * x + to_double(q.B) * x + to_double(q.C)) < 1e-12);
	}
}

TEST_CASE("exact surd signs") {
	CHECK(sign_surd(3, -1, 5) == 1);
	CHECK(sign_surd(2, -1, 5) == -1);
	CHECK(sign_surd(-3, 1, 9) == 0);
	CHECK(sign_surd(0, 0, 5) == 0);
	CHECK(sign_surd(0, -2, 5) == -1);
	QForm q1{3, -1, -2}, q2{1, 1, -1};
	auto [lo, hi] = roots(q2);
	auto val = [&](double x) { return 3 * x * x - x - 2; };
	CHECK(sign_at_root(q1, q2, false) == (val(lo) > 0 ? 1 : -1));
	CHECK(sign_at_root(q1, q2, true) == (val(hi) > 0 ? 1 : -1));
}

TEST_CASE("sign and angle of a known pair") {
	QForm a{1, 1, -1}, b{2, 4, -2};
	REQUIRE(crosses(a, b));
	Intersection I = intersection_data(a, b);
	CHECK(I.sign == -1);
	CHECK(I.cos_angle == doctest::Approx(-3 / std::sqrt(10.0)).epsilon(1e-12));
	auto [c1, r1] = std::pair{-0.5, std::sqrt(5.0) / 2};
	CHECK(std::abs(std::abs(I.point - c1) - r1) < 1e-12);
}

TEST_CASE("cos angle equals mu times the discriminant invariant") {
	const QForm qs[] = {{1, 1, -1}, {2, 4, -2}, {-1, 3, 1}, {3, -1, -2}, {1, 0, -3}, {-2, 1, 3}, {5, 5, 1}, {1, -4, 2}};
	int pairs = 0;
	for (const QForm& a : qs)
		for (const QForm& b : qs) {
			if (a == b || !crosses(a, b)) continue;
			Intersection I = intersection_data(a, b);
			CHECK(I.cos_angle == doctest::Approx(I.sign * invariant(a, b)).epsilon(1e-12));
			++pairs;
		}
	CHECK(pairs > 20);
}

TEST_CASE("vertical crossing at 0") {
	Intersection I = intersection_data_vertical(QForm{1, 1, -1}, 0, 1);
	CHECK(I.cos_angle == doctest::Approx(1 / std::sqrt(5.0)).epsilon(1e-12));
	CHECK(I.sign == 1);
	CHECK(I.point.real() == 0.0);
	CHECK(I.point.imag() == doctest::Approx(1.0));
	CHECK_THROWS(intersection_data_vertical(QForm{1, 1, -1}, 2, 4));
	CHECK_THROWS(intersection_data_vertical(QForm{1, 1, -1}, 5, 1));
}

TEST_CASE("coinciding geodesics are rejected") {
	CHECK_THROWS_AS(crosses(QForm{1, 1, -1}, QForm{-2, -2, 2}), std::invalid_argument);
}

TEST_CASE("normal form") {
	GroupElement g = normalize_hyperbolic(GroupElement{-1, -1, -1, -2});
	CHECK(g.trace() > 0);
	CHECK(g.c > 0);
	CHECK_THROWS(normalize_hyperbolic(GroupElement::S()));
}

TEST_CASE("fundamental segment is one period of the axis") {
	for (long t : {3L, 6L, 7L})
		for (const GroupElement& s : primitive_classes_of_trace(t)) {
			SegmentData seg = fundamental_segment(s);
			CHECK(seg.phi_start > seg.phi_end);
			cplx z0 = seg.center + seg.radius * std::polar(1.0, seg.phi_start);
			cplx z1 = seg.center + seg.radius * std::polar(1.0, seg.phi_end);
			CHECK(std::abs(act(normalize_hyperbolic(s), z0) - z1) < 1e-9);
		}
}

TEST_CASE("vertical intersections match a brute-force box search") {
	FormClass c5 = reduction_cycle(QForm{1, 1, -1});
	for (auto [d, c] : {std::pair{0L, 1L}, {1L, 2L}, {1L, 3L}}) {
		auto v = enumerate_vertical_intersections(c5, d, c);
		CAPTURE(d);
		CAPTURE(c);
		CHECK(int(v.size()) == count_vertical_brute(5, d, c, 120));
		for (const Intersection& p : v) CHECK(std::abs(p.point.real() + double(d) / c) < 1e-12);
	}
	CHECK(enumerate_vertical_intersections(c5, 0, 1).size() == 4);
}

TEST_CASE("closed intersections D = 5 against (1,2;2,5)") {
	FormClass c5 = reduction_cycle(QForm{1, 1, -1});
	GroupElement s{1, 2, 2, 5};
	auto v = enumerate_closed_intersections(c5, s);
	CHECK(v.size() == 8);
	CHECK(enumerate_closed_intersections(c5, s, 2.0).size() == 8);
	SegmentData seg = fundamental_segment(s);
	for (const Intersection& p : v) {
		CHECK(std::abs(std::abs(p.point - seg.center) - seg.radius) < 1e-9);
		CHECK(std::abs(p.cos_angle) <= 1.0);
		CHECK(c5.contains(p.witness_form));
	}
}
