#include "doctest.h"

#include "modgeo/lfun.hpp"

#include <cmath>
#include <numbers>

using namespace modgeo;

namespace {

constexpr double kPi = std::numbers::pi;

const FormClass& c5() {
	static FormClass c = reduction_cycle(QForm{1, 1, -1});
	return c;
}
const FormClass& c12() {
	static FormClass c = reduction_cycle(QForm{1, 2, -2});
	return c;
}

// Intersection sum at the cusp 0 for a discriminant of narrow class number one, from the forms
// with A C < 0 directly: the vertical line x = 0 meets Q at angle with cos^2 = B^2 / D.
double rhs_at_zero(int k, long D) {
	double s = 0;
	for (long B = -long(std::sqrt(double(D))); B * B < D; ++B) {
		if ((B * B - D) % 4 != 0) continue;
		long N = (D - B * B) / 4;  // |A C|
		int pairs = 0;
		for (long a = 1; a <= N; ++a)
			if (N % a == 0) pairs += 2;  // (a, -N/a) and (-a, N/a)
		s += pairs * legendre_p(k - 1, double(B) / std::sqrt(double(D)));
	}
	return std::pow(double(D), 0.5 * (k - 1)) * s;
}

}  // namespace

TEST_CASE("Fourier coefficients: constant and negative terms vanish") {
	TruncationPolicy p;
	p.tol = 1e-9;
	for (int n : {0, -1}) {
		cplx a = dft_coefficient(3, c5(), n, 0.8, 12, p);
		CHECK(std::abs(a) < 1e-7);
	}
}

TEST_CASE("Fourier coefficients do not depend on the sampling height") {
	TruncationPolicy p;
	p.tol = 1e-9;
	FourierTable lo = fourier_coefficients(3, c5(), 6, 0.8, p);
	FourierTable hi = fourier_coefficients(3, c5(), 6, 1.1, p);
	CHECK(lo.samples == 24);
	CHECK(lo.height_used == 0.8);
	for (int n = 1; n <= 6; ++n) {
		// compare at the resolution of the higher sample, e^{-2 pi n 1.1} |a(n)|
		double scale = std::exp(-2 * kPi * n * 1.1);
		CAPTURE(n);
		CHECK(std::abs(lo.at(n) - hi.at(n)) * scale < 1e-8);
	}
	CHECK_THROWS(fourier_coefficients(3, c5(), 6, 0.5));
	CHECK_THROWS(fourier_coefficients(3, c5(), 6, 0.8, p, 8));
}

TEST_CASE("evaluator coefficients agree with the DFT") {
	TruncationPolicy p;
	p.tol = 1e-9;
	ModularIntegral F(3, c5(), Flavor::parson);
	FourierTable t = fourier_coefficients(3, c5(), 5, 0.8, p);
	for (int n = 1; n <= 5; ++n) {
		CAPTURE(n);
		CHECK(std::abs(F.coefficients()[n - 1] - t.at(n)) * std::exp(-2 * kPi * n * 0.8) < 1e-7);
	}
}

TEST_CASE("L-values: split height and translation") {
	ModularIntegral F(3, c5(), Flavor::parson);
	for (int s = 1; s <= 5; ++s) {
		cplx a = l_value(F, 1, 3, s, 1.0), b = l_value(F, 1, 3, s, 1.4), c = l_value(F, 4, 3, s);
		CAPTURE(s);
		CHECK(std::abs(a - b) < 1e-7 * std::max(1.0, std::abs(a)));
		CHECK(std::abs(a - c) < 1e-7 * std::max(1.0, std::abs(a)));
	}
	CHECK_THROWS(l_value(F, 0, 1, 0));
	CHECK_THROWS(l_value(F, 0, 1, 6));
	ModularIntegral G(2, c12(), Flavor::parson);
	CHECK_THROWS(l_value_central(G, 0, 1));
}

TEST_CASE("central value at 0 against the intersection count") {
	CHECK(rhs_at_zero(3, 5) == doctest::Approx(-4));
	CHECK(rhs_at_zero(3, 8) == doctest::Approx(-8));
	for (int k : {3, 5})
		for (long D : {5L, 8L}) {
			ModularIntegral F(k, reduction_cycle(D == 5 ? QForm{1, 1, -1} : QForm{1, 2, -1}), Flavor::parson);
			Theorem2Report r = theorem2_sides(F, 0, 1);
			CAPTURE(k);
			CAPTURE(D);
			CHECK(r.rhs == doctest::Approx(rhs_at_zero(k, D)).epsilon(1e-12));
			CHECK(r.residual < 1e-4);
		}
}

TEST_CASE("central value at 1/2 and 1/3") {
	ModularIntegral F(3, c5(), Flavor::parson);
	Theorem2Report a = theorem2_sides(F, 1, 2), b = theorem2_sides(F, 1, 3);
	CHECK(a.intersections == 8);
	CHECK(a.residual < 1e-4);
	CHECK(b.residual < 1e-4);
	CHECK(a.rhs == doctest::Approx(4));
	CHECK(b.rhs == doctest::Approx(-8.0 / 3));
}

TEST_CASE("primitive cocycle: derived normalization") {
	ModularIntegral F(2, c12(), Flavor::parson);
	for (const GroupElement& s : {GroupElement::S(), GroupElement{1, 2, 2, 5}})
		for (cplx z : {cplx(0, 3), cplx(0.3, 1.7)}) {
			CocycleDerivativeCheck c = check_primitive_cocycle(F, s, z, CocycleVariant::derived);
			CAPTURE(s.str());
			CHECK(c.rel_error < 1e-8);
		}
}

TEST_CASE("primitive cocycle: the printed weight is off by a non-constant factor") {
	ModularIntegral F(2, c12(), Flavor::parson);
	double lo = 1, hi = 0;
	for (cplx z : {cplx(0, 3), cplx(0.3, 1.7)}) {
		double e = check_primitive_cocycle(F, GroupElement::S(), z, CocycleVariant::printed).rel_error;
		lo = std::min(lo, e);
		hi = std::max(hi, e);
	}
	CHECK(lo > 0.1);
	CHECK(hi - lo > 0.1);
	CHECK_THROWS(primitive_cocycle(ModularIntegral(3, c5(), Flavor::katok), GroupElement::S(), cplx(0, 2)));
	CHECK_THROWS(primitive_cocycle(F, GroupElement::T(), cplx(0, 2)));
}
