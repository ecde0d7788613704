#include "doctest.h"

#include "modgeo/modular_integral.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace modgeo;

namespace {

constexpr double kPi = std::numbers::pi;

// Naive box sum over all forms of the class with |A|, |C| <= H, no orbit grouping.
cplx box_sum(int k, const FormClass& cls, Flavor fl, long H, cplx z) {
	const long D = long(to_i64(cls.discriminant));
	cplx s = 0;
	for (long A = -H; A <= H; ++A) {
		if (A == 0) continue;
		for (long B = -3 * H; B <= 3 * H; ++B) {
			long N = B * B - D;
			if (N % (4 * A) != 0) continue;
			long C = N / (4 * A);
			if (C == 0 || std::abs(C) > H) continue;
			if (!cls.contains(SmallForm{A, B, C})) continue;
			cplx t = std::pow((double(A) * z + double(B)) * z + double(C), -k);
			s += (fl == Flavor::parson && A < 0) ? -t : t;
		}
	}
	return -series_constant(k, cls.discriminant) * s;
}

const FormClass& c5() {
	static FormClass c = reduction_cycle(QForm{1, 1, -1});
	return c;
}
const FormClass& c12() {
	static FormClass c = reduction_cycle(QForm{1, 2, -2});
	return c;
}

}  // namespace

TEST_CASE("T-orbit sum against a truncated sum over n") {
	for (int k : {2, 3, 4})
		for (auto [A, B] : {std::pair{1L, 1L}, {3L, 5L}, {-7L, 3L}, {41L, 13L}})
			for (cplx z : {cplx(0.2, 0.9), cplx(-0.4, 0.3), cplx(0.1, 2.5)}) {
				cplx ref = 0;
				for (long n = -100000; n <= 100000; ++n) {
					cplx w = z + double(n);
					double C = double(B * B - 5) / (4.0 * A);
					ref += std::pow((double(A) * w + double(B)) * w + C, -k);
				}
				CAPTURE(k);
				CAPTURE(A);
				CHECK(std::abs(t_orbit_sum(k, A, B, 5, z) - ref) < 1e-8 * std::max(1.0, std::abs(ref)));
			}
}

TEST_CASE("direct series against a naive box sum") {
	cplx z(0.137, 0.93);
	SeriesHandle h{3, c5(), {}, Flavor::parson};
	cplx F = eval_series(h, z);
	cplx ref = box_sum(3, c5(), Flavor::parson, 250, z);
	CHECK(std::abs(F - ref) < 2e-3 * std::abs(F));
	SeriesHandle h12{3, c12(), {}, Flavor::parson};
	cplx F12 = eval_series(h12, z);
	CHECK(std::abs(F12 - box_sum(3, c12(), Flavor::parson, 250, z)) < 5e-3 * std::abs(F12));
}

TEST_CASE("vanishing cases") {
	cplx z(0.31, 0.77);
	// D = 5 contains -Q, so F vanishes for even k; f is a cusp form of weight 2k <= 10
	CHECK(std::abs(eval_series({2, c5(), {}, Flavor::parson}, z)) < 1e-6);
	CHECK(std::abs(eval_series({4, c5(), {}, Flavor::parson}, z)) < 1e-6);
	for (int k : {3, 4}) CHECK(std::abs(eval_series({k, c5(), {}, Flavor::katok}, z)) < 1e-6);
	// weight 4 converges slowly
	TruncationPolicy loose;
	loose.tol = 1e-4;
	CHECK(std::abs(eval_series({2, c5(), loose, Flavor::katok}, z)) < 1e-3);
	CHECK(std::abs(eval_series({2, c12(), loose, Flavor::parson}, z)) > 1e-2);
}

TEST_CASE("series is 1-periodic and reports its truncation") {
	SeriesHandle h{2, c12(), {}, Flavor::parson};
	h.policy.tol = 1e-5;
	cplx z(0.2, 0.6);
	SeriesValue a = eval_series_report(h, z), b = eval_series_report(h, z + 1.0);
	CHECK(std::abs(a.value - b.value) < 1e-9);
	CHECK(a.height >= h.policy.height);
	CHECK(a.drift < h.policy.tol);
}

TEST_CASE("truncation cap raises ConvergenceError") {
	SeriesHandle h{2, c12(), {}, Flavor::parson};
	h.policy.height = 1;
	h.policy.max_doublings = 0;
	CHECK_THROWS_AS(eval_series(h, cplx(0.1, 0.5)), ConvergenceError);
	CHECK_THROWS_AS(eval_series(h, cplx(0.1, -0.5)), std::invalid_argument);
}

TEST_CASE("transformation law under S") {
	for (int k : {2, 3}) {
		SeriesHandle h{k, c12(), {}, Flavor::parson};
		h.policy.tol = k == 2 ? 1e-6 : 1e-9;
		const double tol = k == 2 ? 1e-5 : 1e-7;
		for (cplx z : {cplx(0.3, 1.1), cplx(-0.45, 0.8)}) {
			GroupElement S = GroupElement::S();
			cplx lhs = slash_factor(k, S, z) * eval_series(h, act(S, z)) - eval_series(h, z);
			cplx r = eval_cocycle(k, c12(), S, z);
			CAPTURE(k);
			CHECK(std::abs(lhs - r) < tol * std::max(1.0, std::abs(r)));
		}
	}
}

TEST_CASE("crossing forms for S") {
	auto f = cocycle_forms(c5(), GroupElement::S());
	CHECK(f.size() == 4);
	for (const CrossingForm& q : f) {
		CHECK(q.A * q.C < 0);
		CHECK(q.sign == (q.A > 0 ? 1 : -1));
	}
	CHECK(cocycle_forms(c5(), GroupElement::T()).empty());
}

TEST_CASE("sign of Q o sigma^-n settles") {
	for (const GroupElement& s : primitive_classes_of_trace(6)) CHECK(sign_limit_check(c5(), s, 40));
	auto seq = sign_sequence(QForm{1, 1, -1}, GroupElement{1, 2, 2, 5}, 10);
	CHECK(seq.size() == 11);
	CHECK(seq.front() == 1);
}

TEST_CASE("evaluator matches the direct series") {
	std::mt19937_64 rng(3);
	std::uniform_real_distribution<double> ux(-0.5, 0.5), uy(0.15, 1.6);
	for (int k : {2, 3}) {
		// weight 4 converges slowly, so fewer and looser points
		TruncationPolicy p;
		p.tol = k == 2 ? 5e-5 : 1e-7;
		const double tol = k == 2 ? 3e-4 : 1e-5;
		ModularIntegral F(k, c12(), Flavor::parson, p);
		CHECK(F.coefficients().size() == 30);
		CHECK(F.validation_error() >= 0);
		CHECK(F.validation_error() < tol);
		SeriesHandle h{k, c12(), p, Flavor::parson};
		for (int i = 0; i < (k == 2 ? 3 : 6); ++i) {
			cplx z(ux(rng), uy(rng));
			cplx d = eval_series(h, z);
			CAPTURE(z);
			CHECK(std::abs(F(z) - d) < tol * std::max(1.0, std::abs(d)));
		}
	}
}

TEST_CASE("evaluator cocycle is the finite sum") {
	ModularIntegral F(3, c5(), Flavor::parson);
	GroupElement g{2, 1, 1, 1};
	for (cplx z : {cplx(0.1, 0.7), cplx(1.3, 0.2)}) {
		CHECK(std::abs(F.cocycle(g, z) - eval_cocycle(3, c5(), g, z)) < 1e-12 * std::max(1.0, std::abs(F.cocycle(g, z))));
		cplx lhs = slash_factor(3, g, z) * F(act(g, z)) - F(z);
		CHECK(std::abs(lhs - F.cocycle(g, z)) < 1e-6 * std::max(1.0, std::abs(lhs)));
	}
}

TEST_CASE("validation failure is reported") {
	TruncationPolicy p;
	p.height = 1;
	p.max_doublings = 0;
	CHECK_THROWS_AS(ModularIntegral(2, c12(), Flavor::parson, p), ConvergenceError);
}

TEST_CASE("Mellin transform does not depend on the split height") {
	ModularIntegral F(3, c5(), Flavor::parson);
	for (auto [d, c] : {std::pair{0, 1}, {1, 2}, {-1, 3}})
		for (int m : {0, 2, 4}) {
			cplx a = F.mellin(d, c, m, 1.0), b = F.mellin(d, c, m, 1.5);
			CHECK(std::abs(a - b) < 1e-7 * std::max(1.0, std::abs(a)));
		}
	// direct quadrature of the t-integral on the imaginary axis, m = 2
	cplx ref = integrate_interval([&](double t) { return F(cplx(0, t)) * t * t; }, 0.05, 40).value;
	cplx lo = integrate_interval([&](double t) { return F(cplx(0, t)) * t * t; }, 1e-9, 0.05).value;
	CHECK(std::abs(F.mellin(0, 1, 2) - (ref + lo)) < 1e-6 * std::max(1.0, std::abs(ref)));
}
