#include "modgeo/lfun.hpp"

#include <spdlog/spdlog.h>

#include <cmath>
#include <numbers>

namespace modgeo {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx I1{0, 1};

double factorial(int n) { return std::exp(std::lgamma(n + 1.0)); }

}  // namespace

cplx FourierTable::scaled(int n) const { return at(n) * std::exp(-2 * kPi * n * height_used); }

cplx dft_coefficient(int k, const FormClass& cls, int n, double y, int samples, const TruncationPolicy& policy) {
	if (y < 0.8) throw std::invalid_argument("dft_coefficient: height must be at least 0.8");
	if (samples < 1) throw std::invalid_argument("dft_coefficient: need at least one sample");
	SeriesHandle h{k, cls, policy, Flavor::parson};
	cplx s = 0;
	for (int j = 0; j < samples; ++j) {
		double x = double(j) / samples;
		s += eval_series(h, cplx(x, y)) * std::polar(1.0, -2 * kPi * n * x);
	}
	return s / double(samples) * std::exp(2 * kPi * n * y);
}

FourierTable fourier_coefficients(int k, const FormClass& cls, int n_max, double y, const TruncationPolicy& policy,
                                  int samples) {
	if (n_max < 1) throw std::invalid_argument("fourier_coefficients: n_max must be positive");
	if (y < 0.8) throw std::invalid_argument("fourier_coefficients: height must be at least 0.8");
	const int M = samples > 0 ? samples : 4 * n_max;
	if (M < 2 * n_max + 1) throw std::invalid_argument("fourier_coefficients: too few samples for n_max");
	SeriesHandle h{k, cls, policy, Flavor::parson};
	std::vector<cplx> vals(M);
	for (int j = 0; j < M; ++j) vals[j] = eval_series(h, cplx(double(j) / M, y));
	FourierTable t;
	t.k = k;
	t.cls = cls;
	t.height_used = y;
	t.samples = M;
	for (int n = 1; n <= n_max; ++n) {
		cplx s = 0;
		for (int j = 0; j < M; ++j) s += vals[j] * std::polar(1.0, -2 * kPi * n * double(j) / M);
		t.coeffs.push_back(s / double(M) * std::exp(2 * kPi * n * y));
	}
	return t;
}

cplx l_value(const ModularIntegral& F, const Int& d, const Int& c, int s, double split) {
	if (s < 1 || s > 2 * F.k() - 1) throw std::invalid_argument("l_value: s must lie in [1, 2k-1]");
	return std::pow(2 * kPi, s) / factorial(s - 1) * F.mellin(d, c, s - 1, split);
}

cplx l_value_central(const ModularIntegral& F, const Int& d, const Int& c, double split) {
	if (F.k() % 2 == 0) throw std::invalid_argument("l_value_central: k must be odd");
	return l_value(F, d, c, F.k(), split);
}

Theorem2Report theorem2_sides(const ModularIntegral& F, const Int& d, const Int& c) {
	const int k = F.k();
	if (k % 2 == 0 || k < 3) throw std::invalid_argument("theorem2_sides: k must be odd and at least 3");
	Theorem2Report r;
	r.k = k;
	r.d = d;
	r.c = c;
	r.l_value = l_value_central(F, d, c);
	double sgn = ((k - 1) / 2) % 2 == 0 ? 1.0 : -1.0;
	r.lhs = sgn * factorial(k - 1) / std::pow(2 * kPi, k) * r.l_value.real();
	double sum = 0;
	auto pts = enumerate_vertical_intersections(F.cls(), d, c);
	for (const Intersection& p : pts) sum += legendre_p(k - 1, p.cos_angle);
	r.intersections = int(pts.size());
	r.rhs = std::pow(to_double(F.cls().discriminant), 0.5 * (k - 1)) * sum;
	r.residual = std::abs(r.lhs - r.rhs);
	return r;
}

cplx primitive_cocycle_singular(const ModularIntegral& F, const GroupElement& sigma_in, cplx z, CocycleVariant variant) {
	if (F.flavor() != Flavor::parson) throw std::invalid_argument("primitive_cocycle: needs the parson flavor");
	GroupElement sigma = sigma_in.c < 0 ? -sigma_in : sigma_in;
	if (sigma.c == 0) throw std::invalid_argument("primitive_cocycle: needs c(sigma) != 0");
	const int k = F.k();
	const double D = to_double(F.cls().discriminant);
	const double sD = std::sqrt(D);
	const cplx pre = std::pow(cplx(0, -2 * kPi), 2 * k - 1) * std::pow(D, k - 0.5) / (kPi * factorial(2 * k - 1));
	cplx sum = 0;
	for (const CrossingForm& f : cocycle_forms(F.cls(), sigma)) {
		double r1 = (-f.B + sD) / (2 * f.A), r2 = (-f.B - sD) / (2 * f.A);
		double w = std::max(r1, r2), wp = std::min(r1, r2);
		if (z == cplx(wp, 0)) throw std::domain_error("primitive_cocycle: z is a pole");
		cplx h = gauss_2f1(k, 1, 2 * k, 1.0 - (z - w) / (z - wp)) / (z - wp);
		if (variant == CocycleVariant::printed)
			sum += h / (std::abs(f.A) * binomial(2 * k - 2, k - 1));
		else
			sum += 2.0 * double(f.sign) * std::pow(f.A, -k) * h;
	}
	return pre * sum;
}

namespace {

// Coefficients of the L-value polynomial of R in powers of (cz + d).
std::vector<cplx> cocycle_polynomial(const ModularIntegral& F, const GroupElement& sigma) {
	const int k = F.k();
	const double c = to_double(sigma.c);
	const cplx pre = std::pow(cplx(0, -2 * kPi), 2 * k - 1) / factorial(2 * k - 2) * I1 / std::pow(c, 2 * k - 1);
	std::vector<cplx> out;
	// L twisted by a/c = -(-a)/c
	for (int n = 0; n <= 2 * k - 2; ++n) {
		cplx L = l_value(F, -sigma.a, sigma.c, n + 1);
		out.push_back(pre * binomial(2 * k - 2, n) * std::pow(I1, n) * std::pow(c / (2 * kPi), n + 1) * factorial(n) * L);
	}
	return out;
}

cplx horner(const std::vector<cplx>& p, cplx x) {
	cplx s = 0;
	for (auto it = p.rbegin(); it != p.rend(); ++it) s = s * x + *it;
	return s;
}

}  // namespace

cplx primitive_cocycle(const ModularIntegral& F, const GroupElement& sigma_in, cplx z, CocycleVariant variant) {
	GroupElement sigma = sigma_in.c < 0 ? -sigma_in : sigma_in;
	const double c = to_double(sigma.c), d = to_double(sigma.d);
	return primitive_cocycle_singular(F, sigma, z, variant) + horner(cocycle_polynomial(F, sigma), c * z + d);
}

CocycleDerivativeCheck check_primitive_cocycle(const ModularIntegral& F, const GroupElement& sigma_in, cplx z,
                                               CocycleVariant variant, double radius) {
	GroupElement sigma = sigma_in.c < 0 ? -sigma_in : sigma_in;
	const int k = F.k();
	const double c = to_double(sigma.c), d = to_double(sigma.d);
	const std::vector<cplx> poly = cocycle_polynomial(F, sigma);
	auto R = [&](cplx u) { return primitive_cocycle_singular(F, sigma, u, variant) + horner(poly, c * u + d); };
	CauchyOptions co;
	co.d_normalized = true;
	co.rel_tol = 1e-8;
	CocycleDerivativeCheck out;
	out.derivative = cauchy_derivative(R, z, 2 * k - 1, radius, co);
	out.cocycle = F.cocycle(sigma, z);
	out.rel_error = std::abs(out.derivative - out.cocycle) / std::max(std::abs(out.cocycle), 1e-300);
	return out;
}

}  // namespace modgeo
