#include "modgeo/periods.hpp"

#include <gsl/gsl_sf_psi.h>
#include <gsl/gsl_sf_zeta.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace modgeo {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx I1{0, 1};

std::vector<cplx> poly_mul(const std::vector<cplx>& p, const std::vector<cplx>& q) {
	std::vector<cplx> r(p.size() + q.size() - 1, 0.0);
	for (std::size_t i = 0; i < p.size(); ++i)
		for (std::size_t j = 0; j < q.size(); ++j) r[i + j] += p[i] * q[j];
	return r;
}

std::vector<cplx> poly_pow(const std::vector<cplx>& p, int e) {
	std::vector<cplx> r{1.0};
	for (int i = 0; i < e; ++i) r = poly_mul(r, p);
	return r;
}

double max_abs(const std::vector<cplx>& v) {
	double m = 0;
	for (const cplx& x : v) m = std::max(m, std::abs(x));
	return m;
}

// Fills ratios, lambda and the deviation; scale_* are the magnitudes of the pieces that make up each side.
void compare(PeriodReport& r, double scale_lhs, double scale_rhs) {
	const std::vector<cplx>& u = r.lhs;
	const std::vector<cplx>& v = r.rhs;
	double nu = max_abs(u), nv = max_abs(v);
	if (nu <= 1e-6 * std::max(scale_lhs, 1e-300) && nv <= 1e-6 * std::max(scale_rhs, 1e-300)) {
		// 0 = lambda * 0 for every lambda
		r.degenerate = true;
		r.lambda = 0;
		r.max_ratio_deviation = std::max(nu / std::max(scale_lhs, 1e-300), nv / std::max(scale_rhs, 1e-300));
		return;
	}
	cplx num = 0;
	double den = 0;
	for (std::size_t j = 0; j < u.size(); ++j) {
		num += u[j] * std::conj(v[j]);
		den += std::norm(v[j]);
	}
	r.lambda = den > 0 ? num / den : cplx(0);
	for (std::size_t j = 0; j < u.size(); ++j)
		if (std::abs(v[j]) > 1e-9 * nv) r.ratios.push_back((u[j] / v[j]).real());
	double dev = 0;
	for (std::size_t j = 0; j < u.size(); ++j) dev = std::max(dev, std::abs(u[j] - r.lambda * v[j]));
	r.max_ratio_deviation = std::abs(r.lambda) > 0 ? dev / (std::abs(r.lambda) * nv) : INFINITY;
}

double alt_deviation(const std::vector<cplx>& u, const std::vector<cplx>& v) {
	PeriodReport tmp;
	tmp.lhs = u;
	tmp.rhs = v;
	compare(tmp, max_abs(u), max_abs(v));
	return tmp.max_ratio_deviation;
}

void recognize_interior(PeriodReport& r, int k, const std::vector<cplx>& plus, const std::vector<cplx>& minus) {
	for (int n = 1; n < 2 * k - 2; ++n) {
		RecognizedPeriod rp;
		rp.n = n;
		rp.value = n % 2 == 0 ? plus[n] : minus[n];
		if (std::abs(rp.value.imag()) <= 1e-7 * std::max(1.0, std::abs(rp.value.real())))
			rp.rational = recognize_rational(rp.value.real());
		r.recognized.push_back(rp);
	}
}

}  // namespace

cplx period(const ModularIntegral& F, int n, double split) { return F.mellin(0, 1, n, split); }

std::vector<cplx> periods(const ModularIntegral& F, double split) {
	std::vector<cplx> p;
	for (int n = 0; n <= 2 * F.k() - 2; ++n) p.push_back(period(F, n, split));
	return p;
}

cplx PeriodPolynomial::operator()(cplx x) const {
	cplx s = 0;
	for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) s = s * x + *it;
	return s;
}

std::vector<cplx> PeriodPolynomial::recombined() const {
	std::vector<cplx> out(coefficients.size());
	for (std::size_t j = 0; j < out.size(); ++j) out[j] = I1 * even_part[j] + odd_part[j];
	return out;
}

PeriodPolynomial period_polynomial(int k, const std::vector<cplx>& p) {
	const int w = 2 * k - 2;
	if (int(p.size()) != w + 1) throw std::invalid_argument("period_polynomial: need 2k-1 periods");
	PeriodPolynomial P;
	P.k = k;
	P.coefficients.assign(w + 1, 0.0);
	P.even_part.assign(w + 1, 0.0);
	P.odd_part.assign(w + 1, 0.0);
	for (int n = 0; n <= w; ++n) {
		double b = binomial(w, n);
		P.coefficients[w - n] = std::pow(I1, 1 - n) * b * p[n];
		if (n % 2 == 0)
			P.even_part[w - n] = ((n / 2) % 2 == 0 ? 1.0 : -1.0) * b * p[n];
		else
			P.odd_part[w - n] = (((n - 1) / 2) % 2 == 0 ? 1.0 : -1.0) * b * p[n];
	}
	return P;
}

cplx period_polynomial_direct(const ModularIntegral& F, cplx x) {
	const int e = 2 * F.k() - 2;
	auto f = [&](double t) { return F(cplx(0, t)) * std::pow(x - cplx(0, t), e) * I1; };
	// same split as mellin: the evaluator below height 1, the Fourier tail above it
	return integrate_interval(f, 0, 1, TruncationPolicy{}.quadrature()).value +
	       integrate_interval(f, 1, INFINITY, TruncationPolicy{}.quadrature()).value;
}

QForm mirror_form(const QForm& q) { return {q.A, -q.B, q.C}; }
QForm conjugate_form(const QForm& q) { return {-q.A, q.B, -q.C}; }

SymmetrizedPair symmetrize(const FormClass& cls) { return {cls, reduction_cycle(conjugate_form(cls.seed))}; }

double riemann_zeta(int s) {
	if (s < 2) throw std::invalid_argument("riemann_zeta: s must be at least 2");
	return gsl_sf_zeta_int(s);
}

int kronecker(std::int64_t a, std::int64_t n) {
	if (n <= 0) throw std::invalid_argument("kronecker: n must be positive");
	int res = 1;
	while (n % 2 == 0) {
		n /= 2;
		if (a % 2 == 0) return 0;
		std::int64_t r = ((a % 8) + 8) % 8;
		if (r == 3 || r == 5) res = -res;
	}
	// Jacobi symbol (a / n), n odd
	a %= n;
	if (a < 0) a += n;
	while (a != 0) {
		while (a % 2 == 0) {
			a /= 2;
			std::int64_t r = n % 8;
			if (r == 3 || r == 5) res = -res;
		}
		std::swap(a, n);
		if (a % 4 == 3 && n % 4 == 3) res = -res;
		a %= n;
	}
	return n == 1 ? res : 0;
}

double dirichlet_l(std::int64_t D, int s) {
	if (D <= 1 || (D % 4 != 0 && D % 4 != 1)) throw std::invalid_argument("dirichlet_l: need a discriminant D > 1");
	if (s < 1) throw std::invalid_argument("dirichlet_l: s must be at least 1");
	double sum = 0;
	for (std::int64_t a = 1; a <= D; ++a) {
		int chi = kronecker(D, a);
		if (chi == 0) continue;
		sum += chi * (s == 1 ? gsl_sf_psi(double(a) / D) : gsl_sf_hzeta(s, double(a) / D));
	}
	return s == 1 ? -sum / double(D) : sum / std::pow(double(D), s);
}

FormZeta form_zeta(const QForm& q, int s, double bound) {
	if (s < 2) throw std::invalid_argument("form_zeta: s must be at least 2");
	const double D = to_double(q.disc());
	const std::int64_t A = to_i64(q.A), B = to_i64(q.B), C = to_i64(q.C);
	auto Q = [&](std::int64_t m, std::int64_t n) { return A * m * m + B * m * n + C * n * n; };
	auto bil = [&](std::int64_t m1, std::int64_t n1, std::int64_t m2, std::int64_t n2) {
		return 2 * A * m1 * m2 + B * (m1 * n2 + m2 * n1) + 2 * C * n1 * n2;
	};
	std::int64_t v0m = 0, v0n = 0;
	for (std::int64_t r = 1; r < 64 && v0m == 0 && v0n == 0; ++r)
		for (std::int64_t m = -r; m <= r && v0m == 0 && v0n == 0; ++m)
			for (std::int64_t n : {r - std::abs(m), std::abs(m) - r})
				if (Q(m, n) > 0) {
					v0m = m, v0n = n;
					break;
				}
	GroupElement M = fundamental_automorph(q);
	const std::int64_t a = to_i64(M.a), b = to_i64(M.b), c = to_i64(M.c), d = to_i64(M.d);
	const std::int64_t w_m = a * v0m + b * v0n, w_n = c * v0m + d * v0n;
	auto det = [](std::int64_t x1, std::int64_t y1, std::int64_t x2, std::int64_t y2) { return x1 * y2 - y1 * x2; };
	const std::int64_t o = det(v0m, v0n, w_m, w_n) > 0 ? 1 : -1;
	// half-open sector [v0, M v0) inside the positive cone of v0
	auto inside = [&](std::int64_t m, std::int64_t n) {
		return Q(m, n) > 0 && bil(m, n, v0m, v0n) > 0 && o * det(v0m, v0n, m, n) >= 0 && o * det(m, n, w_m, w_n) > 0;
	};
	// lower bound for Q on unit vectors of the sector
	double ph0 = std::atan2(double(v0n), double(v0m)), ph1 = std::atan2(double(w_n), double(w_m));
	double span = ph1 - ph0;
	while (span > kPi) span -= 2 * kPi;
	while (span < -kPi) span += 2 * kPi;
	double qmin = INFINITY;
	for (int j = 0; j <= 4096; ++j) {
		double ph = ph0 + span * j / 4096.0, x = std::cos(ph), y = std::sin(ph);
		qmin = std::min(qmin, A * x * x + B * x * y + C * y * y);
	}
	qmin *= 0.95;
	const auto R = static_cast<std::int64_t>(std::ceil(std::sqrt(bound / qmin))) + 1;
	FormZeta out;
	out.bound = bound;
	// the two sector constraints are linear in n for fixed m: alpha n + beta >= 0 (> 0)
	auto cut = [](double alpha, double beta, double& lo, double& hi) {
		if (alpha > 0)
			lo = std::max(lo, -beta / alpha);
		else if (alpha < 0)
			hi = std::min(hi, -beta / alpha);
		else if (beta < 0)
			hi = lo - 1;
	};
	double sum = 0;
	for (std::int64_t m = -R; m <= R; ++m) {
		double lo = -double(R), hi = double(R);
		cut(double(o * v0m), -double(o * v0n * m), lo, hi);
		cut(-double(o * w_m), double(o * m * w_n), lo, hi);
		if (hi < lo) continue;
		for (auto n = static_cast<std::int64_t>(std::floor(lo)) - 1; n <= static_cast<std::int64_t>(std::ceil(hi)) + 1; ++n) {
			if (!inside(m, n)) continue;
			double v = double(Q(m, n));
			if (v > bound) continue;
			sum += std::pow(v, -s);
			++out.points;
		}
	}
	const double t = to_double(M.trace());
	const double eps = 0.5 * (t + std::sqrt(t * t - 4));
	out.tail = std::log(eps) / std::sqrt(D) * std::pow(bound, 1 - s) / (s - 1);
	out.value = sum + out.tail;
	return out;
}

std::optional<Rational> recognize_rational(double x, std::int64_t max_den, double tol) {
	if (!std::isfinite(x)) return std::nullopt;
	// convergents h/k of the continued fraction of x
	Int h0 = 0, h1 = 1, k0 = 1, k1 = 0;
	double r = x;
	for (int it = 0; it < 64; ++it) {
		double fl = std::floor(r);
		Int a = Int(static_cast<long long>(fl));
		Int h2 = a * h1 + h0, k2 = a * k1 + k0;
		if (k2 > max_den) break;
		h0 = h1, h1 = h2, k0 = k1, k1 = k2;
		if (std::abs(to_double(h1) / to_double(k1) - x) <= tol * std::max(1.0, std::abs(x))) return Rational{h1, k1};
		double frac = r - fl;
		if (frac < 1e-300) break;
		r = 1 / frac;
	}
	return std::nullopt;
}

bool PeriodReport::recognition_ok() const {
	return std::all_of(recognized.begin(), recognized.end(), [](const RecognizedPeriod& p) { return p.rational.has_value(); });
}

PeriodReport verify_period_formula_class(int k, const FormClass& cls, const TruncationPolicy& policy) {
	if (k < 2) throw std::invalid_argument("verify_period_formula_class: k must be at least 2");
	const int w = 2 * k - 2;
	const double D = to_double(cls.discriminant);
	SymmetrizedPair pair = symmetrize(cls);
	ModularIntegral F(k, cls, Flavor::parson, policy);
	std::vector<cplx> p = periods(F), pm;
	if (pair.mirrored == cls) {
		pm = p;
	} else {
		ModularIntegral G(k, pair.mirrored, Flavor::parson, policy);
		pm = periods(G);
	}
	std::vector<cplx> plus(w + 1), minus(w + 1);
	for (int n = 0; n <= w; ++n) {
		plus[n] = p[n] + pm[n];
		minus[n] = I1 * (p[n] - pm[n]);
	}
	PeriodReport r;
	r.formula = "class";
	r.k = k;
	r.D = cls.discriminant;
	r.periods = p;
	PeriodPolynomial Pp = period_polynomial(k, plus), Pm = period_polynomial(k, minus);
	r.lhs.assign(w + 1, 0.0);
	for (int j = 0; j <= w; ++j) r.lhs[j] = Pp.even_part[j] + Pm.odd_part[j];

	// forms of the class with a < 0 < c; |a| c <= D / 4
	auto H = std::max<long>(1, static_cast<long>(D / 4) + 1);
	std::vector<cplx> fin(w + 1, 0.0), fin_alt(w + 1, 0.0);
	for (const QForm& f : enumerate_orbit_bounded(cls, H)) {
		if (!(f.A < 0 && f.C > 0)) continue;
		double a = to_double(f.A), b = to_double(f.B), c = to_double(f.C);
		std::vector<cplx> t = poly_pow({c, -b, a}, k - 1), ta = poly_pow({c, b, a}, k - 1);
		for (int j = 0; j <= w; ++j) fin[j] += t[j], fin_alt[j] += ta[j];
	}
	FormZeta zq = form_zeta(cls.seed, k);
	const double K = 2 * std::pow(D, k - 0.5) * zq.value / (binomial(w, k - 1) * (w + 1) * riemann_zeta(2 * k));
	r.rhs.assign(w + 1, 0.0);
	std::vector<cplx> rhs_alt(w + 1);
	for (int j = 0; j <= w; ++j) {
		r.rhs[j] = -2.0 * fin[j];
		rhs_alt[j] = -2.0 * fin_alt[j];
	}
	r.rhs[w] -= K, r.rhs[0] += K;
	rhs_alt[w] -= K, rhs_alt[0] += K;
	double scale_l = 0;
	for (int n = 0; n <= w; ++n) scale_l = std::max(scale_l, binomial(w, n) * std::max(std::abs(p[n]), std::abs(pm[n])));
	compare(r, std::max(scale_l, 1.0), std::max({max_abs(fin) * 2, std::abs(K), 1e-12}));
	r.alt_sign_deviation = r.degenerate ? r.max_ratio_deviation : alt_deviation(r.lhs, rhs_alt);
	{
		const double Kn = K / zq.value * form_zeta(-cls.seed, k).value;
		std::vector<cplx> rhs_neg = r.rhs;
		rhs_neg[w] += K - Kn, rhs_neg[0] -= K - Kn;
		r.neg_zeta_deviation = r.degenerate ? r.max_ratio_deviation : alt_deviation(r.lhs, rhs_neg);
	}
	recognize_interior(r, k, plus, minus);
	spdlog::info("period formula k={} D={}: lambda {:.6g}, deviation {:.2e}, with b -> -b {:.2e}, with zeta of -Q {:.2e}", k,
	             r.D.str(), r.lambda.real(), r.max_ratio_deviation, r.alt_sign_deviation, r.neg_zeta_deviation);
	return r;
}

PeriodReport verify_period_formula_disc(int k, const Int& Dint, const TruncationPolicy& policy) {
	if (k < 3 || k % 2 == 0) throw std::invalid_argument("verify_period_formula_disc: k must be odd and at least 3");
	const int w = 2 * k - 2;
	const double D = to_double(Dint);
	std::vector<cplx> p(w + 1, 0.0);
	for (const FormClass& cls : class_representatives(Dint)) {
		ModularIntegral F(k, cls, Flavor::parson, policy);
		std::vector<cplx> q = periods(F);
		for (int n = 0; n <= w; ++n) p[n] += q[n];
	}
	PeriodReport r;
	r.formula = "discriminant";
	r.k = k;
	r.D = Dint;
	r.periods = p;
	r.lhs = period_polynomial(k, p).even_part;

	std::vector<cplx> fin(w + 1, 0.0), fin_alt(w + 1, 0.0);
	const std::int64_t Di = to_i64(Dint);
	for (std::int64_t na = 1; 4 * na <= Di; ++na)
		for (std::int64_t c = 1; 4 * na * c <= Di; ++c) {
			std::int64_t b2 = Di - 4 * na * c;
			auto b = static_cast<std::int64_t>(std::llround(std::sqrt(double(b2))));
			if (b * b != b2) continue;
			for (std::int64_t sb : {b, -b}) {
				std::vector<cplx> t = poly_pow({double(c), double(sb), -double(na)}, k - 1);
				std::vector<cplx> ta = poly_pow({double(c), -double(sb), -double(na)}, k - 1);
				for (int j = 0; j <= w; ++j) fin[j] += t[j], fin_alt[j] += ta[j];
				if (b == 0) break;
			}
		}
	const double K = std::pow(D, k - 0.5) * riemann_zeta(k) * dirichlet_l(Di, k) /
	                 (binomial(w, k - 1) * (w + 1) * riemann_zeta(2 * k));
	r.rhs.assign(w + 1, 0.0);
	std::vector<cplx> rhs_alt(w + 1);
	for (int j = 0; j <= w; ++j) r.rhs[j] = -fin[j], rhs_alt[j] = -fin_alt[j];
	r.rhs[w] -= K, r.rhs[0] += K;
	rhs_alt[w] -= K, rhs_alt[0] += K;
	double scale_l = 0;
	for (int n = 0; n <= w; ++n) scale_l = std::max(scale_l, binomial(w, n) * std::abs(p[n]));
	compare(r, std::max(scale_l, 1.0), std::max({max_abs(fin), std::abs(K), 1e-12}));
	r.alt_sign_deviation = r.degenerate ? r.max_ratio_deviation : alt_deviation(r.lhs, rhs_alt);
	recognize_interior(r, k, p, std::vector<cplx>(w + 1, 0.0));
	// interior even indices only
	for (int n = 2; n < w; n += 2) r.symmetry_residuals.push_back(std::abs(p[w - n] - p[n]));
	spdlog::info("period formula k={} D={}: lambda {:.6g}, deviation {:.2e}", k, r.D.str(), r.lambda.real(),
	             r.max_ratio_deviation);
	return r;
}

}  // namespace modgeo
