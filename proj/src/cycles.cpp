#include "modgeo/cycles.hpp"

#include <spdlog/spdlog.h>

#include <cmath>
#include <limits>
#include <numbers>

namespace modgeo {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx I1{0, 1};

using Poly = std::vector<cplx>;

Poly poly_pow(const Poly& p, int e) {
	Poly r{1.0};
	for (int i = 0; i < e; ++i) {
		Poly t(r.size() + p.size() - 1, 0.0);
		for (std::size_t a = 0; a < r.size(); ++a)
			for (std::size_t b = 0; b < p.size(); ++b) t[a + b] += r[a] * p[b];
		r = std::move(t);
	}
	return r;
}

// Q(z0 + h, 1) as a polynomial in h.
Poly shifted(const QForm& q, cplx z0) {
	double A = to_double(q.A), B = to_double(q.B), C = to_double(q.C);
	return {(A * z0 + B) * z0 + C, 2 * A * z0 + B, A};
}

struct Arc {
	double center, radius;
};

Arc arc_of(const QForm& q) {
	Geodesic g = Geodesic::of_form(q);
	return {g.center(), g.radius()};
}

bool on_arc(const Arc& a, cplx z) { return std::abs(std::abs(z - a.center) - a.radius) < 1e-9 * a.radius; }

}  // namespace

cplx geodesic_apex(const GroupElement& sigma) {
	Arc a = arc_of(form_from_matrix(normalize_hyperbolic(sigma)));
	return {a.center, a.radius};
}

cplx q_power(const QForm& q, cplx z, int e) {
	cplx v = (to_double(q.A) * z + to_double(q.B)) * z + to_double(q.C);
	return std::pow(v, e);
}

cplx single_cycle_integral(const ModularIntegral& F, const GroupElement& sigma_in, cplx z0,
                           const QuadratureOptions& qo, bool force_segment) {
	GroupElement sigma = normalize_hyperbolic(sigma_in);
	QForm qs = form_from_matrix(sigma);
	const int k = F.k();
	cplx z1 = act(sigma, z0);
	Arc a = arc_of(qs);
	Path path;
	if (!force_segment && on_arc(a, z0))
		path.push_back(PathPiece::arc(cplx(a.center, 0), a.radius, std::arg(z0 - a.center), std::arg(z1 - a.center)));
	else
		path.push_back(PathPiece::segment(z0, z1));
	auto f = [&](cplx z) { return F(z) * q_power(qs, z, k - 1); };
	return contour_quadrature(f, path, qo).value;
}

HomogenizedResult homogenized_cycle_integral(const ModularIntegral& F, const GroupElement& sigma_in,
                                             std::optional<cplx> z0_in, const TruncationPolicy& policy, int n_max) {
	GroupElement sigma = normalize_hyperbolic(sigma_in);
	QForm qs = form_from_matrix(sigma);
	const int k = F.k();
	const QuadratureOptions qo = policy.quadrature();
	cplx z = z0_in.value_or(geodesic_apex(sigma));
	HomogenizedResult res;
	int quiet = 0;
	double best = std::numeric_limits<double>::infinity();
	std::size_t best_at = 0;
	cplx best_z = z;
	// Below some height the pullback noise takes over and the differences grow again; the iterate
	// with the smallest step is then the best available limit.
	auto settle = [&](const char* why) {
		spdlog::info("homogenized_cycle_integral: {} after {} steps, smallest step {:.2e}", why, res.iterates.size(), best);
		res.value = res.iterates[best_at];
		res.n_used = int(best_at) + 1;
		z = best_z;
	};
	for (int n = 0; n <= n_max; ++n) {
		cplx I;
		try {
			I = single_cycle_integral(F, sigma, z, qo);
		} catch (const ConvergenceError& e) {
			if (n < 2) throw;
			settle("quadrature failed");
			break;
		}
		res.iterates.push_back(I);
		res.value = I;
		res.n_used = n + 1;
		if (n > 0) {
			double step = std::abs(I - res.iterates[n - 1]);
			if (step < best) best = step, best_at = n, best_z = z;
			if (step < policy.cycle_tol) {
				if (++quiet == 2) break;
			} else {
				quiet = 0;
			}
			if (n >= 3 && step > 100 * best) {
				settle("noise floor");
				break;
			}
		}
		cplx next = act(sigma, z);
		if (next.imag() < 1e-12) {
			settle("height floor");
			break;
		}
		if (n == n_max) throw ConvergenceError("homogenized_cycle_integral: no convergence after " + std::to_string(n_max) + " steps");
		z = next;
	}
	// remaining drift toward w_sigma, integrated from the cocycle
	Arc a = arc_of(qs);
	double w = a.center + a.radius;
	std::vector<CrossingForm> forms;
	if (F.flavor() == Flavor::parson) forms = cocycle_forms(F.cls(), sigma);
	cplx tail = 0;
	if (!forms.empty()) {
		const double D = to_double(F.cls().discriminant);
		auto g = [&](cplx u) { return eval_cocycle_forms(k, D, forms, u) * q_power(qs, u, k - 1); };
		cplx zl = z;
		Path p;
		if (on_arc(a, zl))
			p.push_back(PathPiece::arc(cplx(a.center, 0), a.radius, std::arg(zl - a.center), 0.0));
		else
			p.push_back(PathPiece::segment(zl, w));
		tail = contour_quadrature(g, p, qo).value;
	}
	res.tail_value = res.value + tail;
	return res;
}

double geometric_side(int k, const FormClass& gamma_cls, const GroupElement& sigma, ExponentMode mode,
                      double bound_scale) {
	GroupElement s = normalize_hyperbolic(sigma);
	double Dg = to_double(gamma_cls.discriminant), Ds = to_double(form_from_matrix(s).disc());
	int e = mode == ExponentMode::k ? k : k - 1;
	double sum = 0;
	for (const Intersection& p : enumerate_closed_intersections(gamma_cls, s, bound_scale)) {
		double mu = (e % 2 == 0) ? 1.0 : double(p.sign);
		sum += mu * legendre_p(k - 1, p.cos_angle);
	}
	return std::pow(Dg * Ds, 0.5 * (k - 1)) * sum;
}

cplx katok_cycle_integral(const ModularIntegral& f, const GroupElement& sigma, std::optional<cplx> z0,
                          const TruncationPolicy& policy, bool force_segment) {
	if (f.flavor() != Flavor::katok) throw std::invalid_argument("katok_cycle_integral: needs the katok flavor");
	return single_cycle_integral(f, sigma, z0.value_or(geodesic_apex(sigma)), policy.quadrature(), force_segment);
}

cplx circle_contour_closed_form(int k, const QForm& qt, const QForm& qs, bool* crossing) {
	bool c = crosses(qt, qs);
	if (crossing) *crossing = c;
	if (!c) return 0;
	Intersection p = intersection_data(qt, qs);
	double Dg = to_double(qt.disc()), Ds = to_double(qs.disc());
	double mu = (k % 2 == 0) ? 1.0 : double(p.sign);
	return 2 * kPi * I1 * std::pow(Dg, -0.5 * k) * std::pow(Ds, 0.5 * (k - 1)) * mu * legendre_p(k - 1, p.cos_angle);
}

cplx circle_contour_numeric(int k, const QForm& qt, const QForm& qs, const QuadratureOptions& qo) {
	Arc a = arc_of(qs);
	Path p{PathPiece::arc(cplx(a.center, 0), a.radius, 0, kPi), PathPiece::arc(cplx(a.center, 0), a.radius, kPi, 2 * kPi)};
	auto f = [&](cplx z) { return q_power(qt, z, -k) * q_power(qs, z, k - 1); };
	return contour_quadrature(f, p, qo).value;
}

cplx tail_integral_closed_form(int k, int n, double w, double wp, cplx z0, RhoExponent variant) {
	if (n < 0 || n > 2 * k - 2) throw std::invalid_argument("tail_integral: n out of range");
	double pref = std::exp(std::lgamma(2.0 * k - n - 1) + std::lgamma(n + 1.0) - std::lgamma(2.0 * k));
	cplx h = gauss_2f1(k, 2 * k - n - 1, 2 * k, (w - wp) / (z0 - wp));
	cplx pw = variant == RhoExponent::derived ? std::pow(z0 - wp, n - 2 * k + 1) : std::pow(z0 - wp, -(n - 2 * k - 1));
	return pref * pw * h;
}

cplx tail_integral_numeric(int k, int n, double w, double wp, cplx z0, const QuadratureOptions& qo) {
	auto f = [&](cplx z) { return std::pow(z - z0, n) * std::pow((z - w) * (z - wp), -k); };
	return contour_quadrature(f, {PathPiece::ray_up(z0)}, qo).value;
}

ExplicitRepresentation explicit_cycle_representation(const ModularIntegral& F, const GroupElement& sigma_in, cplx z0,
                                                     RhoExponent variant) {
	GroupElement sigma = normalize_hyperbolic(sigma_in);
	QForm qs = form_from_matrix(sigma);
	const int k = F.k();
	ExplicitRepresentation out;

	// i inf -> a/c down the vertical line: z = a/c + i t
	double x0 = to_double(sigma.a) / to_double(sigma.c);
	Poly p = shifted(qs, x0);
	Poly pt{p[0], p[1] * I1, p[2] * I1 * I1};
	Poly q = poly_pow(pt, k - 1);
	cplx cusp = 0;
	for (int j = 0; j <= 2 * k - 2; ++j) cusp += q[j] * F.mellin(-sigma.a, sigma.c, j);
	out.cusp_part = -I1 * cusp;

	// i inf -> z0 of r(sigma, z) Q_sigma^{k-1}
	Poly an = poly_pow(shifted(qs, z0), k - 1);
	const double D = to_double(F.cls().discriminant);
	const double cst = 2 * std::pow(D, k - 0.5) / kPi;
	cplx sum = 0;
	if (F.flavor() == Flavor::parson) {
		for (const CrossingForm& f : cocycle_forms(F.cls(), sigma)) {
			double sD = std::sqrt(D);
			double r1 = (-f.B + sD) / (2 * f.A), r2 = (-f.B - sD) / (2 * f.A);
			double w = std::max(r1, r2), wp = std::min(r1, r2);
			cplx cq = cst * double(f.sign) * std::pow(f.A, -k);
			cplx inner = 0;
			for (int n = 0; n <= 2 * k - 2; ++n) inner += an[n] * tail_integral_closed_form(k, n, w, wp, z0, variant);
			sum += cq * inner;
		}
	}
	out.form_part = -sum;
	return out;
}

CycleIntegralReport theorem1_report(const ModularIntegral& F, const GroupElement& sigma, const TruncationPolicy& policy) {
	HomogenizedResult h = homogenized_cycle_integral(F, sigma, std::nullopt, policy);
	CycleIntegralReport r;
	r.k = F.k();
	r.lhs = h.value.imag();
	r.rhs = geometric_side(F.k(), F.cls(), sigma, ExponentMode::k_minus_1);
	r.residual = std::abs(r.lhs - r.rhs);
	r.n_used = h.n_used;
	r.heights_used = policy.height;
	return r;
}

CycleIntegralReport katok_report(const ModularIntegral& f, const GroupElement& sigma, const TruncationPolicy& policy) {
	CycleIntegralReport r;
	r.k = f.k();
	r.lhs = katok_cycle_integral(f, sigma, std::nullopt, policy).imag();
	r.rhs = geometric_side(f.k(), f.cls(), sigma, ExponentMode::k);
	r.residual = std::abs(r.lhs - r.rhs);
	r.n_used = 1;
	r.heights_used = policy.height;
	return r;
}

}  // namespace modgeo
