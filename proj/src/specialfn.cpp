#include "modgeo/specialfn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <cstdio>
#include <queue>
#include <string>

namespace modgeo {

namespace {

constexpr double kPi = std::numbers::pi;

// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1].
constexpr double xgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                           0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                           0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                           0.207784955007898467600689403773245, 0.0};
constexpr double wgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                           0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                           0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                           0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double wg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                          0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

std::string fmt_err(double err, cplx total) {
	char buf[96];
	std::snprintf(buf, sizeof buf, "%.3g, value magnitude %.3g", err, std::abs(total));
	return buf;
}

struct Panel {
	double a, b;
	cplx value;
	double err;
	double l1;
	bool operator<(const Panel& o) const { return err < o.err; }
};

Panel gk15(const std::function<cplx(double)>& g, double a, double b) {
	double h = 0.5 * (b - a), m = 0.5 * (a + b);
	cplx fc = g(m);
	cplx k = fc * wgk[7];
	cplx gs = fc * wg[3];
	double l1 = std::abs(fc) * wgk[7];
	for (int j = 0; j < 7; ++j) {
		cplx f1 = g(m - h * xgk[j]), f2 = g(m + h * xgk[j]);
		k += (f1 + f2) * wgk[j];
		l1 += (std::abs(f1) + std::abs(f2)) * wgk[j];
		if (j % 2 == 1) gs += (f1 + f2) * wg[j / 2];
	}
	return {a, b, k * h, std::abs((k - gs) * h), l1 * std::abs(h)};
}

QuadratureResult adaptive(const std::function<cplx(double)>& g, const std::vector<std::pair<double, double>>& pieces,
                          const QuadratureOptions& opt) {
	std::priority_queue<Panel> heap;
	std::vector<Panel> done;
	long evals = 0;
	cplx total = 0;
	double err = 0;
	for (auto [a, b] : pieces) {
		Panel p = gk15(g, a, b);
		evals += 15;
		total += p.value;
		err += p.err;
		heap.push(p);
	}
	const double eps = std::numeric_limits<double>::epsilon();
	while (!heap.empty()) {
		if (err <= std::max(opt.abs_tol, opt.rel_tol * std::abs(total))) break;
		Panel p = heap.top();
		double width = p.b - p.a;
		// panels at roundoff level or too narrow to split are final
		if (p.err <= 200 * eps * p.l1 || width <= 1e-13 * std::max(1.0, std::abs(p.a))) {
			heap.pop();
			done.push_back(p);
			if (heap.empty()) break;
			continue;
		}
		if (evals + 30 > opt.max_evaluations)
			throw ConvergenceError("contour_quadrature: evaluation budget exhausted (error estimate " +
			                       fmt_err(err, total) + ")");
		heap.pop();
		double m = 0.5 * (p.a + p.b);
		Panel l = gk15(g, p.a, m), r = gk15(g, m, p.b);
		evals += 30;
		total += l.value + r.value - p.value;
		err += l.err + r.err - p.err;
		heap.push(l);
		heap.push(r);
	}
	// re-sum to shed accumulated cancellation in the running totals
	cplx v = 0;
	double e = 0;
	for (const auto& p : done) v += p.value, e += p.err;
	while (!heap.empty()) {
		v += heap.top().value;
		e += heap.top().err;
		heap.pop();
	}
	return {v, e, evals};
}

cplx series_2f1(double a, double b, double c, cplx z) {
	cplx sum = 1, term = 1;
	for (int n = 0; n < 20000; ++n) {
		double num = (a + n) * (b + n);
		if (num == 0) return sum;
		term *= num / ((c + n) * (n + 1)) * z;
		sum += term;
		if (std::abs(term) <= 1e-17 * std::abs(sum) && n > 3) return sum;
	}
	throw ConvergenceError("gauss_2f1: series did not converge");
}

}  // namespace

double legendre_p(int r, double x) {
	if (r < 0) throw std::invalid_argument("legendre_p: negative degree");
	if (r == 0) return 1;
	double p0 = 1, p1 = x;
	for (int n = 1; n < r; ++n) {
		double p2 = ((2 * n + 1) * x * p1 - n * p0) / (n + 1);
		p0 = p1;
		p1 = p2;
	}
	return p1;
}

double binomial(int n, int k) {
	if (k < 0 || k > n) return 0;
	double r = 1;
	for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
	return std::round(r);
}

double binomial_real(double x, int k) {
	double r = 1;
	for (int i = 0; i < k; ++i) r *= (x - i) / (i + 1);
	return r;
}

cplx gauss_2f1(double a, double b, double c, cplx z) {
	if (c <= 0 && c == std::floor(c)) throw std::invalid_argument("gauss_2f1: c is a non-positive integer");
	if (std::abs(z) < 0.75) return series_2f1(a, b, c, z);
	if (z.imag() == 0 && z.real() >= 1) throw ConvergenceError("gauss_2f1: argument on the branch cut [1, inf)");
	cplx w = z / (z - 1.0);
	if (std::abs(w) < 0.75) return std::pow(1.0 - z, -b) * series_2f1(c - a, b, c, w);
	// Euler integral, needs c > b > 0 (a and b are interchangeable)
	if (!(c > b && b > 0)) std::swap(a, b);
	if (!(c > b && b > 0)) throw ConvergenceError("gauss_2f1: argument outside the implemented domain");
	auto g = [&](double t) {
		return std::pow(t, b - 1) * std::pow(1 - t, c - b - 1) * std::pow(1.0 - z * t, -a);
	};
	QuadratureOptions opt;
	opt.abs_tol = 0;
	opt.rel_tol = 1e-14;
	QuadratureResult r = adaptive(g, {{0.0, 0.5}, {0.5, 1.0}}, opt);
	double pref = std::exp(std::lgamma(c) - std::lgamma(b) - std::lgamma(c - b));
	return pref * r.value;
}

PathPiece PathPiece::segment(cplx a, cplx b) {
	PathPiece p;
	p.kind = Kind::segment;
	p.z0 = a;
	p.z1 = b;
	return p;
}

PathPiece PathPiece::arc(cplx center, double radius, double theta0, double theta1) {
	PathPiece p;
	p.kind = Kind::arc;
	p.complex_center = center;
	p.center = center.real();
	p.radius = radius;
	p.theta0 = theta0;
	p.theta1 = theta1;
	return p;
}

PathPiece PathPiece::ray_up(cplx start) {
	PathPiece p;
	p.kind = Kind::ray_up;
	p.z0 = start;
	return p;
}

cplx PathPiece::point(double t) const {
	switch (kind) {
		case Kind::segment: return z0 + t * (z1 - z0);
		case Kind::arc: return complex_center + radius * std::polar(1.0, theta0 + t * (theta1 - theta0));
		case Kind::ray_up: return z0 + cplx(0, t / (1 - t));
	}
	return 0;
}

cplx PathPiece::derivative(double t) const {
	switch (kind) {
		case Kind::segment: return z1 - z0;
		case Kind::arc: {
			double th = theta0 + t * (theta1 - theta0);
			return cplx(0, 1) * radius * std::polar(1.0, th) * (theta1 - theta0);
		}
		case Kind::ray_up: return cplx(0, 1.0 / ((1 - t) * (1 - t)));
	}
	return 0;
}

QuadratureResult contour_quadrature(const Integrand& f, const Path& path, const QuadratureOptions& opt) {
	if (path.empty()) return {0, 0, 1};
	// piece j occupies [j, j+1] of a single parameter line
	auto g = [&](double s) {
		auto j = static_cast<std::size_t>(std::floor(s));
		if (j >= path.size()) j = path.size() - 1;
		double t = s - static_cast<double>(j);
		const PathPiece& p = path[j];
		return f(p.point(t)) * p.derivative(t);
	};
	std::vector<std::pair<double, double>> pieces;
	for (std::size_t j = 0; j < path.size(); ++j) pieces.emplace_back(double(j), double(j + 1));
	return adaptive(g, pieces, opt);
}

QuadratureResult integrate_interval(const std::function<cplx(double)>& f, double a, double b,
                                    const QuadratureOptions& opt) {
	if (std::isinf(b)) {
		auto g = [&](double s) { return f(a + s / (1 - s)) / ((1 - s) * (1 - s)); };
		return adaptive(g, {{0.0, 0.5}, {0.5, 1.0}}, opt);
	}
	return adaptive(f, {{a, 0.5 * (a + b)}, {0.5 * (a + b), b}}, opt);
}

QuadratureResult integrate_real_line(const std::function<cplx(double)>& f, const QuadratureOptions& opt) {
	// [-1, 1] directly, the tails through t = 1/s
	auto g = [&](double s) {
		if (s < 1) return f(-1 / (1 - s)) / ((1 - s) * (1 - s));   // s in [0,1): t in [-inf, -1)
		if (s < 3) return f(s - 2);                              // s in [1,3): t in [-1, 1)
		double u = 4 - s;                                         // s in [3,4): t = 1/u in (1, inf)
		return f(1 / u) / (u * u);
	};
	return adaptive(g, {{0, 1}, {1, 2}, {2, 3}, {3, 4}}, opt);
}

double legendre_contour_integral(int k, double A, double B, double C) {
	if (k < 3 || k % 2 == 0) throw std::invalid_argument("legendre_contour_integral: k must be odd and >= 3");
	double D = B * B - 4 * A * C;
	if (!(D > 0)) throw std::invalid_argument("legendre_contour_integral: discriminant must be positive");
	if (A * C == 0) throw std::invalid_argument("legendre_contour_integral: A C must be nonzero");
	if (A * C > 0) return 0;
	double sign = ((k + 1) / 2) % 2 == 0 ? 1 : -1;
	return sign * (A > 0 ? 1 : -1) * 2 * kPi * std::pow(D, -0.5 * k) * legendre_p(k - 1, B / std::sqrt(D));
}

cplx cauchy_derivative(const Integrand& f, cplx z0, int order, double radius, const CauchyOptions& opt) {
	if (order < 1) throw std::invalid_argument("cauchy_derivative: order must be >= 1");
	int M = opt.min_samples;
	while (M < 2 * order + 8) M *= 2;
	// doubling reuses the earlier samples
	double fmax = 0;
	auto sample = [&](int m, int j) {
		double th = 2 * kPi * j / m;
		cplx v = f(z0 + radius * std::polar(1.0, th));
		fmax = std::max(fmax, std::abs(v));
		return v * std::polar(1.0, -order * th);
	};
	cplx sum = 0;
	for (int j = 0; j < M; ++j) sum += sample(M, j);
	double scale = std::exp(std::lgamma(order + 1.0)) / std::pow(radius, order);
	cplx est = scale * sum / double(M);
	for (; 2 * M <= opt.max_samples; M *= 2) {
		cplx add = 0;
		for (int j = 0; j < M; ++j) add += sample(2 * M, 2 * j + 1);
		sum += add;
		cplx next = scale * sum / double(2 * M);
		double floor = 1e-13 * scale * fmax;
		bool ok = std::abs(next - est) <= opt.rel_tol * std::abs(next) + floor;
		est = next;
		if (ok) {
			if (opt.d_normalized) est /= std::pow(cplx(0, 2 * kPi), order);
			return est;
		}
	}
	throw ConvergenceError("cauchy_derivative: sample densities disagree");
}

}  // namespace modgeo
