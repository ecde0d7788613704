#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

namespace modgeo {

using cplx = std::complex<double>;

struct ConvergenceError : std::runtime_error {
	using std::runtime_error::runtime_error;
};

double legendre_p(int r, double x);
double binomial(int n, int k);
// Generalized binomial coefficient binom(x, k) for real x.
double binomial_real(double x, int k);

cplx gauss_2f1(double a, double b, double c, cplx z);

struct QuadratureResult {
	cplx value;
	double abs_error_estimate = 0;
	long evaluations = 0;
};

// One smooth piece, parametrized over t in [0, 1].
struct PathPiece {
	enum class Kind { segment, arc, ray_up };
	Kind kind = Kind::segment;
	cplx z0, z1;                         // segment endpoints; ray_up starts at z0
	double center = 0, radius = 0;       // arc: center on the real line
	double theta0 = 0, theta1 = 0;       // arc angles, z = center + radius e^{i theta}
	cplx complex_center{0, 0};           // arc center off the real line

	static PathPiece segment(cplx a, cplx b);
	static PathPiece arc(cplx center, double radius, double theta0, double theta1);
	static PathPiece ray_up(cplx start);
	cplx point(double t) const;
	cplx derivative(double t) const;
};

using Path = std::vector<PathPiece>;
using Integrand = std::function<cplx(cplx)>;

struct QuadratureOptions {
	double abs_tol = 1e-10;
	double rel_tol = 1e-12;
	long max_evaluations = 1000000;
};

QuadratureResult contour_quadrature(const Integrand& f, const Path& path, const QuadratureOptions& opt = {});
// Integral of a real-parameter function over [a, b] (b may be +infinity).
QuadratureResult integrate_interval(const std::function<cplx(double)>& f, double a, double b,
                                    const QuadratureOptions& opt = {});
QuadratureResult integrate_real_line(const std::function<cplx(double)>& f, const QuadratureOptions& opt = {});

// Closed form of the integral over the real line of t^{k-1} / (-A t^2 + B i t + C)^k, k odd >= 3.
double legendre_contour_integral(int k, double A, double B, double C);

struct CauchyOptions {
	bool d_normalized = false;  // divide by (2 pi i)^order
	double rel_tol = 1e-9;
	int min_samples = 32;
	int max_samples = 1 << 14;
};
cplx cauchy_derivative(const Integrand& f, cplx z0, int order, double radius, const CauchyOptions& opt = {});

}  // namespace modgeo
