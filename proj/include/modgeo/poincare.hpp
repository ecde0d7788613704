#pragma once

#include "modgeo/qforms.hpp"
#include "modgeo/specialfn.hpp"

#include <memory>
#include <vector>

namespace modgeo {

struct TruncationPolicy {
	long height = 64;         // first truncation height (max |A| of the T-orbit representatives)
	double tol = 1e-7;        // series doubling stops when two successive values differ by less
	int max_doublings = 10;
	double cycle_tol = 1e-9;  // homogenization stops after two steps changing by less
	double quad_tol = 1e-10;  // absolute target for every contour quadrature
	double quad_rel_tol = 1e-10;
	long max_evaluations = 1000000;

	QuadratureOptions quadrature() const {
		QuadratureOptions o;
		o.abs_tol = quad_tol;
		o.rel_tol = quad_rel_tol;
		o.max_evaluations = max_evaluations;
		return o;
	}
};

enum class Flavor { katok, parson };

struct SeriesHandle {
	int k = 2;
	FormClass cls;
	TruncationPolicy policy;
	Flavor flavor = Flavor::parson;
};

struct SeriesValue {
	cplx value;
	long height = 0;     // truncation height of the returned value
	double drift = 0;    // change over the last doubling
};

// D^{k-1/2} / pi
double series_constant(int k, const Int& D);

// Truncated orbit sum, summed over full T-orbits: Q and Q o T^n are grouped, so every partial sum
// is exactly 1-periodic. Throws ConvergenceError when max_doublings is exhausted.
SeriesValue eval_series_report(const SeriesHandle& h, cplx z);
cplx eval_series(const SeriesHandle& h, cplx z);

// Sum over the T-orbit of q of sign-free Q(z + n, 1)^{-k}. Exposed for testing.
cplx t_orbit_sum(int k, std::int64_t A, std::int64_t B, std::int64_t D, cplx z);

// Forms of the class crossing the vertical geodesic at -d/c, as doubles with their sign.
struct CrossingForm {
	double A, B, C;
	int sign;
};
std::vector<CrossingForm> cocycle_forms(const FormClass& cls, const GroupElement& sigma);
cplx eval_cocycle_forms(int k, double D, const std::vector<CrossingForm>& forms, cplx z);
// r(sigma, z) = (F|sigma)(z) - F(z).
cplx eval_cocycle(int k, const FormClass& cls, const GroupElement& sigma, cplx z);

// (F|_{2k} g)(z) = (cz + d)^{-2k} F(g z).
cplx slash_factor(int k, const GroupElement& g, cplx z);
cplx act(const GroupElement& g, cplx z);

// Iterates sign(Q o sigma^{-n}(1, 0)) for the class seed and checks that it settles on
// sign(Q(w'_sigma, 1)) before n_max.
bool sign_limit_check(const FormClass& cls, const GroupElement& sigma, int n_max);
std::vector<int> sign_sequence(const QForm& q, const GroupElement& sigma, int n_max);

}  // namespace modgeo
