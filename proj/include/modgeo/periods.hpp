#pragma once

#include "modgeo/modular_integral.hpp"

#include <optional>
#include <string>
#include <vector>

namespace modgeo {

// p_n = int_0^inf F(i t) t^n dt, 0 <= n <= 2k - 2.
cplx period(const ModularIntegral& F, int n, double split = 1.0);
std::vector<cplx> periods(const ModularIntegral& F, double split = 1.0);

// Coefficient vectors are indexed by the power of x.
struct PeriodPolynomial {
	int k = 0;
	std::vector<cplx> coefficients;  // sum_n i^{1-n} binom(2k-2, n) p_n x^{2k-2-n}
	std::vector<cplx> even_part;     // p^+
	std::vector<cplx> odd_part;      // p^-

	cplx operator()(cplx x) const;
	// i p^+ + p^-, which must reproduce the coefficients
	std::vector<cplx> recombined() const;
};
PeriodPolynomial period_polynomial(int k, const std::vector<cplx>& p);
// Direct quadrature of int_0^{i inf} F(z) (x - z)^{2k-2} dz; the check for period_polynomial.
cplx period_polynomial_direct(const ModularIntegral& F, cplx x);

// (A, B, C) -> (A, -B, C), the form of the reflected geodesic.
QForm mirror_form(const QForm& q);
// Form of diag(-1, 1) gamma diag(-1, 1): (A, B, C) -> (-A, B, -C).
QForm conjugate_form(const QForm& q);
struct SymmetrizedPair {
	FormClass original, mirrored;  // mirrored is the class of conjugate_form(seed)
};
SymmetrizedPair symmetrize(const FormClass& cls);

double riemann_zeta(int s);
int kronecker(std::int64_t D, std::int64_t n);
// L(s, (D/.)) for a discriminant D > 1.
double dirichlet_l(std::int64_t D, int s);
struct FormZeta {
	double value = 0;
	double bound = 0;       // Q-values up to bound summed exactly
	double tail = 0;        // area estimate of the rest
	long points = 0;
};
// Sum of Q(m, n)^{-s} over (m, n) in Z^2 / Aut(Q) with Q(m, n) > 0.
FormZeta form_zeta(const QForm& q, int s, double bound = 2e5);

struct Rational {
	Int p, q;
};
std::optional<Rational> recognize_rational(double x, std::int64_t max_den = 1000000, double tol = 1e-7);

struct RecognizedPeriod {
	int n = 0;
	cplx value;
	std::optional<Rational> rational;
};

struct PeriodReport {
	std::string formula;           // "class" or "discriminant"
	int k = 0;
	Int D;
	std::vector<cplx> lhs, rhs;    // by power of x
	std::vector<double> ratios;    // lhs / rhs where rhs is not negligible
	cplx lambda;                   // least-squares constant
	double max_ratio_deviation = 0;
	bool degenerate = false;       // both sides vanish
	double alt_sign_deviation = 0; // same test with b -> -b in the finite sum
	double neg_zeta_deviation = 0; // class formula with zeta_{-Q} in place of zeta_Q
	std::vector<RecognizedPeriod> recognized;
	std::vector<double> symmetry_residuals;
	std::vector<cplx> periods;     // of F, or of F_{k,D} for the discriminant formula
	bool recognition_ok() const;
};

// Left side p^+(F^+) + p^-(F^-) against the class sum with (a x^2 - b x + c).
PeriodReport verify_period_formula_class(int k, const FormClass& cls, const TruncationPolicy& policy = {});
// Left side p^+(F_{k,D}) against the sum over all forms of discriminant D with (a x^2 + b x + c); k odd.
PeriodReport verify_period_formula_disc(int k, const Int& D, const TruncationPolicy& policy = {});

}  // namespace modgeo
