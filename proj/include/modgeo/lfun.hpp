#pragma once

#include "modgeo/geodesics.hpp"
#include "modgeo/modular_integral.hpp"

#include <vector>

namespace modgeo {

struct FourierTable {
	int k = 0;
	FormClass cls;
	std::vector<cplx> coeffs;  // a(1), ..., a(n_max)
	double height_used = 0;
	int samples = 0;

	cplx at(int n) const { return coeffs.at(n - 1); }
	// a(n) e^{-2 pi n y}, the quantity the DFT actually resolves at height y.
	cplx scaled(int n) const;
};

// a(n) = e^{2 pi n y} (1/M) sum_j F(x_j + i y) e(-n x_j) from the direct series. M defaults to 4 n_max.
FourierTable fourier_coefficients(int k, const FormClass& cls, int n_max, double y, const TruncationPolicy& policy = {},
                                  int samples = 0);
// Same DFT for a single index, any sign; used to check that a(0) and a(-1) vanish.
cplx dft_coefficient(int k, const FormClass& cls, int n, double y, int samples, const TruncationPolicy& policy = {});

// L(s, x) = sum a(n) e(n x) n^{-s} at x = -d/c, continued to 1 <= s <= 2k - 1 through
// (2 pi)^s / (s - 1)! * int_0^inf F(x + i t) t^{s-1} dt.
cplx l_value(const ModularIntegral& F, const Int& d, const Int& c, int s, double split = 1.0);
// s = k, odd k only.
cplx l_value_central(const ModularIntegral& F, const Int& d, const Int& c, double split = 1.0);

struct Theorem2Report {
	int k = 0;
	Int d, c;
	double lhs = 0, rhs = 0, residual = 0;
	cplx l_value;
	int intersections = 0;
};
Theorem2Report theorem2_sides(const ModularIntegral& F, const Int& d, const Int& c);

enum class CocycleVariant { printed, derived };

// The (2k-1)-fold primitive R(sigma, z) of r(sigma, z). The printed variant reproduces the closed form
// with its 1/|Q(1,0)| weight; the derived one carries sign(A) A^{-k} and the factor 2 of r.
cplx primitive_cocycle(const ModularIntegral& F, const GroupElement& sigma, cplx z,
                       CocycleVariant variant = CocycleVariant::derived);
// Only the crossing-form sum, without the L-value polynomial.
cplx primitive_cocycle_singular(const ModularIntegral& F, const GroupElement& sigma, cplx z, CocycleVariant variant);

struct CocycleDerivativeCheck {
	cplx derivative;  // D^{2k-1} R at z
	cplx cocycle;     // r(sigma, z)
	double rel_error = 0;
};
CocycleDerivativeCheck check_primitive_cocycle(const ModularIntegral& F, const GroupElement& sigma, cplx z,
                                               CocycleVariant variant, double radius = 0.5);

}  // namespace modgeo
