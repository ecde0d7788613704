#pragma once

#include "modgeo/poincare.hpp"

#include <vector>

namespace modgeo {

// dim S_w(SL2(Z)) for even w >= 4.
int dim_cusp_forms(int weight);

struct ModularIntegralOptions {
	double y0 = 0.8;        // sampling height of the collocation points
	int n_coeffs = 30;
	int n_points = 80;
	int n_anchors = 12;      // direct-series rows; always used for the katok flavor
	double anchor_height = 1.0;
	bool validate = true;    // compare with the direct series at one point off the sampling grid
	cplx check_point{0.137, 0.93};
	double check_tol = 1e-6;  // series tolerance for the check; weight 4 is slow below this
};

// F (parson) or f (katok) as a Fourier series a(1..N), determined by least squares from the transformation
// law under S together with T-periodicity. Evaluation anywhere in H goes through the pullback into the
// fundamental domain; each S step adds the cocycle r(S, z).
class ModularIntegral {
public:
	ModularIntegral(int k, const FormClass& cls, Flavor flavor, const TruncationPolicy& policy = {},
	                const ModularIntegralOptions& opt = {});

	int k() const { return k_; }
	const FormClass& cls() const { return cls_; }
	Flavor flavor() const { return flavor_; }
	const std::vector<cplx>& coefficients() const { return a_; }  // a(1), a(2), ...
	double condition() const { return cond_; }
	double residual() const { return residual_; }
	// |evaluator - direct series| at the check point, -1 when not validated
	double validation_error() const { return validation_error_; }

	cplx operator()(cplx z) const;
	cplx fourier(cplx z) const;
	cplx cocycle_S(cplx z) const;
	// r(g, z) for any g, exact finite sum.
	cplx cocycle(const GroupElement& g, cplx z) const;

	// Integral of F(x + i t) t^m over t in (0, inf), x = -d/c. Pieces: (0, t1] through the cusp at x,
	// [t1, split] by quadrature of the evaluator, [split, inf) termwise from the Fourier expansion.
	cplx mellin(const Int& d, const Int& c, int m, double split = 1.0) const;

private:
	// F(z) = fac * F(z*) + add with z* in the fundamental domain.
	void pullback(cplx z, cplx& zs, cplx& fac, cplx& add) const;

	int k_;
	FormClass cls_;
	Flavor flavor_;
	TruncationPolicy policy_;
	double D_;
	std::vector<CrossingForm> s_forms_;
	std::vector<cplx> a_;
	double cond_ = 0, residual_ = 0, validation_error_ = -1;
};

}  // namespace modgeo
