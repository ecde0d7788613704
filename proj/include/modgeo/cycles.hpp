#pragma once

#include "modgeo/geodesics.hpp"
#include "modgeo/modular_integral.hpp"

#include <optional>
#include <vector>

namespace modgeo {

struct CycleIntegralReport {
	int k = 0;
	double lhs = 0, rhs = 0, residual = 0;
	int n_used = 0;
	long heights_used = 0;
};

struct HomogenizedResult {
	cplx value;                   // last iterate I_n
	cplx tail_value;              // I_n + integral of r(sigma, z) Q_sigma^{k-1} from sigma^n z0 to w_sigma
	int n_used = 0;
	std::vector<cplx> iterates;   // I_0, I_1, ...
};

// Apex of S_sigma, sigma in normal form.
cplx geodesic_apex(const GroupElement& sigma);
// Q_sigma(z, 1)^{k-1}
cplx q_power(const QForm& q, cplx z, int e);

// Integral of F Q_sigma^{k-1} from z0 to sigma z0: along S_sigma when z0 lies on it, else straight.
cplx single_cycle_integral(const ModularIntegral& F, const GroupElement& sigma, cplx z0,
                           const QuadratureOptions& qo, bool force_segment = false);

HomogenizedResult homogenized_cycle_integral(const ModularIntegral& F, const GroupElement& sigma,
                                             std::optional<cplx> z0 = std::nullopt, const TruncationPolicy& policy = {},
                                             int n_max = 40);

enum class ExponentMode { k_minus_1, k };
double geometric_side(int k, const FormClass& gamma_cls, const GroupElement& sigma, ExponentMode mode,
                      double bound_scale = 1.0);

// f is a katok-flavor evaluator.
cplx katok_cycle_integral(const ModularIntegral& f, const GroupElement& sigma, std::optional<cplx> z0 = std::nullopt,
                          const TruncationPolicy& policy = {}, bool force_segment = false);

// Closed form of the integral of (Q o g)(z,1)^{-k} Q_sigma(z,1)^{k-1} over the counterclockwise circle through the
// roots of Q_sigma. Returns 0 and clears *crossing when the geodesics do not meet.
cplx circle_contour_closed_form(int k, const QForm& q_translate, const QForm& q_sigma, bool* crossing = nullptr);
cplx circle_contour_numeric(int k, const QForm& q_translate, const QForm& q_sigma, const QuadratureOptions& qo = {});

// Integral over (z0, i inf) of (z - z0)^n / ((z - w)^k (z - w')^k).
enum class RhoExponent { derived, printed };
cplx tail_integral_closed_form(int k, int n, double w, double wp, cplx z0, RhoExponent variant = RhoExponent::derived);
cplx tail_integral_numeric(int k, int n, double w, double wp, cplx z0, const QuadratureOptions& qo = {});

struct ExplicitRepresentation {
	cplx cusp_part;     // integral of F Q_sigma^{k-1} from i inf to sigma i inf
	cplx form_part;     // the 2F1 sum over forms crossing sigma^{-1} i inf
	cplx value() const { return cusp_part + form_part; }
};
ExplicitRepresentation explicit_cycle_representation(const ModularIntegral& F, const GroupElement& sigma, cplx z0,
                                                     RhoExponent variant = RhoExponent::derived);

CycleIntegralReport theorem1_report(const ModularIntegral& F, const GroupElement& sigma,
                                    const TruncationPolicy& policy = {});
CycleIntegralReport katok_report(const ModularIntegral& f, const GroupElement& sigma,
                                 const TruncationPolicy& policy = {});

}  // namespace modgeo
