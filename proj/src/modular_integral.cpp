#include "modgeo/modular_integral.hpp"

#include <Eigen/Dense>
#include <gsl/gsl_sf_gamma.h>
#include <spdlog/spdlog.h>

#include <cmath>
#include <numbers>

namespace modgeo {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx I1{0, 1};

cplx e(double x) { return std::polar(1.0, 2 * kPi * x); }

// alpha, beta with alpha d - beta c = 1
GroupElement cusp_map(const Int& d, const Int& c) {
	Int r0 = d, r1 = c, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
	while (r1 != 0) {
		Int q = r0 / r1;
		Int r2 = r0 - q * r1, s2 = s0 - q * s1, t2 = t0 - q * t1;
		r0 = r1, r1 = r2, s0 = s1, s1 = s2, t0 = t1, t1 = t2;
	}
	// s0 d + t0 c = r0 = +-1
	if (r0 < 0) s0 = -s0, t0 = -t0;
	return GroupElement::make(s0, -t0, c, d);
}

}  // namespace

int dim_cusp_forms(int weight) {
	if (weight < 4 || weight % 2 != 0) return 0;
	int m = weight / 12 + (weight % 12 == 2 ? 0 : 1);
	return m - 1;
}

ModularIntegral::ModularIntegral(int k, const FormClass& cls, Flavor flavor, const TruncationPolicy& policy,
                                 const ModularIntegralOptions& opt)
    : k_(k), cls_(cls), flavor_(flavor), policy_(policy), D_(to_double(cls.discriminant)) {
	if (k < 2) throw std::invalid_argument("ModularIntegral: k must be at least 2");
	if (flavor == Flavor::parson) s_forms_ = cocycle_forms(cls, GroupElement::S());
	const int N = opt.n_coeffs;
	const bool anchored = flavor == Flavor::katok || dim_cusp_forms(2 * k) > 0;
	a_.assign(N, 0);

	std::vector<std::vector<cplx>> rows;
	std::vector<cplx> rhs;
	for (int m = 0; m < opt.n_points; ++m) {
		double x = -0.5 + (m + 0.5) / opt.n_points;
		cplx zs, fac, add;
		pullback(cplx(x, opt.y0), zs, fac, add);
		if (fac == 1.0 && add == 0.0) continue;
		std::vector<cplx> row(N);
		for (int n = 1; n <= N; ++n) row[n - 1] = e(n * x) - fac * std::exp(2 * kPi * n * opt.y0) * std::exp(2 * kPi * I1 * double(n) * zs);
		rows.push_back(std::move(row));
		rhs.push_back(add);
	}
	if (anchored) {
		SeriesHandle h{k, cls, policy, flavor};
		for (int j = 0; j < opt.n_anchors; ++j) {
			double x = -0.5 + (j + 0.5) / opt.n_anchors;
			std::vector<cplx> row(N);
			for (int n = 1; n <= N; ++n) row[n - 1] = e(n * x) * std::exp(-2 * kPi * n * (opt.anchor_height - opt.y0));
			rows.push_back(std::move(row));
			rhs.push_back(eval_series(h, cplx(x, opt.anchor_height)));
		}
	}
	Eigen::MatrixXcd A(rows.size(), N);
	Eigen::VectorXcd b(rows.size());
	for (std::size_t i = 0; i < rows.size(); ++i) {
		for (int n = 0; n < N; ++n) A(i, n) = rows[i][n];
		b(i) = rhs[i];
	}
	Eigen::BDCSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
	const auto& sv = svd.singularValues();
	cond_ = sv(0) / sv(sv.size() - 1);
	Eigen::VectorXcd sol = svd.solve(b);
	residual_ = (A * sol - b).norm();
	for (int n = 1; n <= N; ++n) a_[n - 1] = sol(n - 1) * std::exp(2 * kPi * n * opt.y0);
	spdlog::debug("modular integral k={} D={} cond {:.3g} residual {:.2e} anchors {}", k, cls.discriminant.str(),
	              cond_, residual_, anchored);
	if (cond_ > 1e8) throw ConvergenceError("ModularIntegral: least-squares system is singular");
	if (opt.validate) {
		TruncationPolicy check = policy;
		check.tol = std::max(policy.tol, opt.check_tol);
		SeriesValue direct = eval_series_report(SeriesHandle{k, cls, check, flavor}, opt.check_point);
		cplx mine = (*this)(opt.check_point);
		validation_error_ = std::abs(mine - direct.value);
		double allowed = std::max(100 * check.tol, 1e-6 * std::abs(direct.value));
		if (validation_error_ > allowed)
			throw ConvergenceError(fmt::format("ModularIntegral: evaluator and direct series differ by {:.3g} at ({}, {})",
			                                   validation_error_, opt.check_point.real(), opt.check_point.imag()));
	}
}

cplx ModularIntegral::cocycle_S(cplx z) const {
	if (s_forms_.empty()) return 0;
	return eval_cocycle_forms(k_, D_, s_forms_, z);
}

cplx ModularIntegral::cocycle(const GroupElement& g, cplx z) const {
	if (flavor_ == Flavor::katok) return 0;
	return eval_cocycle(k_, cls_, g, z);
}

void ModularIntegral::pullback(cplx z, cplx& zs, cplx& fac, cplx& add) const {
	fac = 1;
	add = 0;
	for (int it = 0;; ++it) {
		if (it > 10000) throw ConvergenceError("pullback: no reduction into the fundamental domain");
		double n = std::floor(z.real() + 0.5);
		z -= n;
		if (std::norm(z) >= 1 - 1e-14) break;
		add -= fac * cocycle_S(z);
		fac *= std::pow(z, -2 * k_);
		z = -1.0 / z;
	}
	zs = z;
}

cplx ModularIntegral::fourier(cplx z) const {
	cplx q = std::exp(2 * kPi * I1 * z), qn = 1, s = 0;
	for (const cplx& a : a_) {
		qn *= q;
		s += a * qn;
	}
	return s;
}

cplx ModularIntegral::operator()(cplx z) const {
	if (!(z.imag() > 0)) throw std::invalid_argument("ModularIntegral: z must lie in the upper half-plane");
	cplx zs, fac, add;
	pullback(z, zs, fac, add);
	return fac * fourier(zs) + add;
}

cplx ModularIntegral::mellin(const Int& d, const Int& c, int m, double split) const {
	if (c <= 0 || gcd(abs(d), c) != 1) throw std::invalid_argument("mellin: need gcd(c, d) = 1 and c > 0");
	if (m < 0 || m > 2 * k_ - 2) throw std::invalid_argument("mellin: exponent out of range");
	const double x = -to_double(d) / to_double(c), cd = to_double(c);
	const double t1 = std::min(1.0 / (cd * cd), split);
	const double Y1 = 1.0 / (cd * cd * t1);
	const GroupElement g = cusp_map(d, c);
	const double alpha = to_double(g.a);
	const QuadratureOptions qo = policy_.quadrature();

	// (0, t1]: F(z) = (cz + d)^{-2k} F(g z) - r(g, z), g z = alpha/c + i / (c^2 t)
	const int s = 2 * k_ - m - 1;
	cplx low = 0;
	for (std::size_t n = 1; n <= a_.size(); ++n) {
		double u = 2 * kPi * n;
		double tail = gsl_sf_gamma_inc(s, u * Y1) / std::pow(u, s);
		low += a_[n - 1] * e(n * alpha / cd) * tail;
	}
	low *= std::pow(I1 * cd, -2 * k_) * std::pow(cd, 2.0 * s);
	std::vector<CrossingForm> gf = flavor_ == Flavor::katok ? std::vector<CrossingForm>{} : cocycle_forms(cls_, g);
	if (!gf.empty()) {
		auto rint = [&](double t) { return eval_cocycle_forms(k_, D_, gf, cplx(x, t)) * std::pow(t, m); };
		low -= integrate_interval(rint, 0, t1, qo).value;
	}

	cplx mid = 0;
	if (split > t1) {
		auto fint = [&](double t) { return (*this)(cplx(x, t)) * std::pow(t, m); };
		mid = integrate_interval(fint, t1, split, qo).value;
	}

	cplx high = 0;
	for (std::size_t n = 1; n <= a_.size(); ++n) {
		double u = 2 * kPi * n;
		high += a_[n - 1] * e(n * x) * gsl_sf_gamma_inc(m + 1, u * split) / std::pow(u, m + 1);
	}
	return low + mid + high;
}

}  // namespace modgeo
