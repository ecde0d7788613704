#include "modgeo/poincare.hpp"

#include "modgeo/geodesics.hpp"

#include <spdlog/spdlog.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace modgeo {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx I1{0, 1};

struct OrbitRep {
	std::int64_t A, B;
};

// T-orbit representatives (A, B mod 2|A|) of a class, grouped by |A|, extended on demand.
struct OrbitTable {
	long height = 0;
	std::vector<OrbitRep> reps;           // sorted by |A|
	std::vector<std::size_t> end_of;      // end_of[h] = number of reps with |A| <= h
};

std::mutex cache_mutex;
std::map<std::pair<std::string, std::string>, OrbitTable> cache;

void extend(OrbitTable& t, const FormClass& cls, long height) {
	const std::int64_t D = to_i64(cls.discriminant);
	if (t.end_of.empty()) t.end_of.push_back(0);
	for (std::int64_t a = t.height + 1; a <= height; ++a) {
		for (std::int64_t s : {1, -1}) {
			std::int64_t A = s * a;
			for (std::int64_t B = -a + 1; B <= a; ++B) {
				if (((B - D) & 1) != 0) continue;
				__int128 N = static_cast<__int128>(B) * B - D;
				if (N % (4 * a) != 0) continue;
				auto C = static_cast<std::int64_t>(N / (4 * A));
				if (cls.contains(SmallForm{A, B, C})) t.reps.push_back({A, B});
			}
		}
		t.end_of.push_back(t.reps.size());
	}
	t.height = std::max(t.height, height);
}

// copy of the representatives with |A| in (lo, hi]
std::vector<OrbitRep> reps_between(const FormClass& cls, long lo, long hi) {
	std::lock_guard<std::mutex> lock(cache_mutex);
	OrbitTable& t = cache[{cls.discriminant.str(), cls.canonical().str()}];
	if (t.height < hi) extend(t, cls, hi);
	return {t.reps.begin() + static_cast<long>(t.end_of[lo]), t.reps.begin() + static_cast<long>(t.end_of[hi])};
}

// Lipschitz sums L_j(u) = sum_n (u + n)^{-j} = (-2 pi i)^j / (j-1)! sum_{m >= 1} m^{j-1} e(m u), Im u > 0,
// for j = j0, j0 + step, ..., j0 + (count-1) step.
void lipschitz(cplx u, int j0, int step, int count, std::vector<cplx>& out) {
	out.assign(count, 0);
	const cplx q = std::exp(2.0 * kPi * I1 * u);
	const double lq = std::log(std::abs(q));
	const int jmax = j0 + step * (count - 1);
	cplx qm = 1;
	for (int m = 1;; ++m) {
		qm *= q;
		double lm = std::log(double(m));
		for (int i = 0; i < count; ++i) out[i] += std::pow(double(m), j0 + step * i - 1) * qm;
		// the largest exponent decays last
		if (m > (jmax - 1) / (-lq) + 2 && (jmax - 1) * lm + m * lq < std::log(1e-18) + std::log(std::abs(out.back()) + 1e-300))
			break;
		if (m > 100000) throw ConvergenceError("lipschitz: too close to the real axis");
	}
	for (int i = 0; i < count; ++i) {
		int j = j0 + step * i;
		out[i] *= std::pow(-2.0 * kPi * I1, j) / std::exp(std::lgamma(double(j)));
	}
}

cplx pi_cot(cplx u) {
	// pi cot(pi u) = -i pi (1 + q) / (1 - q), q = e(u), Im u > 0
	cplx q = std::exp(2.0 * kPi * I1 * u);
	return -I1 * kPi * (1.0 + q) / (1.0 - q);
}

double binom_neg(int k, int m) {  // binom(-k, m)
	return (m % 2 == 0 ? 1.0 : -1.0) * binomial(k + m - 1, m);
}

}  // namespace

double series_constant(int k, const Int& D) { return std::pow(to_double(D), k - 0.5) / kPi; }

cplx t_orbit_sum(int k, std::int64_t A, std::int64_t B, std::int64_t D, cplx z) {
	const double a = double(A), sD = std::sqrt(double(D));
	const double delta = sD / std::abs(a);
	const double y = z.imag();
	if (delta < 0.5 * y) {
		// ((u+n)^2 - delta^2/4)^{-k} expanded in delta^2
		cplx u = z + double(B) / (2 * a);
		double r = delta * delta / (4 * y * y);
		int terms = 1;
		for (double t = 1; terms < 80; ++terms) {
			t *= r * (k + terms - 1) / terms;
			if (t < 1e-18) break;
		}
		std::vector<cplx> L;
		lipschitz(u, 2 * k, 2, terms + 1, L);
		cplx s = 0;
		double x = 1;
		for (int m = 0; m <= terms; ++m) {
			s += binom_neg(k, m) * x * L[m];
			x *= -delta * delta / 4;
		}
		return s / std::pow(a, k);
	}
	double w = (-double(B) + sD) / (2 * a), wp = (-double(B) - sD) / (2 * a);
	if (w < wp) std::swap(w, wp);
	cplx u = z - w, v = z - wp;  // v = u + delta
	std::vector<cplx> Lu, Lv;
	if (k >= 2) {
		lipschitz(u, 2, 1, k - 1, Lu);
		lipschitz(v, 2, 1, k - 1, Lv);
	}
	cplx s = 0;
	for (int j = 1; j <= k; ++j) {
		double c = binom_neg(k, k - j);
		double al = c * std::pow(delta, j - 2 * k), be = c * std::pow(-delta, j - 2 * k);
		if (j == 1)
			s += al * pi_cot(u) + be * pi_cot(v);
		else
			s += al * Lu[j - 2] + be * Lv[j - 2];
	}
	return s / std::pow(a, k);
}

SeriesValue eval_series_report(const SeriesHandle& h, cplx z) {
	if (!(z.imag() > 0)) throw std::invalid_argument("eval_series: z must lie in the upper half-plane");
	if (h.k < 2) throw std::invalid_argument("eval_series: k must be at least 2");
	const std::int64_t D = to_i64(h.cls.discriminant);
	const double pref = -series_constant(h.k, h.cls.discriminant);
	auto block = [&](long lo, long hi) {
		cplx s = 0;
		for (const OrbitRep& r : reps_between(h.cls, lo, hi)) {
			cplx t = t_orbit_sum(h.k, r.A, r.B, D, z);
			s += (h.flavor == Flavor::parson && r.A < 0) ? -t : t;
		}
		return pref * s;
	};
	long H = std::max(1L, h.policy.height);
	cplx value = block(0, H);
	double drift = 0;
	for (int i = 0; i < h.policy.max_doublings; ++i) {
		cplx add = block(H, 2 * H);
		value += add;
		H *= 2;
		drift = std::abs(add);
		if (drift < h.policy.tol) {
			spdlog::debug("eval_series z=({},{}) height {} drift {:.2e}", z.real(), z.imag(), H, drift);
			return {value, H, drift};
		}
	}
	throw ConvergenceError("eval_series: no stabilization up to height " + std::to_string(H) + " (last drift " +
	                       std::to_string(drift) + ")");
}

cplx eval_series(const SeriesHandle& h, cplx z) { return eval_series_report(h, z).value; }

cplx act(const GroupElement& g, cplx z) {
	double a = to_double(g.a), b = to_double(g.b), c = to_double(g.c), d = to_double(g.d);
	return (a * z + b) / (c * z + d);
}

cplx slash_factor(int k, const GroupElement& g, cplx z) {
	return std::pow(to_double(g.c) * z + to_double(g.d), -2 * k);
}

std::vector<CrossingForm> cocycle_forms(const FormClass& cls, const GroupElement& sigma) {
	GroupElement s = sigma.c < 0 ? -sigma : sigma;
	if (s.c == 0) return {};
	std::vector<CrossingForm> out;
	for (const Intersection& p : enumerate_vertical_intersections(cls, s.d, s.c)) {
		const QForm& q = p.witness_form;
		out.push_back({to_double(q.A), to_double(q.B), to_double(q.C), q.A > 0 ? 1 : -1});
	}
	return out;
}

cplx eval_cocycle_forms(int k, double D, const std::vector<CrossingForm>& forms, cplx z) {
	cplx s = 0;
	for (const CrossingForm& f : forms) {
		cplx v = (f.A * z + f.B) * z + f.C;
		if (v == 0.0) throw std::domain_error("eval_cocycle: z is a pole");
		s += double(f.sign) * std::pow(v, -k);
	}
	return 2 * std::pow(D, k - 0.5) / kPi * s;
}

cplx eval_cocycle(int k, const FormClass& cls, const GroupElement& sigma, cplx z) {
	return eval_cocycle_forms(k, to_double(cls.discriminant), cocycle_forms(cls, sigma), z);
}

std::vector<int> sign_sequence(const QForm& q, const GroupElement& sigma, int n_max) {
	GroupElement inv = sigma.inverse(), g;
	std::vector<int> out;
	for (int n = 0; n <= n_max; ++n) {
		Int v = q.A * g.a * g.a + q.B * g.a * g.c + q.C * g.c * g.c;  // Q(g (1,0))
		out.push_back(v > 0 ? 1 : (v < 0 ? -1 : 0));
		g = g * inv;
	}
	return out;
}

bool sign_limit_check(const FormClass& cls, const GroupElement& sigma_in, int n_max) {
	GroupElement sigma = normalize_hyperbolic(sigma_in);
	QForm qs = form_from_matrix(sigma);
	const QForm& q = cls.seed;
	int target = sign_at_root(q, qs, false);
	if (target == 0) return false;
	std::vector<int> s = sign_sequence(q, sigma, n_max);
	// settled: constant on the last quarter and equal to the target
	std::size_t tail = std::max<std::size_t>(2, s.size() / 4);
	for (std::size_t i = s.size() - tail; i < s.size(); ++i)
		if (s[i] != target) return false;
	return true;
}

}  // namespace modgeo
