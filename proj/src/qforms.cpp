#include "modgeo/qforms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace modgeo {

namespace {

using i128 = __int128;

Int floor_mod(const Int& x, const Int& m) {
	Int r = x % m;
	if (r < 0) r += m;
	return r;
}

i128 floor_mod(i128 x, i128 m) {
	i128 r = x % m;
	return r < 0 ? r + m : r;
}

std::int64_t isqrt_small(std::int64_t n) {
	auto r = static_cast<std::int64_t>(std::sqrt(static_cast<long double>(n)));
	while (static_cast<i128>(r) * r > n) --r;
	while (static_cast<i128>(r + 1) * (r + 1) <= n) ++r;
	return r;
}

void check_disc(const Int& D) {
	if (D <= 0) throw std::invalid_argument("discriminant must be positive");
	if (is_square(D)) throw std::invalid_argument("discriminant must not be a perfect square");
}

bool reduced_small(i128 A, i128 B, i128 D) {
	if (B <= 0 || B * B >= D) return false;
	i128 a2 = 2 * (A < 0 ? -A : A);
	i128 lo = a2 - B;
	if (lo >= 0 && lo * lo >= D) return false;
	return D < (a2 + B) * (a2 + B);
}

void rho_small(i128& A, i128& B, i128& C, i128 D, i128 r) {
	i128 ac = C < 0 ? -C : C;
	i128 bn = (ac * ac > D) ? ac - floor_mod(ac + B, 2 * ac) : r - floor_mod(r + B, 2 * ac);
	i128 cn = (bn * bn - D) / (4 * C);
	A = C;
	B = bn;
	C = cn;
}

}  // namespace

GroupElement GroupElement::make(Int a, Int b, Int c, Int d) {
	GroupElement g{std::move(a), std::move(b), std::move(c), std::move(d)};
	if (g.det() != 1) throw std::invalid_argument("matrix " + g.str() + " does not have determinant 1");
	return g;
}

GroupElement GroupElement::operator*(const GroupElement& o) const {
	return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
}

GroupElement GroupElement::pow(long n) const {
	GroupElement base = n < 0 ? inverse() : *this;
	unsigned long e = n < 0 ? -static_cast<unsigned long>(n) : static_cast<unsigned long>(n);
	GroupElement r;
	while (e) {
		if (e & 1) r = r * base;
		base = base * base;
		e >>= 1;
	}
	return r;
}

std::string GroupElement::str() const {
	std::ostringstream os;
	os << "(" << a << "," << b << ";" << c << "," << d << ")";
	return os.str();
}

Int QForm::content() const {
	Int g = gcd(gcd(abs(A), abs(B)), abs(C));
	return g;
}

std::string QForm::str() const {
	std::ostringstream os;
	os << "(" << A << "," << B << "," << C << ")";
	return os.str();
}

bool operator<(const QForm& p, const QForm& q) {
	if (p.A != q.A) return p.A < q.A;
	if (p.B != q.B) return p.B < q.B;
	return p.C < q.C;
}

Int isqrt(const Int& n) {
	if (n < 0) throw std::domain_error("isqrt of negative number");
	return boost::multiprecision::sqrt(n);
}

bool is_square(const Int& n) {
	if (n < 0) return false;
	Int r = isqrt(n);
	return r * r == n;
}

std::int64_t to_i64(const Int& n) {
	if (n > std::numeric_limits<std::int64_t>::max() || n < std::numeric_limits<std::int64_t>::min())
		throw std::overflow_error("integer does not fit in 64 bits");
	return n.convert_to<std::int64_t>();
}

double to_double(const Int& n) { return n.convert_to<double>(); }

QForm form_from_matrix(const GroupElement& g) {
	if (!g.is_hyperbolic()) throw std::invalid_argument("form_from_matrix: " + g.str() + " is not hyperbolic");
	return {g.c, g.d - g.a, -g.b};
}

QForm apply_sl2(const QForm& q, const GroupElement& g) {
	const auto& [a, b, c, d] = g;
	return {q.A * a * a + q.B * a * c + q.C * c * c,
	        2 * q.A * a * b + q.B * (a * d + b * c) + 2 * q.C * c * d,
	        q.A * b * b + q.B * b * d + q.C * d * d};
}

SmallForm apply_sl2(const SmallForm& q, std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
	i128 A = q[0], B = q[1], C = q[2];
	i128 nA = A * a * a + B * a * c + C * c * c;
	i128 nB = 2 * A * a * b + B * (static_cast<i128>(a) * d + static_cast<i128>(b) * c) + 2 * C * c * d;
	i128 nC = A * b * b + B * b * d + C * d * d;
	return {static_cast<std::int64_t>(nA), static_cast<std::int64_t>(nB), static_cast<std::int64_t>(nC)};
}

bool is_reduced(const QForm& q) {
	Int D = q.disc();
	if (q.B <= 0 || q.B * q.B >= D) return false;
	Int a2 = 2 * abs(q.A);
	Int lo = a2 - q.B;
	if (lo >= 0 && lo * lo >= D) return false;
	return D < (a2 + q.B) * (a2 + q.B);
}

Int rho_step(QForm& q) {
	Int D = q.disc();
	Int r = isqrt(D);
	Int ac = abs(q.C);
	Int bn = (ac * ac > D) ? ac - floor_mod(ac + q.B, 2 * ac) : r - floor_mod(r + q.B, 2 * ac);
	Int s = (bn + q.B) / (2 * q.C);
	Int cn = (bn * bn - D) / (4 * q.C);
	q = {q.C, bn, cn};
	return s;
}

QForm reduce(const QForm& q, GroupElement* h) {
	check_disc(q.disc());
	QForm x = q;
	GroupElement acc;
	for (long it = 0; !is_reduced(x); ++it) {
		if (it > 100000) throw std::runtime_error("reduce: no reduced form reached for " + q.str());
		Int s = rho_step(x);
		if (h) acc = acc * GroupElement{0, -1, 1, s};
	}
	if (h) *h = acc;
	return x;
}

SmallForm reduce(const SmallForm& q) {
	i128 A = q[0], B = q[1], C = q[2];
	i128 D = B * B - 4 * A * C;
	i128 r = isqrt_small(static_cast<std::int64_t>(D));
	for (int it = 0; !reduced_small(A, B, D); ++it) {
		if (it > 10000) throw std::runtime_error("reduce: no reduced form reached");
		rho_small(A, B, C, D, r);
	}
	return {static_cast<std::int64_t>(A), static_cast<std::int64_t>(B), static_cast<std::int64_t>(C)};
}

FormClass reduction_cycle(const QForm& q) {
	FormClass cls;
	cls.seed = q;
	cls.discriminant = q.disc();
	QForm start = reduce(q);
	QForm x = start;
	do {
		cls.representatives.push_back(x);
		rho_step(x);
		if (cls.representatives.size() > 1000000) throw std::runtime_error("reduction cycle too long");
	} while (!(x == start));
	cls.sorted_ = cls.representatives;
	std::sort(cls.sorted_.begin(), cls.sorted_.end());
	const Int lim = Int(1) << 60;
	bool small = abs(cls.discriminant) < lim;
	for (const auto& f : cls.sorted_) small = small && abs(f.A) < lim && abs(f.B) < lim && abs(f.C) < lim;
	if (small) {
		for (const auto& f : cls.sorted_) cls.sorted_small_.push_back({to_i64(f.A), to_i64(f.B), to_i64(f.C)});
	}
	return cls;
}

bool FormClass::contains(const QForm& q) const {
	if (q.disc() != discriminant) return false;
	QForm r = reduce(q);
	return std::binary_search(sorted_.begin(), sorted_.end(), r);
}

bool FormClass::contains(const SmallForm& q) const {
	if (sorted_small_.empty()) return contains(QForm{q[0], q[1], q[2]});
	SmallForm r = reduce(q);
	return std::binary_search(sorted_small_.begin(), sorted_small_.end(), r);
}

bool is_equivalent(const QForm& q1, const QForm& q2) {
	if (q1.disc() != q2.disc()) return false;
	return reduction_cycle(q1).contains(q2);
}

bool find_equivalence(const QForm& q1, const QForm& q2, GroupElement& g) {
	if (q1.disc() != q2.disc()) return false;
	GroupElement h1, h2;
	QForm r1 = reduce(q1, &h1), r2 = reduce(q2, &h2);
	QForm x = r1;
	GroupElement m;
	for (std::size_t it = 0;; ++it) {
		if (x == r2) break;
		Int s = rho_step(x);
		m = m * GroupElement{0, -1, 1, s};
		if (x == r1 || it > 1000000) return false;
	}
	g = h1 * m * h2.inverse();
	return true;
}

GroupElement fundamental_automorph(const QForm& q) {
	check_disc(q.disc());
	Int f = q.content();
	QForm p{q.A / f, q.B / f, q.C / f};
	GroupElement h;
	QForm start = reduce(p, &h);
	QForm x = start;
	GroupElement m;
	do {
		Int s = rho_step(x);
		m = m * GroupElement{0, -1, 1, s};
	} while (!(x == start));
	GroupElement aut = h * m * h.inverse();
	Int t = abs(aut.trace());
	Int u = abs(aut.c / p.A);
	return {(t - p.B * u) / 2, -p.C * u, p.A * u, (t + p.B * u) / 2};
}

GroupElement matrix_from_form(const QForm& q) {
	check_disc(q.disc());
	Int f = q.content();
	Int D0 = q.disc() / (f * f);
	GroupElement e = fundamental_automorph(q);
	Int t0 = e.trace();
	Int u0 = e.c * f / q.A;  // fundamental solution for D0
	Int t = t0, u = u0;
	while (u % f != 0) {
		Int tn = (t0 * t + D0 * u0 * u) / 2;
		Int un = (t0 * u + u0 * t) / 2;
		t = tn;
		u = un;
	}
	u /= f;
	return {(t - q.B * u) / 2, -q.C * u, q.A * u, (t + q.B * u) / 2};
}

std::vector<FormClass> class_representatives(const Int& D) {
	check_disc(D);
	Int m4 = floor_mod(D, Int(4));
	if (m4 != 0 && m4 != 1) throw std::invalid_argument("discriminant must be 0 or 1 mod 4");
	Int r = isqrt(D);
	std::vector<QForm> reduced;
	for (Int B = 1; B <= r; ++B) {
		if (floor_mod(B - D, Int(2)) != 0) continue;
		Int N = B * B - D;  // = 4AC < 0
		for (Int a = 1; 2 * a < r + B + 1; ++a) {
			if (N % (4 * a) != 0) continue;
			for (int sg : {1, -1}) {
				QForm q{sg * a, B, N / (4 * sg * a)};
				if (is_reduced(q)) reduced.push_back(q);
			}
		}
	}
	std::sort(reduced.begin(), reduced.end());
	std::vector<FormClass> out;
	std::vector<bool> used(reduced.size(), false);
	for (std::size_t i = 0; i < reduced.size(); ++i) {
		if (used[i]) continue;
		FormClass cls = reduction_cycle(reduced[i]);
		for (const auto& f : cls.representatives) {
			auto it = std::lower_bound(reduced.begin(), reduced.end(), f);
			if (it != reduced.end() && *it == f) used[it - reduced.begin()] = true;
		}
		// prefer a seed with A > 0 and small |A|
		QForm best = cls.representatives.front();
		for (const auto& f : cls.representatives) {
			auto key = [](const QForm& g) { return std::make_tuple(g.A <= 0, Int(abs(g.A)), g.B); };
			if (key(f) < key(best)) best = f;
		}
		cls.seed = best;
		out.push_back(std::move(cls));
	}
	return out;
}

std::vector<QForm> enumerate_orbit_bounded(const FormClass& cls, long height) {
	if (height < 1) throw std::invalid_argument("height must be >= 1");
	std::int64_t D = to_i64(cls.discriminant);
	std::int64_t H = height;
	std::int64_t bmax = isqrt_small(D + 4 * H * H);
	std::vector<QForm> out;
	for (std::int64_t A = -H; A <= H; ++A) {
		if (A == 0) continue;
		for (std::int64_t B = -bmax; B <= bmax; ++B) {
			if (((B - D) % 2 + 2) % 2 != 0) continue;
			i128 N = static_cast<i128>(B) * B - D;
			if (N % (4 * A) != 0) continue;
			i128 C = N / (4 * A);
			if (C == 0 || C > H || C < -H) continue;
			SmallForm f{A, B, static_cast<std::int64_t>(C)};
			if (cls.contains(f)) out.push_back({f[0], f[1], f[2]});
		}
	}
	return out;
}

std::vector<GroupElement> primitive_classes_of_trace(long t) {
	if (t < 3) throw std::invalid_argument("trace must be at least 3");
	Int D = Int(t) * t - 4;
	std::vector<GroupElement> out;
	for (Int f = 1; f * f <= D; ++f) {
		if (D % (f * f) != 0) continue;
		Int D0 = D / (f * f);
		Int m4 = floor_mod(D0, Int(4));
		if ((m4 != 0 && m4 != 1) || is_square(D0)) continue;
		for (const auto& cls : class_representatives(D0)) {
			if (cls.seed.content() != 1) continue;
			QForm rep = cls.seed;
			for (const auto& g : cls.representatives)
				if (g.A > 0) { rep = g; break; }
			GroupElement e = fundamental_automorph(rep);
			if (e.trace() == t) out.push_back(e);
		}
	}
	return out;
}

}  // namespace modgeo
