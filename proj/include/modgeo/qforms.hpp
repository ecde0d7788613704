#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace modgeo {

using Int = boost::multiprecision::cpp_int;

struct GroupElement {
	Int a{1}, b{0}, c{0}, d{1};

	static GroupElement make(Int a, Int b, Int c, Int d);  // throws unless ad - bc = 1
	static GroupElement identity() { return {}; }
	static GroupElement T() { return {1, 1, 0, 1}; }
	static GroupElement S() { return {0, -1, 1, 0}; }

	Int trace() const { return a + d; }
	Int det() const { return a * d - b * c; }
	bool is_hyperbolic() const { return abs(trace()) > 2; }
	GroupElement inverse() const { return {d, -b, -c, a}; }
	GroupElement operator-() const { return {-a, -b, -c, -d}; }
	GroupElement pow(long n) const;
	GroupElement operator*(const GroupElement& o) const;
	bool operator==(const GroupElement&) const = default;
	std::string str() const;
};

struct QForm {
	Int A, B, C;

	Int disc() const { return B * B - 4 * A * C; }
	Int content() const;
	QForm operator-() const { return {-A, -B, -C}; }
	bool operator==(const QForm&) const = default;
	std::string str() const;
};

bool operator<(const QForm& p, const QForm& q);

// Coefficients that fit in 64 bits; used by the enumeration hot loops.
using SmallForm = std::array<std::int64_t, 3>;

struct FormClass {
	Int discriminant;
	std::vector<QForm> representatives;  // one full reduction cycle, starting at reduce(seed)
	QForm seed;

	bool contains(const QForm& q) const;
	bool contains(const SmallForm& q) const;
	// smallest cycle member; two classes are equal iff their canonical forms agree
	const QForm& canonical() const { return sorted_.front(); }
	bool operator==(const FormClass& o) const { return discriminant == o.discriminant && canonical() == o.canonical(); }

	std::vector<QForm> sorted_;
	std::vector<SmallForm> sorted_small_;  // empty if the cycle does not fit
};

Int isqrt(const Int& n);
bool is_square(const Int& n);
std::int64_t to_i64(const Int& n);  // throws std::overflow_error
double to_double(const Int& n);

QForm form_from_matrix(const GroupElement& g);
// Primitive generator of the automorph group (positive trace, lower-left A*u with u > 0).
GroupElement fundamental_automorph(const QForm& q);
// Automorph from the minimal solution of t^2 - D u^2 = 4 with the form's own discriminant D.
GroupElement matrix_from_form(const QForm& q);
QForm apply_sl2(const QForm& q, const GroupElement& g);
SmallForm apply_sl2(const SmallForm& q, std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d);

bool is_reduced(const QForm& q);
// One reduction step q -> q o (0,-1;1,s); returns s.
Int rho_step(QForm& q);
// Returns the reduced form reached from q, and h with q o h = reduced.
QForm reduce(const QForm& q, GroupElement* h = nullptr);
SmallForm reduce(const SmallForm& q);

FormClass reduction_cycle(const QForm& q);
bool is_equivalent(const QForm& q1, const QForm& q2);
// If q1 ~ q2, returns g with q1 o g = q2.
bool find_equivalence(const QForm& q1, const QForm& q2, GroupElement& g);
std::vector<FormClass> class_representatives(const Int& D);
std::vector<QForm> enumerate_orbit_bounded(const FormClass& cls, long height);

// Primitive hyperbolic conjugacy classes with the given trace (t >= 3), one automorph each,
// normalized to positive lower-left entry.
std::vector<GroupElement> primitive_classes_of_trace(long t);

}  // namespace modgeo
