#pragma once

#include <gmpxx.h>

#include <string>
#include <utility>
#include <vector>

namespace betamorph {

using Int = mpz_class;
using Rat = mpq_class;

// Dense univariate polynomial over Z, coefficients stored ascending by degree.
// The zero polynomial has an empty coefficient vector.
class IntPoly {
  public:
    IntPoly() = default;
    explicit IntPoly(std::vector<Int> coeffs);

    // Parses "c0,c1,...,ck" (ascending degree), e.g. "-1,-1,1" -> x^2 - x - 1.
    static IntPoly parse(const std::string& text);

    // Linear polynomial q*x - p with root p/q.
    static IntPoly from_rational(const Rat& r);

    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    const std::vector<Int>& coeffs() const { return c_; }
    const Int& leading() const { return c_.back(); }

    Rat eval(const Rat& x) const;
    IntPoly derivative() const;

    // p / gcd(p, p'), scaled back to a primitive integer polynomial with
    // positive leading coefficient.  Same roots, all simple.
    IntPoly squarefree_part() const;

    std::string to_string(const std::string& var = "x") const;

    bool operator==(const IntPoly&) const = default;

  private:
    std::vector<Int> c_;
};

// x^n - x^{n-1} - ... - x - 1; its single root in (1,2) is the n-th multinacci
// number (golden ratio at n=2).  Requires n >= 2.
IntPoly multinacci_poly(int n);

// Dense univariate polynomial over Q.  Workhorse for residue arithmetic,
// Euclidean division and Sturm chains.  Coefficients ascending.
class QPoly {
  public:
    QPoly() = default;
    explicit QPoly(std::vector<Rat> coeffs);
    explicit QPoly(const IntPoly& p);

    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    const std::vector<Rat>& coeffs() const { return c_; }
    Rat coeff(int i) const;  // 0 outside stored range

    Rat eval(const Rat& x) const;
    // Interval evaluation over [lo, hi], valid for 0 <= lo <= hi.
    std::pair<Rat, Rat> eval_interval(const Rat& lo, const Rat& hi) const;

    QPoly derivative() const;

    QPoly operator+(const QPoly& o) const;
    QPoly operator-(const QPoly& o) const;
    QPoly operator*(const QPoly& o) const;
    QPoly operator-() const;
    QPoly scaled(const Rat& s) const;

    // Euclidean division; divisor must be nonzero.
    static std::pair<QPoly, QPoly> divmod(const QPoly& num, const QPoly& den);

    // Monic gcd (constant 1 for coprime inputs, zero only if both zero).
    static QPoly gcd(QPoly a, QPoly b);

    QPoly monic() const;

    std::string to_string(const std::string& var = "x") const;

    bool operator==(const QPoly&) const = default;

  private:
    void trim();
    std::vector<Rat> c_;
};

// Renders a rational-coefficient polynomial the way the reports want it:
// "beta^2 - 2*beta + 1", highest degree first, integer coefficients shown
// without denominators when possible.
std::string poly_display(const std::vector<Rat>& ascending, const std::string& var);

}  // namespace betamorph
