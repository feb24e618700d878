#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "betamorph/errors.hpp"
#include "betamorph/polynomial.hpp"

namespace betamorph {

class AlgebraicField;
using FieldPtr = std::shared_ptr<const AlgebraicField>;

struct RatInterval {
    Rat lo, hi;
    Rat width() const { return hi - lo; }
};

// The real algebraic number beta in (1,2), represented by a squarefree integer
// polynomial together with an isolating rational interval.  The interval only
// ever shrinks; it is shared by every element of the field and guarded by a
// mutex so concurrent sign queries refine it cooperatively.
class AlgebraicField : public std::enable_shared_from_this<AlgebraicField> {
  public:
    static constexpr int kDefaultPrecisionLimit = 4096;

    // Takes the squarefree part of `p` and isolates its unique root in (1,2),
    // or in hint∩(1,2) when a hint narrows the choice.  Throws NoRootError /
    // AmbiguousRootError accordingly.
    static FieldPtr make(const IntPoly& p, std::optional<RatInterval> hint = std::nullopt,
                         int precision_limit = kDefaultPrecisionLimit);

    const IntPoly& minpoly() const { return minpoly_; }
    int degree() const { return minpoly_.degree(); }
    bool is_rational() const { return degree() == 1; }
    Rat rational_value() const;
    int precision_limit() const { return precision_limit_; }

    RatInterval interval() const;

    // One bisection step (no-op for rational fields).
    void refine_once() const;

    // Shrinks the isolating interval to at most `width` and returns it.
    // Throws PrecisionExceededError when width < 2^-precision_limit.
    RatInterval ensure_width(const Rat& width) const;

  private:
    AlgebraicField() = default;

    IntPoly minpoly_;
    int precision_limit_ = kDefaultPrecisionLimit;
    Rat precision_floor_;  // 2^-precision_limit

    mutable std::mutex mu_;
    mutable Rat lo_, hi_;
    mutable int sign_at_lo_ = 0;  // sign of minpoly at lo_ (constant under refinement)

    void refine_once_locked() const;
};

// An element of Q(beta): a rational-coefficient residue modulo the defining
// polynomial.  Value semantics; elements of different field instances never mix.
class FieldElement {
  public:
    FieldElement() = default;

    static FieldElement zero(const FieldPtr& f);
    static FieldElement one(const FieldPtr& f);
    static FieldElement beta(const FieldPtr& f);
    static FieldElement from_rat(const FieldPtr& f, const Rat& v);
    static FieldElement from_int(const FieldPtr& f, long v);
    // p(beta), reduced.
    static FieldElement from_int_poly(const FieldPtr& f, const IntPoly& p);
    static FieldElement from_qpoly(const FieldPtr& f, const QPoly& p);

    const FieldPtr& field() const { return field_; }
    const std::vector<Rat>& residue() const { return residue_; }

    bool is_zero() const { return residue_.empty(); }
    // -1, 0, +1; exact.  Zero iff the residue is the zero polynomial.
    int sign() const;

    FieldElement operator+(const FieldElement& o) const;
    FieldElement operator-(const FieldElement& o) const;
    FieldElement operator*(const FieldElement& o) const;
    FieldElement operator/(const FieldElement& o) const;
    FieldElement operator-() const;
    FieldElement& operator+=(const FieldElement& o);
    FieldElement& operator-=(const FieldElement& o);

    FieldElement inverse() const;
    FieldElement pow(unsigned k) const;

    bool operator==(const FieldElement& o) const;
    bool operator!=(const FieldElement& o) const { return !(*this == o); }
    bool operator<(const FieldElement& o) const;
    bool operator<=(const FieldElement& o) const;
    bool operator>(const FieldElement& o) const;
    bool operator>=(const FieldElement& o) const;

    // Rational enclosure of width at most `width` around the exact value.
    RatInterval enclosure(const Rat& width) const;

    // Exact rational value if the residue is constant.
    std::optional<Rat> as_rational() const;

    double approx() const;
    std::string poly_string(const std::string& var = "beta") const;
    // "p/q" for constants, otherwise the polynomial form.
    std::string exact_string() const;

  private:
    FieldElement(FieldPtr f, std::vector<Rat> r);
    void reduce();
    void check_same_field(const FieldElement& o) const;

    FieldPtr field_;
    std::vector<Rat> residue_;  // ascending, trimmed, degree < field degree
};

// Total-order comparison: sign of a - b.
int compare(const FieldElement& a, const FieldElement& b);

// Convenience alias for FieldElement::enclosure.
RatInterval refine(const FieldElement& x, const Rat& width);

struct BetaClass {
    enum class Kind { Exact, Gap, SubGolden };
    Kind kind = Kind::SubGolden;
    // Exact(n): beta is the n-th multinacci number.  Gap(n): strictly between
    // the (n-1)-th and n-th, n >= 3.  SubGolden: 1 < beta < golden, n = 2 here
    // so the regime index is uniform across kinds.
    int n = 2;
    bool operator==(const BetaClass&) const = default;
};

std::string to_string(const BetaClass& c);

// Decides the regime by the sign of x^m - x^{m-1} - ... - 1 at beta for
// ascending m; every beta in (1,2) terminates.
BetaClass classify_beta(const FieldPtr& field);

// Accepted forms: "multinacci:N", "rational:P/Q", "poly:c0,c1,..." or a bare
// coefficient list "c0,c1,...".  The root must lie in (1,2).
FieldPtr parse_beta_spec(const std::string& spec);

// Simplest rational strictly between the (n-1)-th and n-th multinacci numbers
// (n >= 3); n = 2 yields a rational in (1, golden), i.e. 3/2.
Rat rational_in_gap(int n);

}  // namespace betamorph
