#include "betamorph/polynomial.hpp"

#include <sstream>

#include "betamorph/errors.hpp"

namespace betamorph {

namespace {

void trim_int(std::vector<Int>& c) {
    while (!c.empty() && c.back() == 0) c.pop_back();
}

}  // namespace

IntPoly::IntPoly(std::vector<Int> coeffs) : c_(std::move(coeffs)) { trim_int(c_); }

IntPoly IntPoly::parse(const std::string& text) {
    std::vector<Int> c;
    std::string tok;
    std::istringstream in(text);
    while (std::getline(in, tok, ',')) {
        // strip spaces
        std::string t;
        for (char ch : tok)
            if (!std::isspace(static_cast<unsigned char>(ch))) t += ch;
        if (t.empty()) throw InputError("empty coefficient in polynomial text: '" + text + "'");
        try {
            c.emplace_back(t);
        } catch (const std::invalid_argument&) {
            throw InputError("bad integer coefficient '" + t + "' in '" + text + "'");
        }
    }
    if (c.empty()) throw InputError("empty polynomial text");
    return IntPoly(std::move(c));
}

IntPoly IntPoly::from_rational(const Rat& r) {
    Rat v = r;
    v.canonicalize();
    return IntPoly({-v.get_num(), v.get_den()});
}

Rat IntPoly::eval(const Rat& x) const {
    Rat acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + Rat(*it);
    return acc;
}

IntPoly IntPoly::derivative() const {
    std::vector<Int> d;
    for (std::size_t i = 1; i < c_.size(); ++i) d.push_back(c_[i] * Int(static_cast<long>(i)));
    return IntPoly(std::move(d));
}

IntPoly IntPoly::squarefree_part() const {
    if (degree() <= 0) return *this;
    QPoly p(*this);
    QPoly g = QPoly::gcd(p, p.derivative());
    QPoly sf = QPoly::divmod(p, g).first;
    // Clear denominators, make primitive, positive leading coefficient.
    Int den = 1;
    for (const Rat& r : sf.coeffs()) den = lcm(den, Int(r.get_den()));
    std::vector<Int> ic;
    for (const Rat& r : sf.coeffs()) ic.push_back(Int(r.get_num()) * den / Int(r.get_den()));
    Int content = 0;
    for (const Int& v : ic) content = gcd(content, v);
    if (content == 0) content = 1;
    if (ic.back() < 0) content = -content;
    for (Int& v : ic) v /= content;
    return IntPoly(std::move(ic));
}

std::string IntPoly::to_string(const std::string& var) const {
    std::vector<Rat> asc;
    for (const Int& v : c_) asc.emplace_back(v);
    return poly_display(asc, var);
}

IntPoly multinacci_poly(int n) {
    if (n < 2) throw InputError("multinacci index must be >= 2, got " + std::to_string(n));
    std::vector<Int> c(static_cast<std::size_t>(n) + 1, Int(-1));
    c.back() = 1;
    return IntPoly(std::move(c));
}

void QPoly::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

QPoly::QPoly(std::vector<Rat> coeffs) : c_(std::move(coeffs)) { trim(); }

QPoly::QPoly(const IntPoly& p) {
    for (const Int& v : p.coeffs()) c_.emplace_back(v);
}

Rat QPoly::coeff(int i) const {
    if (i < 0 || i >= static_cast<int>(c_.size())) return Rat(0);
    return c_[static_cast<std::size_t>(i)];
}

Rat QPoly::eval(const Rat& x) const {
    Rat acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

std::pair<Rat, Rat> QPoly::eval_interval(const Rat& lo, const Rat& hi) const {
    // Termwise bounds; x^k is monotone on [lo, hi] since lo >= 0.
    Rat l = 0, u = 0;
    Rat plo = 1, phi = 1;  // lo^k, hi^k
    for (std::size_t k = 0; k < c_.size(); ++k) {
        const Rat& a = c_[k];
        if (sgn(a) >= 0) {
            l += a * plo;
            u += a * phi;
        } else {
            l += a * phi;
            u += a * plo;
        }
        plo *= lo;
        phi *= hi;
    }
    return {l, u};
}

QPoly QPoly::derivative() const {
    std::vector<Rat> d;
    for (std::size_t i = 1; i < c_.size(); ++i) d.push_back(c_[i] * Rat(static_cast<long>(i)));
    return QPoly(std::move(d));
}

QPoly QPoly::operator+(const QPoly& o) const {
    std::vector<Rat> r(std::max(c_.size(), o.c_.size()), Rat(0));
    for (std::size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
    for (std::size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
    return QPoly(std::move(r));
}

QPoly QPoly::operator-(const QPoly& o) const {
    std::vector<Rat> r(std::max(c_.size(), o.c_.size()), Rat(0));
    for (std::size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
    for (std::size_t i = 0; i < o.c_.size(); ++i) r[i] -= o.c_[i];
    return QPoly(std::move(r));
}

QPoly QPoly::operator*(const QPoly& o) const {
    if (is_zero() || o.is_zero()) return QPoly();
    std::vector<Rat> r(c_.size() + o.c_.size() - 1, Rat(0));
    for (std::size_t i = 0; i < c_.size(); ++i)
        for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
    return QPoly(std::move(r));
}

QPoly QPoly::operator-() const {
    std::vector<Rat> r = c_;
    for (Rat& v : r) v = -v;
    return QPoly(std::move(r));
}

QPoly QPoly::scaled(const Rat& s) const {
    std::vector<Rat> r = c_;
    for (Rat& v : r) v *= s;
    return QPoly(std::move(r));
}

std::pair<QPoly, QPoly> QPoly::divmod(const QPoly& num, const QPoly& den) {
    if (den.is_zero()) throw InputError("polynomial division by zero");
    std::vector<Rat> rem = num.c_;
    const int dd = den.degree();
    const Rat& lead = den.c_.back();
    if (static_cast<int>(rem.size()) - 1 < dd) return {QPoly(), num};
    std::vector<Rat> quot(rem.size() - static_cast<std::size_t>(dd), Rat(0));
    for (int i = static_cast<int>(rem.size()) - 1; i >= dd; --i) {
        Rat f = rem[static_cast<std::size_t>(i)] / lead;
        if (f == 0) continue;
        quot[static_cast<std::size_t>(i - dd)] = f;
        for (int j = 0; j <= dd; ++j)
            rem[static_cast<std::size_t>(i - dd + j)] -= f * den.c_[static_cast<std::size_t>(j)];
    }
    return {QPoly(std::move(quot)), QPoly(std::move(rem))};
}

QPoly QPoly::gcd(QPoly a, QPoly b) {
    while (!b.is_zero()) {
        QPoly r = divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

QPoly QPoly::monic() const {
    if (is_zero()) return *this;
    return scaled(Rat(1) / c_.back());
}

std::string QPoly::to_string(const std::string& var) const { return poly_display(c_, var); }

std::string poly_display(const std::vector<Rat>& ascending, const std::string& var) {
    std::ostringstream out;
    bool first = true;
    for (int i = static_cast<int>(ascending.size()) - 1; i >= 0; --i) {
        Rat a = ascending[static_cast<std::size_t>(i)];
        if (a == 0) continue;
        const bool neg = sgn(a) < 0;
        if (first) {
            if (neg) out << "-";
            first = false;
        } else {
            out << (neg ? " - " : " + ");
        }
        Rat mag = abs(a);
        const bool unit = (mag == 1);
        if (i == 0 || !unit) {
            if (mag.get_den() == 1)
                out << mag.get_num().get_str();
            else
                out << mag.get_num().get_str() << "/" << mag.get_den().get_str();
            if (i > 0) out << "*";
        }
        if (i >= 1) {
            out << var;
            if (i >= 2) out << "^" << i;
        }
    }
    if (first) out << "0";
    return out.str();
}

}  // namespace betamorph
