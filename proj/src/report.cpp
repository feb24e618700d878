#include "betamorph/report.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <utility>

#include "betamorph/errors.hpp"
#include "betamorph/markov.hpp"
#include "betamorph/monotonicity.hpp"
#include "betamorph/version.hpp"

namespace betamorph {

namespace {

Int pow10_int(int e) {
    Int r;
    mpz_ui_pow_ui(r.get_mpz_t(), 10u, static_cast<unsigned long>(e));
    return r;
}

std::string rat_string(const Rat& r) { return r.get_str(); }

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string csv_row(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        out += csv_escape(fields[i]);
    }
    return out;
}

}  // namespace

std::string rat_decimal_string(const Rat& r, int digits) {
    if (digits < 1 || digits > 64) throw InputError("decimal digit count must be in 1..64");
    if (r == 0) return "0";
    const bool neg = r < 0;
    Rat a = neg ? Rat(-r) : r;

    // e with a in [10^(e-1), 10^e).
    int e = 0;
    {
        Rat t = a;
        while (t >= 1) {
            t /= 10;
            ++e;
            if (e > 100000) throw Error("decimal exponent out of range");
        }
        while (t < Rat(1, 10)) {
            t *= 10;
            --e;
            if (e < -100000) throw Error("decimal exponent out of range");
        }
    }

    Int p = pow10_int(digits >= e ? digits - e : e - digits);
    Rat scaled = digits >= e ? Rat(a * Rat(p)) : Rat(a / Rat(p));
    Int m;
    {
        Rat half = scaled + Rat(1, 2);
        mpz_fdiv_q(m.get_mpz_t(), half.get_num_mpz_t(), half.get_den_mpz_t());
    }
    if (m == pow10_int(digits)) {
        m /= 10;
        ++e;
    }
    std::string ds = m.get_str();
    std::string sign = neg ? "-" : "";
    if (e <= 0) return sign + "0." + std::string(static_cast<std::size_t>(-e), '0') + ds;
    if (e >= digits) return sign + ds + std::string(static_cast<std::size_t>(e - digits), '0');
    return sign + ds.substr(0, static_cast<std::size_t>(e)) + "." +
           ds.substr(static_cast<std::size_t>(e));
}

std::string decimal_string(const FieldElement& x, int digits) {
    if (auto r = x.as_rational()) return rat_decimal_string(*r, digits);
    double mag = x.approx();
    if (mag < 0) mag = -mag;
    int shift = 0;
    while (mag >= 10.0 && shift < 40) {
        mag /= 10.0;
        ++shift;
    }
    int exp = digits + 4 - shift;
    if (exp < 1) exp = 1;
    if (exp > 1200) exp = 1200;
    RatInterval iv = x.enclosure(Rat(1, pow10_int(exp)));
    return rat_decimal_string(Rat((iv.lo + iv.hi) / 2), digits);
}

Json versions_block() {
    Json v;
    v["artifact"] = version::kArtifact;
    v["algebraic-core"] = version::kAlgebraicCore;
    v["beta-maps"] = version::kBetaMaps;
    v["monotonicity"] = version::kMonotonicity;
    v["markov"] = version::kMarkov;
    v["cli"] = version::kCli;
    return v;
}

Json beta_block(const FieldPtr& f, const std::string& beta_spec, int digits) {
    Json b;
    b["spec"] = beta_spec;
    b["minpoly"] = f->minpoly().to_string("x");
    b["degree"] = f->degree();
    b["decimal"] = decimal_string(FieldElement::beta(f), digits);
    return b;
}

namespace {

Json witness_entry(const Witness& w, int digits) {
    Json e;
    e["k"] = w.k;
    e["lambda_plus"] = w.length_plus.exact_string();
    e["lambda_plus_decimal"] = decimal_string(w.length_plus, digits);
    e["lambda_minus"] = w.length_minus.exact_string();
    e["lambda_minus_decimal"] = decimal_string(w.length_minus, digits);
    return e;
}

Json r1_block(const R1Report& r, int) {
    Json j;
    j["irreducible"] = r.irreducible;
    j["rows_contiguous"] = r.rows_contiguous;
    j["minpoly_divides_charpoly"] = r.minpoly_divides_charpoly;
    j["right_eigenvector_positive"] = r.right_eigenvector_positive;
    j["left_eigenvector_positive"] = r.left_eigenvector_positive;
    j["charpoly"] = poly_display(r.charpoly.coeffs(), "x");
    Json rv = Json::array(), lv = Json::array();
    for (const auto& e : r.right) rv.push_back(e.exact_string());
    for (const auto& e : r.left) lv.push_back(e.exact_string());
    j["right_eigenvector"] = rv;
    j["left_eigenvector"] = lv;
    j["all_ok"] = r.all_ok;
    return j;
}

Json matrix_rows(const TransitionMatrix& M) {
    Json rows = Json::array();
    for (const auto& row : M.m) rows.push_back(row);
    return rows;
}

std::pair<Json, Json> cut_arrays(const std::vector<FieldElement>& cuts, int digits) {
    Json exact = Json::array(), dec = Json::array();
    for (const auto& c : cuts) {
        exact.push_back(c.exact_string());
        dec.push_back(decimal_string(c, digits));
    }
    return {std::move(exact), std::move(dec)};
}

Json matrix_certificate_block(const FieldPtr& f, int digits) {
    Certificate cert = certify_isomorphism(f);
    Json mc;
    mc["n"] = cert.n;
    mc["matrix"] = matrix_rows(cert.matrix);
    {
        auto [pe, pd] = cut_arrays(cert.cuts_pos, digits);
        mc["cuts_positive"] = std::move(pe);
        mc["cuts_positive_decimal"] = std::move(pd);
        auto [ne, nd] = cut_arrays(cert.cuts_neg, digits);
        mc["cuts_negative"] = std::move(ne);
        mc["cuts_negative_decimal"] = std::move(nd);
    }
    mc["labeling_positive"] = cert.label_pos.order;
    mc["labeling_negative"] = cert.label_neg.order;
    mc["r1"] = r1_block(cert.r1, digits);

    MarkovMeasure mu = parry_measure(f, cert.matrix);
    Json P = Json::array(), q = Json::array(), qd = Json::array();
    for (const auto& row : mu.P) {
        Json jr = Json::array();
        for (const auto& e : row) jr.push_back(e.exact_string());
        P.push_back(jr);
    }
    for (const auto& e : mu.q) {
        q.push_back(e.exact_string());
        qd.push_back(decimal_string(e, digits));
    }
    mc["parry"] = Json{{"P", P}, {"q", q}, {"q_decimal", qd}};

    const Rat w("1/10000000000");
    auto [elo, ehi] = entropy(mu, w);
    auto [llo, lhi] = log_enclosure(f, w / 10);
    Json ej;
    ej["lo"] = rat_string(elo);
    ej["hi"] = rat_string(ehi);
    ej["decimal"] = rat_decimal_string(Rat((elo + ehi) / 2), digits);
    ej["width_bound"] = rat_string(w);
    ej["contains_log_beta"] = (elo <= llo && lhi <= ehi);
    mc["entropy"] = ej;
    return mc;
}

}  // namespace

Json certify_report(const FieldPtr& f, const std::string& beta_spec, int digits,
                    int forced_iterate) {
    Verdict v = obstruction_check(f, forced_iterate);

    Json j;
    j["command"] = "certify";
    j["beta"] = beta_block(f, beta_spec, digits);
    j["regime"] = to_string(v.cls);
    j["n"] = v.cls.n;
    j["iterate"] = v.iterate;
    j["verdict"] = to_string(v.kind);
    if (v.case_tag)
        j["case"] = to_string(*v.case_tag);
    else
        j["case"] = nullptr;
    j["boundary_markov"] = v.boundary_markov;

    Json pw = Json::array();
    for (long k : predicted_witnesses(v.cls, v.case_tag)) pw.push_back(k);
    j["predicted_witnesses"] = pw;

    Json ws = Json::array();
    for (const Witness& w : v.witnesses) ws.push_back(witness_entry(w, digits));
    j["witnesses"] = ws;

    if (v.kind == Verdict::Kind::IsomorphicMultinacci)
        j["matrix_certificate"] = matrix_certificate_block(f, digits);
    else
        j["matrix_certificate"] = nullptr;

    j["versions"] = versions_block();
    return j;
}

namespace {

struct Check {
    std::string name;
    bool ok;
};

void add_check(std::vector<Check>& cs, const std::string& name, const std::function<bool()>& fn) {
    try {
        cs.push_back({name, fn()});
    } catch (const Error& e) {
        cs.push_back({name + " (threw: " + std::string(e.what()) + ")", false});
    }
}

}  // namespace

Json verify_report(const FieldPtr& f, const std::string& beta_spec, int digits,
                   int level_override) {
    if (level_override < 0 || level_override > 16)
        throw InputError("verify level override must be in 1..16");
    const BetaClass cls = classify_beta(f);
    const int n = cls.n;
    const bool exact = cls.kind == BetaClass::Kind::Exact;
    const bool subgolden = cls.kind == BetaClass::Kind::SubGolden;

    std::vector<Check> cs;

    add_check(cs, "orbit order of the negative map",
              [&] { return orbit_order_check(f).all_ok; });

    if (!subgolden) {
        const int idx = exact ? n : n - 1;
        add_check(cs, "iterate bounds against the fixed points (n=" + std::to_string(idx) + ")",
                  [&] { return verify_orbit_bounds(f, idx).all_ok; });
    } else {
        add_check(cs, "iterate bounds reject the sub-golden regime", [&] {
            try {
                verify_orbit_bounds(f, 2);
                return false;
            } catch (const HypothesisError&) {
                return true;
            }
        });
    }

    if (!subgolden) {
        const int kmax = exact ? n - 1 : n - 2;
        if (kmax >= 1)
            add_check(cs, "closed form of the negative orbit (k<=" + std::to_string(kmax) + ")",
                      [&] {
                          PLMap S = make_map(f, Orientation::Negative);
                          OrbitTable orb = orbit_of_one(S, kmax);
                          for (int k = 1; k <= kmax; ++k)
                              if (s_closed_form(f, k) != orb.points[k]) return false;
                          return true;
                      });
        add_check(cs, "closed form rejects k out of range", [&] {
            try {
                s_closed_form(f, kmax + 1);
                return false;
            } catch (const ValidityRangeError&) {
                return true;
            }
        });
    } else {
        add_check(cs, "closed form rejects the sub-golden regime", [&] {
            try {
                s_closed_form(f, 1);
                return false;
            } catch (const ValidityRangeError&) {
                return true;
            }
        });
    }

    const int mT = level_override > 0 ? level_override : std::min(n, 10);
    const int mS = level_override > 0 ? level_override : (subgolden ? 3 : std::min(n, 10));

    add_check(cs, "positive decomposition validates (level " + std::to_string(mT) + ")", [&] {
        BranchDecomposition d = decompose(make_map(f, Orientation::Positive), mT);
        validate_decomposition(d);
        return true;
    });
    if (!subgolden && mT <= n)
        add_check(cs, "positive census matches the closed form", [&] {
            BranchDecomposition d = decompose(make_map(f, Orientation::Positive), mT);
            return type_census(d) == kappa_closed(n, mT);
        });
    else if (subgolden)
        add_check(cs, "positive census matches the closed form (level 2)", [&] {
            BranchDecomposition d = decompose(make_map(f, Orientation::Positive), 2);
            return type_census(d) == kappa_closed(2, 2);
        });

    add_check(cs, "negative decomposition validates (level " + std::to_string(mS) + ")", [&] {
        BranchDecomposition d = decompose(make_map(f, Orientation::Negative), mS);
        validate_decomposition(d);
        return true;
    });
    if (!subgolden && mS <= n)
        add_check(cs, "negative census matches the closed form", [&] {
            BranchDecomposition d = decompose(make_map(f, Orientation::Negative), mS);
            std::vector<long> want =
                mS < n ? iota_closed(mS) : iota_n_closed(n, select_case(f, n));
            return type_census(d) == want;
        });
    else if (subgolden)
        add_check(cs, "negative census matches the closed form (level 2)", [&] {
            BranchDecomposition d = decompose(make_map(f, Orientation::Negative), 2);
            return type_census(d) == iota_closed(2);
        });

    add_check(cs, "positive spectrum mass equals beta^" + std::to_string(mT), [&] {
        PreimageSpectrum sp = preimage_spectrum(make_map(f, Orientation::Positive), mT);
        return spectrum_mass(sp) == FieldElement::beta(f).pow(static_cast<unsigned>(mT));
    });
    add_check(cs, "negative spectrum mass equals beta^" + std::to_string(mS), [&] {
        PreimageSpectrum sp = preimage_spectrum(make_map(f, Orientation::Negative), mS);
        return spectrum_mass(sp) == FieldElement::beta(f).pow(static_cast<unsigned>(mS));
    });

    if (exact) {
        add_check(cs, "obstruction verdict is isomorphic with no witness", [&] {
            Verdict v = obstruction_check(f);
            return v.kind == Verdict::Kind::IsomorphicMultinacci && v.witnesses.empty();
        });
        add_check(cs, "transition matrices certify the isomorphism",
                  [&] { return certify_isomorphism(f).ok; });
        for (Orientation o : {Orientation::Negative, Orientation::Positive})
            add_check(cs,
                      std::string(o == Orientation::Negative ? "negative" : "positive") +
                          "-map coding agrees with the matrix (depth 3)",
                      [&, o] {
                          auto part = detect_markov(make_map(f, o), 2 * n + 8);
                          if (!part) return false;
                          return coding_check(*part, transition_matrix(*part), 3).all_ok;
                      });
        add_check(cs, "entropy enclosure contains log beta", [&] {
            MarkovMeasure mu = parry_measure(f, companion_matrix(n));
            auto [elo, ehi] = entropy(mu, Rat("1/100000000"));
            auto [llo, lhi] = log_enclosure(f, Rat("1/1000000000"));
            return elo <= llo && lhi <= ehi;
        });
    } else {
        add_check(cs, "preimage spectra yield a non-isomorphism witness", [&] {
            Verdict v = obstruction_check(f);
            return v.kind == Verdict::Kind::NotIsomorphic && !v.witnesses.empty();
        });
        add_check(cs, "predicted witnesses are found", [&] {
            Verdict v = obstruction_check(f);
            std::set<long> got;
            for (const Witness& w : v.witnesses) got.insert(w.k);
            for (long k : predicted_witnesses(v.cls, v.case_tag))
                if (!got.count(k)) return false;
            return true;
        });
    }

    Json j;
    j["command"] = "verify";
    j["beta"] = beta_block(f, beta_spec, digits);
    j["regime"] = to_string(cls);
    Json checks = Json::array();
    bool all = true;
    for (const Check& c : cs) {
        checks.push_back(Json{{"name", c.name}, {"ok", c.ok}});
        all = all && c.ok;
    }
    j["checks"] = checks;
    j["all_ok"] = all;
    j["versions"] = versions_block();
    return j;
}

namespace {

Json spectrum_table(const PreimageSpectrum& sp, int digits) {
    Json t;
    t["map"] = sp.orient == Orientation::Positive ? "T" : "S";
    t["level"] = sp.level;
    Json cells = Json::array();
    long maxv = 0;
    for (std::size_t i = 0; i < sp.values.size(); ++i) {
        Json c;
        c["lo"] = sp.breakpoints[i].exact_string();
        c["hi"] = sp.breakpoints[i + 1].exact_string();
        c["lo_decimal"] = decimal_string(sp.breakpoints[i], digits);
        c["hi_decimal"] = decimal_string(sp.breakpoints[i + 1], digits);
        c["count"] = sp.values[i];
        cells.push_back(c);
        maxv = std::max(maxv, sp.values[i]);
    }
    t["cells"] = cells;
    t["max_count"] = maxv;
    FieldElement mass = spectrum_mass(sp);
    t["mass"] = mass.exact_string();
    t["mass_decimal"] = decimal_string(mass, digits);
    return t;
}

}  // namespace

Json spectrum_report(const FieldPtr& f, const std::string& beta_spec, int digits, int n,
                     char which) {
    if (n < 1 || n > 18) throw InputError("spectrum level must be in 1..18");
    if (which != 'T' && which != 'S' && which != 'B')
        throw InputError("spectrum map selector must be T, S or both");
    const BetaClass cls = classify_beta(f);

    Json j;
    j["command"] = "spectrum";
    j["beta"] = beta_block(f, beta_spec, digits);
    j["regime"] = to_string(cls);
    j["level"] = n;

    std::optional<PreimageSpectrum> plus, minus;
    if (which != 'S') plus = preimage_spectrum(make_map(f, Orientation::Positive), n);
    if (which != 'T') minus = preimage_spectrum(make_map(f, Orientation::Negative), n);

    Json tables = Json::array();
    if (plus) tables.push_back(spectrum_table(*plus, digits));
    if (minus) tables.push_back(spectrum_table(*minus, digits));
    j["tables"] = tables;

    if (plus && minus) {
        std::set<long> ks;
        for (long v : plus->values) ks.insert(v);
        for (long v : minus->values) ks.insert(v);
        Json ws = Json::array();
        for (long k : ks) {
            FieldElement lp = level_set(*plus, k);
            FieldElement lm = level_set(*minus, k);
            if (lp != lm) ws.push_back(witness_entry(Witness{k, lp, lm}, digits));
        }
        j["witnesses"] = ws;
    } else {
        j["witnesses"] = nullptr;
    }
    j["versions"] = versions_block();
    return j;
}

Json markov_report(const FieldPtr& f, const std::string& beta_spec, int digits,
                   char map_letter, int depth) {
    if (map_letter != 'T' && map_letter != 'S') throw InputError("map must be T or S");
    if (depth < 1 || depth > 200) throw InputError("orbit depth must be in 1..200");
    const BetaClass cls = classify_beta(f);
    PLMap map = make_map(
        f, map_letter == 'T' ? Orientation::Positive : Orientation::Negative);

    Json j;
    j["command"] = "markov";
    j["beta"] = beta_block(f, beta_spec, digits);
    j["regime"] = to_string(cls);
    j["map"] = std::string(1, map_letter);
    j["max_depth"] = depth;

    auto part = detect_markov(map, depth);
    j["found"] = part.has_value();
    if (!part) {
        j["note"] = "the orbit of 1 did not close within the depth bound";
        j["versions"] = versions_block();
        return j;
    }

    j["piece_count"] = part->piece_count();
    {
        auto [ce, cd] = cut_arrays(part->cuts, digits);
        j["cut_points"] = std::move(ce);
        j["cut_points_decimal"] = std::move(cd);
    }

    TransitionMatrix M = transition_matrix(*part);
    j["matrix"] = matrix_rows(M);

    try {
        Labeling L = chain_labeling(M);
        TransitionMatrix ML = relabel(M, L);
        j["labeling"] = L.order;
        j["labeled_matrix"] = matrix_rows(ML);
        j["matches_companion"] = (ML == companion_matrix(part->piece_count()));
    } catch (const CertificateError& e) {
        j["labeling"] = nullptr;
        j["labeling_note"] = e.what();
    }

    R1Report r1 = check_r1(f, M);
    j["r1"] = r1_block(r1, digits);

    if (r1.all_ok) {
        MarkovMeasure mu = parry_measure(f, M);
        Json P = Json::array(), q = Json::array(), qd = Json::array();
        for (const auto& row : mu.P) {
            Json jr = Json::array();
            for (const auto& e : row) jr.push_back(e.exact_string());
            P.push_back(jr);
        }
        for (const auto& e : mu.q) {
            q.push_back(e.exact_string());
            qd.push_back(decimal_string(e, digits));
        }
        j["parry"] = Json{{"P", P}, {"q", q}, {"q_decimal", qd}};

        const Rat w("1/10000000000");
        auto [elo, ehi] = entropy(mu, w);
        auto [llo, lhi] = log_enclosure(f, w / 10);
        Json ej;
        ej["lo"] = rat_string(elo);
        ej["hi"] = rat_string(ehi);
        ej["decimal"] = rat_decimal_string(Rat((elo + ehi) / 2), digits);
        ej["contains_log_beta"] = (elo <= llo && lhi <= ehi);
        j["entropy"] = ej;

        CodingReport cr = coding_check(*part, M, 3);
        Json cj;
        cj["depth"] = cr.depth;
        cj["word_counts"] = cr.word_counts;
        cj["expected_counts"] = cr.expected_counts;
        cj["all_ok"] = cr.all_ok;
        j["coding"] = cj;
    } else {
        j["parry"] = nullptr;
        j["entropy"] = nullptr;
        j["coding"] = nullptr;
    }

    j["versions"] = versions_block();
    return j;
}

Json orbit_report(const FieldPtr& f, const std::string& beta_spec, int digits,
                  char map_letter, int depth) {
    if (map_letter != 'T' && map_letter != 'S') throw InputError("map must be T or S");
    if (depth < 1 || depth > 200) throw InputError("orbit depth must be in 1..200");
    const BetaClass cls = classify_beta(f);
    PLMap map = make_map(
        f, map_letter == 'T' ? Orientation::Positive : Orientation::Negative);
    OrbitTable orb = orbit_of_one(map, depth);

    Json j;
    j["command"] = "orbit";
    j["beta"] = beta_block(f, beta_spec, digits);
    j["regime"] = to_string(cls);
    j["map"] = std::string(1, map_letter);
    j["depth"] = depth;

    Json pts = Json::array();
    for (std::size_t k = 0; k < orb.points.size(); ++k) {
        Json p;
        p["k"] = k;
        p["exact"] = orb.points[k].exact_string();
        p["decimal"] = decimal_string(orb.points[k], digits);
        pts.push_back(p);
    }
    j["points"] = pts;

    j["cycle"] = nullptr;
    for (std::size_t k = 1; k < orb.points.size() && j["cycle"].is_null(); ++k)
        for (std::size_t i = 0; i < k; ++i)
            if (orb.points[k] == orb.points[i]) {
                j["cycle"] = Json{{"enters_at", i}, {"period", k - i}, {"closes_at", k}};
                break;
            }

    j["versions"] = versions_block();
    return j;
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

namespace {

std::string text_indent(const std::string& s) { return "  " + s; }

std::string certify_headline(const Json& j) {
    const std::string verdict = j["verdict"];
    if (verdict == "isomorphic_multinacci") {
        const int n = j["n"];
        return "ISOMORPHIC (n=" + std::to_string(n) + "): identical " + std::to_string(n) + "x" +
               std::to_string(n) + " Markov matrices";
    }
    if (verdict == "not_isomorphic") {
        // Lead with the first predicted witness (always among the findings).
        long k = -1;
        if (!j["predicted_witnesses"].empty())
            k = j["predicted_witnesses"][0].get<long>();
        else if (!j["witnesses"].empty())
            k = j["witnesses"][0]["k"].get<long>();
        std::string lp = "?", lm = "?";
        for (const auto& w : j["witnesses"])
            if (w["k"].get<long>() == k) {
                lp = w["lambda_plus"];
                lm = w["lambda_minus"];
            }
        return "NOT ISOMORPHIC: n=" + std::to_string(j["iterate"].get<int>()) +
               ", witness k=" + std::to_string(k) + ", lambda(I+)=" + lp + ", lambda(I-)=" + lm;
    }
    return "INCONCLUSIVE: no distinguishing preimage count at iterate " +
           std::to_string(j["iterate"].get<int>());
}

std::string matrix_text(const Json& rows) {
    std::string out;
    for (const auto& row : rows) {
        std::string line = "    ";
        for (const auto& e : row) line += std::to_string(e.get<int>()) + " ";
        out += line.substr(0, line.size() - 1) + "\n";
    }
    return out;
}

std::string certify_text(const Json& j) {
    std::string out = certify_headline(j) + "\n";
    out += text_indent("beta    : " + j["beta"]["spec"].get<std::string>() + " = " +
                       j["beta"]["decimal"].get<std::string>() + "  (minpoly " +
                       j["beta"]["minpoly"].get<std::string>() + ")\n");
    out += text_indent("regime  : " + j["regime"].get<std::string>() + "\n");
    out += text_indent("iterate : " + std::to_string(j["iterate"].get<int>()) + "\n");
    out += text_indent(std::string("case    : ") +
                       (j["case"].is_null() ? "-" : j["case"].get<std::string>()) + "\n");
    out += text_indent(std::string("boundary Markov: ") +
                       (j["boundary_markov"].get<bool>() ? "yes" : "no") + "\n");
    if (!j["witnesses"].empty()) {
        out += text_indent("witnesses:\n");
        for (const auto& w : j["witnesses"])
            out += "    k=" + std::to_string(w["k"].get<long>()) +
                   "  lambda(I+)=" + w["lambda_plus"].get<std::string>() +
                   "  lambda(I-)=" + w["lambda_minus"].get<std::string>() + "\n";
    }
    if (!j["matrix_certificate"].is_null()) {
        const Json& mc = j["matrix_certificate"];
        out += text_indent("matrix:\n") + matrix_text(mc["matrix"]);
        out += text_indent("entropy ~ " + mc["entropy"]["decimal"].get<std::string>() +
                           "  (enclosure width <= " + mc["entropy"]["width_bound"].get<std::string>() +
                           (mc["entropy"]["contains_log_beta"].get<bool>()
                                ? ", contains log beta)"
                                : ", DOES NOT contain log beta)") +
                           "\n");
    }
    return out;
}

std::string verify_text(const Json& j) {
    std::string out = "VERIFY " + j["beta"]["spec"].get<std::string>() + " (" +
                      j["regime"].get<std::string>() + "): " +
                      (j["all_ok"].get<bool>() ? "PASS" : "FAIL") + "\n";
    for (const auto& c : j["checks"])
        out += std::string(c["ok"].get<bool>() ? "  ok   " : "  FAIL ") +
               c["name"].get<std::string>() + "\n";
    return out;
}

std::string spectrum_text(const Json& j) {
    std::string out = "SPECTRUM level " + std::to_string(j["level"].get<int>()) + " at " +
                      j["beta"]["spec"].get<std::string>() + " (" +
                      j["regime"].get<std::string>() + ")\n";
    for (const auto& t : j["tables"]) {
        out += "  " + t["map"].get<std::string>() + "^" +
               std::to_string(t["level"].get<int>()) + ": mass " +
               t["mass"].get<std::string>() + " = beta^" +
               std::to_string(t["level"].get<int>()) + ", max count " +
               std::to_string(t["max_count"].get<long>()) + "\n";
        for (const auto& c : t["cells"])
            out += "    [" + c["lo_decimal"].get<std::string>() + ", " +
                   c["hi_decimal"].get<std::string>() + ")  count " +
                   std::to_string(c["count"].get<long>()) + "   exact [" +
                   c["lo"].get<std::string>() + ", " + c["hi"].get<std::string>() + ")\n";
    }
    if (!j["witnesses"].is_null()) {
        if (j["witnesses"].empty()) {
            out += "  witnesses: none (level sets agree exactly)\n";
        } else {
            out += "  witnesses:\n";
            for (const auto& w : j["witnesses"])
                out += "    k=" + std::to_string(w["k"].get<long>()) +
                       "  lambda(I+)=" + w["lambda_plus"].get<std::string>() +
                       "  lambda(I-)=" + w["lambda_minus"].get<std::string>() + "\n";
        }
    }
    return out;
}

std::string markov_text(const Json& j) {
    std::string out = "MARKOV map " + j["map"].get<std::string>() + " at " +
                      j["beta"]["spec"].get<std::string>() + " (" +
                      j["regime"].get<std::string>() + ")\n";
    if (!j["found"].get<bool>()) {
        out += "  no Markov partition found within depth " +
               std::to_string(j["max_depth"].get<int>()) + "\n";
        return out;
    }
    out += "  partition: " + std::to_string(j["piece_count"].get<int>()) + " pieces\n";
    out += "  cuts:";
    for (const auto& c : j["cut_points_decimal"]) out += " " + c.get<std::string>();
    out += "\n  matrix:\n" + matrix_text(j["matrix"]);
    if (j.contains("labeling") && !j["labeling"].is_null()) {
        out += "  chain labeling (piece order):";
        for (const auto& i : j["labeling"]) out += " " + std::to_string(i.get<int>());
        out += j["matches_companion"].get<bool>() ? "  -> companion form\n"
                                                  : "  (not the companion form)\n";
    } else if (j.contains("labeling_note")) {
        out += "  chain labeling: none (" + j["labeling_note"].get<std::string>() + ")\n";
    }
    const Json& r1 = j["r1"];
    out += std::string("  r1: ") + (r1["all_ok"].get<bool>() ? "pass" : "FAIL") +
           " (irreducible=" + (r1["irreducible"].get<bool>() ? "yes" : "no") +
           ", contiguous rows=" + (r1["rows_contiguous"].get<bool>() ? "yes" : "no") +
           ", minpoly|charpoly=" + (r1["minpoly_divides_charpoly"].get<bool>() ? "yes" : "no") +
           ", positive eigenvectors=" +
           ((r1["right_eigenvector_positive"].get<bool>() &&
             r1["left_eigenvector_positive"].get<bool>())
                ? "yes"
                : "no") +
           ")\n";
    out += "  charpoly: " + r1["charpoly"].get<std::string>() + "\n";
    if (!j["parry"].is_null()) {
        out += "  stationary weights:";
        for (const auto& q : j["parry"]["q_decimal"]) out += " " + q.get<std::string>();
        out += "\n  entropy ~ " + j["entropy"]["decimal"].get<std::string>() +
               (j["entropy"]["contains_log_beta"].get<bool>() ? "  (contains log beta)\n"
                                                              : "  (MISSES log beta)\n");
        out += std::string("  coding depth ") +
               std::to_string(j["coding"]["depth"].get<int>()) + ": " +
               (j["coding"]["all_ok"].get<bool>() ? "consistent" : "INCONSISTENT") + "\n";
    }
    return out;
}

std::string orbit_text(const Json& j) {
    std::string out = "ORBIT map " + j["map"].get<std::string>() + " at " +
                      j["beta"]["spec"].get<std::string>() + " (" +
                      j["regime"].get<std::string>() + ")\n";
    for (const auto& p : j["points"])
        out += "  k=" + std::to_string(p["k"].get<int>()) + "  " +
               p["decimal"].get<std::string>() + "  = " + p["exact"].get<std::string>() + "\n";
    if (!j["cycle"].is_null())
        out += "  cycle: enters at k=" + std::to_string(j["cycle"]["enters_at"].get<int>()) +
               ", period " + std::to_string(j["cycle"]["period"].get<int>()) + "\n";
    else
        out += "  cycle: none within depth\n";
    return out;
}

std::string error_text(const Json& j) {
    std::string spec = j.contains("beta") && j["beta"].contains("spec")
                           ? j["beta"]["spec"].get<std::string>()
                           : "?";
    return "ERROR " + spec + ": " + j["error"].get<std::string>() + "\n";
}

std::string csv_header_for(const std::string& command) {
    if (command == "certify")
        return "beta_spec,regime,n,iterate,verdict,case,boundary_markov,witness_k,lambda_plus,"
               "lambda_minus,note";
    if (command == "verify") return "beta_spec,regime,check,ok";
    if (command == "spectrum") return "beta_spec,map,level,cell,lo,hi,count";
    if (command == "markov") return "beta_spec,map,key,value";
    if (command == "orbit") return "beta_spec,map,k,exact,decimal";
    throw Error("unknown report command '" + command + "'");
}

std::vector<std::string> csv_rows_for(const Json& j) {
    const std::string command = j["command"];
    std::vector<std::string> rows;
    const std::string spec = j.contains("beta") && j["beta"].contains("spec")
                                 ? j["beta"]["spec"].get<std::string>()
                                 : "?";
    if (j.contains("error")) {
        if (command == "certify")
            rows.push_back(csv_row({spec, "", "", "", "error", "", "", "", "", "",
                                    j["error"].get<std::string>()}));
        else
            rows.push_back(csv_row({spec, "error", j["error"].get<std::string>()}));
        return rows;
    }
    if (command == "certify") {
        const std::string regime = j["regime"];
        const std::string nstr = std::to_string(j["n"].get<int>());
        const std::string it = std::to_string(j["iterate"].get<int>());
        const std::string verdict = j["verdict"];
        const std::string cas = j["case"].is_null() ? "" : j["case"].get<std::string>();
        const std::string bm = j["boundary_markov"].get<bool>() ? "true" : "false";
        if (j["witnesses"].empty()) {
            rows.push_back(csv_row({spec, regime, nstr, it, verdict, cas, bm, "", "", "", ""}));
        } else {
            for (const auto& w : j["witnesses"])
                rows.push_back(csv_row({spec, regime, nstr, it, verdict, cas, bm,
                                        std::to_string(w["k"].get<long>()),
                                        w["lambda_plus"].get<std::string>(),
                                        w["lambda_minus"].get<std::string>(), ""}));
        }
        return rows;
    }
    if (command == "verify") {
        for (const auto& c : j["checks"])
            rows.push_back(csv_row({spec, j["regime"].get<std::string>(),
                                    c["name"].get<std::string>(),
                                    c["ok"].get<bool>() ? "true" : "false"}));
        return rows;
    }
    if (command == "spectrum") {
        for (const auto& t : j["tables"]) {
            int cell = 0;
            for (const auto& c : t["cells"])
                rows.push_back(csv_row({spec, t["map"].get<std::string>(),
                                        std::to_string(t["level"].get<int>()),
                                        std::to_string(cell++), c["lo"].get<std::string>(),
                                        c["hi"].get<std::string>(),
                                        std::to_string(c["count"].get<long>())}));
        }
        return rows;
    }
    if (command == "markov") {
        const std::string m = j["map"];
        auto kv = [&](const std::string& k, const std::string& v) {
            rows.push_back(csv_row({spec, m, k, v}));
        };
        kv("found", j["found"].get<bool>() ? "true" : "false");
        if (j["found"].get<bool>()) {
            kv("piece_count", std::to_string(j["piece_count"].get<int>()));
            int i = 0;
            for (const auto& c : j["cut_points"]) kv("cut_" + std::to_string(i++), c);
            const auto& mat = j["matrix"];
            for (std::size_t a = 0; a < mat.size(); ++a)
                for (std::size_t b = 0; b < mat[a].size(); ++b)
                    kv("m_" + std::to_string(a) + "_" + std::to_string(b),
                       std::to_string(mat[a][b].get<int>()));
            kv("r1_all_ok", j["r1"]["all_ok"].get<bool>() ? "true" : "false");
            kv("charpoly", j["r1"]["charpoly"].get<std::string>());
            if (!j["parry"].is_null()) {
                int qi = 0;
                for (const auto& q : j["parry"]["q"]) kv("q_" + std::to_string(qi++), q);
                kv("entropy_lo", j["entropy"]["lo"].get<std::string>());
                kv("entropy_hi", j["entropy"]["hi"].get<std::string>());
            }
        }
        return rows;
    }
    if (command == "orbit") {
        for (const auto& p : j["points"])
            rows.push_back(csv_row({spec, j["map"].get<std::string>(),
                                    std::to_string(p["k"].get<int>()),
                                    p["exact"].get<std::string>(),
                                    p["decimal"].get<std::string>()}));
        return rows;
    }
    throw Error("unknown report command '" + command + "'");
}

std::string text_for(const Json& j) {
    if (j.contains("error")) return error_text(j);
    const std::string command = j["command"];
    if (command == "certify") return certify_text(j);
    if (command == "verify") return verify_text(j);
    if (command == "spectrum") return spectrum_text(j);
    if (command == "markov") return markov_text(j);
    if (command == "orbit") return orbit_text(j);
    throw Error("unknown report command '" + command + "'");
}

}  // namespace

std::string render(const Json& report, ReportFormat fmt) {
    switch (fmt) {
        case ReportFormat::Json:
            return report.dump(2) + "\n";
        case ReportFormat::Csv: {
            std::string out = csv_header_for(report["command"].get<std::string>()) + "\n";
            for (const std::string& r : csv_rows_for(report)) out += r + "\n";
            return out;
        }
        case ReportFormat::Text:
            return text_for(report);
    }
    throw Error("unknown report format");
}

std::string render_many(const std::vector<Json>& reports, ReportFormat fmt) {
    if (reports.empty()) throw InputError("no reports to render");
    switch (fmt) {
        case ReportFormat::Json: {
            Json arr = Json::array();
            for (const Json& j : reports) arr.push_back(j);
            return arr.dump(2) + "\n";
        }
        case ReportFormat::Csv: {
            std::string out =
                csv_header_for(reports.front()["command"].get<std::string>()) + "\n";
            for (const Json& j : reports)
                for (const std::string& r : csv_rows_for(j)) out += r + "\n";
            return out;
        }
        case ReportFormat::Text: {
            std::string out;
            for (const Json& j : reports) {
                if (!out.empty()) out += "\n";
                out += text_for(j);
            }
            return out;
        }
    }
    throw Error("unknown report format");
}

}  // namespace betamorph
