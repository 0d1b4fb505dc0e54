#include <cmath>
#include <cstdio>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

#include "flab/cli.hpp"

namespace flab::cli {

namespace {

mpq_class decimal_to_rational(const std::string& text) {
    auto e = text.find_first_of("eE");
    if (e == std::string::npos) return RationalComplex::parse_rational(text);
    mpq_class mant = RationalComplex::parse_rational(text.substr(0, e));
    long ex = 0;
    try {
        std::size_t used = 0;
        ex = std::stol(text.substr(e + 1), &used);
        if (used != text.size() - e - 1) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
        throw std::invalid_argument("bad exponent in number '" + text + "'");
    }
    if (ex > 4000 || ex < -4000) throw std::invalid_argument("exponent out of range in '" + text + "'");
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(ex < 0 ? -ex : ex));
    mpq_class r = mant;
    if (ex < 0)
        r /= mpq_class(p);
    else
        r *= mpq_class(p);
    r.canonicalize();
    return r;
}

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    std::string s(buf);
    if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
    return s;
}

void write_json(std::ostringstream& os, const json& j, int indent) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
    switch (j.type()) {
        case json::value_t::object: {
            if (j.empty()) {
                os << "{}";
                return;
            }
            os << "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) os << ",\n";
                first = false;
                os << inner << json(it.key()).dump() << ": ";
                write_json(os, it.value(), indent + 1);
            }
            os << "\n" << pad << "}";
            return;
        }
        case json::value_t::array: {
            if (j.empty()) {
                os << "[]";
                return;
            }
            os << "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) os << ",\n";
                os << inner;
                write_json(os, j[i], indent + 1);
            }
            os << "\n" << pad << "]";
            return;
        }
        case json::value_t::number_float: {
            double x = j.get<double>();
            if (std::isfinite(x))
                os << format_double(x);
            else
                os << json(std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf")).dump();
            return;
        }
        default:
            os << j.dump();
    }
}

std::string short_num(const json& j) {
    if (j.is_number()) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6g", j.get<double>());
        return buf;
    }
    if (j.is_string()) return j.get<std::string>();
    return j.dump();
}

std::string short_complex(const json& z) {
    std::string re = short_num(z[0]), im = short_num(z[1]);
    if (!im.empty() && im[0] == '-') return re + " - " + im.substr(1) + "i";
    return re + " + " + im + "i";
}

std::string summarize(const json& r) {
    const std::string kind = r.value("kind", "?");
    std::string line = kind + ": ";
    if (r.value("status", "") != "ok") return line + "error: " + r.value("error", "unknown");
    const json& o = r.at("outputs");
    if (kind == "check_integrability") return line + (o.at("integrable").get<bool>() ? "integrable" : "not integrable");
    if (kind == "classify") {
        line += o.at("class").get<std::string>();
        if (o.at("class") != "Regular") line += " (rank " + std::to_string(o.at("dalpha_rank").get<int>()) + ")";
        return line;
    }
    if (kind == "find_singular") {
        std::map<std::string, int> counts;
        for (const auto& p : o.at("points")) ++counts[p.at("class").get<std::string>()];
        line += std::to_string(o.at("points").size()) + " points";
        std::string parts;
        for (const auto& [k, v] : counts) parts += (parts.empty() ? "" : ", ") + std::to_string(v) + " " + k;
        if (!parts.empty()) line += " (" + parts + ")";
        return line;
    }
    if (kind == "regularity")
        return line + "epsilon " + short_num(o.at("epsilon")) + ", leaf angle " + short_num(o.at("leaf_angle_max")) +
               ", kupka margin " + short_num(o.at("kupka_margin")) + ", " +
               std::to_string(o.at("bad_points").get<int>()) + " bad points";
    if (kind == "bad_set")
        return line + std::to_string(o.at("bad_count").get<int>()) + " of " + std::to_string(o.at("samples").get<int>()) +
               " samples bad";
    if (kind == "perturb") return line + "sigma_min(A) " + short_num(o.at("hessian_sigma_min"));
    if (kind == "key_inequality")
        return line + "inner " + short_num(o.at("inner_pass_fraction")) + ", annulus " +
               short_num(o.at("annulus_pass_fraction")) + ", min margin " + short_num(o.at("min_margin"));
    if (kind == "w_search")
        return line + "achieved " + short_num(o.at("achieved")) + " at |w| = " + short_num(o.at("w_norm"));
    if (kind == "holonomy") {
        const auto& l = o.at("lambda");
        return line + "[" + short_complex(l.at("z1")) + " : " + short_complex(l.at("z2")) + "]";
    }
    if (kind == "pu2_test") {
        if (o.at("trivial_in_pu2").get<bool>()) return line + "trivial in PU(2)";
        return line + "nontrivial in PU(2) (witness " + o.at("witness").get<std::string>() + ")";
    }
    return line + "ok";
}

}  // namespace

mpq_class rational_from_json(const json& j) {
    try {
        if (j.is_number_integer()) return mpq_class(j.dump());
        if (j.is_number_float()) return decimal_to_rational(j.dump());
        if (j.is_string()) {
            auto s = j.get<std::string>();
            if (s.find('/') != std::string::npos) return RationalComplex::parse_rational(s);
            return decimal_to_rational(s);
        }
    } catch (const std::invalid_argument& e) {
        throw SpecError(std::string("bad rational: ") + e.what());
    }
    throw SpecError("expected a rational number, got " + j.dump());
}

RationalComplex complex_from_json(const json& j) {
    if (j.is_array()) {
        if (j.size() != 2) throw SpecError("complex value must be [re, im]");
        return {rational_from_json(j[0]), rational_from_json(j[1])};
    }
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it)
            if (it.key() != "re" && it.key() != "im") throw SpecError("unknown key '" + it.key() + "' in complex value");
        return {j.contains("re") ? rational_from_json(j["re"]) : mpq_class(0),
                j.contains("im") ? rational_from_json(j["im"]) : mpq_class(0)};
    }
    return {rational_from_json(j), 0};
}

json number(double x) {
    if (std::isfinite(x)) return x;
    if (std::isnan(x)) return "nan";
    return x > 0 ? "inf" : "-inf";
}

json complex_to_json(cplx z) { return json::array({number(z.real()), number(z.imag())}); }

json vector_to_json(const std::vector<cplx>& v) {
    json a = json::array();
    for (auto z : v) a.push_back(complex_to_json(z));
    return a;
}

json poly_to_json(const Poly& p) {
    json a = json::array();
    for (const auto& [exps, c] : p.terms()) {
        json e = json::array();
        for (auto x : exps) e.push_back(static_cast<unsigned>(x));
        a.push_back({{"exponents", e}, {"re", rational_to_string(c.re())}, {"im", rational_to_string(c.im())}});
    }
    return a;
}

Poly poly_from_json(const json& j, std::size_t n, bool with_conjugates) {
    const std::size_t vars = with_conjugates ? 2 * n : n;
    if (j.is_string()) {
        try {
            Poly p = parse_poly(j.get<std::string>(), n, with_conjugates);
            return p;
        } catch (const std::exception& e) {
            throw SpecError("bad polynomial '" + j.get<std::string>() + "': " + e.what());
        }
    }
    if (j.is_number()) return Poly::constant(vars, RationalComplex(rational_from_json(j)));
    if (!j.is_array()) throw SpecError("polynomial must be a string or a term array");
    Poly p(vars);
    for (const auto& t : j) {
        if (!t.is_object() || !t.contains("exponents")) throw SpecError("polynomial term needs 'exponents'");
        const auto& e = t["exponents"];
        if (!e.is_array() || (e.size() != n && e.size() != 2 * n)) throw SpecError("term exponent vector has wrong length");
        if (e.size() == 2 * n && !with_conjugates) throw SpecError("conjugate variables are not allowed here");
        Poly::Exponents ex(vars, 0);
        for (std::size_t k = 0; k < e.size(); ++k) {
            if (!e[k].is_number_integer() || e[k].get<long long>() < 0 || e[k].get<long long>() > 255) throw SpecError("bad exponent in term");
            ex[k] = static_cast<std::uint8_t>(e[k].get<unsigned>());
        }
        RationalComplex c(t.contains("re") ? rational_from_json(t["re"]) : mpq_class(0),
                          t.contains("im") ? rational_from_json(t["im"]) : mpq_class(0));
        try {
            p.add_term(ex, c);
        } catch (const std::exception& err) {
            throw SpecError(std::string("bad polynomial term: ") + err.what());
        }
    }
    return p;
}

json form_to_json(const PolyForm& u) {
    json terms = json::array();
    for (const auto& [basis, coeff] : u.terms()) {
        json b = json::array();
        for (auto s : basis) b.push_back(u.symbol_name(s));
        terms.push_back({{"basis", b}, {"coeff", poly_to_json(coeff)}});
    }
    return {{"n", u.n()}, {"degree", u.degree()}, {"terms", terms}};
}

PolyForm form_from_json(const json& j, std::size_t n) {
    if (!j.is_object()) throw SpecError("form must be an object");
    auto symbol = [n](const std::string& s) -> std::uint8_t {
        auto index = [&](std::size_t prefix) {
            try {
                std::size_t used = 0;
                long k = std::stol(s.substr(prefix), &used);
                if (used != s.size() - prefix || k < 1 || static_cast<std::size_t>(k) > n) throw std::out_of_range("");
                return static_cast<std::size_t>(k - 1);
            } catch (const std::exception&) {
                throw SpecError("bad basis symbol '" + s + "'");
            }
        };
        if (s.rfind("dzbar", 0) == 0) return static_cast<std::uint8_t>(n + index(5));
        if (s.rfind("dz", 0) == 0) return static_cast<std::uint8_t>(index(2));
        throw SpecError("bad basis symbol '" + s + "'");
    };
    if (j.contains("dz") || j.contains("dzbar")) {
        std::vector<Poly> a(n, Poly(2 * n)), b(n, Poly(2 * n));
        auto fill = [&](const char* key, std::vector<Poly>& out) {
            if (!j.contains(key)) return;
            const auto& arr = j[key];
            if (!arr.is_array() || arr.size() != n) throw SpecError(std::string("'") + key + "' needs n coefficients");
            for (std::size_t k = 0; k < n; ++k) out[k] = poly_from_json(arr[k], n, true);
        };
        fill("dz", a);
        fill("dzbar", b);
        return PolyForm::one_form(n, a, b);
    }
    if (!j.contains("degree") || !j.contains("terms")) throw SpecError("form needs 'degree' and 'terms'");
    if (j.contains("n") && j["n"] != n) throw SpecError("form dimension disagrees with object");
    const auto degree = j["degree"].get<std::size_t>();
    if (degree > 2 * n) throw SpecError("form degree exceeds 2n");
    PolyForm u(n, degree);
    for (const auto& t : j["terms"]) {
        std::vector<std::uint8_t> syms;
        for (const auto& s : t.at("basis")) syms.push_back(symbol(s.get<std::string>()));
        if (syms.size() != degree) throw SpecError("term basis length differs from form degree");
        u.add_term(syms, poly_from_json(t.at("coeff"), n, true));
    }
    return u;
}

std::string emit_json(const json& j) {
    std::ostringstream os;
    write_json(os, j, 0);
    os << "\n";
    return os.str();
}

std::string emit_text(const json& document) {
    const json& report = document.contains("report") ? document["report"] : document;
    std::ostringstream os;
    for (const auto& r : report.at("results")) os << summarize(r) << "\n";
    for (const auto& w : report.at("warnings")) os << "warning: " << w.get<std::string>() << "\n";
    return os.str();
}

std::string sha256_hex(const std::string& bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("SHA-256 failed");
    std::ostringstream os;
    for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    return os.str();
}

}  // namespace flab::cli
