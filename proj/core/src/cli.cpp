#include "flab/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <ostream>
#include <regex>
#include <set>
#include <sstream>

#include "flab/foliation.hpp"
#include "flab/geometry.hpp"
#include "flab/holonomy.hpp"
#include "flab/perturb.hpp"
#include "flab/sampling.hpp"
#include "flab/transversality.hpp"

namespace flab::cli {

namespace {

// Reads typed parameters from a JSON object and rejects unknown keys.
class Params {
public:
    Params(const json& j, std::string where, std::set<std::string> reserved = {})
        : j_(j), where_(std::move(where)), used_(std::move(reserved)) {
        if (!j_.is_object()) throw SpecError(where_ + ": expected an object");
    }

    const std::string& where() const { return where_; }
    bool has(const std::string& k) const { return j_.contains(k); }

    const json& at(const std::string& k) {
        used_.insert(k);
        if (!j_.contains(k)) throw SpecError(where_ + ": missing '" + k + "'");
        return j_.at(k);
    }
    const json* find(const std::string& k) {
        used_.insert(k);
        return j_.contains(k) ? &j_.at(k) : nullptr;
    }
    double num(const std::string& k, std::optional<double> def = std::nullopt) {
        const json* v = find(k);
        if (!v) {
            if (!def) throw SpecError(where_ + ": missing '" + k + "'");
            return *def;
        }
        if (!v->is_number()) throw SpecError(where_ + ": '" + k + "' must be a number");
        return v->get<double>();
    }
    std::uint64_t count(const std::string& k, std::optional<std::uint64_t> def = std::nullopt) {
        const json* v = find(k);
        if (!v) {
            if (!def) throw SpecError(where_ + ": missing '" + k + "'");
            return *def;
        }
        if (!v->is_number_unsigned()) throw SpecError(where_ + ": '" + k + "' must be a nonnegative integer");
        return v->get<std::uint64_t>();
    }
    std::string str(const std::string& k, std::optional<std::string> def = std::nullopt) {
        const json* v = find(k);
        if (!v) {
            if (!def) throw SpecError(where_ + ": missing '" + k + "'");
            return *def;
        }
        if (!v->is_string()) throw SpecError(where_ + ": '" + k + "' must be a string");
        return v->get<std::string>();
    }
    bool flag(const std::string& k, bool def) {
        const json* v = find(k);
        if (!v) return def;
        if (!v->is_boolean()) throw SpecError(where_ + ": '" + k + "' must be a boolean");
        return v->get<bool>();
    }
    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!used_.count(it.key())) throw SpecError(where_ + ": unknown parameter '" + it.key() + "'");
    }

private:
    const json& j_;
    std::string where_;
    std::set<std::string> used_;
};

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

struct PolyMap {
    std::size_t n = 0;
    std::vector<Poly> components;
};

struct Objects {
    std::map<std::string, std::shared_ptr<const FoliationSpec>> foliations;
    std::map<std::string, std::shared_ptr<const Representation>> representations;
    std::map<std::string, std::shared_ptr<const LocalData>> local;
    std::map<std::string, std::shared_ptr<const PolyMap>> maps;
};

std::size_t dimension(Params& p) {
    auto n = p.count("n");
    if (n < 1 || n > 8) throw SpecError(p.where() + ": 'n' must be between 1 and 8");
    return static_cast<std::size_t>(n);
}

std::vector<Poly> poly_list(Params& p, const std::string& key, std::size_t n, bool conj) {
    const json& arr = p.at(key);
    if (!arr.is_array() || arr.empty()) throw SpecError(p.where() + ": '" + key + "' must be a nonempty array");
    std::vector<Poly> out;
    for (const auto& e : arr) out.push_back(poly_from_json(e, n, conj));
    return out;
}

std::vector<cplx> point_from_json(const json& j, std::size_t n, const std::string& where) {
    if (!j.is_array() || j.size() != n) throw SpecError(where + ": point needs " + std::to_string(n) + " coordinates");
    std::vector<cplx> z;
    for (const auto& e : j) z.push_back(complex_from_json(e).to_complex());
    return z;
}

template <class F>
auto wrap(const std::string& where, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const SpecError&) {
        throw;
    } catch (const std::exception& e) {
        throw SpecError(where + ": " + e.what());
    }
}

void load_object(const std::string& name, const json& def, Objects& objs) {
    const std::string where = "objects." + name;
    Params p(def, where);
    const std::string kind = p.str("kind");
    if (kind == "pencil") {
        auto n = dimension(p);
        mpq_class a = rational_from_json(p.at("a")), b = rational_from_json(p.at("b"));
        Poly f1 = poly_from_json(p.at("f1"), n, false), f2 = poly_from_json(p.at("f2"), n, false);
        p.finish();
        objs.foliations[name] =
            std::make_shared<const FoliationSpec>(wrap(where, [&] { return make_pencil(a, b, f1, f2); }));
    } else if (kind == "logarithmic") {
        auto n = dimension(p);
        std::vector<RationalComplex> lambda;
        const json& lj = p.at("lambdas");
        if (!lj.is_array()) throw SpecError(where + ": 'lambdas' must be an array");
        for (const auto& e : lj) lambda.push_back(complex_from_json(e));
        auto fs = poly_list(p, "fs", n, false);
        p.finish();
        objs.foliations[name] =
            std::make_shared<const FoliationSpec>(wrap(where, [&] { return make_logarithmic(lambda, fs); }));
    } else if (kind == "raw") {
        auto n = dimension(p);
        PolyForm alpha = wrap(where, [&] { return form_from_json(p.at("form"), n); });
        p.finish();
        objs.foliations[name] = std::make_shared<const FoliationSpec>(wrap(where, [&] { return make_raw(alpha); }));
    } else if (kind == "factored") {
        auto n = dimension(p);
        Poly h = poly_from_json(p.at("h"), n, false), f = poly_from_json(p.at("f"), n, false);
        p.finish();
        objs.foliations[name] =
            std::make_shared<const FoliationSpec>(wrap(where, [&] { return make_factored(h, f, n); }));
    } else if (kind == "representation") {
        const json& gens = p.at("generators");
        if (!gens.is_array() || gens.empty()) throw SpecError(where + ": 'generators' must be a nonempty array");
        std::vector<std::string> names;
        for (const auto& g : gens) {
            if (!g.is_string()) throw SpecError(where + ": generator names must be strings");
            names.push_back(g.get<std::string>());
        }
        const json& imgs = p.at("images");
        if (!imgs.is_object()) throw SpecError(where + ": 'images' must be an object");
        std::map<std::string, Mat2> images;
        for (auto it = imgs.begin(); it != imgs.end(); ++it) {
            const json& m = it.value();
            if (!m.is_array() || m.size() != 2 || !m[0].is_array() || m[0].size() != 2 || !m[1].is_array() ||
                m[1].size() != 2)
                throw SpecError(where + ": image of '" + it.key() + "' must be a 2x2 array");
            Mat2 M;
            for (int r = 0; r < 2; ++r)
                for (int c = 0; c < 2; ++c) M(r, c) = complex_from_json(m[r][c]).to_complex();
            images[it.key()] = M;
        }
        std::vector<Word> relations;
        if (const json* rel = p.find("relations")) {
            if (!rel->is_array()) throw SpecError(where + ": 'relations' must be an array");
            for (const auto& r : *rel) relations.push_back(wrap(where, [&] { return parse_word(r.get<std::string>()); }));
        }
        p.finish();
        objs.representations[name] = std::make_shared<const Representation>(
            wrap(where, [&] { return Representation(names, images, relations); }));
    } else if (kind == "local_data") {
        auto n = dimension(p);
        auto center = point_from_json(p.at("center"), n, where);
        double c = p.num("c");
        Poly f = poly_from_json(p.at("f"), n, true);
        const json* nz = p.find("noise");
        Poly noise = nz ? poly_from_json(*nz, n, true) : Poly(2 * n);
        double kappa = p.num("kappa", 0.0);
        const json* hj = p.find("h");
        Poly h = hj ? poly_from_json(*hj, n, true) : Poly::constant(2 * n, RationalComplex(1));
        double h_min = p.num("h_min", 1.0), h_max = p.num("h_max", 1.0);
        p.finish();
        auto L = wrap(where, [&] {
            auto L = LocalData::from_polys(center, c, f, noise, kappa, h, h_min, h_max);
            L.validate();
            return L;
        });
        objs.local[name] = std::make_shared<const LocalData>(std::move(L));
    } else if (kind == "poly_map") {
        auto n = dimension(p);
        auto comps = poly_list(p, "components", n, false);
        p.finish();
        objs.maps[name] = std::make_shared<const PolyMap>(PolyMap{n, std::move(comps)});
    } else {
        throw SpecError(where + ": unknown object kind '" + kind + "'");
    }
}

Region region_from(Params& p, std::size_t n) {
    const json* r = p.find("region");
    if (!r) return Region::ball(std::vector<cplx>(n, 0.0), 1.0);
    Params q(*r, p.where() + ".region");
    const std::string kind = q.str("kind");
    auto center = [&] {
        const json* c = q.find("center");
        return c ? point_from_json(*c, n, q.where()) : std::vector<cplx>(n, 0.0);
    };
    auto interval = [&](const std::string& k) {
        const json& iv = q.at(k);
        if (!iv.is_array() || iv.size() != 2 || !iv[0].is_number() || !iv[1].is_number())
            throw SpecError(q.where() + ": '" + k + "' must be [lo, hi]");
        return std::pair<double, double>{iv[0].get<double>(), iv[1].get<double>()};
    };
    Region out = [&] {
        if (kind == "ball") {
            auto c = center();
            double radius = q.num("radius");
            return wrap(q.where(), [&] { return Region::ball(c, radius); });
        }
        if (kind == "annulus") {
            auto c = center();
            double ri = q.num("r_inner"), ro = q.num("r_outer");
            return wrap(q.where(), [&] { return Region::annulus(c, ri, ro); });
        }
        if (kind == "box") {
            auto re = interval("re"), im = interval("im");
            ComplexBox b;
            b.coords.assign(n, {re.first, re.second, im.first, im.second});
            return wrap(q.where(), [&] { return Region::box(b); });
        }
        throw SpecError(q.where() + ": unknown region kind '" + kind + "'");
    }();
    q.finish();
    return out;
}

SymplecticFrame frame_from(Params& p, std::size_t n) {
    const json* f = p.find("frame");
    if (!f) return SymplecticFrame::standard(n);
    Params q(*f, p.where() + ".frame");
    const std::string kind = q.str("kind");
    if (kind == "standard") {
        q.finish();
        return SymplecticFrame::standard(n);
    }
    if (kind == "perturbed") {
        double scale = q.num("scale");
        auto seed = q.count("seed", 0);
        q.finish();
        return wrap(q.where(), [&] { return SymplecticFrame::perturbed(n, scale, seed); });
    }
    throw SpecError(q.where() + ": unknown frame kind '" + kind + "'");
}

std::optional<std::string> csv_from(Params& p) {
    const json* c = p.find("csv");
    if (!c) return std::nullopt;
    if (!c->is_string()) throw SpecError(p.where() + ": 'csv' must be a file name");
    static const std::regex ok("[A-Za-z0-9_.-]+\\.csv");
    auto name = c->get<std::string>();
    if (!std::regex_match(name, ok)) throw SpecError(p.where() + ": csv name must be a plain file name ending in .csv");
    return name;
}

std::ofstream open_output(TaskContext& ctx, const std::string& name) {
    std::ofstream os(ctx.out_dir / name, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + (ctx.out_dir / name).string());
    ctx.written_files.push_back(name);
    return os;
}

json covector_json(const Covector& c) { return {{"dz", vector_to_json(c.a)}, {"dzbar", vector_to_json(c.b)}}; }

json point_report_json(const PointReport& r) {
    return {{"point", vector_to_json(r.point)},
            {"class", to_string(r.cls)},
            {"dalpha_rank", r.dalpha_rank},
            {"radical_dim", r.radical_dim},
            {"residual", number(r.residual)},
            {"alpha", covector_json(r.alpha_at)}};
}

json matrix_json(const ComplexMatrix& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
        rows.push_back(row);
    }
    return rows;
}

template <class T>
std::shared_ptr<const T> lookup(const std::map<std::string, std::shared_ptr<const T>>& m, const std::string& name,
                                const std::string& kind, const std::string& expected, const std::string& where) {
    auto it = m.find(name);
    if (it == m.end())
        throw SpecError(where + ": task '" + kind + "' needs a " + expected + " object, '" + name + "' is not one");
    return it->second;
}

PlannedTask plan_task(const json& tj, std::size_t index, const Objects& objs, const std::set<std::string>& names) {
    const std::string where = "tasks[" + std::to_string(index) + "]";
    Params p(tj, where, {"kind", "object"});
    if (!tj.contains("kind") || !tj["kind"].is_string()) throw SpecError(where + ": task needs a string 'kind'");
    PlannedTask t;
    t.kind = tj["kind"].get<std::string>();
    static const std::set<std::string> kinds = {"check_integrability", "classify",       "find_singular", "regularity",
                                                "bad_set",             "perturb",        "key_inequality", "w_search",
                                                "holonomy",            "pu2_test"};
    if (!kinds.count(t.kind)) throw SpecError(where + ": unknown task kind '" + t.kind + "'");
    if (!tj.contains("object") || !tj["object"].is_string()) throw SpecError(where + ": task needs a string 'object'");
    t.object = tj["object"].get<std::string>();
    if (!names.count(t.object)) throw SpecError(where + ": unresolved object reference '" + t.object + "'");
    t.parameters = json::object();
    for (auto it = tj.begin(); it != tj.end(); ++it)
        if (it.key() != "kind" && it.key() != "object") t.parameters[it.key()] = it.value();
    if (const json* s = p.find("seed")) {
        if (!s->is_number_unsigned()) throw SpecError(where + ": 'seed' must be a nonnegative integer");
        t.has_seed_override = true;
        t.seed_override = s->get<std::uint64_t>();
    }

    const std::string& k = t.kind;
    if (k == "check_integrability" || k == "classify" || k == "find_singular" || k == "regularity" || k == "bad_set") {
        auto F = lookup(objs.foliations, t.object, k, "foliation", where);
        const std::size_t n = F->n;
        if (k == "check_integrability") {
            t.run = [F](TaskContext&) {
                auto r = check_integrability(*F);
                json out = {{"integrable", r.integrable},
                            {"witness", form_to_json(r.witness)},
                            {"provenance", provenance_kind(F->provenance)},
                            {"twist", F->twist ? json(*F->twist) : json(nullptr)},
                            {"projectivizable", F->projectivizable ? json(*F->projectivizable) : json(nullptr)},
                            {"warnings", F->warnings}};
                return out;
            };
        } else if (k == "classify") {
            const json& pt = p.at("point");
            double tol = p.num("tol", kDefaultClassifyTol);
            bool exact = p.flag("exact", false);
            if (!pt.is_array() || pt.size() != n) throw SpecError(where + ": point needs " + std::to_string(n) + " coordinates");
            std::vector<RationalComplex> qp;
            for (const auto& e : pt) qp.push_back(complex_from_json(e));
            t.run = [F, qp, tol, exact](TaskContext&) {
                PointReport r;
                if (exact) {
                    r = classify_point_exact(F->alpha, qp);
                } else {
                    std::vector<cplx> z;
                    for (const auto& q : qp) z.push_back(q.to_complex());
                    r = classify_point(*F, z, tol);
                }
                json out = point_report_json(r);
                out["exact"] = exact;
                out["tol"] = tol;
                return out;
            };
        } else if (k == "find_singular") {
            SingularSearchOptions opts;
            opts.grid = p.count("grid", 3);
            opts.tol = p.num("tol", 1e-9);
            opts.newton_iters = static_cast<int>(p.count("newton_iters", 50));
            std::pair<double, double> re{-1, 1}, im{-1, 1};
            if (const json* b = p.find("box")) {
                Params q(*b, where + ".box");
                auto iv = [&](const std::string& key, std::pair<double, double>& out) {
                    if (const json* v = q.find(key)) {
                        if (!v->is_array() || v->size() != 2) throw SpecError(q.where() + ": '" + key + "' must be [lo, hi]");
                        out = {(*v)[0].get<double>(), (*v)[1].get<double>()};
                    }
                };
                iv("re", re);
                iv("im", im);
                q.finish();
            }
            ComplexBox box;
            box.coords.assign(n, {re.first, re.second, im.first, im.second});
            t.run = [F, box, opts](TaskContext&) {
                json pts = json::array();
                for (const auto& r : find_singular_points(*F, box, opts)) pts.push_back(point_report_json(r));
                return json{{"points", pts}, {"grid", opts.grid}, {"tol", opts.tol}, {"newton_iters", opts.newton_iters}};
            };
        } else if (k == "regularity") {
            double gamma = p.num("gamma");
            auto region = region_from(p, n);
            auto frame = frame_from(p, n);
            auto samples = p.count("samples", 1000);
            std::vector<std::vector<cplx>> kupka;
            if (const json* kp = p.find("kupka_points")) {
                if (!kp->is_array()) throw SpecError(where + ": 'kupka_points' must be an array");
                for (const auto& e : *kp) kupka.push_back(point_from_json(e, n, where));
            }
            t.run = [F, gamma, region, frame, samples, kupka](TaskContext& ctx) {
                auto r = regularity_report(*F, frame, kupka, gamma, region, samples, ctx.seed);
                return json{{"gamma", number(r.gamma)},
                            {"epsilon", number(r.epsilon)},
                            {"kupka_margin", number(r.kupka_margin)},
                            {"leaf_angle_max", number(r.leaf_angle_max)},
                            {"tube_samples", r.tube_samples},
                            {"outer_samples", r.outer_samples},
                            {"bad_points", r.bad_points.size()},
                            {"samples", samples},
                            {"notes", r.notes}};
            };
        } else {
            auto region = region_from(p, n);
            auto frame = frame_from(p, n);
            auto samples = p.count("samples", 1000);
            auto listed = p.count("max_listed", 100);
            auto csv = csv_from(p);
            t.run = [F, region, frame, samples, listed, csv](TaskContext& ctx) {
                auto bad = bad_set_scan(*F, frame, region, samples, ctx.seed);
                json pts = json::array();
                for (std::size_t i = 0; i < bad.size() && i < listed; ++i)
                    pts.push_back({{"x", vector_to_json(bad[i].x)},
                                   {"norm10", number(bad[i].norm10)},
                                   {"norm01", number(bad[i].norm01)}});
                if (csv) {
                    auto os = open_output(ctx, *csv);
                    std::size_t dim = region.n();
                    for (std::size_t k2 = 0; k2 < 2 * dim; ++k2) os << "x" << k2 + 1 << ",";
                    os << "norm10,norm01\n";
                    for (const auto& b : bad) {
                        for (auto z : b.x) os << fmt17(z.real()) << ",";
                        for (auto z : b.x) os << fmt17(z.imag()) << ",";
                        os << fmt17(b.norm10) << "," << fmt17(b.norm01) << "\n";
                    }
                }
                return json{{"bad_count", bad.size()},
                            {"samples", samples},
                            {"bad_fraction", number(static_cast<double>(bad.size()) / static_cast<double>(samples))},
                            {"points", pts},
                            {"truncated", bad.size() > listed}};
            };
        }
    } else if (k == "perturb" || k == "key_inequality") {
        auto L = lookup(objs.local, t.object, k, "local_data", where);
        double eps = p.num("eps_prime", kDefaultEpsPrime);
        if (k == "perturb") {
            t.run = [L, eps](TaskContext&) {
                auto R = blend_perturbation(*L, eps);
                json sig = json::array();
                for (Eigen::Index i = 0; i < R.takagi.sigma.size(); ++i) sig.push_back(number(R.takagi.sigma(i)));
                return json{{"hessian", matrix_json(R.hessian.A)},
                            {"hessian_sigma_min", number(R.hessian_sigma_min)},
                            {"takagi_sigma", sig},
                            {"takagi_U", matrix_json(R.takagi.U)},
                            {"eps_prime", eps},
                            {"c", L->c},
                            {"kappa", L->kappa},
                            {"notes", R.notes}};
            };
        } else {
            auto frame = frame_from(p, L->n());
            auto samples = p.count("samples", 10000);
            t.run = [L, eps, frame, samples](TaskContext& ctx) {
                auto R = blend_perturbation(*L, eps);
                auto st = verify_key_inequality(R, frame, samples, ctx.seed);
                return json{{"inner_pass_fraction", number(st.inner_pass_fraction)},
                            {"annulus_pass_fraction", number(st.annulus_pass_fraction)},
                            {"inner_min_margin", number(st.inner_min_margin)},
                            {"annulus_min_margin", number(st.annulus_min_margin)},
                            {"min_margin", number(st.min_margin)},
                            {"min_relative_margin", number(st.min_relative_margin)},
                            {"samples_per_region", st.samples_per_region},
                            {"passed", st.passed()},
                            {"eps_prime", eps},
                            {"hessian_sigma_min", number(R.hessian_sigma_min)}};
            };
        }
    } else if (k == "w_search") {
        auto M = lookup(objs.maps, t.object, k, "poly_map", where);
        double delta = p.num("delta");
        WSearchOptions opts;
        opts.candidates = p.count("candidates", opts.candidates);
        opts.samples = p.count("samples", opts.samples);
        opts.refine_starts = p.count("refine_starts", opts.refine_starts);
        opts.refine_iters = static_cast<int>(p.count("refine_iters", static_cast<std::uint64_t>(opts.refine_iters)));
        auto csv = csv_from(p);
        if (M->components.size() != M->n) throw SpecError(where + ": w_search needs a map C^n -> C^n");
        t.run = [M, delta, opts, csv](TaskContext& ctx) {
            auto o = opts;
            o.seed = ctx.seed;
            const std::vector<cplx> origin(M->n, 0.0);
            auto t_map = SampledMap::polynomial(M->components, Region::ball(origin, 0.9));
            auto res = local_perturbation_search(t_map, delta, o);
            double wn = 0;
            for (auto z : res.w) wn += std::norm(z);
            if (csv) {
                auto os = open_output(ctx, *csv);
                write_sample_csv(os, sample_map(t_map.shifted(res.w), o.samples, o.seed));
            }
            return json{{"w", vector_to_json(res.w)},
                        {"w_norm", number(std::sqrt(wn))},
                        {"achieved", number(res.achieved)},
                        {"baseline", number(ShiftObjective(t_map, o.samples, o.seed)(origin))},
                        {"evaluations", res.evaluations},
                        {"budget_exhausted", res.budget_exhausted},
                        {"delta", delta},
                        {"candidates", o.candidates},
                        {"samples", o.samples}};
        };
    } else {
        auto rho = lookup(objs.representations, t.object, k, "representation", where);
        if (k == "holonomy") {
            Word w = wrap(where, [&] { return parse_word(p.str("word")); });
            const json& lj = p.at("lambda");
            std::optional<PencilParameter> lam;
            if (lj.is_string() && lj.get<std::string>() == "inf") {
                lam = PencilParameter::infinity();
            } else if (lj.is_object() && lj.contains("z1")) {
                Params q(lj, where + ".lambda");
                auto z1 = complex_from_json(q.at("z1")).to_complex(), z2 = complex_from_json(q.at("z2")).to_complex();
                q.finish();
                lam = wrap(where, [&] { return PencilParameter(z1, z2); });
            } else {
                lam = PencilParameter::affine(complex_from_json(lj).to_complex());
            }
            for (const auto& l : w)
                if (!rho->images().count(l.generator))
                    throw SpecError(where + ": unknown generator '" + l.generator + "'");
            PencilParameter l0 = *lam;
            t.run = [rho, w, l0](TaskContext&) {
                auto r = holonomy_eval(*rho, w, l0);
                auto aff = r.affine_value(1e-15);
                return json{{"word", word_to_string(w)},
                            {"lambda", {{"z1", complex_to_json(r.z1())}, {"z2", complex_to_json(r.z2())}}},
                            {"affine", aff ? complex_to_json(*aff) : json("inf")},
                            {"matrix", matrix_json(rho->image(w))}};
            };
        } else {
            const json& ws = p.at("words");
            if (!ws.is_array() || ws.empty()) throw SpecError(where + ": 'words' must be a nonempty array");
            std::vector<Word> words;
            for (const auto& e : ws) {
                if (!e.is_string()) throw SpecError(where + ": words must be strings");
                words.push_back(wrap(where, [&] { return parse_word(e.get<std::string>()); }));
                for (const auto& l : words.back())
                    if (!rho->images().count(l.generator))
                        throw SpecError(where + ": unknown generator '" + l.generator + "'");
            }
            t.run = [rho, words](TaskContext&) {
                auto r = pu2_triviality(*rho, words);
                return json{{"trivial_in_pu2", r.trivial_in_pu2},
                            {"witness", r.witness ? json(word_to_string(*r.witness)) : json(nullptr)},
                            {"words_checked", words.size()}};
            };
        }
    }
    p.finish();
    return t;
}

std::string timestamp() {
    std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    if (const char* sde = std::getenv("SOURCE_DATE_EPOCH")) {
        try {
            now = static_cast<std::time_t>(std::stoll(sde));
        } catch (const std::exception&) {
        }
    }
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

namespace {

LoadedSpec load_spec_document(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text, nullptr, true, true);
    } catch (const json::parse_error& e) {
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        std::string msg = e.what();
        auto colon = msg.find(": ", msg.find("parse error"));
        throw SpecError("parse error at line " + std::to_string(line) + ", column " + std::to_string(col) + ": " +
                        (colon == std::string::npos ? msg : msg.substr(colon + 2)));
    }
    Params top(doc, "spec");
    const json& v = top.at("version");
    if (!v.is_number_integer() || v.get<long long>() != kSpecVersion)
        throw SpecError("spec: unsupported version " + v.dump() + " (expected 1)");
    top.find("description");
    LoadedSpec spec;
    spec.digest = "sha256:" + sha256_hex(text);
    const json* objs = top.find("objects");
    const json* tasks = top.find("tasks");
    top.finish();
    spec.objects = objs ? *objs : json::object();
    if (!spec.objects.is_object()) throw SpecError("spec: 'objects' must be an object");
    if (tasks && !tasks->is_array()) throw SpecError("spec: 'tasks' must be an array");

    Objects store;
    std::set<std::string> names;
    for (auto it = spec.objects.begin(); it != spec.objects.end(); ++it) {
        load_object(it.key(), it.value(), store);
        names.insert(it.key());
    }
    for (const auto& [name, F] : store.foliations)
        for (const auto& w : F->warnings) spec.warnings.push_back(name + ": " + w);
    if (tasks)
        for (std::size_t i = 0; i < tasks->size(); ++i) spec.tasks.push_back(plan_task((*tasks)[i], i, store, names));
    return spec;
}

}  // namespace

LoadedSpec load_spec_text(const std::string& text) {
    try {
        return load_spec_document(text);
    } catch (const SpecError&) {
        throw;
    } catch (const std::exception& e) {
        throw SpecError(std::string("spec: ") + e.what());
    }
}

LoadedSpec load_spec_file(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw SpecError("cannot read spec file " + path.string());
    std::ostringstream ss;
    ss << is.rdbuf();
    return load_spec_text(ss.str());
}

RunResult run_spec(const LoadedSpec& spec, std::uint64_t seed, const std::filesystem::path& out_dir) {
    RunResult res;
    json results = json::array();
    for (std::size_t i = 0; i < spec.tasks.size(); ++i) {
        const auto& t = spec.tasks[i];
        TaskContext ctx;
        ctx.seed = t.has_seed_override ? t.seed_override : seed + i;
        ctx.out_dir = out_dir;
        json r = {{"index", i}, {"kind", t.kind}, {"object", t.object}, {"parameters", t.parameters}, {"seed", ctx.seed}};
        try {
            r["outputs"] = t.run(ctx);
            r["status"] = "ok";
        } catch (const std::exception& e) {
            r["status"] = "error";
            r["error"] = e.what();
            res.exit_code = 2;
        }
        r["files"] = ctx.written_files;
        results.push_back(std::move(r));
    }
    res.document = {{"metadata", {{"generated_at", timestamp()}}},
                    {"report",
                     {{"tool_version", kToolVersion},
                      {"spec_digest", spec.digest},
                      {"seed", seed},
                      {"objects", spec.objects},
                      {"results", results},
                      {"warnings", spec.warnings}}}};
    return res;
}

int command_run(const std::filesystem::path& spec_path, std::uint64_t seed, const std::filesystem::path& out_dir,
                const std::string& format, std::ostream& out, std::ostream& err) {
    if (format != "json" && format != "text") {
        err << "error: unknown format '" << format << "'\n";
        return 1;
    }
    LoadedSpec spec;
    try {
        spec = load_spec_file(spec_path);
    } catch (const SpecError& e) {
        err << "error: " << spec_path.string() << ": " << e.what() << "\n";
        return 1;
    }
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        err << "error: cannot create output directory " << out_dir.string() << ": " << ec.message() << "\n";
        return 1;
    }
    RunResult r = run_spec(spec, seed, out_dir);
    const std::string body = emit_json(r.document);
    {
        std::ofstream os(out_dir / "report.json", std::ios::binary);
        if (!os) {
            err << "error: cannot write " << (out_dir / "report.json").string() << "\n";
            return 1;
        }
        os << body;
    }
    out << (format == "json" ? body : emit_text(r.document));
    for (const auto& t : r.document["report"]["results"])
        if (t["status"] != "ok") err << "task " << t["index"] << " (" << t["kind"].get<std::string>() << ") failed: " << t["error"].get<std::string>() << "\n";
    return r.exit_code;
}

int command_validate(const std::filesystem::path& spec_path, std::ostream& out, std::ostream& err) {
    try {
        auto spec = load_spec_file(spec_path);
        out << spec_path.string() << ": ok (" << spec.objects.size() << " objects, " << spec.tasks.size() << " tasks)\n";
        return 0;
    } catch (const SpecError& e) {
        err << "error: " << spec_path.string() << ": " << e.what() << "\n";
        return 1;
    }
}

}  // namespace flab::cli
