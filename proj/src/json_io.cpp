#include "shearkit/json_io.hpp"

#include <memory>

namespace shearkit::io {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw Error(ErrorKind::InvalidInput, (path.empty() ? std::string("/") : path) + ": " + what);
}

const Json& field(const Json& j, const char* key, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) fail(path, std::string("missing field \"") + key + "\"");
    return *it;
}

std::string sub(const std::string& path, const std::string& key) { return path + "/" + key; }
std::string sub(const std::string& path, std::size_t i) { return path + "/" + std::to_string(i); }

const Json& array_at(const Json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array");
    return j;
}

long long as_int(const Json& j, const std::string& path) {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    return j.get<long long>();
}

std::string exact_component(const Json& j, const std::string& path) {
    if (j.is_number_integer()) return std::to_string(j.get<long long>());
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number_float()) fail(path, "floating-point value in an exact document");
    fail(path, "expected a number or a rational string");
}

double approx_component(const Json& j, const std::string& path) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) return Scalar::parse_exact(j.get<std::string>(), "0").to_complex().real();
    fail(path, "expected a number");
}

std::string rational(const mpq_class& q) { return q.get_str(); }

Json vec_json(const ScalarVec& v) {
    Json a = Json::array();
    for (const auto& s : v) a.push_back(to_json(s));
    return a;
}

ScalarVec vec_from_json(const Json& j, Backend b, const std::string& path) {
    ScalarVec v;
    std::size_t i = 0;
    for (const auto& e : array_at(j, path)) v.push_back(scalar_from_json(e, b, sub(path, i++)));
    return v;
}

bool has_float(const Json& j) {
    if (j.is_number_float()) return true;
    if (j.is_structured())
        for (const auto& e : j) if (has_float(e)) return true;
    return false;
}

ShearGen gen_from_json(const Json& j, Backend b, const std::string& path) {
    const std::string kind = field(j, "kind", path).get<std::string>();
    if (kind == "affine")
        return ShearGen::affine(matrix_from_json(field(j, "A", path), b, sub(path, "A")),
                                vec_from_json(field(j, "b", path), b, sub(path, "b")));
    Matrix L = matrix_from_json(field(j, "L", path), b, sub(path, "L"));
    Poly f = poly_from_json(field(j, "f", path), b, sub(path, "f"));
    Scalar t = scalar_from_json(field(j, "t", path), b, sub(path, "t"));
    if (kind == "additive") return ShearGen::additive(L, f, t);
    if (kind == "multiplicative") return ShearGen::multiplicative(L, f, t);
    fail(sub(path, "kind"), "unknown generator kind \"" + kind + "\"");
}

Json scaled_target_json(const ScaledFactor& s) {
    if (auto* w = std::get_if<ShearWord>(&s.target)) return to_json(*w);
    if (auto* m = std::get_if<PolyMap>(&s.target)) return to_json(*m);
    return to_json(*std::get<std::shared_ptr<const ParamAutCurve>>(s.target));
}

std::vector<ParamFn> paramfns(const Json& j, Backend b, const std::string& path) {
    std::vector<ParamFn> v;
    std::size_t i = 0;
    for (const auto& e : array_at(j, path)) v.push_back(paramfn_from_json(e, b, sub(path, i++)));
    return v;
}

Json paramfn_vec(const std::vector<ParamFn>& v) {
    Json a = Json::array();
    for (const auto& f : v) a.push_back(to_json(f));
    return a;
}

}  // namespace

Backend detect_backend(const Json& doc) {
    if (doc.is_object() && doc.contains("backend")) {
        const std::string s = doc["backend"].get<std::string>();
        if (s == "exact") return Backend::exact;
        if (s == "approx") return Backend::approx;
        fail("/backend", "unknown backend \"" + s + "\"");
    }
    return has_float(doc) ? Backend::approx : Backend::exact;
}

Json to_json(const Scalar& s) {
    if (s.is_exact()) return Json::array({rational(s.gaussian().re), rational(s.gaussian().im)});
    const Complex z = s.to_complex();
    return Json::array({z.real(), z.imag()});
}

Scalar scalar_from_json(const Json& j, Backend b, const std::string& path) {
    Json re = j, im = 0;
    if (j.is_array()) {
        if (j.size() != 2) fail(path, "a scalar is [re, im]");
        re = j[0];
        im = j[1];
    }
    if (b == Backend::exact) {
        try {
            return Scalar::parse_exact(exact_component(re, path), exact_component(im, path));
        } catch (const Error& e) {
            fail(path, e.what());
        }
    }
    return Scalar::approx({approx_component(re, path), approx_component(im, path)});
}

Json to_json(const Poly& p) {
    Json terms = Json::array();
    for (const auto& [m, c] : p.terms()) {
        Json e = Json::array();
        for (std::size_t i = 0; i < p.num_vars(); ++i) e.push_back(m[i]);
        terms.push_back(Json{{"e", e}, {"c", to_json(c)}});
    }
    return Json{{"n", p.num_vars()}, {"terms", terms}};
}

Poly poly_from_json(const Json& j, Backend b, const std::string& path) {
    const long long n = as_int(field(j, "n", path), sub(path, "n"));
    if (n < 1 || n > static_cast<long long>(kMaxVars)) fail(sub(path, "n"), "number of variables out of range");
    Poly p(static_cast<std::size_t>(n), b);
    const std::string tp = sub(path, "terms");
    std::size_t i = 0;
    for (const auto& t : array_at(field(j, "terms", path), tp)) {
        const std::string here = sub(tp, i++);
        const Json& e = array_at(field(t, "e", here), sub(here, "e"));
        if (static_cast<long long>(e.size()) != n) fail(sub(here, "e"), "exponent length differs from n");
        std::vector<int> exps;
        for (const auto& x : e) {
            const long long k = as_int(x, sub(here, "e"));
            if (k < 0 || k > 65535) fail(sub(here, "e"), "exponent out of range");
            exps.push_back(static_cast<int>(k));
        }
        p.add_term(Monomial::from(exps), scalar_from_json(field(t, "c", here), b, sub(here, "c")));
    }
    return p;
}

Json to_json(const Matrix& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json r = Json::array();
        for (std::size_t k = 0; k < m.cols(); ++k) r.push_back(to_json(m(i, k)));
        rows.push_back(r);
    }
    return rows;
}

Matrix matrix_from_json(const Json& j, Backend b, const std::string& path) {
    std::vector<ScalarVec> rows;
    std::size_t i = 0;
    for (const auto& r : array_at(j, path)) rows.push_back(vec_from_json(r, b, sub(path, i++)));
    if (rows.empty()) fail(path, "empty matrix");
    for (const auto& r : rows)
        if (r.size() != rows.front().size()) fail(path, "ragged matrix");
    return Matrix::from_rows(rows);
}

Json to_json(const PolyMap& m) {
    Json c = Json::array();
    for (const auto& p : m.components()) c.push_back(to_json(p));
    return Json{{"type", "polymap"}, {"backend", to_string(m.backend())}, {"components", c}};
}

PolyMap polymap_from_json(const Json& j, Backend b, const std::string& path) {
    const Json& comps = j.is_array() ? j : field(j, "components", path);
    const std::string cp = j.is_array() ? path : sub(path, "components");
    std::vector<Poly> v;
    std::size_t i = 0;
    for (const auto& c : array_at(comps, cp)) v.push_back(poly_from_json(c, b, sub(cp, i++)));
    if (v.empty()) fail(cp, "a map needs at least one component");
    for (const auto& p : v)
        if (p.num_vars() != v.front().num_vars()) fail(cp, "components differ in number of variables");
    if (v.front().num_vars() < v.size()) fail(cp, "fewer variables than components");
    return PolyMap(std::move(v));
}

Json to_json(const VectorField& v) {
    Json c = Json::array();
    for (const auto& p : v.coefficients()) c.push_back(to_json(p));
    return Json{{"type", "field"}, {"backend", to_string(v.backend())}, {"coefficients", c}};
}

VectorField field_from_json(const Json& j, Backend b, const std::string& path) {
    const Json& coeffs = j.is_array() ? j : field(j, "coefficients", path);
    const std::string cp = j.is_array() ? path : sub(path, "coefficients");
    std::vector<Poly> v;
    std::size_t i = 0;
    for (const auto& c : array_at(coeffs, cp)) v.push_back(poly_from_json(c, b, sub(cp, i++)));
    if (v.empty()) fail(cp, "a field needs at least one coefficient");
    for (const auto& p : v)
        if (p.num_vars() != v.front().num_vars()) fail(cp, "coefficients differ in number of variables");
    return VectorField(std::move(v));
}

Json to_json(const ShearGen& g) {
    if (g.kind() == ShearKind::affine)
        return Json{{"kind", "affine"}, {"A", to_json(g.matrix())}, {"b", vec_json(g.translation())}};
    return Json{{"kind", to_string(g.kind())}, {"L", to_json(g.matrix())}, {"f", to_json(g.profile())},
                {"t", to_json(g.time())}};
}

Json to_json(const ShearWord& w) {
    Json gens = Json::array();
    for (const auto& g : w.generators()) gens.push_back(to_json(g));
    return Json{{"type", "word"},
                {"backend", to_string(w.backend())},
                {"n", w.dim()},
                {"tag", to_string(w.tag())},
                {"generators", gens}};
}

ShearWord word_from_json(const Json& j, Backend b, const std::string& path) {
    const Json& gens = j.is_array() ? j : field(j, "generators", path);
    const std::string gp = j.is_array() ? path : sub(path, "generators");
    std::vector<ShearGen> v;
    std::size_t i = 0;
    for (const auto& g : array_at(gens, gp)) v.push_back(gen_from_json(g, b, sub(gp, i++)));
    GroupTag tag = GroupTag::aut;
    std::size_t n = 0;
    if (j.is_object() && j.contains("tag")) {
        try {
            tag = parse_group_tag(j["tag"].get<std::string>());
        } catch (const Error& e) {
            fail(sub(path, "tag"), e.what());
        }
    }
    if (j.is_object() && j.contains("n")) n = static_cast<std::size_t>(as_int(j["n"], sub(path, "n")));
    else if (!v.empty()) n = v.front().dim();
    else fail(path, "empty word without \"n\"");
    for (const auto& g : v)
        if (g.dim() != n) fail(gp, "generators differ in dimension");
    return ShearWord(n, b, tag, std::move(v));
}

AutTarget target_from_json(const Json& j, Backend b, const std::string& path) {
    const bool word = (j.is_object() && (j.contains("generators") || j.value("type", "") == "word")) ||
                      (j.is_array() && !j.empty() && j[0].is_object() && j[0].contains("kind"));
    if (word) return word_from_json(j, b, path);
    return polymap_from_json(j, b, path);
}

Json to_json(const AutTarget& t) {
    return std::visit([](const auto& m) { return to_json(m); }, t);
}

NodeData nodedata_from_json(const Json& j, Backend b) {
    NodeData d;
    d.nodes = vec_from_json(field(j, "nodes", ""), b, "/nodes");
    std::size_t i = 0;
    for (const auto& t : array_at(field(j, "targets", ""), "/targets"))
        d.targets.push_back(target_from_json(t, b, sub("/targets", i++)));
    d.validate();
    return d;
}

Json to_json(const ShearField& s) {
    Json j{{"kind", s.kind == ShearFieldKind::additive ? "additive" : "multiplicative"},
           {"c", to_json(s.c)},
           {"lambda", vec_json(s.lambda)}};
    if (s.kind == ShearFieldKind::additive) {
        j["b"] = vec_json(s.direction);
        j["profile"] = to_json(s.profile);
    } else {
        j["v"] = vec_json(s.direction);
        j["mu"] = vec_json(s.mu);
        j["d"] = s.d;
    }
    return j;
}

Json to_json(const Decomposition& d) {
    Json s = Json::array();
    for (const auto& f : d.summands) s.push_back(to_json(f));
    return Json{{"summands", s}, {"residual", to_json(d.residual)}};
}

Json to_json(const ParamFn& f) {
    if (f.kind() == ParamFn::Kind::exponential) return Json{{"kind", "exponential"}, {"q", to_json(f.q())}};
    return Json{{"kind", "polynomial"}, {"q", to_json(f.q())}, {"roots", vec_json(f.roots())}, {"offset", to_json(f.offset())}};
}

ParamFn paramfn_from_json(const Json& j, Backend b, const std::string& path) {
    const std::string kind = field(j, "kind", path).get<std::string>();
    Poly q = poly_from_json(field(j, "q", path), b, sub(path, "q"));
    if (q.num_vars() != 1) fail(sub(path, "q"), "parameter functions are univariate");
    if (kind == "exponential") return ParamFn::exponential(std::move(q));
    if (kind != "polynomial") fail(sub(path, "kind"), "unknown parameter function kind \"" + kind + "\"");
    ScalarVec roots = j.contains("roots") ? vec_from_json(j["roots"], b, sub(path, "roots")) : ScalarVec{};
    Scalar offset = j.contains("offset") ? scalar_from_json(j["offset"], b, sub(path, "offset")) : Scalar::zero(b);
    return ParamFn::vanishing(std::move(q), std::move(roots), std::move(offset));
}

Json to_json(const ParamAutCurve& c) {
    Json fs = Json::array();
    for (const auto& f : c.factors()) {
        fs.push_back(std::visit(
            [](const auto& fac) -> Json {
                using T = std::decay_t<decltype(fac)>;
                if constexpr (std::is_same_v<T, AffineFactor>) {
                    Json A = Json::array();
                    for (const auto& row : fac.A) A.push_back(paramfn_vec(row));
                    return Json{{"kind", "affine"}, {"A", A}, {"b", paramfn_vec(fac.b)}};
                } else if constexpr (std::is_same_v<T, TransvectionFactor>) {
                    return Json{{"kind", "transvection"}, {"i", fac.i}, {"j", fac.j}, {"c", to_json(fac.c)}};
                } else if constexpr (std::is_same_v<T, DiagonalFactor>) {
                    return Json{{"kind", "diagonal"}, {"i", fac.i}, {"u", to_json(fac.u)}};
                } else if constexpr (std::is_same_v<T, ScaledFactor>) {
                    return Json{{"kind", "scaled"}, {"target", scaled_target_json(fac)}, {"h", to_json(fac.h)}};
                } else if constexpr (std::is_same_v<T, ParamShearFactor>) {
                    return Json{{"kind", "shear"}, {"generator", to_json(fac.gen)}, {"time", to_json(fac.time)}};
                } else {
                    return Json{{"kind", "elementary"}, {"a", to_json(fac.a)}, {"b", to_json(fac.b)},
                                {"c", to_json(fac.c)}, {"p", paramfn_vec(fac.p)}};
                }
            },
            f));
    }
    return Json{{"type", "curve"},
                {"backend", to_string(c.backend())},
                {"n", c.dim()},
                {"tag", to_string(c.tag())},
                {"factors", fs}};
}

ParamAutCurve curve_from_json(const Json& j, const std::string& path) {
    const Backend b = detect_backend(j);
    const long long n = as_int(field(j, "n", path), sub(path, "n"));
    if (n < 1 || n > static_cast<long long>(kMaxVars)) fail(sub(path, "n"), "dimension out of range");
    GroupTag tag = GroupTag::aut;
    if (j.contains("tag")) {
        try {
            tag = parse_group_tag(j["tag"].get<std::string>());
        } catch (const Error& e) {
            fail(sub(path, "tag"), e.what());
        }
    }
    ParamAutCurve c(static_cast<std::size_t>(n), b, tag);
    const std::string fp = sub(path, "factors");
    std::size_t i = 0;
    for (const auto& f : array_at(field(j, "factors", path), fp)) {
        const std::string here = sub(fp, i++);
        const std::string kind = field(f, "kind", here).get<std::string>();
        if (kind == "affine") {
            AffineFactor a;
            std::size_t r = 0;
            for (const auto& row : array_at(field(f, "A", here), sub(here, "A")))
                a.A.push_back(paramfns(row, b, sub(sub(here, "A"), r++)));
            a.b = paramfns(field(f, "b", here), b, sub(here, "b"));
            c.push_back(std::move(a));
        } else if (kind == "transvection") {
            c.push_back(TransvectionFactor{static_cast<std::size_t>(as_int(field(f, "i", here), sub(here, "i"))),
                                           static_cast<std::size_t>(as_int(field(f, "j", here), sub(here, "j"))),
                                           paramfn_from_json(field(f, "c", here), b, sub(here, "c"))});
        } else if (kind == "diagonal") {
            c.push_back(DiagonalFactor{static_cast<std::size_t>(as_int(field(f, "i", here), sub(here, "i"))),
                                       paramfn_from_json(field(f, "u", here), b, sub(here, "u"))});
        } else if (kind == "scaled") {
            const Json& t = field(f, "target", here);
            ParamFn h = paramfn_from_json(field(f, "h", here), b, sub(here, "h"));
            if (t.is_object() && t.value("type", "") == "curve")
                c.push_back(ScaledFactor{std::make_shared<const ParamAutCurve>(curve_from_json(t, sub(here, "target"))), h});
            else if (auto tg = target_from_json(t, b, sub(here, "target")); std::holds_alternative<ShearWord>(tg))
                c.push_back(ScaledFactor{std::get<ShearWord>(tg), h});
            else
                c.push_back(ScaledFactor{std::get<PolyMap>(tg), h});
        } else if (kind == "shear") {
            c.push_back(ParamShearFactor{gen_from_json(field(f, "generator", here), b, sub(here, "generator")),
                                         paramfn_from_json(field(f, "time", here), b, sub(here, "time"))});
        } else if (kind == "elementary") {
            c.push_back(ElementaryFactor{paramfn_from_json(field(f, "a", here), b, sub(here, "a")),
                                         paramfn_from_json(field(f, "b", here), b, sub(here, "b")),
                                         paramfn_from_json(field(f, "c", here), b, sub(here, "c")),
                                         paramfns(field(f, "p", here), b, sub(here, "p"))});
        } else {
            fail(sub(here, "kind"), "unknown factor kind \"" + kind + "\"");
        }
    }
    return c;
}

Json to_json(const PlanarFactor& f) {
    if (auto* a = std::get_if<PlanarAffine>(&f))
        return Json{{"kind", "affine"}, {"A", to_json(a->A)}, {"b", vec_json(a->b)}};
    const auto& e = std::get<Elementary>(f);
    return Json{{"kind", "elementary"}, {"a", to_json(e.a)}, {"b", to_json(e.b)}, {"c", to_json(e.c)},
                {"p", to_json(e.p)}, {"degree", e.degree()}};
}

Json to_json(const Factorization& f) {
    Json fs = Json::array();
    for (const auto& x : f.factors) fs.push_back(to_json(x));
    const Polydegree pd = polydegree(f);
    return Json{{"type", "factorization"},
                {"backend", to_string(f.source.backend())},
                {"factors", fs},
                {"polydegree", pd},
                {"degree", degree_of(f.source)},
                {"stratum_dim", stratum_dim(pd)},
                {"certified", f.certified}};
}

Json to_json(const ErrorReport& r, bool timing) {
    Json steps = Json::array();
    for (const auto& s : r.steps)
        steps.push_back(Json{{"t", s.t},
                             {"truncation_residual", s.truncation_residual},
                             {"decomposition_residual", s.decomposition_residual},
                             {"summands", s.summands}});
    return Json{{"sup_error", r.sup_error},
                {"truncation_residual", r.truncation_residual},
                {"decomposition_residual", r.decomposition_residual},
                {"seconds", timing ? r.seconds : 0.0},
                {"steps", steps}};
}

std::vector<Point> points_from_json(const Json& j) {
    std::vector<Point> pts;
    std::size_t i = 0;
    for (const auto& p : array_at(j, "")) {
        const std::string here = sub("", i++);
        Point z;
        std::size_t k = 0;
        for (const auto& c : array_at(p, here)) z.push_back(scalar_from_json(c, Backend::approx, sub(here, k++)).to_complex());
        if (!pts.empty() && z.size() != pts.front().size()) fail(here, "points differ in dimension");
        pts.push_back(std::move(z));
    }
    return pts;
}

Json to_json(const Point& p) {
    Json a = Json::array();
    for (const auto& c : p) a.push_back(Json::array({c.real(), c.imag()}));
    return a;
}

}  // namespace shearkit::io
