#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "shearkit/json_io.hpp"

namespace shearkit::cli {

namespace {

using io::Json;

constexpr const char* kVersion = "1.0.0";

struct Options {
    std::string input = "-";
    std::string output;
    std::string manifest;
    std::string points;
    std::string tag = "Aut";
    std::string field_tag = "general";
    std::string backend = "approx";
    std::string x;
    std::vector<std::string> nodes;
    std::vector<double> radii;
    std::vector<int> step_list{8, 16, 32};
    int steps = 1;
    int order = 8;
    int angles = 8;
    int samples = 20;
    int offnode = 10;
    double disc = 0;
    double tol = 1e-8;
    unsigned seed = 0;
    bool no_timing = false;
};

// Exit status carried out of a handler together with its output.
struct Result {
    std::string text;
    int code = 0;
};

Json error_json(const std::string& kind, const std::string& message, const std::string& certificate = {},
                const Json& location = nullptr) {
    Json e{{"kind", kind}, {"message", message}};
    if (!certificate.empty()) e["certificate"] = certificate;
    if (!location.is_null()) e["location"] = location;
    return Json{{"error", e}};
}

int exit_code_for(ErrorKind k) {
    return k == ErrorKind::NonConstantJacobian || k == ErrorKind::NotAnAutomorphism ? 2 : 1;
}

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream os;
        os << std::cin.rdbuf();
        return os.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::InvalidInput, "cannot open input file '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

// Thrown for unparsable JSON so that the location survives to the error object.
struct JsonSyntaxError {
    std::string message;
    Json location;
};

Json parse_document(const std::string& text, const std::string& source) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        const std::size_t byte = e.byte;
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw JsonSyntaxError{"malformed JSON in " + source,
                              Json{{"source", source}, {"byte", byte}, {"line", line}, {"column", col}}};
    }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

bool is_float_literal(const std::string& s) {
    return s.find_first_of(".eEn") != std::string::npos;  // n: inf/nan
}

// "re" or "re:im"; rationals stay exact, decimals are approximate.
Scalar parse_scalar_arg(const std::string& s) {
    const auto colon = s.find(':');
    const std::string re = s.substr(0, colon), im = colon == std::string::npos ? "0" : s.substr(colon + 1);
    try {
        if (is_float_literal(re) || is_float_literal(im)) return Scalar::approx({std::stod(re), std::stod(im)});
    } catch (const std::exception&) {
        throw Error(ErrorKind::InvalidInput, "malformed number '" + s + "'");
    }
    return Scalar::parse_exact(re, im);
}

std::vector<Scalar> parse_nodes(const std::vector<std::string>& args) {
    std::vector<Scalar> v;
    bool approx = false;
    for (const auto& a : args) {
        v.push_back(parse_scalar_arg(a));
        approx = approx || !v.back().is_exact();
    }
    if (approx)
        for (auto& s : v) s = s.to_backend(Backend::approx);
    return v;
}

Backend parse_backend(const std::string& s) {
    if (s == "exact") return Backend::exact;
    if (s == "approx") return Backend::approx;
    throw Error(ErrorKind::InvalidInput, "unknown backend '" + s + "'");
}

PipelineConfig pipeline(const Options& o, int steps) {
    PipelineConfig cfg;
    cfg.steps = steps;
    cfg.order = o.order;
    cfg.radii = o.radii;
    cfg.angles = o.angles;
    cfg.backend = parse_backend(o.backend);
    cfg.validate();
    return cfg;
}

std::vector<Point> polydisc_samples(std::size_t n, int count, std::mt19937& rng) {
    std::uniform_real_distribution<double> r(0.0, 1.0), th(0.0, 2 * std::numbers::pi);
    std::vector<Point> pts;
    for (int k = 0; k < count; ++k) {
        Point z;
        for (std::size_t i = 0; i < n; ++i) z.push_back(std::polar(r(rng), th(rng)));
        pts.push_back(std::move(z));
    }
    return pts;
}

Json verification(const ParamAutCurve& curve, const NodeData& data, const Options& o, int& code) {
    std::mt19937 rng(o.seed);
    const auto samples = polydisc_samples(data.dim(), o.samples, rng);
    const auto errs = node_errors(curve, data, samples);
    double worst = 0, R = 1;
    for (double e : errs) worst = std::max(worst, e);
    for (const auto& x : data.nodes) R = std::max(R, x.abs());
    std::vector<Complex> xs;
    std::uniform_real_distribution<double> r(0.0, R), th(0.0, 2 * std::numbers::pi);
    for (int k = 0; k < o.offnode; ++k) xs.push_back(std::polar(r(rng), th(rng)));
    const auto why = certify_curve(curve, xs, samples);
    code = (worst <= o.tol && !why) ? 0 : 2;
    return Json{{"node_errors", errs},
                {"max_node_error", worst},
                {"tolerance", o.tol},
                {"samples", o.samples},
                {"offnode_checked", o.offnode},
                {"offnode_failure", why ? Json(*why) : Json(nullptr)},
                {"passed", code == 0}};
}

Result cmd_factor(const Json& doc) {
    const PolyMap g = io::polymap_from_json(doc, io::detect_backend(doc));
    return {dump(io::to_json(jvdk_factor(g))), 0};
}

Result cmd_certify(const Json& doc, const Options& o) {
    const Backend b = io::detect_backend(doc);
    const GroupTag tag = parse_group_tag(o.tag);
    Json r{{"tag", to_string(tag)}};
    bool certified = false;
    std::string reason;
    try {
        AutTarget t = io::target_from_json(doc, b);
        if (auto* w = std::get_if<ShearWord>(&t)) {
            w->with_tag(tag);
            r["method"] = "generator word";
            certified = true;
        } else {
            const PolyMap& F = std::get<PolyMap>(t);
            if (F.num_params() != 0) throw Error(ErrorKind::InvalidInput, "certify expects a parameter-free map");
            if (F.dim() == 2) {
                Factorization f = jvdk_factor(F);
                r["method"] = "jung-van der kulk";
                r["polydegree"] = polydegree(f);
                certified = f.certified;
                if (!certified) reason = "approximate factorization is not a certificate";
            } else {
                require_constant_jacobian(F);
                invert_polymap(F);
                r["method"] = "verified inverse";
                certified = b == Backend::exact;
                if (!certified) reason = "approximate inverse is not a certificate";
            }
            if (certified && is_volume_tag(tag) && !jacobian_det(F).chopped().constant_term().is_one()) {
                certified = false;
                reason = "Jacobian determinant is not 1";
            }
            if (certified && is_symplectic_tag(tag) && !preserves_symplectic_form(F)) {
                certified = false;
                reason = "symplectic form is not preserved";
            }
        }
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::InvalidInput || e.kind() == ErrorKind::ArityMismatch ||
            e.kind() == ErrorKind::BackendMismatch)
            throw;
        reason = std::string(to_string(e.kind())) + ": " + e.what();
    }
    r["certified"] = certified;
    if (!certified) r["reason"] = reason;
    return {dump(r), certified ? 0 : 2};
}

Result cmd_decompose(const Json& doc, const Options& o) {
    const Backend b = io::detect_backend(doc);
    const VectorField W = io::field_from_json(doc, b);
    const Decomposition d = decompose_field(W, parse_field_tag(o.field_tag));
    double worst = 0;
    for (const auto& p : d.residual.coefficients()) worst = std::max(worst, max_abs_coefficient(p));
    const VectorField back = recompose(d.summands, W.dim(), b) + d.residual;
    const bool recomposes = b == Backend::exact ? back == W : near_equal(back, W, 1e-9);
    const bool ok = (b == Backend::exact ? d.residual.is_zero() : worst <= 1e-9) && recomposes;
    Json r{{"decomposition", io::to_json(d)},
           {"report",
            {{"tag", o.field_tag}, {"summands", d.summands.size()}, {"residual_max_abs", worst}, {"recomposes", recomposes}}}};
    return {dump(r), ok ? 0 : 2};
}

Result cmd_approximate(const Json& doc, const Options& o) {
    const Backend b = io::detect_backend(doc);
    const GroupTag tag = parse_group_tag(o.tag);
    const PipelineConfig cfg = pipeline(o, o.steps);
    const bool timing = !o.no_timing;
    if (o.nodes.empty()) {
        AutTarget t = io::target_from_json(doc, b);
        Approximation a = std::holds_alternative<ShearWord>(t) ? approximate(std::get<ShearWord>(t), tag, cfg)
                                                                : approximate(std::get<PolyMap>(t), tag, cfg);
        return {dump(Json{{"word", io::to_json(a.word)}, {"report", io::to_json(a.report, timing)}}), 0};
    }
    const PolyMap target = io::polymap_from_json(doc, b);
    const std::vector<Scalar> nodes = parse_nodes(o.nodes);
    double R = o.disc;
    if (R <= 0) {
        R = 1;
        for (const auto& x : nodes) R = std::max(R, x.abs());
    }
    InterpolatingApproximation a = approximate_interpolating(target, nodes, R, tag, cfg);
    return {dump(Json{{"curve", io::to_json(a.curve)},
                      {"report", io::to_json(a.report, timing)},
                      {"node_error", a.node_error},
                      {"disc_radius", R}}),
            0};
}

Result cmd_convergence(const Json& doc, const Options& o) {
    const Backend b = io::detect_backend(doc);
    const GroupTag tag = parse_group_tag(o.tag);
    const PipelineConfig cfg = pipeline(o, 1);
    AutTarget t = io::target_from_json(doc, b);
    auto rows = std::holds_alternative<ShearWord>(t) ? convergence_study(std::get<ShearWord>(t), tag, o.step_list, cfg)
                                                     : convergence_study(std::get<PolyMap>(t), tag, o.step_list, cfg);
    return {convergence_csv(rows, !o.no_timing), 0};
}

Result cmd_interpolate(const Json& doc, const Options& o) {
    NodeData data = io::nodedata_from_json(doc, io::detect_backend(doc));
    const Backend b = parse_backend(o.backend);
    if (data.backend() == Backend::approx && b == Backend::exact)
        throw Error(ErrorKind::BackendMismatch, "approximate targets cannot give an exact curve");
    for (auto& x : data.nodes) x = x.to_backend(b);
    for (auto& t : data.targets) {
        if (auto* w = std::get_if<ShearWord>(&t)) t = w->to_backend(b);
        else t = std::get<PolyMap>(t).to_backend(b);
    }
    const ParamAutCurve curve = interpolate_full(data, parse_group_tag(o.tag));
    int code = 0;
    Json v = verification(curve, data, o, code);
    return {dump(Json{{"curve", io::to_json(curve)}, {"verification", v}}), code};
}

Result cmd_interpolate_planar(const Json& doc, const Options& o) {
    const NodeData data = io::nodedata_from_json(doc, io::detect_backend(doc));
    std::vector<PolyMap> maps;
    for (const auto& t : data.targets) {
        if (!std::holds_alternative<PolyMap>(t))
            throw Error(ErrorKind::InvalidInput, "planar interpolation expects polynomial map targets");
        maps.push_back(std::get<PolyMap>(t));
    }
    PlanarInterpolation r = planar_interpolation(data.nodes, maps, parse_backend(o.backend));
    Json classes = Json::array();
    for (std::size_t j = 0; j < r.classes.size(); ++j) {
        std::vector<std::size_t> members;
        for (std::size_t k = 0; k < r.class_of.size(); ++k)
            if (r.class_of[k] == j) members.push_back(k);
        classes.push_back(Json{{"polydegree", r.classes[j]}, {"stratum_dim", stratum_dim(r.classes[j])}, {"nodes", members}});
    }
    int code = 0;
    Json v = verification(r.curve, data, o, code);
    v["classes"] = classes;
    return {dump(Json{{"curve", io::to_json(r.curve)}, {"verification", v}}), code};
}

Result cmd_eval(const Json& doc, const Options& o) {
    if (o.points.empty()) throw Error(ErrorKind::InvalidInput, "--points is required");
    const std::vector<Point> pts = io::points_from_json(parse_document(read_input(o.points), o.points));
    Json values = Json::array();
    if (doc.is_object() && doc.value("type", "") == "curve") {
        if (o.x.empty()) throw Error(ErrorKind::InvalidInput, "--x is required for curves");
        const ParamAutCurve c = io::curve_from_json(doc);
        CurveEvaluator ev(c, parse_scalar_arg(o.x).to_complex());
        for (const auto& z : pts) {
            if (z.size() != c.dim()) throw Error(ErrorKind::ArityMismatch, "point has wrong dimension");
            values.push_back(io::to_json(ev(z)));
        }
    } else {
        AutTarget t = io::target_from_json(doc, io::detect_backend(doc));
        if (auto* m = std::get_if<PolyMap>(&t); m && m->num_params() != 0)
            throw Error(ErrorKind::InvalidInput, "maps with parameters are evaluated as curves");
        for (const auto& z : pts) {
            if (z.size() != dim_of(t)) throw Error(ErrorKind::ArityMismatch, "point has wrong dimension");
            values.push_back(io::to_json(eval_target(t, z)));
        }
    }
    return {dump(Json{{"values", values}}), 0};
}

Json versions() {
    return Json{{"shearkit", kVersion},
                {"gmp", gmp_version},
                {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                      std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                      std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
                {"cli11", CLI11_VERSION}};
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorKind::InvalidInput, "cannot open output file '" + path + "'");
    f << text;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Shear-word approximation and interpolation of holomorphic automorphisms"};
    app.name("shearkit");
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* s) {
        s->add_option("-i,--input", o.input, "input JSON file, - for stdin")->capture_default_str();
        s->add_option("-o,--output", o.output, "output file (default stdout)");
        s->add_option("--manifest", o.manifest, "write a run manifest JSON here");
        s->add_option("--seed", o.seed, "seed for sampled verification points")->capture_default_str();
        s->add_flag("--no-timing", o.no_timing, "write 0 for all durations");
    };
    auto tag_opt = [&](CLI::App* s) {
        s->add_option("--tag", o.tag, "group: Aut, Aut1, AutSp, AutAlg, AutAlg1, AutAlgSp")->capture_default_str();
    };
    auto pipeline_opts = [&](CLI::App* s) {
        s->add_option("--order", o.order, "truncation order k")->capture_default_str();
        s->add_option("--radii", o.radii, "polydisc radii per coordinate")->delimiter(',');
        s->add_option("--angles", o.angles, "roots of unity per radius")->capture_default_str();
        s->add_option("--backend", o.backend, "exact or approx")->capture_default_str();
    };
    auto verify_opts = [&](CLI::App* s) {
        s->add_option("--samples", o.samples, "polydisc sample points")->capture_default_str();
        s->add_option("--offnode", o.offnode, "random parameter values for the group certifier")->capture_default_str();
        s->add_option("--tol", o.tol, "node error tolerance")->capture_default_str();
    };

    auto* factor = app.add_subcommand("factor", "Jung-van der Kulk factorization of a planar map");
    common(factor);
    auto* certify = app.add_subcommand("certify", "certify that a map is an automorphism in a group");
    common(certify);
    tag_opt(certify);
    auto* decompose = app.add_subcommand("decompose-field", "split a vector field into shear fields");
    common(decompose);
    decompose->add_option("--tag", o.field_tag, "general, volume or symplectic")->capture_default_str();
    auto* approximate_cmd = app.add_subcommand("approximate", "approximate an automorphism by a shear word");
    common(approximate_cmd);
    tag_opt(approximate_cmd);
    pipeline_opts(approximate_cmd);
    approximate_cmd->add_option("--steps", o.steps, "time subdivision N")->capture_default_str();
    approximate_cmd->add_option("--nodes", o.nodes, "interpolation nodes (re or re:im)")->delimiter(',');
    approximate_cmd->add_option("--disc", o.disc, "parameter disc radius for the error grid");
    auto* convergence = app.add_subcommand("convergence", "error table over several N");
    common(convergence);
    tag_opt(convergence);
    pipeline_opts(convergence);
    convergence->add_option("--steps", o.step_list, "list of N")->delimiter(',')->capture_default_str();
    auto* interpolate = app.add_subcommand("interpolate", "curve of automorphisms through node values");
    common(interpolate);
    tag_opt(interpolate);
    verify_opts(interpolate);
    interpolate->add_option("--backend", o.backend, "backend of the curve: exact or approx")->capture_default_str();
    auto* planar = app.add_subcommand("interpolate-planar", "planar interpolation by polydegree strata");
    common(planar);
    verify_opts(planar);
    planar->add_option("--backend", o.backend, "backend of the curve: exact or approx")->capture_default_str();
    auto* eval = app.add_subcommand("eval", "evaluate a map, word or curve at points");
    common(eval);
    eval->add_option("--points", o.points, "JSON array of points")->required();
    eval->add_option("--x", o.x, "curve parameter (re or re:im)");

    const auto start = std::chrono::steady_clock::now();
    std::string sub;
    int code = 0;
    try {
        try {
            app.parse(argc, argv);
        } catch (const CLI::CallForHelp& e) {
            return app.exit(e, out, err);
        } catch (const CLI::CallForAllHelp& e) {
            return app.exit(e, out, err);
        } catch (const CLI::ParseError& e) {
            err << error_json("Usage", e.what()).dump() << "\n";
            return 1;
        }
        sub = app.get_subcommands().front()->get_name();
        const Json doc = parse_document(read_input(o.input), o.input == "-" ? "stdin" : o.input);
        Result r;
        if (sub == "factor") r = cmd_factor(doc);
        else if (sub == "certify") r = cmd_certify(doc, o);
        else if (sub == "decompose-field") r = cmd_decompose(doc, o);
        else if (sub == "approximate") r = cmd_approximate(doc, o);
        else if (sub == "convergence") r = cmd_convergence(doc, o);
        else if (sub == "interpolate") r = cmd_interpolate(doc, o);
        else if (sub == "interpolate-planar") r = cmd_interpolate_planar(doc, o);
        else r = cmd_eval(doc, o);
        if (o.output.empty()) out << r.text;
        else write_file(o.output, r.text);
        code = r.code;
    } catch (const JsonSyntaxError& e) {
        err << error_json("InvalidInput", e.message, {}, e.location).dump() << "\n";
        code = 1;
    } catch (const Error& e) {
        err << error_json(to_string(e.kind()), e.what(), e.certificate()).dump() << "\n";
        code = exit_code_for(e.kind());
    } catch (const std::exception& e) {
        err << error_json("Internal", e.what()).dump() << "\n";
        code = 1;
    }

    if (!o.manifest.empty() && !sub.empty()) {
        const double secs = o.no_timing ? 0.0 : std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        Json config{{"tag", o.tag}, {"field_tag", o.field_tag}, {"backend", o.backend}, {"steps", o.steps},
                    {"step_list", o.step_list}, {"order", o.order}, {"radii", o.radii}, {"angles", o.angles},
                    {"nodes", o.nodes}, {"disc", o.disc}, {"samples", o.samples}, {"offnode", o.offnode},
                    {"tol", o.tol}, {"points", o.points}, {"x", o.x}, {"no_timing", o.no_timing}};
        Json m{{"subcommand", sub},
               {"input", o.input},
               {"output", o.output.empty() ? "-" : o.output},
               {"config", config},
               {"versions", versions()},
               {"seed", o.seed},
               {"duration_seconds", secs},
               {"exit_code", code}};
        try {
            write_file(o.manifest, dump(m));
        } catch (const Error& e) {
            err << error_json(to_string(e.kind()), e.what()).dump() << "\n";
            if (code == 0) code = 1;
        }
    }
    return code;
}

}  // namespace shearkit::cli
