#include "shearkit/interpolate.hpp"

#include <cmath>
#include <sstream>

namespace shearkit {

Backend backend_of(const AutTarget& t) {
    return std::visit([](const auto& m) { return m.backend(); }, t);
}

std::size_t dim_of(const AutTarget& t) {
    return std::visit([](const auto& m) { return m.dim(); }, t);
}

Point eval_target(const AutTarget& t, const Point& z) {
    if (auto* w = std::get_if<ShearWord>(&t)) return eval_word(*w, z);
    return std::get<PolyMap>(t).evaluate(z);
}

namespace {

void check_nodes(const std::vector<Scalar>& nodes) {
    for (std::size_t i = 0; i < nodes.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (nodes[i] == nodes[j]) throw Error(ErrorKind::InvalidInput, "repeated node", nodes[i].to_string());
}

std::vector<Scalar> nodes_in(const std::vector<Scalar>& nodes, Backend b) {
    std::vector<Scalar> out;
    for (const auto& x : nodes) {
        if (b == Backend::exact && x.backend() != Backend::exact)
            throw Error(ErrorKind::BackendMismatch, "exact interpolation needs exact nodes", x.to_string());
        out.push_back(x.to_backend(b));
    }
    check_nodes(out);
    return out;
}

bool is_exactly_one(const Scalar& s) { return s == Scalar::one(s.backend()); }

}  // namespace

void NodeData::validate() const {
    if (nodes.empty()) throw Error(ErrorKind::InvalidInput, "no nodes");
    if (nodes.size() != targets.size()) throw Error(ErrorKind::InvalidInput, "one target per node is required");
    const std::size_t n = dim_of(targets.front());
    const Backend b = backend_of(targets.front());
    for (const auto& t : targets) {
        if (dim_of(t) != n) throw Error(ErrorKind::ArityMismatch, "targets differ in dimension");
        if (backend_of(t) != b) throw Error(ErrorKind::BackendMismatch, "targets differ in backend");
        if (auto* m = std::get_if<PolyMap>(&t); m && m->num_params() != 0)
            throw Error(ErrorKind::InvalidInput, "targets must be parameter free");
    }
    nodes_in(nodes, b);
}

std::size_t NodeData::dim() const { return dim_of(targets.at(0)); }
Backend NodeData::backend() const { return backend_of(targets.at(0)); }

Poly lagrange(const std::vector<Scalar>& nodes, const std::vector<Scalar>& values) {
    if (nodes.empty()) throw Error(ErrorKind::InvalidInput, "no nodes");
    if (nodes.size() != values.size()) throw Error(ErrorKind::InvalidInput, "one value per node is required");
    const Backend b = values.front().backend();
    const std::vector<Scalar> t = nodes_in(nodes, b);
    Poly p(1, b);
    for (std::size_t k = 0; k < t.size(); ++k) {
        if (values[k].backend() != b) throw Error(ErrorKind::BackendMismatch, "values differ in backend");
        if (values[k].is_zero()) continue;
        std::vector<Scalar> others;
        Scalar denom = Scalar::one(b);
        for (std::size_t j = 0; j < t.size(); ++j)
            if (j != k) {
                others.push_back(t[j]);
                denom *= t[k] - t[j];
            }
        p += root_product(others, b) * (values[k] / denom);
    }
    return p;
}

ParamFn lagrange_basis(const std::vector<Scalar>& nodes, std::size_t k, const Scalar& scale) {
    const Backend b = scale.backend();
    const std::vector<Scalar> t = nodes_in(nodes, b);
    std::vector<Scalar> others;
    Scalar denom = Scalar::one(b);
    for (std::size_t j = 0; j < t.size(); ++j)
        if (j != k) {
            others.push_back(t[j]);
            denom *= t.at(k) - t[j];
        }
    return ParamFn::vanishing(Poly::constant(1, scale / denom), std::move(others), Scalar::zero(b));
}

ParamFn nonvanishing_interpolant(const std::vector<Scalar>& nodes, const std::vector<Scalar>& values) {
    if (values.empty()) throw Error(ErrorKind::InvalidInput, "no values");
    for (const auto& v : values)
        if (v.is_zero()) throw Error(ErrorKind::Precondition, "value zero cannot be interpolated by a unit");
    const Backend b = values.front().backend();
    if (b == Backend::exact) {
        bool constant = true;
        for (const auto& v : values) constant = constant && v == values.front();
        if (!constant)
            throw Error(ErrorKind::Transcendental, "non-constant unit interpolation needs logarithms");
        nodes_in(nodes, b);
        if (is_exactly_one(values.front())) return ParamFn::exponential(Poly(1, b));
        return ParamFn::constant(values.front());
    }
    std::vector<Scalar> logs;
    for (const auto& v : values) logs.push_back(Scalar::approx(std::log(v.to_complex())));
    return ParamFn::exponential(lagrange(nodes, logs));
}

std::vector<Transvection> transvection_factorization(const Matrix& S) {
    const std::size_t n = S.rows();
    const Backend b = S.backend();
    if (S.cols() != n) throw Error(ErrorKind::ArityMismatch, "matrix must be square");
    const Scalar det = S.determinant();
    if (b == Backend::exact ? !is_exactly_one(det) : std::abs(det.to_complex() - 1.0) > 1e-9)
        throw Error(ErrorKind::Precondition, "determinant must be 1", det.to_string());

    Matrix M = S;
    std::vector<Transvection> ops;  // row operations, in the order performed
    auto row_add = [&](std::size_t dst, std::size_t src, const Scalar& a) {
        if (a.is_zero()) return;
        for (std::size_t j = 0; j < n; ++j) M.set(dst, j, M(dst, j) + a * M(src, j));
        ops.push_back({dst, src, a});
    };
    auto negligible = [&](const Scalar& v) { return b == Backend::exact ? v.is_zero() : std::abs(v.to_complex()) < 1e-300; };
    const Scalar one = Scalar::one(b);

    for (std::size_t c = 0; c + 1 < n; ++c) {
        // Pivot: the largest entry at or below the diagonal, added in when needed.
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (M(r, c).abs() > M(piv, c).abs()) piv = r;
        if (negligible(M(piv, c))) throw Error(ErrorKind::SingularMatrix, "matrix is singular");
        if (piv != c && M(c, c).abs() < 0.5 * M(piv, c).abs()) row_add(c, piv, one);
        if (!(M(c, c) == one)) {
            if (negligible(M(c + 1, c)) || M(c + 1, c).abs() < 1e-3 * M(c, c).abs()) row_add(c + 1, c, one);
            row_add(c, c + 1, (one - M(c, c)) / M(c + 1, c));
        }
        for (std::size_t r = 0; r < n; ++r)
            if (r != c) row_add(r, c, -M(r, c));
    }
    for (std::size_t r = 0; r + 1 < n; ++r) row_add(r, n - 1, -M(r, n - 1));

    // E_m ... E_1 S = I, so S = E_1^{-1} ... E_m^{-1}: apply E_m^{-1} first.
    std::vector<Transvection> out;
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) out.push_back({it->i, it->j, -it->c});
    return out;
}

ParamAutCurve interp_linear(const std::vector<Scalar>& nodes, const std::vector<Matrix>& targets, GroupTag tag) {
    if (targets.empty()) throw Error(ErrorKind::InvalidInput, "no targets");
    if (nodes.size() != targets.size()) throw Error(ErrorKind::InvalidInput, "one target per node is required");
    const std::size_t n = targets.front().rows();
    const Backend b = targets.front().backend();
    const std::vector<Scalar> t = nodes_in(nodes, b);
    const bool volume = is_volume_tag(tag) || is_symplectic_tag(tag);
    if (is_symplectic_tag(tag) && n != 2)
        throw Error(ErrorKind::Unsupported, "symplectic linear interpolation is implemented for n = 2 only");

    std::vector<Scalar> dets;
    for (const auto& A : targets) {
        if (A.rows() != n || A.cols() != n) throw Error(ErrorKind::ArityMismatch, "targets differ in size");
        if (A.backend() != b) throw Error(ErrorKind::BackendMismatch, "targets differ in backend");
        const Scalar d = A.determinant();
        if (b == Backend::exact ? d.is_zero() : d.abs() < 1e-12)
            throw Error(ErrorKind::SingularMatrix, "singular target matrix");
        if (volume && (b == Backend::exact ? !is_exactly_one(d) : std::abs(d.to_complex() - 1.0) > 1e-9))
            throw Error(ErrorKind::Precondition, std::string("target determinant must be 1 for ") + to_string(tag),
                        d.to_string());
        dets.push_back(d);
    }

    ParamAutCurve curve(n, b, tag);
    bool unit_dets = true;
    for (const auto& d : dets) unit_dets = unit_dets && is_exactly_one(d);
    if (!volume && !unit_dets) curve.push_back(DiagonalFactor{0, nonvanishing_interpolant(t, dets)});

    for (std::size_t k = 0; k < t.size(); ++k) {
        Matrix S = targets[k];
        if (!volume && !unit_dets) {
            const Scalar inv = Scalar::one(b) / dets[k];
            for (std::size_t i = 0; i < n; ++i) S.set(i, 0, S(i, 0) * inv);
        }
        for (const auto& tv : transvection_factorization(S))
            curve.push_back(TransvectionFactor{tv.i, tv.j, lagrange_basis(t, k, tv.c)});
    }
    return curve;
}

namespace {

void require_schwarz(const AutTarget& target) {
    const PolyMap lin = std::holds_alternative<ShearWord>(target) ? word_jet(std::get<ShearWord>(target), 1).map
                                                                  : std::get<PolyMap>(target).truncated(1);
    const std::size_t n = lin.dim();
    for (const auto& c : lin.center())
        if (!c.near_zero(1e-10)) throw Error(ErrorKind::Precondition, "non-Schwarz target: moves the origin");
    if (!near_equal(lin.linear_part(), Matrix::identity(n, lin.backend()), 1e-10))
        throw Error(ErrorKind::Precondition, "non-Schwarz target: derivative at 0 is not the identity");
}

bool is_identity_target(const AutTarget& t) {
    if (auto* w = std::get_if<ShearWord>(&t)) {
        for (const auto& g : w->generators())
            if (!g.is_identity()) return false;
        return true;
    }
    return std::get<PolyMap>(t).is_identity();
}

}  // namespace

ParamAutCurve interp_schwarz_chain(const std::vector<Scalar>& nodes, const std::vector<AutTarget>& targets,
                                   GroupTag tag) {
    NodeData data{nodes, targets};
    data.validate();
    const std::size_t n = data.dim();
    const Backend b = data.backend();
    const std::vector<Scalar> t = nodes_in(nodes, b);
    for (const auto& psi : targets) require_schwarz(psi);

    bool poly_mode = false;
    for (const auto& psi : targets) poly_mode = poly_mode || std::holds_alternative<PolyMap>(psi);
    auto as_map = [](const AutTarget& psi) {
        return std::holds_alternative<PolyMap>(psi) ? std::get<PolyMap>(psi) : word_polymap(std::get<ShearWord>(psi));
    };
    auto as_word = [&](const AutTarget& psi) { return std::get<ShearWord>(psi).with_tag(tag); };

    ParamAutCurve curve(n, b, tag);
    // Factors so far with their h-functions, for evaluating H_{m-1}(t_m).
    std::vector<std::pair<AutTarget, ParamFn>> chain;
    auto push = [&](AutTarget theta, ParamFn h) {
        if (is_identity_target(theta)) return;
        if (auto* w = std::get_if<ShearWord>(&theta)) curve.push_back(ScaledFactor{*w, h});
        else curve.push_back(ScaledFactor{std::get<PolyMap>(theta), h});
        chain.emplace_back(std::move(theta), std::move(h));
    };

    const ParamFn one = ParamFn::constant(Scalar::one(b));
    if (poly_mode) push(as_map(targets[0]), one);
    else push(as_word(targets[0]), one);

    for (std::size_t m = 1; m < t.size(); ++m) {
        std::vector<Scalar> prev(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(m));
        Scalar denom = Scalar::one(b);
        for (const auto& r : prev) denom *= t[m] - r;
        ParamFn h = ParamFn::vanishing(Poly::constant(1, Scalar::one(b) / denom), prev, Scalar::zero(b));
        if (poly_mode) {
            const PolyMap Hm = curve_polymap(curve, t[m]);
            push(compose(as_map(targets[m]), invert_polymap(Hm)), h);
        } else {
            ShearWord Hm(n, b, tag);
            for (const auto& [theta, hj] : chain) {
                const Scalar s = hj.eval(t[m]);
                if (!s.is_zero()) Hm.append(dilation_conjugate(std::get<ShearWord>(theta), s));
            }
            push(concat(invert_word(Hm), as_word(targets[m])), h);
        }
    }
    return curve;
}

ParamAutCurve interpolate_full(const NodeData& data, GroupTag tag) {
    data.validate();
    const std::size_t n = data.dim();
    const Backend b = data.backend();
    const std::vector<Scalar> t = nodes_in(data.nodes, b);

    std::vector<ScalarVec> centers;
    std::vector<Matrix> linear;
    std::vector<AutTarget> tails;
    for (const auto& target : data.targets) {
        SchwarzDecomposition sd = std::holds_alternative<PolyMap>(target)
                                      ? schwarz_normalize(std::get<PolyMap>(target), tag)
                                      : schwarz_normalize(std::get<ShearWord>(target).with_tag(tag));
        centers.push_back(sd.center);
        linear.push_back(sd.linear);
        if (auto* w = std::get_if<ShearWord>(&sd.tail)) tails.emplace_back(*w);
        else tails.emplace_back(std::get<PolyMap>(sd.tail));
    }

    ParamAutCurve curve = interp_schwarz_chain(t, tails, tag);
    curve.append(interp_linear(t, linear, tag));

    AffineFactor shift;
    bool moves = false;
    for (std::size_t i = 0; i < n; ++i) {
        shift.A.emplace_back();
        for (std::size_t j = 0; j < n; ++j) shift.A.back().push_back(ParamFn::constant(Scalar::from_int(i == j, b)));
        std::vector<Scalar> vals;
        for (const auto& c : centers) {
            vals.push_back(c[i]);
            moves = moves || !c[i].is_zero();
        }
        shift.b.push_back(ParamFn::polynomial(lagrange(t, vals)));
    }
    if (moves) curve.push_back(std::move(shift));
    return curve;
}

std::vector<double> node_errors(const ParamAutCurve& curve, const NodeData& data, const std::vector<Point>& samples) {
    std::vector<double> out;
    for (std::size_t k = 0; k < data.nodes.size(); ++k) {
        CurveEvaluator ev(curve, data.nodes[k].to_complex());
        double e = 0;
        for (const auto& z : samples) {
            const Point u = ev(z), v = eval_target(data.targets[k], z);
            for (std::size_t i = 0; i < u.size(); ++i) e = std::max(e, std::abs(u[i] - v[i]));
        }
        out.push_back(e);
    }
    return out;
}

std::optional<std::string> certify_curve(const ParamAutCurve& curve, const std::vector<Complex>& xs,
                                         const std::vector<Point>& samples, double tol) {
    for (const auto& x : xs)
        if (auto why = certify_curve_at(curve, x, samples, tol)) {
            std::ostringstream os;
            os << *why << " at x = " << x;
            return os.str();
        }
    return std::nullopt;
}

}  // namespace shearkit
