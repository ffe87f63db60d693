#include "shearkit/planar.hpp"

#include <algorithm>
#include <cmath>

#include "shearkit/interpolate.hpp"

namespace shearkit {

namespace {

constexpr double kApproxTol = 1e-8;

bool negligible(const Scalar& v, double scale = 1.0) {
    return v.is_exact() ? v.is_zero() : v.abs() <= 1e-12 * std::max(1.0, scale);
}

Poly clean(const Poly& p) {
    if (p.backend() == Backend::exact) return p;
    return p.chopped(1e-12 * std::max(1.0, max_abs_coefficient(p)));
}

Poly y_linear(const Scalar& s, const Scalar& t) {
    // s y + t as a univariate polynomial
    return Poly::variable(1, 0, s.backend()) * s + Poly::constant(1, t);
}

Scalar coeff(const Poly& p, int k) { return p.coefficient(Monomial::unit(0, static_cast<unsigned>(k))); }

PlanarAffine make_affine(Scalar a00, Scalar a01, Scalar a10, Scalar a11, Scalar b0, Scalar b1) {
    return PlanarAffine{Matrix::from_rows({{a00, a01}, {a10, a11}}), {b0, b1}};
}

// second o first
PlanarAffine then_affine(const PlanarAffine& first, const PlanarAffine& second) {
    ScalarVec b = second.A.apply(first.b);
    for (std::size_t i = 0; i < 2; ++i) b[i] += second.b[i];
    return PlanarAffine{second.A * first.A, b};
}

// second o first for elementary maps
Elementary then_elementary(const Elementary& first, const Elementary& second) {
    Poly p = first.p * second.a + second.p.compose({y_linear(first.b, first.c)});
    return Elementary{second.a * first.a, second.b * first.b, second.b * first.c + second.c, clean(p)};
}

// e o s for s in S
Elementary elementary_after_s(const PlanarAffine& s, const Elementary& e) {
    const Scalar &al = s.A(0, 0), &be = s.A(0, 1), &de = s.A(1, 1);
    const Scalar &ga = s.b[0], &ep = s.b[1];
    Poly p = e.p.compose({y_linear(de, ep)}) + y_linear(e.a * be, e.a * ga);
    return Elementary{e.a * al, e.b * de, e.b * ep + e.c, clean(p)};
}

bool is_s_elementary(const Elementary& e) { return clean(e.p).degree() <= 1; }

PlanarAffine elementary_as_affine(const Elementary& e) {
    return make_affine(e.a, coeff(e.p, 1), Scalar::zero(e.a.backend()), e.b, coeff(e.p, 0), e.c);
}

Elementary affine_as_elementary(const PlanarAffine& a) {
    return Elementary{a.A(0, 0), a.A(1, 1), a.b[1], y_linear(a.A(0, 1), a.b[0])};
}

double matrix_scale(const Matrix& A) {
    double s = 0;
    for (std::size_t i = 0; i < A.rows(); ++i)
        for (std::size_t j = 0; j < A.cols(); ++j) s = std::max(s, A(i, j).abs());
    return s;
}

}  // namespace

PlanarAffine PlanarAffine::identity(Backend b) { return PlanarAffine{Matrix::identity(2, b), zeros(2, b)}; }

bool PlanarAffine::is_identity() const { return A.is_identity() && b[0].is_zero() && b[1].is_zero(); }

bool PlanarAffine::in_s() const { return negligible(A(1, 0), matrix_scale(A)); }

int Elementary::degree() const { return std::max(1, p.degree()); }

PolyMap to_polymap(const PlanarFactor& f) {
    if (auto* a = std::get_if<PlanarAffine>(&f)) return PolyMap::linear(a->A, a->b);
    const auto& e = std::get<Elementary>(f);
    const Backend b = e.a.backend();
    Poly x = Poly::variable(2, 0, b), y = Poly::variable(2, 1, b);
    return PolyMap({x * e.a + e.p.compose({y}), y * e.b + Poly::constant(2, e.c)});
}

PlanarFactor inverse(const PlanarFactor& f) {
    if (auto* a = std::get_if<PlanarAffine>(&f)) {
        Matrix Ai = a->A.inverse();
        ScalarVec b = Ai.apply(a->b);
        for (auto& v : b) v = -v;
        return PlanarAffine{Ai, b};
    }
    const auto& e = std::get<Elementary>(f);
    const Backend bk = e.a.backend();
    const Scalar one = Scalar::one(bk);
    const Scalar ai = one / e.a, bi = one / e.b;
    // y = (y' - c)/b, x = (x' - p(y))/a
    Poly p = e.p.compose({y_linear(bi, -e.c * bi)}) * (-ai);
    return Elementary{ai, bi, -e.c * bi, clean(p)};
}

int degree_of(const PlanarFactor& f) {
    if (std::holds_alternative<PlanarAffine>(f)) return 1;
    return std::get<Elementary>(f).degree();
}

PolyMap Factorization::recompose() const {
    PolyMap r = PolyMap::identity(2, source.backend());
    for (const auto& f : factors) r = compose(to_polymap(f), r);
    return r;
}

std::vector<PlanarFactor> canonicalize(std::vector<PlanarFactor> word, Backend bk) {
    std::vector<PlanarFactor> w;
    auto push = [&](auto&& self, PlanarFactor f) -> void {
        if (auto* e = std::get_if<Elementary>(&f); e && is_s_elementary(*e)) f = elementary_as_affine(*e);
        // S-elements next to an elementary factor merge into it.
        if (!w.empty()) {
            auto* a = std::get_if<PlanarAffine>(&f);
            auto* back = std::get_if<PlanarAffine>(&w.back());
            if (a && !back && a->in_s()) f = affine_as_elementary(*a);
            else if (!a && back && back->in_s()) w.back() = affine_as_elementary(*back);
        }
        if (!w.empty() && w.back().index() == f.index()) {
            PlanarFactor prev = std::move(w.back());
            w.pop_back();
            if (auto* a = std::get_if<PlanarAffine>(&f)) self(self, then_affine(std::get<PlanarAffine>(prev), *a));
            else self(self, then_elementary(std::get<Elementary>(prev), std::get<Elementary>(f)));
            return;
        }
        w.push_back(std::move(f));
    };
    for (auto& f : word) push(push, std::move(f));
    if (w.empty()) return {PlanarAffine::identity(bk)};
    if (w.size() == 1 && std::holds_alternative<PlanarAffine>(w[0])) return w;

    const Scalar zero = Scalar::zero(bk), one = Scalar::one(bk);
    std::vector<PlanarFactor> out;
    PlanarAffine carry = PlanarAffine::identity(bk);  // S-part applied before the next factor
    for (std::size_t i = 0; i < w.size(); ++i) {
        const bool last = i + 1 == w.size();
        if (auto* a = std::get_if<PlanarAffine>(&w[i])) {
            PlanarAffine full = then_affine(carry, *a);
            if (last) {
                if (!full.is_identity()) out.push_back(full);
                break;
            }
            if (full.in_s()) {
                carry = full;
                continue;
            }
            // full = s o r with r = (y, x + l y)
            const Scalar l = full.A(1, 1) / full.A(1, 0);
            PlanarAffine r = make_affine(zero, one, one, l, zero, zero);
            out.push_back(r);
            carry = then_affine(std::get<PlanarAffine>(inverse(r)), full);
            carry.A.set(1, 0, zero);
        } else {
            Elementary e = elementary_after_s(carry, std::get<Elementary>(w[i]));
            Poly q(1, bk);
            for (const auto& [m, c] : e.p.terms())
                if (m.degree() >= 2) q.add_term(m, c / e.a);
            out.push_back(Elementary{one, one, zero, q});
            carry = make_affine(e.a, coeff(e.p, 1), zero, e.b, coeff(e.p, 0), e.c);
            if (last && !carry.is_identity()) out.push_back(carry);
        }
    }
    return out;
}

Factorization jvdk_factor(const PolyMap& g) {
    if (g.dim() != 2 || g.num_params() != 0) throw Error(ErrorKind::ArityMismatch, "planar maps have two variables");
    const Backend bk = g.backend();
    const bool exact = bk == Backend::exact;
    Poly J = jacobian_det(g);
    if (!exact) J = J.chopped(kApproxTol * std::max(1.0, max_abs_coefficient(J)));
    if (J.degree() != 0) throw Error(ErrorKind::NonConstantJacobian, "Jacobian determinant is not a nonzero constant", J.to_string());

    Factorization f{{}, g, exact};
    Poly P = g[0], Q = g[1];
    const Scalar zero = Scalar::zero(bk), one = Scalar::one(bk);
    const PlanarAffine swap = make_affine(zero, one, one, zero, zero, zero);
    std::vector<PlanarFactor> reducers;  // left-composed onto g, in order
    const int budget = 4 * std::max(P.degree(), Q.degree()) + 4;
    for (int step = 0;; ++step) {
        if (step > budget) throw Error(ErrorKind::Internal, "degree reduction did not terminate");
        int dp = P.degree(), dq = Q.degree();
        if (std::max(dp, dq) <= 1) break;
        if (dp < dq) {
            std::swap(P, Q);
            std::swap(dp, dq);
            reducers.push_back(swap);
        }
        if (dq <= 0) throw Error(ErrorKind::NotAnAutomorphism, "a component is constant");
        if (dp % dq != 0)
            throw Error(ErrorKind::NotAnAutomorphism, "component degrees " + std::to_string(dp) + " and " +
                                                          std::to_string(dq) + " do not divide");
        const unsigned k = static_cast<unsigned>(dp / dq);
        const Poly pbar = P.homogeneous_part(dp);
        const Poly qk = Q.homogeneous_part(dq).pow(k);
        const Monomial lead = qk.terms().rbegin()->first;
        const Scalar c = pbar.coefficient(lead) / qk.terms().rbegin()->second;
        const Poly diff = pbar - qk * c;
        if (exact ? !diff.is_zero() : max_abs_coefficient(diff) > kApproxTol * max_abs_coefficient(pbar))
            throw Error(ErrorKind::NotAnAutomorphism, "leading forms are not proportional", diff.to_string());
        P = clean((P - Q.pow(k) * c).truncated(dp - 1));
        reducers.push_back(Elementary{one, one, zero, Poly::monomial(1, Monomial::unit(0, k), -c)});
    }

    std::vector<PlanarFactor> word;
    PolyMap rest({P, Q});
    word.push_back(PlanarAffine{rest.linear_part(), rest.center()});
    for (auto it = reducers.rbegin(); it != reducers.rend(); ++it) word.push_back(inverse(*it));
    f.factors = canonicalize(std::move(word), bk);
    return f;
}

Polydegree polydegree(const Factorization& f) {
    Polydegree pd;
    for (const auto& x : f.factors)
        if (int d = degree_of(x); d >= 2) pd.push_back(d);
    return pd;
}

int degree_of(const PolyMap& g) { return g.degree(); }

int stratum_dim(const Polydegree& pd) {
    int s = 6;
    for (int d : pd) s += d;
    return s;
}

Factorization invert_planar(const Factorization& f) {
    const Backend bk = f.source.backend();
    std::vector<PlanarFactor> word;
    for (auto it = f.factors.rbegin(); it != f.factors.rend(); ++it) word.push_back(inverse(*it));
    Factorization r{canonicalize(std::move(word), bk), PolyMap::identity(2, bk), f.certified};
    r.source = r.recompose();
    return r;
}

namespace {

struct Slots {
    PlanarAffine first;
    std::vector<Elementary> elementary;
    std::vector<PlanarAffine> middle;
    PlanarAffine last;
};

Slots split(const Factorization& f) {
    const Backend bk = f.source.backend();
    Slots s{PlanarAffine::identity(bk), {}, {}, PlanarAffine::identity(bk)};
    std::optional<PlanarAffine> pending;
    for (const auto& x : f.factors) {
        if (auto* a = std::get_if<PlanarAffine>(&x)) {
            pending = *a;
            continue;
        }
        if (pending) {
            if (s.elementary.empty()) s.first = *pending;
            else s.middle.push_back(*pending);
            pending.reset();
        }
        s.elementary.push_back(std::get<Elementary>(x));
    }
    if (pending) s.last = *pending;
    return s;
}

std::vector<Scalar> in_backend(std::vector<Scalar> v, Backend b) {
    for (auto& s : v) s = s.to_backend(b);
    return v;
}

void add_affine_family(ParamAutCurve& F, const std::vector<Scalar>& nodes, const std::vector<PlanarAffine>& affs) {
    const Backend b = F.backend();
    bool trivial = true;
    for (const auto& a : affs) trivial = trivial && a.is_identity();
    if (trivial) return;
    std::vector<Matrix> mats;
    for (const auto& a : affs) mats.push_back(a.A.to_backend(b));
    F.append(interp_linear(nodes, mats));
    AffineFactor shift;
    bool moves = false;
    for (std::size_t i = 0; i < 2; ++i) {
        shift.A.push_back({ParamFn::constant(Scalar::from_int(i == 0, b)), ParamFn::constant(Scalar::from_int(i == 1, b))});
        std::vector<Scalar> vals;
        for (const auto& a : affs) {
            vals.push_back(a.b[i].to_backend(b));
            moves = moves || !a.b[i].is_zero();
        }
        shift.b.push_back(ParamFn::polynomial(lagrange(nodes, vals)));
    }
    if (moves) F.push_back(std::move(shift));
}

}  // namespace

PlanarInterpolation planar_interpolation(const std::vector<Scalar>& nodes, const std::vector<PolyMap>& targets,
                                         std::optional<Backend> out_backend) {
    if (targets.empty()) throw Error(ErrorKind::InvalidInput, "no targets");
    if (nodes.size() != targets.size()) throw Error(ErrorKind::InvalidInput, "one target per node is required");
    const Backend tb = targets.front().backend();
    const Backend b = out_backend.value_or(tb);
    if (tb == Backend::approx && b == Backend::exact)
        throw Error(ErrorKind::BackendMismatch, "approximate targets cannot give an exact curve");
    for (const auto& t : targets)
        if (t.backend() != tb) throw Error(ErrorKind::BackendMismatch, "targets differ in backend");
    const std::vector<Scalar> xs = in_backend(nodes, b);
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (xs[i] == xs[j]) throw Error(ErrorKind::InvalidInput, "repeated node", xs[i].to_string());

    std::vector<Factorization> facts;
    for (const auto& t : targets) facts.push_back(jvdk_factor(t));

    PlanarInterpolation R{ParamAutCurve(2, b), {}, {}, {}};
    for (const auto& f : facts) {
        const Polydegree pd = polydegree(f);
        auto it = std::find(R.classes.begin(), R.classes.end(), pd);
        R.class_of.push_back(static_cast<std::size_t>(it - R.classes.begin()));
        if (it == R.classes.end()) R.classes.push_back(pd);
    }

    const ParamFn zero = ParamFn::constant(Scalar::zero(b)), one = ParamFn::constant(Scalar::one(b));
    for (std::size_t j = 0; j < R.classes.size(); ++j) {
        std::vector<Scalar> cn;
        std::vector<Slots> slots;
        for (std::size_t k = 0; k < xs.size(); ++k)
            if (R.class_of[k] == j) {
                cn.push_back(xs[k]);
                slots.push_back(split(facts[k]));
            }
        auto F = std::make_shared<ParamAutCurve>(2, b);
        auto collect = [&](auto get) {
            std::vector<PlanarAffine> v;
            for (const auto& s : slots) v.push_back(get(s));
            return v;
        };
        add_affine_family(*F, cn, collect([](const Slots& s) { return s.first; }));
        const std::size_t m = R.classes[j].size();
        for (std::size_t i = 0; i < m; ++i) {
            const int d = R.classes[j][i];
            ElementaryFactor e{one, one, zero, {zero, zero}};
            for (int k = 2; k <= d; ++k) {
                std::vector<Scalar> vals;
                for (const auto& s : slots) vals.push_back(coeff(s.elementary[i].p, k).to_backend(b));
                e.p.push_back(k < d ? ParamFn::polynomial(lagrange(cn, vals)) : nonvanishing_interpolant(cn, vals));
            }
            F->push_back(std::move(e));
            if (i + 1 < m) {
                std::vector<Scalar> lam;
                for (const auto& s : slots) lam.push_back(s.middle[i].A(1, 1).to_backend(b));
                F->push_back(AffineFactor{{{zero, one}, {one, ParamFn::polynomial(lagrange(cn, lam))}}, {zero, zero}});
            }
        }
        add_affine_family(*F, cn, collect([](const Slots& s) { return s.last; }));
        R.families.push_back(std::move(F));
    }

    // Assemble beta_1 o F_1(h_1) o ... o beta_n o F_n(h_n): the last class is applied first.
    for (std::size_t j = R.classes.size(); j-- > 0;) {
        std::vector<Scalar> cn, off;
        for (std::size_t k = 0; k < xs.size(); ++k) (R.class_of[k] == j ? cn : off).push_back(xs[k]);
        std::vector<Scalar> scale;
        for (const auto& x : cn) {
            Scalar p = Scalar::one(b);
            for (const auto& r : off) p *= x - r;
            scale.push_back(Scalar::one(b) / p);
        }
        ParamFn h = off.empty() ? one : ParamFn::vanishing(lagrange(cn, scale), off, Scalar::zero(b));
        R.curve.push_back(ScaledFactor{std::shared_ptr<const ParamAutCurve>(R.families[j]), h});

        std::vector<Matrix> mats;
        for (std::size_t k = 0; k < xs.size(); ++k)
            mats.push_back(R.class_of[k] == j ? Matrix::identity(2, b)
                                              : curve_polymap(*R.families[j], xs[k]).linear_part().inverse());
        R.curve.append(interp_linear(xs, mats));
    }
    return R;
}

ParamAutCurve interp_planar_bounded(const std::vector<Scalar>& nodes, const std::vector<PolyMap>& targets,
                                    std::optional<Backend> out) {
    return planar_interpolation(nodes, targets, out).curve;
}

}  // namespace shearkit
