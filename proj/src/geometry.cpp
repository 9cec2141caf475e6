#include "canon/geometry.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <optional>
#include <numbers>
#include <random>

#include "canon/errors.hpp"

namespace canon {

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI{0.0, 1.0};

struct Step {
    int from, exit, to, entry;  // cusp triangle ids are 4*tet + vertex
};

// Rows for closed paths of cusp triangles; left turns count +log, right turns -log.
// A U-turn reverses the crossing side and contributes a factor -1, counted in uturns.
std::vector<ShapeTerm> holonomy_terms(const std::vector<Step>& path, int& uturns) {
    std::vector<ShapeTerm> out;
    uturns = 0;
    const int n = static_cast<int>(path.size());
    for (int i = 0; i < n; ++i) {
        const Step& a = path[i];
        const Step& b = path[(i + 1) % n];
        const int t = a.to / 4, v = a.to % 4;
        const int f_in = a.entry, f_out = b.exit;
        if (f_in == f_out) {
            ++uturns;
            continue;
        }
        const int w = 6 - v - f_in - f_out;
        const auto& ord = cusp_corner_order(v);
        int k = 1;
        while (ord[k] != w) ++k;
        const bool left = ord[1 + (k % 3)] == f_out;
        out.push_back({t, shape_slot(edge_index(v, w)), left ? 1 : -1});
    }
    return out;
}

void reduce_terms(const std::vector<ShapeTerm>& terms, int row, GluingEquations& eqs) {
    for (const auto& term : terms) {
        if (term.slot == 0) {
            eqs.A(row, term.tet) += term.power;
        } else if (term.slot == 1) {
            eqs.B(row, term.tet) -= term.power;
        } else {
            eqs.A(row, term.tet) -= term.power;
            eqs.B(row, term.tet) += term.power;
            eqs.C(row) += term.power;
        }
    }
}

Eigen::VectorXd row_vector(const GluingEquations& eqs, int row) {
    Eigen::VectorXd r(2 * eqs.tets);
    for (int t = 0; t < eqs.tets; ++t) {
        r(t) = eqs.A(row, t);
        r(eqs.tets + t) = eqs.B(row, t);
    }
    return r;
}

double zeta_even(int n) {
    // Euler-Maclaurin for zeta(2n) with cutoff K.
    const int K = 100;
    const double s = 2.0 * n;
    double sum = 0;
    for (int k = 1; k < K; ++k) sum += std::pow(k, -s);
    const double Ks = std::pow(K, -s);
    sum += K * Ks / (s - 1) + Ks / 2 + s * Ks / (12.0 * K) - s * (s + 1) * (s + 2) * Ks / (720.0 * K * K * K);
    return sum;
}

}  // namespace

int shape_slot(int edge) { return edge < 5 - edge ? edge : 5 - edge; }

const std::array<int, 4>& cusp_corner_order(int v) {
    static const std::array<std::array<int, 4>, 4> orders{{{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 0, 1, 3}, {3, 0, 2, 1}}};
    return orders.at(v);
}

GluingEquations derive_equations(const Triangulation& t) {
    auto rep = validate(t);
    if (!rep.valid || rep.unglued_faces > 0)
        throw Error(Errc::InvalidTriangulation, rep.violations.empty() ? "triangulation has unglued faces"
                                                                       : rep.violations.front());
    const int n = t.size();
    const auto classes = edge_classes(t);
    int ncusp = 0;
    const auto vc = vertex_classes(t, &ncusp);

    GluingEquations eqs;
    eqs.tets = n;
    eqs.edge_rows = static_cast<int>(classes.size());
    eqs.cusps = ncusp;
    const int rows = eqs.edge_rows + 2 * ncusp;
    eqs.A = Eigen::MatrixXi::Zero(rows, n);
    eqs.B = Eigen::MatrixXi::Zero(rows, n);
    eqs.C = Eigen::VectorXi::Zero(rows);
    eqs.target = Eigen::VectorXcd::Zero(rows);
    eqs.terms.resize(rows);

    for (int i = 0; i < eqs.edge_rows; ++i) {
        for (auto [tet, e] : classes[i].members) eqs.terms[i].push_back({tet, shape_slot(e), 1});
        reduce_terms(eqs.terms[i], i, eqs);
        eqs.target(i) = 2 * kPi * kI;
    }

    Eigen::MatrixXd span(eqs.edge_rows, 2 * n);
    for (int i = 0; i < eqs.edge_rows; ++i) span.row(i) = row_vector(eqs, i).transpose();

    for (int c = 0; c < ncusp; ++c) {
        // Spanning tree of the cusp triangles of this cusp.
        std::map<int, Step> parent;
        int root = -1;
        for (int tet = 0; tet < n && root < 0; ++tet)
            for (int v = 0; v < 4; ++v)
                if (vc[tet][v] == c) {
                    root = 4 * tet + v;
                    break;
                }
        std::vector<int> order{root};
        parent[root] = {-1, -1, root, -1};
        for (std::size_t q = 0; q < order.size(); ++q) {
            const int x = order[q], tet = x / 4, v = x % 4;
            for (int f = 0; f < 4; ++f) {
                if (f == v) continue;
                const int u = t.tets[tet].neighbor[f];
                const Perm& p = t.tets[tet].gluing[f];
                const int y = 4 * u + p[v];
                if (parent.count(y)) continue;
                parent[y] = {x, f, y, p[f]};
                order.push_back(y);
            }
        }
        auto to_root = [&](int x) {
            std::vector<Step> steps;
            while (parent[x].from >= 0) {
                steps.push_back(parent[x]);
                x = parent[x].from;
            }
            std::reverse(steps.begin(), steps.end());
            return steps;
        };

        int found = 0;
        Eigen::MatrixXd basis = span;
        for (int x : order) {
            if (found == 2) break;
            const int tet = x / 4, v = x % 4;
            for (int f = 0; f < 4 && found < 2; ++f) {
                if (f == v) continue;
                const int u = t.tets[tet].neighbor[f];
                const Perm& p = t.tets[tet].gluing[f];
                const int y = 4 * u + p[v];
                const Step& py = parent[y];
                const Step& px = parent[x];
                if ((py.from == x && py.exit == f) || (px.from == y && px.entry == f)) continue;
                if (std::make_pair(x, f) > std::make_pair(y, static_cast<int>(p[f]))) continue;
                std::vector<Step> path = to_root(x);
                path.push_back({x, f, y, p[f]});
                auto back = to_root(y);
                for (auto it = back.rbegin(); it != back.rend(); ++it) path.push_back({it->to, it->entry, it->from, it->exit});
                if (path.size() < 2) continue;

                const int row = eqs.edge_rows + 2 * c + found;
                int uturns = 0;
                auto terms = holonomy_terms(path, uturns);
                eqs.terms[row] = terms;
                reduce_terms(terms, row, eqs);
                eqs.C(row) += uturns;
                Eigen::MatrixXd trial(basis.rows() + 1, basis.cols());
                trial << basis, row_vector(eqs, row).transpose();
                Eigen::FullPivLU<Eigen::MatrixXd> before(basis), after(trial);
                if (after.rank() > before.rank()) {
                    basis = trial;
                    ++found;
                } else {
                    eqs.A.row(row).setZero();
                    eqs.B.row(row).setZero();
                    eqs.C(row) = 0;
                    eqs.terms[row].clear();
                }
            }
        }
        if (found < 2) throw Error(Errc::InvalidTriangulation, "cusp " + std::to_string(c) + " has no two independent cycles");
    }
    return eqs;
}

Eigen::VectorXcd residual(const GluingEquations& eqs, const ShapeAssignment& z) {
    Eigen::VectorXcd u(eqs.tets), l(eqs.tets);
    for (int t = 0; t < eqs.tets; ++t) {
        u(t) = std::log(z(t));
        l(t) = std::log(1.0 - z(t));
    }
    Eigen::VectorXcd f = eqs.A.cast<Complex>() * u + eqs.B.cast<Complex>() * l;
    for (int i = 0; i < eqs.rows(); ++i) {
        f(i) += kI * kPi * static_cast<double>(eqs.C(i)) - eqs.target(i);
        if (i >= eqs.edge_rows) {
            // Holonomy derivative is only defined up to 2*pi*i.
            f(i) -= kI * (2 * kPi * std::round(f(i).imag() / (2 * kPi)));
        }
    }
    return f;
}

Eigen::MatrixXcd jacobian(const GluingEquations& eqs, const ShapeAssignment& z) {
    Eigen::VectorXcd d(eqs.tets);
    for (int t = 0; t < eqs.tets; ++t) d(t) = -z(t) / (1.0 - z(t));
    return eqs.A.cast<Complex>() + eqs.B.cast<Complex>() * d.asDiagonal();
}

namespace {

bool admissible(const Eigen::VectorXcd& u) {
    for (int t = 0; t < u.size(); ++t)
        if (!(u(t).imag() > 0 && u(t).imag() < kPi) || !std::isfinite(u(t).real())) return false;
    return true;
}

// One damped Newton run; returns true on convergence.
bool newton(const GluingEquations& eqs, Eigen::VectorXcd u, const SolveOptions& opt, SolveResult& out) {
    out.history.clear();
    ShapeAssignment z = u.array().exp();
    Eigen::VectorXcd f = residual(eqs, z);
    for (int it = 0; it <= opt.max_iterations; ++it) {
        const double r = f.cwiseAbs().maxCoeff();
        out.history.push_back(r);
        if (r < opt.tol) {
            // Two polishing steps, kept only while they help.
            for (int p = 0; p < 2; ++p) {
                Eigen::VectorXcd trial = u + jacobian(eqs, z).colPivHouseholderQr().solve(-f);
                if (!admissible(trial)) break;
                ShapeAssignment zt = trial.array().exp();
                Eigen::VectorXcd ft = residual(eqs, zt);
                if (!(ft.cwiseAbs().maxCoeff() < f.cwiseAbs().maxCoeff())) break;
                u = trial;
                z = zt;
                f = ft;
            }
            out.shapes = z;
            out.residual = f.cwiseAbs().maxCoeff();
            out.iterations = it;
            return true;
        }
        if (it == opt.max_iterations) break;
        Eigen::VectorXcd step = jacobian(eqs, z).colPivHouseholderQr().solve(-f);
        if (!step.allFinite()) return false;
        double scale = 1.0;
        bool moved = false;
        for (int h = 0; h < 40; ++h, scale *= 0.5) {
            Eigen::VectorXcd trial = u + scale * step;
            if (!admissible(trial)) continue;
            ShapeAssignment zt = trial.array().exp();
            Eigen::VectorXcd ft = residual(eqs, zt);
            if (ft.norm() < f.norm() || ft.cwiseAbs().maxCoeff() < opt.tol) {
                u = trial;
                z = zt;
                f = ft;
                moved = true;
                break;
            }
        }
        if (!moved) return false;
    }
    return false;
}

}  // namespace

std::optional<ShapeAssignment> max_volume_shapes(const GluingEquations& eqs) {
    const int n = eqs.tets, m = n + eqs.edge_rows;
    if (n == 0) return std::nullopt;
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(m, 3 * n);
    Eigen::VectorXd b(m);
    for (int t = 0; t < n; ++t) {
        C.row(t).segment(3 * t, 3).setOnes();
        b(t) = kPi;
    }
    for (int i = 0; i < eqs.edge_rows; ++i) {
        for (const auto& term : eqs.terms[i]) C(n + i, 3 * term.tet + term.slot) += term.power;
        b(n + i) = 2 * kPi;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(C, Eigen::ComputeFullU | Eigen::ComputeFullV);
    svd.setThreshold(1e-9);
    const Eigen::VectorXd p = svd.solve(b);
    if ((C * p - b).norm() > 1e-8) return std::nullopt;
    const Eigen::MatrixXd N = svd.matrixV().rightCols(3 * n - svd.rank());
    const int k = static_cast<int>(N.cols());
    Eigen::VectorXd w = Eigen::VectorXd::Zero(k);

    // Phase one: push min angle above zero with a log barrier in (w, s).
    double s = 1 - p.minCoeff();
    auto barrier = [&](const Eigen::VectorXd& ww, double ss, double mu) {
        const Eigen::ArrayXd a = (p + N * ww).array() + ss;
        if ((a <= 0).any()) return std::numeric_limits<double>::infinity();
        return ss - mu * a.log().sum();
    };
    for (double mu = 1; mu > 1e-9 && s >= 0; mu *= 0.2) {
        for (int it = 0; it < 100 && s >= 0; ++it) {
            const Eigen::VectorXd q = ((p + N * w).array() + s).inverse().matrix();
            const Eigen::VectorXd q2 = q.array().square().matrix();
            Eigen::MatrixXd H(k + 1, k + 1);
            H.topLeftCorner(k, k) = mu * N.transpose() * q2.asDiagonal() * N;
            H.topRightCorner(k, 1) = mu * N.transpose() * q2;
            H.bottomLeftCorner(1, k) = H.topRightCorner(k, 1).transpose();
            H(k, k) = mu * q2.sum();
            Eigen::VectorXd g(k + 1);
            g << -mu * N.transpose() * q, 1 - mu * q.sum();
            const Eigen::VectorXd d = -H.ldlt().solve(g);
            const double dec = -g.dot(d);
            if (!(dec > 1e-12)) break;
            const double f0 = barrier(w, s, mu);
            double a = 1;
            while (barrier(w + a * d.head(k), s + a * d(k), mu) > f0 - 0.25 * a * dec && a > 1e-12) a *= 0.5;
            w += a * d.head(k);
            s += a * d(k);
        }
    }
    if (s >= 0) return std::nullopt;  // no positive angle structure

    // Phase two: the volume is strictly concave on angle structures.
    auto vol = [&](const Eigen::VectorXd& ww) {
        const Eigen::VectorXd th = p + N * ww;
        if ((th.array() <= 0).any() || (th.array() >= kPi).any()) return -std::numeric_limits<double>::infinity();
        double v = 0;
        for (int i = 0; i < th.size(); ++i) v += lobachevsky(th(i));
        return v;
    };
    for (int it = 0; it < 200; ++it) {
        const Eigen::VectorXd th = p + N * w;
        Eigen::VectorXd g(3 * n), h(3 * n);
        for (int i = 0; i < 3 * n; ++i) {
            g(i) = -std::log(2 * std::sin(th(i)));
            h(i) = -1 / std::tan(th(i));
        }
        const Eigen::VectorXd G = N.transpose() * g;
        const Eigen::MatrixXd H = N.transpose() * h.asDiagonal() * N;
        const Eigen::VectorXd d = H.ldlt().solve(-G);
        const double dec = G.dot(d);
        if (!(dec > 1e-24)) break;
        const double v0 = vol(w);
        double a = 1;
        while (vol(w + a * d) < v0 + 0.25 * a * dec && a > 1e-14) a *= 0.5;
        if (a <= 1e-14) break;
        w += a * d;
    }
    const Eigen::VectorXd th = p + N * w;
    if (th.minCoeff() < 1e-7) return std::nullopt;  // maximum on the boundary

    ShapeAssignment z(n);
    for (int t = 0; t < n; ++t)
        z(t) = std::sin(th(3 * t + 1)) / std::sin(th(3 * t + 2)) * std::polar(1.0, th(3 * t));
    return z;
}

SolveResult solve(const GluingEquations& eqs, const ShapeAssignment& init, const SolveOptions& opt) {
    if (!(opt.tol > 0)) throw Error(Errc::Precondition, "tolerance must be positive");
    if (init.size() != eqs.tets) throw Error(Errc::Precondition, "initial shapes do not match the tetrahedra");
    for (int t = 0; t < init.size(); ++t)
        if (!(init(t).imag() > 0)) throw Error(Errc::Precondition, "initial shapes must lie in the upper half plane");

    SolveResult out;
    Eigen::VectorXcd u0 = init.array().log();
    std::optional<ShapeAssignment> vmax;
    if (newton(eqs, u0, opt, out)) {
        out.restarts_used = 0;
    } else if ((vmax = max_volume_shapes(eqs)) && newton(eqs, vmax->array().log().matrix(), opt, out)) {
        out.restarts_used = 0;
        out.from_max_volume = true;
    } else {
        std::mt19937_64 rng(opt.seed);
        std::uniform_real_distribution<double> arg(0.3, kPi - 0.3), mod(-0.7, 0.7);
        bool ok = false;
        for (int k = 1; k <= opt.restarts && !ok; ++k) {
            Eigen::VectorXcd u(eqs.tets);
            for (int t = 0; t < eqs.tets; ++t) u(t) = Complex(mod(rng), arg(rng));
            if (newton(eqs, u, opt, out)) {
                out.restarts_used = k;
                ok = true;
            }
        }
        if (!ok)
            throw Error(Errc::NoConvergence,
                        vmax ? "Newton iteration failed from the initial guess, the volume maximiser and all restarts"
                             : "Newton iteration failed from the initial guess and all restarts; the volume has no "
                               "interior maximum over angle structures");
    }
    for (int t = 0; t < out.shapes.size(); ++t)
        if (out.shapes(t).imag() <= 1e-9)
            throw Error(Errc::DegenerateShape, "tetrahedron " + std::to_string(t) + " is flat");
    return out;
}

SolveResult solve(const GluingEquations& eqs, const ShapeAssignment& init, double tol) {
    SolveOptions opt;
    opt.tol = tol;
    opt.seed = seed_from_env();
    return solve(eqs, init, opt);
}

ShapeAssignment regular_shapes(int n) {
    return ShapeAssignment::Constant(n, std::polar(1.0, kPi / 3));
}

std::uint64_t seed_from_env() {
    const char* s = std::getenv("CANON_SEED");
    if (!s || !*s) return 0;
    return std::strtoull(s, nullptr, 10);
}

double lobachevsky(double theta) {
    // Odd and pi-periodic; reduce to [-pi/2, pi/2].
    theta = std::remainder(theta, kPi);
    if (theta == 0) return 0;
    static const std::vector<double> coeff = [] {
        std::vector<double> c;
        for (int n = 1; n <= 30; ++n) c.push_back(zeta_even(n) / (n * (2.0 * n + 1)));
        return c;
    }();
    const double x2 = (theta / kPi) * (theta / kPi);
    double sum = 0, pw = 1;
    for (double c : coeff) {
        pw *= x2;
        sum += c * pw;
    }
    return theta * (1 - std::log(std::abs(2 * theta)) + sum);
}

double volume(const ShapeAssignment& z) {
    double v = 0;
    for (int t = 0; t < z.size(); ++t)
        for (int s = 0; s < 3; ++s) v += lobachevsky(std::arg(shape_in_slot(z(t), s)));
    return v;
}

}  // namespace canon
