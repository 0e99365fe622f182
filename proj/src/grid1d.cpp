#include "wallforge/grid1d.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <string>

#include "wallforge/errors.hpp"

namespace wallforge {

Grid make_grid(double R, double target_h) {
    if (!std::isfinite(R) || R <= 0.0)
        throw Error(ErrorCode::InvalidParams, "grid half-width R must be positive");
    if (!std::isfinite(target_h) || target_h <= 0.0)
        throw Error(ErrorCode::InvalidParams, "grid spacing must be positive");
    long intervals = static_cast<long>(std::ceil(2.0 * R / target_h));
    if (intervals < 4) intervals = 4;
    if (intervals % 2 != 0) ++intervals;  // even count keeps x = 0 on the grid
    if (intervals > 40'000'000)
        throw Error(ErrorCode::InvalidParams, "grid too fine");
    return Grid{R, static_cast<int>(intervals - 1)};
}

Profile make_profile(const Grid& g) {
    Profile prof;
    prof.grid = g;
    prof.u.assign(g.n_nodes(), 0.0);
    prof.v.assign(g.n_nodes(), 0.0);
    return prof;
}

std::pair<std::vector<double>, std::vector<double>> first_derivative(const Profile& prof) {
    const int N = prof.grid.n_nodes();
    const double h = prof.grid.h();
    std::vector<double> du(N), dv(N);
    auto deriv = [&](const std::vector<double>& f, std::vector<double>& d) {
        d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
        for (int i = 1; i + 1 < N; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
        d[N - 1] = (3.0 * f[N - 1] - 4.0 * f[N - 2] + f[N - 3]) / (2.0 * h);
    };
    deriv(prof.u, du);
    deriv(prof.v, dv);
    return {std::move(du), std::move(dv)};
}

std::pair<std::vector<double>, std::vector<double>> second_derivative(const Profile& prof) {
    const int n = prof.grid.n_interior;
    const double h2 = prof.grid.h() * prof.grid.h();
    std::vector<double> d2u(n), d2v(n);
    for (int i = 1; i <= n; ++i) {
        d2u[i - 1] = (prof.u[i - 1] - 2.0 * prof.u[i] + prof.u[i + 1]) / h2;
        d2v[i - 1] = (prof.v[i - 1] - 2.0 * prof.v[i] + prof.v[i + 1]) / h2;
    }
    return {std::move(d2u), std::move(d2v)};
}

std::vector<double> hamiltonian_nodes(const Params& p, const Profile& prof) {
    const int N = prof.grid.n_nodes();
    auto [du, dv] = first_derivative(prof);
    std::vector<double> h(N);
    for (int i = 0; i < N; ++i)
        h[i] = hamiltonian(p, prof.u[i], prof.v[i], du[i], dv[i]);
    return h;
}

double energy(const Params& p, const Profile& prof) {
    const int N = prof.grid.n_nodes();
    auto [du, dv] = first_derivative(prof);
    double acc = 0.0;
    double prev = energy_density(p, prof.u[0], prof.v[0], du[0], dv[0]);
    for (int i = 1; i < N; ++i) {
        const double cur = energy_density(p, prof.u[i], prof.v[i], du[i], dv[i]);
        acc += 0.5 * (prev + cur);
        prev = cur;
    }
    return acc * prof.grid.h();
}

// Cubic Lagrange value of f at offset t (in units of h) from node `base`.
static double cubic4(const std::vector<double>& f, int base, double t) {
    const double l0 = -(t - 1.0) * (t - 2.0) * (t - 3.0) / 6.0;
    const double l1 = t * (t - 2.0) * (t - 3.0) / 2.0;
    const double l2 = -t * (t - 1.0) * (t - 3.0) / 2.0;
    const double l3 = t * (t - 1.0) * (t - 2.0) / 6.0;
    return l0 * f[base] + l1 * f[base + 1] + l2 * f[base + 2] + l3 * f[base + 3];
}

static int stencil_base(const Grid& g, double y, double& t) {
    const double h = g.h();
    int cell = static_cast<int>(std::floor((y + g.R) / h));
    cell = std::clamp(cell, 0, g.n_nodes() - 2);
    const int base = std::clamp(cell - 1, 0, g.n_nodes() - 4);
    t = (y - g.x(base)) / h;
    return base;
}

std::pair<double, double> sample(const Profile& prof, double y) {
    const Grid& g = prof.grid;
    const int N = g.n_nodes();
    if (y <= -g.R) return {prof.u[0], prof.v[0]};
    if (y >= g.R) return {prof.u[N - 1], prof.v[N - 1]};
    double t;
    const int base = stencil_base(g, y, t);
    return {cubic4(prof.u, base, t), cubic4(prof.v, base, t)};
}

Profile recenter(const Profile& prof, double midpoint) {
    const Grid& g = prof.grid;
    const int N = g.n_nodes();
    if (N < 4) throw Error(ErrorCode::InvalidParams, "profile too small to recenter");

    // Bracket the crossing of u through `midpoint`.
    int cell = -1;
    double shift = 0.0;
    bool exact = false;
    for (int i = 0; i + 1 < N; ++i) {
        const double d0 = prof.u[i] - midpoint;
        const double d1 = prof.u[i + 1] - midpoint;
        if (d0 == 0.0) {
            cell = i;
            shift = g.x(i);
            exact = true;
            break;
        }
        if (d0 * d1 < 0.0) {
            cell = i;
            shift = g.x(i) + g.h() * d0 / (d0 - d1);  // linear estimate
            break;
        }
    }
    if (cell < 0) {
        if (prof.u[N - 1] == midpoint) {
            cell = N - 2;
            shift = g.x(N - 1);
            exact = true;
        } else {
            throw Error(ErrorCode::NotACrossing, "u does not cross the midpoint value");
        }
    }

    if (!exact) {
        double lo = g.x(cell), hi = g.x(cell + 1);
        double flo = prof.u[cell] - midpoint;
        for (int it = 0; it < 90 && hi - lo > 1e-15 * std::max(1.0, g.R); ++it) {
            const double mid = 0.5 * (lo + hi);
            const double fm = sample(prof, mid).first - midpoint;
            if (fm == 0.0) { lo = hi = mid; break; }
            if ((flo < 0.0) == (fm < 0.0)) { lo = mid; flo = fm; }
            else hi = mid;
        }
        shift = 0.5 * (lo + hi);
    }

    Profile out = make_profile(g);
    for (int j = 0; j < N; ++j) {
        auto [uj, vj] = sample(prof, g.x(j) + shift);
        out.u[j] = uj;
        out.v[j] = vj;
    }
    out.u[0] = prof.u[0];
    out.v[0] = prof.v[0];
    out.u[N - 1] = prof.u[N - 1];
    out.v[N - 1] = prof.v[N - 1];
    return out;
}

void write_profile_csv(const std::string& path, const Profile& prof) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw Error(ErrorCode::ParseError, "cannot open " + path + " for writing");
    std::fputs("x,u,v\n", f);
    char line[128];
    for (int i = 0; i < prof.grid.n_nodes(); ++i) {
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", prof.grid.x(i), prof.u[i],
                      prof.v[i]);
        std::fputs(line, f);
    }
    if (std::fclose(f) != 0) throw Error(ErrorCode::ParseError, "write failed for " + path);
}

Profile read_profile_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorCode::ParseError, path + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "x,u,v") throw Error(ErrorCode::ParseError, path + ": expected header x,u,v");

    std::vector<double> xs, us, vs;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const char* s = line.c_str();
        char* end = nullptr;
        double vals[3];
        for (int k = 0; k < 3; ++k) {
            vals[k] = std::strtod(s, &end);
            if (end == s)
                throw Error(ErrorCode::ParseError,
                            path + ": bad number on line " + std::to_string(lineno));
            s = end;
            if (k < 2) {
                if (*s != ',')
                    throw Error(ErrorCode::ParseError,
                                path + ": expected comma on line " + std::to_string(lineno));
                ++s;
            }
        }
        if (!std::isfinite(vals[0]) || !std::isfinite(vals[1]) || !std::isfinite(vals[2]))
            throw Error(ErrorCode::ParseError,
                        path + ": non-finite value on line " + std::to_string(lineno));
        xs.push_back(vals[0]);
        us.push_back(vals[1]);
        vs.push_back(vals[2]);
    }
    const int N = static_cast<int>(xs.size());
    if (N < 5) throw Error(ErrorCode::ParseError, path + ": need at least 5 rows");
    const double R = xs.back();
    if (R <= 0.0 || std::abs(xs.front() + R) > 1e-9 * std::max(1.0, R))
        throw Error(ErrorCode::ParseError, path + ": x range is not symmetric [-R, R]");

    Profile prof;
    prof.grid = Grid{R, N - 2};
    for (int i = 0; i < N; ++i)
        if (std::abs(xs[i] - prof.grid.x(i)) > 1e-9 * std::max(1.0, R))
            throw Error(ErrorCode::ParseError, path + ": nodes are not uniformly spaced");
    prof.u = std::move(us);
    prof.v = std::move(vs);
    return prof;
}

}  // namespace wallforge
