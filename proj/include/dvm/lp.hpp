#pragma once

#include <algorithm>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dvm/rational.hpp"

namespace dvm {

enum class Rel { GE, EQ, LE };
enum class LpStatus { Optimal, Infeasible, Unbounded };

inline const char* rel_text(Rel r) { return r == Rel::GE ? ">=" : r == Rel::EQ ? "=" : "<="; }

struct LpRow {
    std::vector<Rat> a;
    Rel rel = Rel::GE;
    Rat rhs;
    std::string id;
};

// Sparse-by-hand dense LP: minimize objective . x subject to rows and the
// default bound x >= 0 (per-variable opt-out via free_var). Everything is
// exact rational; there is no floating-point presolve anywhere.
struct LinearProgram {
    int num_vars = 0;
    std::vector<Rat> objective;
    std::vector<LpRow> rows;
    std::vector<bool> free_var;
    std::vector<std::string> var_names;

    int add_var(const std::string& name, bool is_free = false) {
        var_names.push_back(name);
        free_var.push_back(is_free);
        objective.push_back(Rat(0));
        return num_vars++;
    }

    void set_objective(int var, Rat coeff) { objective[var] = std::move(coeff); }

    void add_row(std::vector<Rat> a, Rel rel, Rat rhs, std::string id) {
        if (static_cast<int>(a.size()) != num_vars)
            throw MalformedProgram("row '" + id + "' has wrong length");
        rows.push_back({std::move(a), rel, std::move(rhs), std::move(id)});
    }

    int row_index(const std::string& id) const {
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (rows[i].id == id) return static_cast<int>(i);
        return -1;
    }
};

struct LpSolution {
    LpStatus status = LpStatus::Optimal;
    Rat objective;
    std::vector<Rat> x;    // primal values; a feasible point also when Unbounded
    std::vector<Rat> y;    // dual value per row (Optimal only)
    std::vector<Rat> ray;  // improving direction (Unbounded only)
};

// One constraint per line, for external cross-checking.
inline std::string lp_to_text(const LinearProgram& lp) {
    std::ostringstream os;
    auto term = [&](std::ostringstream& s, const Rat& c, int j, bool& first) {
        if (c == 0) return;
        if (!first) s << " + ";
        first = false;
        s << to_string(c) << ' ' << (j < static_cast<int>(lp.var_names.size()) ? lp.var_names[j] : "x" + std::to_string(j));
    };
    os << "min:";
    {
        std::ostringstream s;
        bool first = true;
        for (int j = 0; j < lp.num_vars; ++j) term(s, lp.objective[j], j, first);
        os << (first ? " 0" : " " + s.str()) << '\n';
    }
    for (const auto& row : lp.rows) {
        std::ostringstream s;
        bool first = true;
        for (int j = 0; j < lp.num_vars; ++j) term(s, row.a[j], j, first);
        os << row.id << ": " << (first ? "0" : s.str()) << ' ' << rel_text(row.rel) << ' '
           << to_string(row.rhs) << '\n';
    }
    return os.str();
}

namespace simplex_detail {

struct Standard {
    // Column layout: structural columns (free variables split into +/-),
    // then slack columns, then artificial columns.
    int ncols = 0;
    std::vector<int> pos_col, neg_col;     // per original var; neg_col = -1 unless free
    std::vector<int> sigma;                // row scaling into equality form
    std::vector<int> id_col;               // identity column per row (slack or artificial)
    std::vector<int> art_cols;
    std::vector<std::vector<Rat>> A;       // m x ncols
    std::vector<Rat> b;                    // >= 0
};

inline Standard build(const LinearProgram& lp) {
    Standard st;
    int m = static_cast<int>(lp.rows.size());
    st.pos_col.resize(lp.num_vars);
    st.neg_col.assign(lp.num_vars, -1);
    for (int j = 0; j < lp.num_vars; ++j) {
        st.pos_col[j] = st.ncols++;
        if (lp.free_var[j]) st.neg_col[j] = st.ncols++;
    }
    st.sigma.resize(m);
    st.id_col.assign(m, -1);
    std::vector<int> slack_sign(m, 0);
    std::vector<bool> needs_art(m, false);
    for (int i = 0; i < m; ++i) {
        const LpRow& row = lp.rows[i];
        if (row.rel == Rel::EQ) {
            st.sigma[i] = sgn(row.rhs) < 0 ? -1 : 1;
            needs_art[i] = true;
        } else {
            bool le = row.rel == Rel::LE;
            bool nonneg = le ? sgn(row.rhs) >= 0 : sgn(row.rhs) <= 0;
            st.sigma[i] = (le == nonneg) ? 1 : -1;
            if (nonneg) {
                slack_sign[i] = 1;  // slack basis
            } else {
                slack_sign[i] = -1;  // surplus; artificial carries the basis
                needs_art[i] = true;
            }
        }
    }
    std::vector<int> slack_col(m, -1), art_col(m, -1);
    for (int i = 0; i < m; ++i)
        if (slack_sign[i] != 0) slack_col[i] = st.ncols++;
    for (int i = 0; i < m; ++i)
        if (needs_art[i]) {
            art_col[i] = st.ncols++;
            st.art_cols.push_back(art_col[i]);
        }
    st.A.assign(m, std::vector<Rat>(st.ncols, Rat(0)));
    st.b.resize(m);
    for (int i = 0; i < m; ++i) {
        const LpRow& row = lp.rows[i];
        for (int j = 0; j < lp.num_vars; ++j) {
            if (row.a[j] == 0) continue;
            Rat v = st.sigma[i] * row.a[j];
            st.A[i][st.pos_col[j]] = v;
            if (st.neg_col[j] >= 0) st.A[i][st.neg_col[j]] = -v;
        }
        if (slack_col[i] >= 0) st.A[i][slack_col[i]] = Rat(slack_sign[i]);
        if (art_col[i] >= 0) st.A[i][art_col[i]] = Rat(1);
        st.b[i] = st.sigma[i] * row.rhs;
        st.id_col[i] = art_col[i] >= 0 ? art_col[i] : slack_col[i];
    }
    return st;
}

struct Tableau {
    std::vector<std::vector<Rat>> T;  // m x ncols
    std::vector<Rat> rhs;             // m
    std::vector<int> basis;           // m
    int ncols = 0;

    void pivot(int pr, int pc) {
        Rat piv = T[pr][pc];
        for (auto& v : T[pr]) v /= piv;
        rhs[pr] /= piv;
        for (std::size_t i = 0; i < T.size(); ++i) {
            if (static_cast<int>(i) == pr) continue;
            Rat factor = T[i][pc];
            if (factor == 0) continue;
            for (int j = 0; j < ncols; ++j)
                if (T[pr][j] != 0) T[i][j] -= factor * T[pr][j];
            rhs[i] -= factor * rhs[pr];
        }
        basis[pr] = pc;
    }
};

// Bland's rule on the given cost vector; `allowed` masks columns that may
// enter. Returns Optimal or Unbounded (entering column reported via *ray_col).
inline LpStatus run_simplex(Tableau& tab, const std::vector<Rat>& cost,
                            const std::vector<bool>& allowed, int* ray_col) {
    int m = static_cast<int>(tab.T.size());
    std::vector<Rat> r(tab.ncols);
    for (int j = 0; j < tab.ncols; ++j) {
        Rat zj = 0;
        for (int i = 0; i < m; ++i)
            if (cost[tab.basis[i]] != 0 && tab.T[i][j] != 0) zj += cost[tab.basis[i]] * tab.T[i][j];
        r[j] = cost[j] - zj;
    }
    for (;;) {
        int enter = -1;
        for (int j = 0; j < tab.ncols; ++j)
            if (allowed[j] && sgn(r[j]) < 0) {
                enter = j;
                break;
            }
        if (enter < 0) return LpStatus::Optimal;
        int leave = -1;
        Rat best_ratio;
        for (int i = 0; i < m; ++i) {
            if (sgn(tab.T[i][enter]) <= 0) continue;
            Rat ratio = tab.rhs[i] / tab.T[i][enter];
            if (leave < 0 || ratio < best_ratio ||
                (ratio == best_ratio && tab.basis[i] < tab.basis[leave])) {
                leave = i;
                best_ratio = ratio;
            }
        }
        if (leave < 0) {
            if (ray_col) *ray_col = enter;
            return LpStatus::Unbounded;
        }
        Rat rq = r[enter];
        tab.pivot(leave, enter);
        for (int j = 0; j < tab.ncols; ++j)
            if (tab.T[leave][j] != 0) r[j] -= rq * tab.T[leave][j];
    }
}

}  // namespace simplex_detail

// Exact two-phase dense simplex with Bland's anti-cycling rule. Free
// variables are split into differences of nonnegatives; duals are recovered
// from the final basis and satisfy strong duality exactly.
inline LpSolution lp_solve(const LinearProgram& lp) {
    using namespace simplex_detail;
    for (const auto& row : lp.rows)
        if (static_cast<int>(row.a.size()) != lp.num_vars)
            throw MalformedProgram("row '" + row.id + "' has wrong length");

    Standard st = build(lp);
    int m = static_cast<int>(lp.rows.size());

    Tableau tab;
    tab.ncols = st.ncols;
    tab.T = st.A;
    tab.rhs = st.b;
    tab.basis.resize(m);
    for (int i = 0; i < m; ++i) tab.basis[i] = st.id_col[i];

    std::vector<bool> is_art(st.ncols, false);
    for (int c : st.art_cols) is_art[c] = true;

    if (!st.art_cols.empty()) {
        std::vector<Rat> cost1(st.ncols, Rat(0));
        for (int c : st.art_cols) cost1[c] = Rat(1);
        std::vector<bool> allowed(st.ncols, true);
        int ray_col = -1;
        LpStatus s1 = run_simplex(tab, cost1, allowed, &ray_col);
        if (s1 != LpStatus::Optimal) throw MalformedProgram("phase 1 cannot be unbounded");
        Rat infeas = 0;
        for (int i = 0; i < m; ++i)
            if (is_art[tab.basis[i]]) infeas += tab.rhs[i];
        if (infeas != 0) {
            LpSolution sol;
            sol.status = LpStatus::Infeasible;
            return sol;
        }
        // Pivot remaining zero-level artificials out where possible. One that
        // cannot leave marks a redundant row; it stays basic at 0, blocked
        // from entering, and its tableau row is zero on all real columns, so
        // neither solutions nor rays pick up any artificial component.
        for (int i = 0; i < m; ++i) {
            if (!is_art[tab.basis[i]]) continue;
            for (int j = 0; j < st.ncols; ++j)
                if (!is_art[j] && tab.T[i][j] != 0) {
                    tab.pivot(i, j);
                    break;
                }
        }
    }

    std::vector<Rat> cost2(st.ncols, Rat(0));
    for (int j = 0; j < lp.num_vars; ++j) {
        cost2[st.pos_col[j]] = lp.objective[j];
        if (st.neg_col[j] >= 0) cost2[st.neg_col[j]] = -lp.objective[j];
    }
    std::vector<bool> allowed(st.ncols, true);
    for (int c : st.art_cols) allowed[c] = false;

    int ray_col = -1;
    LpStatus s2 = run_simplex(tab, cost2, allowed, &ray_col);

    auto std_value = [&](int col) {
        for (int i = 0; i < m; ++i)
            if (tab.basis[i] == col) return tab.rhs[i];
        return Rat(0);
    };
    auto extract_x = [&]() {
        std::vector<Rat> x(lp.num_vars);
        for (int j = 0; j < lp.num_vars; ++j) {
            x[j] = std_value(st.pos_col[j]);
            if (st.neg_col[j] >= 0) x[j] -= std_value(st.neg_col[j]);
        }
        return x;
    };

    LpSolution sol;
    sol.x = extract_x();
    if (s2 == LpStatus::Unbounded) {
        sol.status = LpStatus::Unbounded;
        std::vector<Rat> dir_std(st.ncols, Rat(0));
        dir_std[ray_col] = 1;
        for (int i = 0; i < m; ++i) dir_std[tab.basis[i]] = -tab.T[i][ray_col];
        sol.ray.assign(lp.num_vars, Rat(0));
        for (int j = 0; j < lp.num_vars; ++j) {
            sol.ray[j] = dir_std[st.pos_col[j]];
            if (st.neg_col[j] >= 0) sol.ray[j] -= dir_std[st.neg_col[j]];
        }
        return sol;
    }

    sol.status = LpStatus::Optimal;
    sol.objective = 0;
    for (int j = 0; j < lp.num_vars; ++j)
        if (lp.objective[j] != 0) sol.objective += lp.objective[j] * sol.x[j];

    // Duals: y_eq = c_B B^[-1], read off under each row's identity column,
    // then mapped back through the row scaling.
    sol.y.resize(m);
    for (int i = 0; i < m; ++i) {
        Rat yi = 0;
        for (int k = 0; k < m; ++k)
            if (cost2[tab.basis[k]] != 0 && tab.T[k][st.id_col[i]] != 0)
                yi += cost2[tab.basis[k]] * tab.T[k][st.id_col[i]];
        sol.y[i] = Rat(st.sigma[i]) * yi;
    }
    return sol;
}

// Exact optimality/feasibility audit of a solution against the program:
// residual signs, dual signs, complementary slackness, reduced costs and
// strong duality for Optimal; feasibility plus an improving homogeneous
// direction for Unbounded.
inline bool verify_kkt(const LinearProgram& lp, const LpSolution& sol) {
    auto feasible = [&](const std::vector<Rat>& x) {
        for (int j = 0; j < lp.num_vars; ++j)
            if (!lp.free_var[j] && sgn(x[j]) < 0) return false;
        for (const auto& row : lp.rows) {
            Rat v = 0;
            for (int j = 0; j < lp.num_vars; ++j)
                if (row.a[j] != 0) v += row.a[j] * x[j];
            int s = sgn(v - row.rhs);
            if (row.rel == Rel::GE && s < 0) return false;
            if (row.rel == Rel::LE && s > 0) return false;
            if (row.rel == Rel::EQ && s != 0) return false;
        }
        return true;
    };

    if (sol.status == LpStatus::Infeasible) return true;  // nothing to audit here
    if (!feasible(sol.x)) return false;

    if (sol.status == LpStatus::Unbounded) {
        for (int j = 0; j < lp.num_vars; ++j)
            if (!lp.free_var[j] && sgn(sol.ray[j]) < 0) return false;
        Rat cd = 0;
        for (int j = 0; j < lp.num_vars; ++j) cd += lp.objective[j] * sol.ray[j];
        if (sgn(cd) >= 0) return false;
        for (const auto& row : lp.rows) {
            Rat v = 0;
            for (int j = 0; j < lp.num_vars; ++j)
                if (row.a[j] != 0) v += row.a[j] * sol.ray[j];
            int s = sgn(v);
            if (row.rel == Rel::GE && s < 0) return false;
            if (row.rel == Rel::LE && s > 0) return false;
            if (row.rel == Rel::EQ && s != 0) return false;
        }
        return true;
    }

    int m = static_cast<int>(lp.rows.size());
    // Dual signs and complementary slackness on rows.
    for (int i = 0; i < m; ++i) {
        const LpRow& row = lp.rows[i];
        if (row.rel == Rel::GE && sgn(sol.y[i]) < 0) return false;
        if (row.rel == Rel::LE && sgn(sol.y[i]) > 0) return false;
        Rat v = 0;
        for (int j = 0; j < lp.num_vars; ++j)
            if (row.a[j] != 0) v += row.a[j] * sol.x[j];
        if (sol.y[i] != 0 && v != row.rhs) return false;
    }
    // Reduced costs and their slackness on variables.
    for (int j = 0; j < lp.num_vars; ++j) {
        Rat red = lp.objective[j];
        for (int i = 0; i < m; ++i)
            if (lp.rows[i].a[j] != 0) red -= sol.y[i] * lp.rows[i].a[j];
        if (lp.free_var[j]) {
            if (red != 0) return false;
        } else {
            if (sgn(red) < 0) return false;
            if (red != 0 && sol.x[j] != 0) return false;
        }
    }
    // Strong duality.
    Rat dual_obj = 0;
    for (int i = 0; i < m; ++i)
        if (sol.y[i] != 0) dual_obj += sol.y[i] * lp.rows[i].rhs;
    return dual_obj == sol.objective;
}

}  // namespace dvm
