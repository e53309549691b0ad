// Catalog builders. Each builder mirrors its published model: same variable
// layout, same constraint order, same tags, so regenerated instances are
// structurally reproducible.
#include <xcore/generators.hpp>

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

namespace xcore
{
    namespace
    {
        using nlohmann::json;

        auto require(bool ok, const std::string & msg) -> void
        {
            if (!ok)
                throw BuildError(msg);
        }

        auto vx(int id) -> Expr { return ex_var(id); }
        auto lit(Value v) -> Expr { return ex_lit(v); }

        auto nm(const char * base, int i) -> std::string
        {
            return std::string(base) + "[" + std::to_string(i) + "]";
        }

        auto nm(const char * base, int i, int j) -> std::string
        {
            return std::string(base) + "[" + std::to_string(i) + "][" + std::to_string(j) + "]";
        }

        auto ones(size_t count) -> std::vector<Value>
        {
            return std::vector<Value>(count, 1);
        }

        // t-subsets of {0..k-1} in lexicographic order.
        auto combinations(int k, int t) -> std::vector<std::vector<int>>
        {
            std::vector<std::vector<int>> out;
            if (t > k || t < 0)
                return out;
            std::vector<int> co(t);
            std::iota(co.begin(), co.end(), 0);
            while (true)
            {
                out.push_back(co);
                int pos = t - 1;
                while (pos >= 0 && co[pos] == k - t + pos)
                    --pos;
                if (pos < 0)
                    break;
                ++co[pos];
                for (int q = pos + 1; q < t; ++q)
                    co[q] = co[q - 1] + 1;
            }
            return out;
        }

        auto ipow(Value base, int exp) -> Value
        {
            Value r = 1;
            for (int i = 0; i < exp; ++i)
                r *= base;
            return r;
        }

        auto isqrt(Value s) -> Value
        {
            auto r = static_cast<Value>(std::llround(std::sqrt(static_cast<double>(s))));
            while (r * r > s)
                --r;
            while ((r + 1) * (r + 1) <= s)
                ++r;
            return r;
        }

        auto sorted_values(std::vector<Value> vals) -> std::vector<Value>
        {
            std::sort(vals.begin(), vals.end());
            vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
            return vals;
        }

        auto matrix_values(const std::vector<std::vector<Value>> & m) -> std::vector<Value>
        {
            std::vector<Value> vals;
            for (const auto & row : m)
                vals.insert(vals.end(), row.begin(), row.end());
            return sorted_values(std::move(vals));
        }

        auto require_rect(const std::vector<std::vector<Value>> & m, const std::string & what) -> void
        {
            require(!m.empty() && !m[0].empty(), what + " must be non-empty");
            for (const auto & row : m)
                require(row.size() == m[0].size(), what + " must be rectangular");
        }
    }

    // ---- AnotherMagicSquare -------------------------------------------------

    auto another_magic_square(int n) -> Instance
    {
        require(n >= 1, "another_magic_square: n must be positive");
        InstanceBuilder b("another_magic_square-" + std::to_string(n));
        b.set_meta("problem", "another_magic_square");
        b.set_meta("n", std::to_string(n));

        std::vector<std::vector<int>> x(n, std::vector<int>(n));
        std::vector<int> flat;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
            {
                x[i][j] = b.add_var(nm("x", i, j), Domain::range(1, Value(n) * n));
                flat.push_back(x[i][j]);
            }

        b.post(CAllDifferent{flat, {}});

        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
            {
                std::vector<Expr> around;
                for (int di = -1; di <= 1; ++di)
                    for (int dj = -1; dj <= 1; ++dj)
                    {
                        if (di == 0 && dj == 0)
                            continue;
                        int ii = i + di, jj = j + dj;
                        if (ii < 0 || ii >= n || jj < 0 || jj >= n)
                            continue;
                        around.push_back(vx(x[ii][jj]));
                    }
                Expr total = around.empty() ? lit(0) : ex_sum(std::move(around));
                b.post(CIntension{ex_eq(ex_mod(std::move(total), vx(x[i][j])), lit(0))});
            }

        return b.build();
    }

    // ---- AntimagicSquare ----------------------------------------------------

    auto antimagic_square(int n) -> Instance
    {
        require(n >= 2, "antimagic_square: n must be at least 2");
        InstanceBuilder b("antimagic_square-" + std::to_string(n));
        b.set_meta("problem", "antimagic_square");
        b.set_meta("n", std::to_string(n));

        Value lb = Value(n) * (n + 1) / 2;
        Value ub = Value(n) * n * (Value(n) * n + 1) / 2;

        std::vector<std::vector<int>> x(n, std::vector<int>(n));
        std::vector<int> flat;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
            {
                x[i][j] = b.add_var(nm("x", i, j), Domain::range(1, Value(n) * n));
                flat.push_back(x[i][j]);
            }

        std::vector<int> y(2 * n + 2);
        for (int t = 0; t < 2 * n + 2; ++t)
            y[t] = b.add_var(nm("y", t), Domain::range(lb, ub));
        int ymax = b.add_var("ymax", Domain::range(lb, ub));
        int ymin = b.add_var("ymin", Domain::range(lb, ub));

        b.post(CAllDifferent{flat, {}});

        auto line_sum = [&](const std::vector<int> & line, int target)
        {
            b.post(CSum{line, ones(line.size()), Cmp::Eq, ValOrVar::of_var(target)});
        };
        for (int i = 0; i < n; ++i)
            line_sum(x[i], y[i]);
        for (int j = 0; j < n; ++j)
        {
            std::vector<int> col;
            for (int i = 0; i < n; ++i)
                col.push_back(x[i][j]);
            line_sum(col, y[n + j]);
        }
        std::vector<int> down, up;
        for (int i = 0; i < n; ++i)
        {
            down.push_back(x[i][i]);
            up.push_back(x[n - 1 - i][i]);
        }
        line_sum(down, y[2 * n]);
        line_sum(up, y[2 * n + 1]);

        b.post(CAllDifferent{y, {}});
        b.post(CMaximum{y, Cmp::Eq, ValOrVar::of_var(ymax)});
        b.post(CMinimum{y, Cmp::Eq, ValOrVar::of_var(ymin)});
        b.post(CIntension{ex_eq(vx(ymax) - vx(ymin), lit(2 * Value(n) + 1))});

        // Frenicle form: fix the corner ordering of the square.
        b.post(CIntension{ex_lt(vx(x[0][0]), vx(x[0][n - 1]))}, "symmetry-breaking");
        b.post(CIntension{ex_lt(vx(x[0][0]), vx(x[n - 1][0]))}, "symmetry-breaking");
        b.post(CIntension{ex_lt(vx(x[0][0]), vx(x[n - 1][n - 1]))}, "symmetry-breaking");
        b.post(CIntension{ex_lt(vx(x[0][1]), vx(x[1][0]))}, "symmetry-breaking");

        return b.build();
    }

    // ---- BinaryPuzzle -------------------------------------------------------

    namespace
    {
        // Row language: no three equal consecutive cells, exactly m ones.
        // States track (ones so far, current run of zeros, current run of ones);
        // exactly one run counter is nonzero after the first symbol.
        auto binary_row_automaton(int m) -> Automaton
        {
            auto q = [](int i, int j, int k) { return (i * 3 + j) * 3 + k; };
            const std::vector<std::pair<int, int>> pairs = {{0, 1}, {0, 2}, {1, 0}, {2, 0}};

            Automaton a;
            a.start = q(0, 0, 0);
            a.transitions.push_back({q(0, 0, 0), 0, q(0, 1, 0)});
            a.transitions.push_back({q(0, 0, 0), 1, q(1, 0, 1)});
            for (int i = 0; i <= m; ++i)
                for (auto [j, k] : pairs)
                    if (j < 2)
                        a.transitions.push_back({q(i, j, k), 0, q(i, j + 1, 0)});
            for (int i = 0; i < m; ++i)
                for (auto [j, k] : pairs)
                    if (k < 2)
                        a.transitions.push_back({q(i, j, k), 1, q(i + 1, 0, k + 1)});
            for (auto [j, k] : pairs)
                a.finals.push_back(q(m, j, k));
            return a;
        }
    }

    auto binary_puzzle(int n, const std::string & variant) -> Instance
    {
        require(n >= 2 && n % 2 == 0, "binary_puzzle: n must be even and at least 2");
        require(variant == "main" || variant == "regular",
            "binary_puzzle: variant must be \"main\" or \"regular\"");
        InstanceBuilder b("binary_puzzle-" + std::to_string(n) + "-" + variant);
        b.set_meta("problem", "binary_puzzle");
        b.set_meta("n", std::to_string(n));
        b.set_meta("variant", variant);

        int m = n / 2;
        std::vector<std::vector<int>> x(n, std::vector<int>(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                x[i][j] = b.add_var(nm("x", i, j), Domain::range(0, 1));

        std::vector<std::vector<int>> rows = x, cols(n, std::vector<int>(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                cols[j][i] = x[i][j];

        if (variant == "main")
        {
            for (int i = 0; i < n; ++i)
                b.post(CSum{rows[i], ones(n), Cmp::Eq, ValOrVar::of_value(m)});
            for (int j = 0; j < n; ++j)
                b.post(CSum{cols[j], ones(n), Cmp::Eq, ValOrVar::of_value(m)});
            auto windows = [&](const std::vector<std::vector<int>> & lines)
            {
                for (const auto & line : lines)
                    for (int j = 0; j + 3 <= n; ++j)
                    {
                        std::vector<int> w(line.begin() + j, line.begin() + j + 3);
                        b.post(CSum{w, ones(3), Cmp::Ge, ValOrVar::of_value(1)});
                        b.post(CSum{w, ones(3), Cmp::Le, ValOrVar::of_value(2)});
                    }
            };
            windows(rows);
            windows(cols);
        }
        else
        {
            Automaton a = binary_row_automaton(m);
            for (int i = 0; i < n; ++i)
                b.post(CRegular{rows[i], a});
            for (int j = 0; j < n; ++j)
                b.post(CRegular{cols[j], a});
        }

        b.post(CAllDifferentList{rows});
        b.post(CAllDifferentList{cols});

        return b.build();
    }

    // ---- CalvinPuzzle -------------------------------------------------------

    auto calvin_puzzle(int n, const std::string & variant) -> Instance
    {
        require(n >= 4, "calvin_puzzle: n must be at least 4");
        require(variant == "main" || variant == "table",
            "calvin_puzzle: variant must be \"main\" or \"table\"");
        InstanceBuilder b("calvin_puzzle-" + std::to_string(n) + "-" + variant);
        b.set_meta("problem", "calvin_puzzle");
        b.set_meta("n", std::to_string(n));
        b.set_meta("variant", variant);

        const std::vector<std::pair<int, int>> offsets =
            {{-3, 0}, {3, 0}, {0, -3}, {0, 3}, {-2, -2}, {-2, 2}, {2, -2}, {2, 2}};

        std::vector<std::vector<int>> x(n, std::vector<int>(n));
        std::vector<int> flat;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
            {
                x[i][j] = b.add_var(nm("x", i, j), Domain::range(1, Value(n) * n));
                flat.push_back(x[i][j]);
            }

        auto neighbors = [&](int i, int j)
        {
            std::vector<int> nbrs;
            for (auto [di, dj] : offsets)
            {
                int ii = i + di, jj = j + dj;
                if (ii >= 0 && ii < n && jj >= 0 && jj < n)
                    nbrs.push_back(x[ii][jj]);
            }
            return nbrs;
        };

        b.post(CAllDifferent{flat, {}});

        Value last = Value(n) * n;
        if (variant == "main")
        {
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                {
                    std::vector<Expr> hits;
                    for (int nb : neighbors(i, j))
                        hits.push_back(ex_eq(vx(nb), vx(x[i][j]) + lit(1)));
                    require(!hits.empty(), "calvin_puzzle: isolated cell");
                    b.post(CIntension{ex_imp(ex_lt(vx(x[i][j]), lit(last)), ex_or(std::move(hits)))});
                }
        }
        else
        {
            // One starred table per arity: value k forces k+1 at exactly one
            // neighbor position, the last value is unconstrained.
            std::map<int, std::shared_ptr<const Tuples>> by_arity;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                {
                    auto nbrs = neighbors(i, j);
                    int r = static_cast<int>(nbrs.size()) + 1;
                    auto it = by_arity.find(r);
                    if (it == by_arity.end())
                    {
                        Tuples t;
                        for (Value k = 1; k < last; ++k)
                            for (int pos = 1; pos < r; ++pos)
                            {
                                std::vector<Value> row(r, STAR);
                                row[0] = k;
                                row[pos] = k + 1;
                                t.push_back(std::move(row));
                            }
                        std::vector<Value> stop(r, STAR);
                        stop[0] = last;
                        t.push_back(std::move(stop));
                        it = by_arity.emplace(r, std::make_shared<const Tuples>(std::move(t))).first;
                    }
                    std::vector<int> scope = {x[i][j]};
                    scope.insert(scope.end(), nbrs.begin(), nbrs.end());
                    b.post(CExtension{std::move(scope), it->second, true, true});
                }
        }

        b.post(CIntension{ex_eq(vx(x[0][0]), lit(1))}, "symmetry-breaking");

        return b.build();
    }

    // ---- Coloring -----------------------------------------------------------

    auto coloring(const ColoringData & data) -> Instance
    {
        require(data.n >= 1, "coloring: n must be positive");
        require(data.n_colors >= 1, "coloring: nColors must be positive");
        InstanceBuilder b("coloring-n" + std::to_string(data.n) + "-c" + std::to_string(data.n_colors)
            + "-e" + std::to_string(data.edges.size()));
        b.set_meta("problem", "coloring");

        std::vector<int> x(data.n);
        for (int i = 0; i < data.n; ++i)
            x[i] = b.add_var(nm("x", i), Domain::range(0, data.n_colors - 1));

        for (auto [u, w] : data.edges)
        {
            require(u >= 0 && u < data.n && w >= 0 && w < data.n, "coloring: edge endpoint out of range");
            b.post(CIntension{ex_ne(vx(x[u]), vx(x[w]))});
        }

        for (int i = 0; i < std::min(data.n, data.n_colors); ++i)
            b.post(CIntension{ex_le(vx(x[i]), lit(i))}, "symmetry-breaking");

        return b.build();
    }

    // ---- CoveringArray ------------------------------------------------------

    auto covering_array(int t, int k, int g, int b_cols) -> Instance
    {
        require(t >= 1 && k >= t, "covering_array: need k >= t >= 1");
        require(g >= 1 && b_cols >= 1, "covering_array: g and b must be positive");
        InstanceBuilder b("covering_array-" + std::to_string(t) + "-" + std::to_string(k)
            + "-" + std::to_string(g) + "-" + std::to_string(b_cols));
        b.set_meta("problem", "covering_array");

        auto combos = combinations(k, t);
        int n = static_cast<int>(combos.size());
        Value d = ipow(g, t);

        // Every full column over the alphabet induces one value per row
        // combination; the distinct induced vectors are the allowed columns.
        std::set<std::vector<Value>> seen;
        std::vector<int> pr(k, 0);
        while (true)
        {
            std::vector<Value> row;
            row.reserve(n);
            for (const auto & co : combos)
            {
                Value val = 0;
                for (int a : co)
                    val = val * g + pr[a];
                row.push_back(val);
            }
            seen.insert(std::move(row));
            int pos = k - 1;
            while (pos >= 0 && pr[pos] == g - 1)
                pr[pos--] = 0;
            if (pos < 0)
                break;
            ++pr[pos];
        }
        auto table = std::make_shared<const Tuples>(Tuples(seen.begin(), seen.end()));

        std::vector<std::vector<int>> p(n), v(n);
        for (int i = 0; i < n; ++i)
        {
            p[i].resize(d);
            for (Value j = 0; j < d; ++j)
                p[i][j] = b.add_var(nm("p", i, static_cast<int>(j)), Domain::range(0, b_cols - 1));
        }
        for (int i = 0; i < n; ++i)
        {
            v[i].resize(b_cols);
            for (int j = 0; j < b_cols; ++j)
                v[i][j] = b.add_var(nm("v", i, j), Domain::range(0, d - 1));
        }

        for (int i = 0; i < n; ++i)
            b.post(CAllDifferent{p[i], {}});
        for (int i = 0; i < n; ++i)
            b.post(CChannel{p[i], v[i], {}});
        for (int j = 0; j < b_cols; ++j)
        {
            std::vector<int> col;
            for (int i = 0; i < n; ++i)
                col.push_back(v[i][j]);
            b.post(CExtension{std::move(col), table, true, false});
        }

        return b.build();
    }

    // ---- Dominoes -----------------------------------------------------------

    auto dominoes(const std::vector<std::vector<int>> & grid) -> Instance
    {
        require(!grid.empty() && !grid[0].empty(), "dominoes: grid must be non-empty");
        int n_rows = static_cast<int>(grid.size());
        int n_cols = static_cast<int>(grid[0].size());
        for (const auto & row : grid)
            require(static_cast<int>(row.size()) == n_cols, "dominoes: grid must be rectangular");
        int n_values = n_rows;
        for (const auto & row : grid)
            for (int cell : row)
                require(cell >= 0 && cell < n_values, "dominoes: cell value out of range");

        InstanceBuilder b("dominoes-" + std::to_string(n_rows) + "x" + std::to_string(n_cols));
        b.set_meta("problem", "dominoes");

        std::vector<std::vector<Value>> positions(n_values);
        for (int i = 0; i < n_rows; ++i)
            for (int j = 0; j < n_cols; ++j)
                positions[grid[i][j]].push_back(Value(i) * n_cols + j);

        Value cells = Value(n_rows) * n_cols;
        std::vector<std::pair<int, int>> pieces;
        for (int i = 0; i < n_values; ++i)
            for (int j = i; j < n_values; ++j)
                pieces.emplace_back(i, j);

        std::map<std::pair<int, int>, int> x, y;
        std::vector<int> all;
        for (auto [i, j] : pieces)
            x[{i, j}] = b.add_var(nm("x", i, j), Domain::range(0, cells - 1));
        for (auto [i, j] : pieces)
            y[{i, j}] = b.add_var(nm("y", i, j), Domain::range(0, cells - 1));
        for (auto [i, j] : pieces)
            all.push_back(x[{i, j}]);
        for (auto [i, j] : pieces)
            all.push_back(y[{i, j}]);

        b.post(CAllDifferent{all, {}});

        std::vector<std::shared_ptr<const Tuples>> cell_table(n_values);
        for (int v = 0; v < n_values; ++v)
        {
            Tuples t;
            for (Value pos : positions[v])
                t.push_back({pos});
            cell_table[v] = std::make_shared<const Tuples>(std::move(t));
        }
        for (auto [i, j] : pieces)
            b.post(CExtension{{x[{i, j}]}, cell_table[i], true, false});
        for (auto [i, j] : pieces)
            b.post(CExtension{{y[{i, j}]}, cell_table[j], true, false});

        for (auto [i, j] : pieces)
        {
            Expr xe = vx(x[{i, j}]), ye = vx(y[{i, j}]);
            Expr adjacent = ex_and({ex_eq(ex_dist(xe, ye), lit(1)),
                ex_eq(ex_div(xe, lit(n_cols)), ex_div(ye, lit(n_cols)))});
            b.post(CIntension{ex_imp(ex_ne(ex_dist(xe, ye), lit(n_cols)), std::move(adjacent))});
        }

        return b.build();
    }

    // ---- NonTransitiveDice --------------------------------------------------

    auto non_transitive_dice(int n, int m, int d) -> Instance
    {
        require(n >= 2 && m >= 1, "non_transitive_dice: need n >= 2 and m >= 1");
        require(d >= 0, "non_transitive_dice: d must be non-negative");
        if (d == 0)
            d = 2 * m;
        InstanceBuilder b("non_transitive_dice-" + std::to_string(n) + "-" + std::to_string(m)
            + "-" + std::to_string(d));
        b.set_meta("problem", "non_transitive_dice");

        std::vector<std::vector<int>> x(n, std::vector<int>(m));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < m; ++j)
                x[i][j] = b.add_var(nm("x", i, j), Domain::range(0, d - 1));
        std::vector<std::array<int, 2>> y(n);
        for (int i = 0; i < n; ++i)
            for (int c = 0; c < 2; ++c)
                y[i][c] = b.add_var(nm("y", i, c), Domain::range(0, Value(m) * m));
        std::vector<int> gap(n);
        for (int i = 0; i < n; ++i)
            gap[i] = b.add_var(nm("gap", i), Domain::range(1, Value(m) * m));
        int z = b.add_var("z", Domain::range(0, d - 1));

        for (int i = 0; i < n; ++i)
            b.post(COrdered{x[i], true, false}, "symmetry-breaking");

        auto wins = [&](int die_a, int die_b)
        {
            std::vector<Expr> terms;
            for (int r1 = 0; r1 < m; ++r1)
                for (int r2 = 0; r2 < m; ++r2)
                    terms.push_back(ex_gt(vx(x[die_a][r1]), vx(x[die_b][r2])));
            return ex_sum(std::move(terms));
        };
        for (int i = 0; i < n; ++i)
            b.post(CIntension{ex_eq(vx(y[i][0]), wins(i, (i + 1) % n))});
        for (int i = 0; i < n; ++i)
            b.post(CIntension{ex_eq(vx(y[i][1]), wins((i + 1) % n, i))});

        for (int i = 0; i < n; ++i)
            b.post(CSum{{y[i][0], y[i][1], gap[i]}, {1, -1, -1}, Cmp::Eq, ValOrVar::of_value(0)});

        std::vector<int> flat;
        for (int i = 0; i < n; ++i)
            flat.insert(flat.end(), x[i].begin(), x[i].end());
        b.post(CMaximum{flat, Cmp::Eq, ValOrVar::of_var(z)});

        return b.build();
    }

    // ---- PythagoreanTriples -------------------------------------------------

    auto pythagorean_conflicts(int n) -> std::vector<std::array<int, 3>>
    {
        std::vector<std::array<int, 3>> out;
        Value nn = Value(n) * n;
        for (int i = 1; i <= n; ++i)
            for (int j = i + 1; j <= n; ++j)
            {
                Value s = Value(i) * i + Value(j) * j;
                if (s > nn)
                    break;
                Value k = isqrt(s);
                if (k * k == s)
                    out.push_back({i, j, static_cast<int>(k)});
            }
        return out;
    }

    auto pythagorean_triples(int n) -> Instance
    {
        require(n >= 1, "pythagorean_triples: n must be positive");
        InstanceBuilder b("pythagorean_triples-" + std::to_string(n));
        b.set_meta("problem", "pythagorean_triples");
        b.set_meta("n", std::to_string(n));

        std::vector<int> x(n + 1);
        for (int i = 0; i <= n; ++i)
            x[i] = b.add_var(nm("x", i), Domain::range(0, 1));

        b.post(CIntension{ex_eq(vx(x[0]), lit(0))});
        for (const auto & [i, j, k] : pythagorean_conflicts(n))
            b.post(CNValues{{x[i], x[j], x[k]}, Cmp::Gt, ValOrVar::of_value(1)});

        return b.build();
    }

    // ---- Slant --------------------------------------------------------------

    auto slant(const std::vector<std::vector<int>> & grid) -> Instance
    {
        int n = static_cast<int>(grid.size());
        require(n >= 2, "slant: node grid must be at least 2x2");
        for (const auto & row : grid)
        {
            require(static_cast<int>(row.size()) == n, "slant: grid must be square");
            for (int c : row)
                require(c >= -1 && c <= 4, "slant: clue must be -1 or 0..4");
        }
        InstanceBuilder b("slant-" + std::to_string(n));
        b.set_meta("problem", "slant");

        constexpr Value down_diag = 0, up_diag = 1;

        std::vector<std::vector<int>> e(n - 1, std::vector<int>(n - 1));
        for (int k = 0; k < n - 1; ++k)
            for (int l = 0; l < n - 1; ++l)
                e[k][l] = b.add_var(nm("e", k, l), Domain::range(0, 1));
        std::vector<std::vector<int>> x(n, std::vector<int>(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                x[i][j] = b.add_var(nm("x", i, j),
                    grid[i][j] == -1 ? Domain::range(0, 4) : Domain({Value(grid[i][j])}));
        std::vector<std::vector<int>> dd(n, std::vector<int>(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                dd[i][j] = b.add_var(nm("d", i, j), Domain::range(0, Value(n) * n));

        // (cell k, cell l, orientation, other node i, other node j).
        struct Link { int k, l; Value a; int ii, jj; };
        auto connections_of = [&](int i, int j)
        {
            std::vector<Link> out;
            if (i > 0 && j > 0)
                out.push_back({i - 1, j - 1, down_diag, i - 1, j - 1});
            if (i > 0 && j < n - 1)
                out.push_back({i - 1, j, up_diag, i - 1, j + 1});
            if (i < n - 1 && j > 0)
                out.push_back({i, j - 1, up_diag, i + 1, j - 1});
            if (i < n - 1 && j < n - 1)
                out.push_back({i, j, down_diag, i + 1, j + 1});
            return out;
        };

        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
            {
                std::vector<Expr> incident;
                for (const auto & c : connections_of(i, j))
                    incident.push_back(ex_eq(vx(e[c.k][c.l]), lit(c.a)));
                b.post(CIntension{ex_eq(vx(x[i][j]), ex_sum(std::move(incident)))});
            }
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                b.post(CIntension{ex_imp(ex_eq(vx(x[i][j]), lit(0)), ex_eq(vx(dd[i][j]), lit(0)))});
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                b.post(CIntension{ex_imp(ex_gt(vx(x[i][j]), lit(1)), ex_ne(vx(dd[i][j]), lit(0)))});
        // Acyclicity: every junction node has exactly one neighbor closer to
        // its component root along the distance labels.
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
            {
                std::vector<Expr> parents;
                for (const auto & c : connections_of(i, j))
                    parents.push_back(ex_and({ex_eq(vx(e[c.k][c.l]), lit(c.a)),
                        ex_eq(vx(dd[i][j]), vx(dd[c.ii][c.jj]) + lit(1))}));
                b.post(CIntension{ex_imp(ex_gt(vx(x[i][j]), lit(1)),
                    ex_eq(ex_sum(std::move(parents)), lit(1)))});
            }
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (const auto & c : connections_of(i, j))
                    b.post(CIntension{ex_imp(ex_eq(vx(e[c.k][c.l]), lit(c.a)),
                        ex_eq(ex_dist(vx(dd[i][j]), vx(dd[c.ii][c.jj])), lit(1)))});

        return b.build();
    }

    // ---- SquarePackingSuite -------------------------------------------------

    auto square_packing(int n) -> Instance
    {
        require(n >= 6 && n <= 27, "square_packing: n must be in 6..27");
        static const std::vector<std::array<int, 2>> containers =
        {
            {9, 11}, {7, 22}, {14, 15}, {15, 20}, {15, 27}, {19, 27}, {23, 29},
            {22, 38}, {23, 45}, {23, 55}, {27, 56}, {39, 46}, {31, 69}, {47, 53},
            {34, 85}, {38, 88}, {39, 98}, {64, 68}, {56, 88}, {43, 129}, {70, 89},
            {47, 148},
        };
        // Known-unusable border offsets per square size.
        static const std::vector<std::vector<Value>> reduction = []
        {
            std::vector<std::vector<Value>> t = {{}, {1, 2}, {2, 3}, {2}};
            auto rep = [&](Value v, int count)
            {
                for (int i = 0; i < count; ++i)
                    t.push_back({v});
            };
            rep(3, 4);
            rep(4, 3);
            rep(5, 6);
            rep(6, 4);
            rep(7, 8);
            rep(8, 5);
            rep(9, 11);
            rep(10, 1);
            return t;
        }();

        int width = containers[n - 6][0], height = containers[n - 6][1];
        InstanceBuilder b("square_packing-" + std::to_string(n));
        b.set_meta("problem", "square_packing");
        b.set_meta("n", std::to_string(n));

        std::vector<int> x(n), y(n);
        for (int i = 0; i < n; ++i)
            x[i] = b.add_var(nm("x", i), Domain::range(0, width - i - 1));
        for (int i = 0; i < n; ++i)
            y[i] = b.add_var(nm("y", i), Domain::range(0, height - i - 1));

        std::vector<Value> sizes(n);
        std::iota(sizes.begin(), sizes.end(), 1);

        std::vector<NoOverlapItem> items;
        for (int i = 0; i < n; ++i)
            items.push_back({{x[i], y[i]}, {sizes[i], sizes[i]}});
        b.post(CNoOverlap{std::move(items)});

        b.post(CCumulative{x, sizes, sizes, Cmp::Le, ValOrVar::of_value(height)},
            "redundant-constraints");
        b.post(CCumulative{y, sizes, sizes, Cmp::Le, ValOrVar::of_value(width)},
            "redundant-constraints");

        b.post(CIntension{ex_le(vx(x[n - 1]), lit((width - n) / 2))}, "symmetry-breaking");
        b.post(CIntension{ex_le(vx(y[n - 1]), lit((height - n) / 2))}, "symmetry-breaking");
        for (int i = 0; i < n; ++i)
            for (Value v : reduction[i])
                b.post(CIntension{ex_ne(vx(x[i]), lit(v))}, "symmetry-breaking");
        for (int i = 0; i < n; ++i)
            for (Value v : reduction[i])
                b.post(CIntension{ex_ne(vx(y[i]), lit(v))}, "symmetry-breaking");

        return b.build();
    }

    // ---- WordDesign ---------------------------------------------------------

    auto word_design_words() -> std::vector<std::array<int, 8>>
    {
        std::vector<std::array<int, 8>> out;
        std::array<int, 8> w{};
        while (true)
        {
            int gc = 0, rcdist = 0;
            for (int k = 0; k < 8; ++k)
            {
                gc += (w[k] == 1 || w[k] == 2) ? 1 : 0;
                rcdist += (w[7 - k] != 3 - w[k]) ? 1 : 0;
            }
            if (gc == 4 && rcdist >= 4)
                out.push_back(w);
            int pos = 7;
            while (pos >= 0 && w[pos] == 3)
                w[pos--] = 0;
            if (pos < 0)
                break;
            ++w[pos];
        }
        return out;
    }

    auto word_design(int n) -> Instance
    {
        require(n >= 1, "word_design: n must be positive");
        InstanceBuilder b("word_design-" + std::to_string(n));
        b.set_meta("problem", "word_design");
        b.set_meta("n", std::to_string(n));

        auto words = word_design_words();
        Tuples t;
        for (const auto & w : words)
            t.push_back(std::vector<Value>(w.begin(), w.end()));
        auto table = std::make_shared<const Tuples>(std::move(t));

        std::vector<std::vector<int>> x(n, std::vector<int>(8)), y(n, std::vector<int>(8));
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < 8; ++k)
                x[i][k] = b.add_var(nm("x", i, k), Domain::range(0, 3));
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < 8; ++k)
                y[i][k] = b.add_var(nm("y", i, k), Domain::range(0, 3));

        for (int i = 0; i < n; ++i)
            for (int k = 0; k < 8; ++k)
                b.post(CIntension{ex_eq(vx(x[i][k]) + vx(y[i][k]), lit(3))});
        for (int i = 0; i < n; ++i)
            b.post(CExtension{x[i], table, true, false});

        b.post(CLex{x, true, true}, "symmetry-breaking");

        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
            {
                std::vector<Expr> diffs;
                for (int k = 0; k < 8; ++k)
                    diffs.push_back(ex_ne(vx(x[i][k]), vx(x[j][k])));
                b.post(CIntension{ex_ge(ex_sum(std::move(diffs)), lit(4))});
            }
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
            {
                if (i == j)
                    continue;
                std::vector<Expr> diffs;
                for (int k = 0; k < 8; ++k)
                    diffs.push_back(ex_ne(vx(x[i][7 - k]), vx(y[j][k])));
                b.post(CIntension{ex_ge(ex_sum(std::move(diffs)), lit(4))});
            }

        return b.build();
    }

    // ---- BeerJugs -----------------------------------------------------------

    auto beer_jugs_transitions(int a, int b) -> std::vector<std::vector<Value>>
    {
        std::vector<std::vector<Value>> t;
        t.push_back({-1, -1, -1, -1, -1});
        for (Value q1 = 0; q1 <= a; ++q1)
            for (Value q2 = 0; q2 <= b; ++q2)
                for (Value act = -1; act <= 5; ++act)
                {
                    Value r1 = -2, r2 = -2;
                    switch (act)
                    {
                        case -1: r1 = -1; r2 = -1; break;
                        case 0: if (q1 != a) { r1 = a; r2 = q2; } break;
                        case 1: if (q2 != b) { r1 = q1; r2 = b; } break;
                        case 2: if (q1 > 0) { r1 = 0; r2 = q2; } break;
                        case 3: if (q2 > 0) { r1 = q1; r2 = 0; } break;
                        case 4:
                        {
                            Value pour = std::min(q1, b - q2);
                            if (pour > 0) { r1 = q1 - pour; r2 = q2 + pour; }
                            break;
                        }
                        case 5:
                        {
                            Value pour = std::min(a - q1, q2);
                            if (pour > 0) { r1 = q1 + pour; r2 = q2 - pour; }
                            break;
                        }
                    }
                    if (r1 != -2)
                        t.push_back({q1, q2, act, r1, r2});
                }
        return t;
    }

    auto beer_jugs(int a, int b_cap) -> Instance
    {
        require(a >= 1 && b_cap >= 1, "beer_jugs: capacities must be positive");
        constexpr int horizon = 70;
        InstanceBuilder b("beer_jugs-" + std::to_string(a) + "-" + std::to_string(b_cap));
        b.set_meta("problem", "beer_jugs");

        auto table = std::make_shared<const Tuples>(beer_jugs_transitions(a, b_cap));

        std::vector<std::array<int, 2>> x(horizon + 1);
        for (int t = 0; t <= horizon; ++t)
        {
            x[t][0] = b.add_var(nm("x", t, 0), t == 0 ? Domain({0}) : Domain::range(-1, a));
            x[t][1] = b.add_var(nm("x", t, 1), t == 0 ? Domain({0}) : Domain::range(-1, b_cap));
        }
        std::vector<int> y(horizon);
        for (int t = 0; t < horizon; ++t)
            y[t] = b.add_var(nm("y", t), Domain::range(-1, 5));
        int z = b.add_var("z", Domain::range(0, horizon - 1));

        // Live states never repeat; a dead marker may.
        for (int t1 = 0; t1 <= horizon; ++t1)
            for (int t2 = t1 + 1; t2 <= horizon; ++t2)
                b.post(CIntension{ex_imp(ex_ne(vx(x[t1][0]), lit(-1)),
                    ex_or({ex_ne(vx(x[t1][0]), vx(x[t2][0])), ex_ne(vx(x[t1][1]), vx(x[t2][1]))}))});
        for (int t = 0; t < horizon; ++t)
            b.post(CExtension{{x[t][0], x[t][1], y[t], x[t + 1][0], x[t + 1][1]}, table, true, false});
        for (int t = 0; t < horizon; ++t)
            b.post(CIntension{ex_iff(ex_lt(lit(t), vx(z)), ex_ne(vx(y[t]), lit(-1)))});

        b.set_objective(Objective::of_var(Sense::Maximize, z));
        return b.build();
    }

    // ---- Sonet --------------------------------------------------------------

    auto sonet(const SonetData & data) -> Instance
    {
        require(data.n >= 1 && data.m >= 1, "sonet: need n >= 1 and m >= 1");
        require(data.r >= 0, "sonet: r must be non-negative");
        InstanceBuilder b("sonet-n" + std::to_string(data.n) + "-m" + std::to_string(data.m)
            + "-r" + std::to_string(data.r));
        b.set_meta("problem", "sonet");

        std::vector<std::vector<int>> x(data.m, std::vector<int>(data.n));
        for (int i = 0; i < data.m; ++i)
            for (int j = 0; j < data.n; ++j)
                x[i][j] = b.add_var(nm("x", i, j), Domain::range(0, 1));

        // Row i of the table: both endpoints sit on ring i.
        Tuples t;
        for (int i = 0; i < data.m; ++i)
        {
            std::vector<Value> row(2 * data.m, STAR);
            row[2 * i] = 1;
            row[2 * i + 1] = 1;
            t.push_back(std::move(row));
        }
        auto table = std::make_shared<const Tuples>(std::move(t));

        for (auto [u, w] : data.connections)
        {
            require(u >= 0 && u < data.n && w >= 0 && w < data.n, "sonet: connection endpoint out of range");
            std::vector<int> scope;
            for (int i = 0; i < data.m; ++i)
            {
                scope.push_back(x[i][u]);
                scope.push_back(x[i][w]);
            }
            b.post(CExtension{std::move(scope), table, true, true});
        }

        for (int i = 0; i < data.m; ++i)
            b.post(CSum{x[i], ones(data.n), Cmp::Le, ValOrVar::of_value(data.r)});

        b.post(CLex{x, true, false}, "symmetry-breaking");

        std::vector<int> flat;
        for (int i = 0; i < data.m; ++i)
            flat.insert(flat.end(), x[i].begin(), x[i].end());
        b.set_objective(Objective::of_sum(Sense::Minimize, flat, ones(flat.size())));
        return b.build();
    }

    // ---- KMedian ------------------------------------------------------------

    auto k_median(const std::vector<std::vector<Value>> & distances, int k) -> Instance
    {
        require_rect(distances, "k_median: distances");
        int n = static_cast<int>(distances.size());
        require(static_cast<int>(distances[0].size()) == n, "k_median: distances must be square");
        require(k >= 1 && k <= n, "k_median: need 1 <= k <= n");
        InstanceBuilder b("k_median-n" + std::to_string(n) + "-k" + std::to_string(k));
        b.set_meta("problem", "k_median");

        Domain dist_dom(matrix_values(distances));

        std::vector<int> x(k);
        for (int i = 0; i < k; ++i)
            x[i] = b.add_var(nm("x", i), Domain::range(0, n - 1));
        std::vector<std::vector<int>> d(k, std::vector<int>(n));
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < n; ++j)
                d[i][j] = b.add_var(nm("d", i, j), dist_dom);
        std::vector<int> mn(n);
        for (int j = 0; j < n; ++j)
            mn[j] = b.add_var(nm("mn", j), dist_dom);

        b.post(CAllDifferent{x, {}});
        b.post(COrdered{x, true, true}, "symmetry-breaking");

        for (int i = 0; i < k; ++i)
            for (int j = 0; j < n; ++j)
            {
                std::vector<ValOrVar> column;
                for (int q = 0; q < n; ++q)
                    column.push_back(ValOrVar::of_value(distances[q][j]));
                b.post(CElement{std::move(column), x[i], ValOrVar::of_var(d[i][j])});
            }
        for (int j = 0; j < n; ++j)
        {
            std::vector<int> col;
            for (int i = 0; i < k; ++i)
                col.push_back(d[i][j]);
            b.post(CMinimum{std::move(col), Cmp::Eq, ValOrVar::of_var(mn[j])});
        }

        b.set_objective(Objective::of_sum(Sense::Minimize, mn, ones(mn.size())));
        return b.build();
    }

    // ---- GeneralizedMKP -----------------------------------------------------

    auto generalized_mkp(const GmkpData & data) -> Instance
    {
        int n_items = static_cast<int>(data.profits.size());
        int n_bins = static_cast<int>(data.capacities.size());
        require(n_items >= 1 && n_bins >= 1, "generalized_mkp: need items and bins");
        require(static_cast<int>(data.wmatrix.size()) == n_bins, "generalized_mkp: wmatrix needs one row per bin");
        for (const auto & row : data.wmatrix)
            require(static_cast<int>(row.size()) == n_items, "generalized_mkp: wmatrix row length mismatch");
        auto pmatrix = data.pmatrix;
        if (pmatrix.empty())
            pmatrix.assign(n_bins, data.profits);
        require(static_cast<int>(pmatrix.size()) == n_bins, "generalized_mkp: pmatrix needs one row per bin");
        for (const auto & row : pmatrix)
            require(static_cast<int>(row.size()) == n_items, "generalized_mkp: pmatrix row length mismatch");

        InstanceBuilder b("generalized_mkp-" + std::to_string(n_items) + "x" + std::to_string(n_bins));
        b.set_meta("problem", "generalized_mkp");

        std::vector<int> x(n_items);
        for (int i = 0; i < n_items; ++i)
            x[i] = b.add_var(nm("x", i), Domain::range(0, 1));
        std::vector<int> w(n_bins);
        for (int j = 0; j < n_bins; ++j)
        {
            require(data.capacities[j] >= 0, "generalized_mkp: negative capacity");
            w[j] = b.add_var(nm("w", j), Domain::range(0, data.capacities[j]));
        }
        Value total = std::accumulate(data.profits.begin(), data.profits.end(), Value(0));
        int z = b.add_var("z", Domain::range(0, total));

        for (int j = 0; j < n_bins; ++j)
            b.post(CKnapsack{x, data.wmatrix[j], ValOrVar::of_var(w[j]),
                pmatrix[j], Cmp::Ge, ValOrVar::of_var(z)});
        b.post(CSum{x, data.profits, Cmp::Eq, ValOrVar::of_var(z)});

        b.set_objective(Objective::of_var(Sense::Maximize, z));
        return b.build();
    }

    // ---- TSPTW --------------------------------------------------------------

    auto tsptw(const std::vector<std::vector<Value>> & distances,
               const std::vector<std::pair<Value, Value>> & windows) -> Instance
    {
        require_rect(distances, "tsptw: distances");
        int n = static_cast<int>(distances.size());
        require(static_cast<int>(distances[0].size()) == n, "tsptw: distances must be square");
        require(static_cast<int>(windows.size()) == n, "tsptw: one window per node");
        require(n >= 2, "tsptw: need at least two nodes");
        for (auto [lo, hi] : windows)
            require(lo <= hi, "tsptw: empty time window");
        InstanceBuilder b("tsptw-n" + std::to_string(n));
        b.set_meta("problem", "tsptw");

        Value horizon = 0;
        for (auto [lo, hi] : windows)
            horizon = std::max(horizon, hi);

        std::vector<int> x(n), a(n), ax(n), dx(n);
        for (int i = 0; i < n; ++i)
            x[i] = b.add_var(nm("x", i), Domain::range(0, n - 1));
        for (int i = 0; i < n; ++i)
            a[i] = b.add_var(nm("a", i), Domain::range(windows[i].first, windows[i].second));
        // ax[i] is the arrival time at the successor of i, dx[i] the arc cost.
        for (int i = 0; i < n; ++i)
            ax[i] = b.add_var(nm("ax", i), Domain::range(0, horizon));
        for (int i = 0; i < n; ++i)
            dx[i] = b.add_var(nm("dx", i), Domain(sorted_values(distances[i])));

        b.post(CIntension{ex_eq(vx(a[0]), lit(0))});
        for (int i = 0; i < n; ++i)
            b.post(CIntension{ex_ne(vx(x[i]), lit(i))});
        b.post(CCircuit{x});

        std::vector<ValOrVar> arrivals;
        for (int i = 0; i < n; ++i)
            arrivals.push_back(ValOrVar::of_var(a[i]));
        for (int i = 0; i < n; ++i)
            b.post(CElement{arrivals, x[i], ValOrVar::of_var(ax[i])});
        for (int i = 0; i < n; ++i)
        {
            std::vector<ValOrVar> row;
            for (int j = 0; j < n; ++j)
                row.push_back(ValOrVar::of_value(distances[i][j]));
            b.post(CElement{std::move(row), x[i], ValOrVar::of_var(dx[i])});
        }
        for (int i = 0; i < n; ++i)
            b.post(CIntension{ex_imp(ex_ne(vx(x[i]), lit(0)),
                ex_ge(vx(ax[i]), vx(a[i]) + vx(dx[i])))});

        b.set_objective(Objective::of_sum(Sense::Minimize, dx, ones(dx.size())));
        return b.build();
    }

    // ---- RIP ----------------------------------------------------------------

    auto rip(Value horizon, const std::vector<Value> & costs,
             const std::vector<RipJob> & jobs) -> Instance
    {
        int n_tasks = static_cast<int>(jobs.size());
        int n_res = static_cast<int>(costs.size());
        require(n_tasks >= 1 && n_res >= 1, "rip: need jobs and resources");
        require(horizon >= 0, "rip: horizon must be non-negative");
        for (const auto & job : jobs)
        {
            require(job.duration >= 0, "rip: negative duration");
            require(static_cast<int>(job.requirements.size()) == n_res, "rip: requirement row length mismatch");
            for (int s : job.successors)
                require(s >= 0 && s < n_tasks, "rip: successor out of range");
        }
        InstanceBuilder b("rip-t" + std::to_string(n_tasks) + "-r" + std::to_string(n_res));
        b.set_meta("problem", "rip");

        std::vector<int> s(n_tasks);
        for (int i = 0; i < n_tasks; ++i)
            s[i] = b.add_var(nm("s", i), Domain::range(0, horizon));
        std::vector<int> u(n_res);
        for (int k = 0; k < n_res; ++k)
        {
            Value lb = 0, ub = 0;
            for (const auto & job : jobs)
            {
                lb = std::max(lb, job.requirements[k]);
                ub += job.requirements[k];
            }
            u[k] = b.add_var(nm("u", k), Domain::range(lb, ub));
        }

        for (int i = 0; i < n_tasks; ++i)
            b.post(CIntension{ex_le(vx(s[i]) + lit(jobs[i].duration), lit(horizon))});
        for (int i = 0; i < n_tasks; ++i)
            for (int j : jobs[i].successors)
                b.post(CIntension{ex_le(vx(s[i]) + lit(jobs[i].duration), vx(s[j]))});

        std::vector<Value> durations;
        for (const auto & job : jobs)
            durations.push_back(job.duration);
        for (int k = 0; k < n_res; ++k)
        {
            std::vector<Value> heights;
            for (const auto & job : jobs)
                heights.push_back(job.requirements[k]);
            b.post(CCumulative{s, durations, heights, Cmp::Le, ValOrVar::of_var(u[k])});
        }

        b.set_objective(Objective::of_sum(Sense::Minimize, u, costs));
        return b.build();
    }

    // ---- LargeScaleScheduling -------------------------------------------------

    auto large_scale_scheduling(Value limit, const std::vector<Value> & durations,
                                const std::vector<Value> & heights) -> Instance
    {
        int n = static_cast<int>(durations.size());
        require(n >= 1, "large_scale_scheduling: need tasks");
        require(heights.size() == durations.size(), "large_scale_scheduling: one height per duration");
        require(limit >= 0, "large_scale_scheduling: limit must be non-negative");
        for (int i = 0; i < n; ++i)
            require(durations[i] >= 0 && heights[i] >= 0, "large_scale_scheduling: negative task data");
        InstanceBuilder b("large_scale_scheduling-n" + std::to_string(n));
        b.set_meta("problem", "large_scale_scheduling");

        Value total = std::accumulate(durations.begin(), durations.end(), Value(0));
        std::vector<int> x(n);
        for (int i = 0; i < n; ++i)
            x[i] = b.add_var(nm("x", i), Domain::range(0, total));

        b.post(CCumulative{x, durations, heights, Cmp::Le, ValOrVar::of_value(limit)});

        std::vector<Expr> ends;
        for (int i = 0; i < n; ++i)
            ends.push_back(vx(x[i]) + lit(durations[i]));
        b.set_objective(Objective::of_max(Sense::Minimize, std::move(ends)));
        return b.build();
    }

    // ---- KidneyExchange -----------------------------------------------------

    auto kidney_exchange(const std::vector<std::vector<Value>> & weights, int k) -> Instance
    {
        require_rect(weights, "kidney_exchange: weights");
        int n = static_cast<int>(weights.size());
        require(static_cast<int>(weights[0].size()) == n, "kidney_exchange: weights must be square");
        require(k >= 1, "kidney_exchange: k must be positive");
        InstanceBuilder b("kidney_exchange-n" + std::to_string(n) + "-k" + std::to_string(k));
        b.set_meta("problem", "kidney_exchange");

        std::vector<int> x(n), y(n), wv(n);
        for (int i = 0; i < n; ++i)
            x[i] = b.add_var(nm("x", i), Domain::range(0, n - 1));
        // y[i] names the cycle node i belongs to; wv[i] is the chosen arc weight.
        for (int i = 0; i < n; ++i)
            y[i] = b.add_var(nm("y", i), Domain::range(0, n - 1));
        for (int i = 0; i < n; ++i)
            wv[i] = b.add_var(nm("wv", i), Domain(sorted_values(weights[i])));

        b.post(CAllDifferent{x, {}});

        std::vector<ValOrVar> cycle_ids;
        for (int i = 0; i < n; ++i)
            cycle_ids.push_back(ValOrVar::of_var(y[i]));
        for (int i = 0; i < n; ++i)
            b.post(CElement{cycle_ids, x[i], ValOrVar::of_var(y[i])});

        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j && weights[i][j] < 0)
                    b.post(CIntension{ex_ne(vx(x[i]), lit(j))});

        b.post(CBinPacking{y, ones(n), n, ValOrVar::of_value(k), {}});

        std::vector<Value> values(n);
        std::iota(values.begin(), values.end(), 0);
        b.post(CPrecedence{y, values}, "symmetry-breaking");

        for (int i = 0; i < n; ++i)
        {
            std::vector<ValOrVar> row;
            for (int j = 0; j < n; ++j)
                row.push_back(ValOrVar::of_value(weights[i][j]));
            b.post(CElement{std::move(row), x[i], ValOrVar::of_var(wv[i])});
        }

        b.set_objective(Objective::of_sum(Sense::Maximize, wv, ones(wv.size())));
        return b.build();
    }

    // ---- Manifest and dispatch ------------------------------------------------

    namespace
    {
        const char * dominoes_grid_json =
            "[[0,5,2,2,5,4,6,5],[3,6,2,2,4,4,4,1],[3,6,1,2,3,4,6,1],[0,1,4,3,0,2,2,1],"
            "[3,5,3,0,3,1,5,6],[6,4,0,3,6,0,4,1],[1,6,0,0,2,5,5,5]]";

        const char * slant_grid_json =
            "[[-1,1,-1,-1,-1,-1,1,-1],[-1,3,1,1,-1,2,-1,-1],[-1,2,-1,1,-1,3,1,1],"
            "[-1,-1,1,-1,-1,2,1,-1],[-1,-1,-1,2,-1,-1,-1,-1],[1,-1,1,1,-1,2,1,-1],"
            "[1,-1,2,2,2,3,-1,-1],[-1,1,-1,-1,-1,1,1,-1]]";

        auto build_manifest() -> std::vector<ManifestEntry>
        {
            std::vector<ManifestEntry> m;
            auto series = [&](const std::string & problem, const std::string & params, bool desk = false)
            {
                m.push_back({problem, params, true, desk});
            };
            auto desk = [&](const std::string & problem, const std::string & params)
            {
                m.push_back({problem, params, false, true});
            };
            auto n_of = [](int n) { return "{\"n\":" + std::to_string(n) + "}"; };
            auto n_variant = [](int n, const char * variant)
            {
                return "{\"n\":" + std::to_string(n) + ",\"variant\":\"" + variant + "\"}";
            };

            for (int n : {2, 3, 4, 5, 6, 7, 8, 9, 10, 12})
                series("another_magic_square", n_of(n), n <= 3);
            for (int n = 3; n <= 12; ++n)
                series("antimagic_square", n_of(n), n == 3);
            for (int n : {20, 40, 60, 80, 100, 120})
                for (const char * variant : {"main", "regular"})
                    series("binary_puzzle", n_variant(n, variant));
            desk("binary_puzzle", n_variant(4, "main"));
            desk("binary_puzzle", n_variant(4, "regular"));
            desk("binary_puzzle", n_variant(6, "main"));
            desk("binary_puzzle", n_variant(6, "regular"));
            for (int n : {5, 6, 7, 8, 9, 10, 12})
                for (const char * variant : {"main", "table"})
                    series("calvin_puzzle", n_variant(n, variant), n == 5);
            desk("coloring", "{\"n\":3,\"nColors\":3,\"edges\":[[0,1],[0,2],[1,2]]}");
            {
                const std::vector<std::array<int, 4>> ca =
                {
                    {3, 4, 2, 8}, {3, 5, 2, 10}, {3, 6, 2, 12}, {3, 7, 2, 12},
                    {3, 8, 2, 12}, {3, 9, 2, 12}, {3, 10, 2, 12}, {3, 11, 2, 12},
                    {4, 6, 2, 21}, {4, 7, 2, 38}, {4, 8, 2, 42}, {4, 9, 2, 50},
                };
                for (const auto & [t, k, g, bb] : ca)
                    series("covering_array",
                        "{\"t\":" + std::to_string(t) + ",\"k\":" + std::to_string(k)
                        + ",\"g\":" + std::to_string(g) + ",\"b\":" + std::to_string(bb) + "}",
                        t == 3 && k == 4);
            }
            series("dominoes", std::string("{\"grid\":") + dominoes_grid_json + "}");
            {
                const std::vector<std::array<int, 3>> dice =
                {
                    {6, 6, 0}, {8, 8, 0}, {8, 8, 3}, {10, 10, 0}, {10, 10, 3},
                    {15, 15, 3}, {15, 15, 4}, {20, 20, 3}, {20, 20, 4},
                    {30, 30, 3}, {30, 30, 4}, {40, 40, 0},
                };
                for (const auto & [n, mm, dd] : dice)
                    series("non_transitive_dice",
                        "{\"n\":" + std::to_string(n) + ",\"m\":" + std::to_string(mm)
                        + ",\"d\":" + std::to_string(dd) + "}");
            }
            for (int n : {2000, 4000, 5000, 6000, 7000, 7500, 7824, 7825})
                series("pythagorean_triples", n_of(n));
            for (int n : {5, 12, 15})
                desk("pythagorean_triples", n_of(n));
            series("slant", std::string("{\"grid\":") + slant_grid_json + "}");
            desk("slant", "{\"grid\":[[-1,-1,-1],[-1,-1,-1],[-1,-1,-1]]}");
            for (int n : {15, 18, 20, 21, 22, 23, 24, 25, 26, 27})
                series("square_packing", n_of(n));
            desk("square_packing", n_of(6));
            for (int n : {5, 15, 25, 35, 45, 55, 65, 75, 85, 100})
                series("word_design", n_of(n), n == 5);
            {
                const std::vector<std::array<int, 2>> jugs =
                {
                    {3, 10}, {9, 10}, {7, 12}, {11, 12},
                    {11, 14}, {11, 16}, {13, 16}, {15, 16},
                };
                for (const auto & [a, bb] : jugs)
                    series("beer_jugs", "{\"A\":" + std::to_string(a) + ",\"B\":" + std::to_string(bb) + "}");
                desk("beer_jugs", "{\"A\":1,\"B\":2}");
            }
            series("sonet",
                "{\"n\":6,\"m\":10,\"r\":3,\"connections\":[[0,1],[0,2],[0,3],[2,3],[2,5],[4,5]]}", true);
            desk("k_median", "{\"distances\":[[0,1,2],[1,0,3],[2,3,0]],\"k\":1}");
            desk("generalized_mkp", "{\"profits\":[2,3],\"wmatrix\":[[1,2]],\"capacities\":[3]}");
            desk("tsptw", "{\"distances\":[[0,2,3],[2,0,4],[3,4,0]],\"windows\":[[0,10],[2,6],[3,9]]}");
            desk("rip",
                "{\"horizon\":6,\"costs\":[1],\"jobs\":[{\"duration\":2,\"successors\":[1],\"requirements\":[2]},"
                "{\"duration\":3,\"successors\":[],\"requirements\":[1]}]}");
            desk("large_scale_scheduling", "{\"limit\":2,\"durations\":[2,2,3],\"heights\":[1,1,2]}");
            desk("kidney_exchange", "{\"weights\":[[0,1,-1],[1,0,-1],[-1,-1,0]],\"k\":2}");
            return m;
        }

        auto as_int(const json & j, const char * what) -> int
        {
            if (!j.is_number_integer())
                throw BuildError(std::string("expected integer for ") + what);
            return j.get<int>();
        }

        auto as_value(const json & j, const char * what) -> Value
        {
            if (!j.is_number_integer())
                throw BuildError(std::string("expected integer for ") + what);
            return j.get<Value>();
        }

        auto field(const json & j, const char * key) -> const json &
        {
            if (!j.is_object() || !j.contains(key))
                throw BuildError(std::string("missing parameter field \"") + key + "\"");
            return j.at(key);
        }

        auto value_list(const json & j, const char * what) -> std::vector<Value>
        {
            if (!j.is_array())
                throw BuildError(std::string("expected array for ") + what);
            std::vector<Value> out;
            for (const auto & item : j)
                out.push_back(as_value(item, what));
            return out;
        }

        auto value_matrix(const json & j, const char * what) -> std::vector<std::vector<Value>>
        {
            if (!j.is_array())
                throw BuildError(std::string("expected matrix for ") + what);
            std::vector<std::vector<Value>> out;
            for (const auto & row : j)
                out.push_back(value_list(row, what));
            return out;
        }

        auto int_matrix(const json & j, const char * what) -> std::vector<std::vector<int>>
        {
            std::vector<std::vector<int>> out;
            for (const auto & row : value_matrix(j, what))
                out.push_back(std::vector<int>(row.begin(), row.end()));
            return out;
        }

        auto int_pairs(const json & j, const char * what) -> std::vector<std::pair<int, int>>
        {
            if (!j.is_array())
                throw BuildError(std::string("expected pair list for ") + what);
            std::vector<std::pair<int, int>> out;
            for (const auto & item : j)
            {
                if (!item.is_array() || item.size() != 2)
                    throw BuildError(std::string("expected [a,b] pairs for ") + what);
                out.emplace_back(as_int(item[0], what), as_int(item[1], what));
            }
            return out;
        }

        // Bare integer or {"n": ...}.
        auto param_n(const json & j) -> int
        {
            if (j.is_number_integer())
                return j.get<int>();
            return as_int(field(j, "n"), "n");
        }

        auto param_variant(const json & j, const char * fallback) -> std::string
        {
            if (j.is_object() && j.contains("variant"))
            {
                const auto & v = j.at("variant");
                if (!v.is_string())
                    throw BuildError("variant must be a string");
                return v.get<std::string>();
            }
            return fallback;
        }
    }

    auto manifest() -> const std::vector<ManifestEntry> &
    {
        static const std::vector<ManifestEntry> entries = build_manifest();
        return entries;
    }

    auto problem_catalog() -> std::vector<std::string>
    {
        return {
            "another_magic_square", "antimagic_square", "binary_puzzle", "calvin_puzzle",
            "coloring", "covering_array", "dominoes", "non_transitive_dice",
            "pythagorean_triples", "slant", "square_packing", "word_design",
            "beer_jugs", "sonet", "k_median", "generalized_mkp",
            "tsptw", "rip", "large_scale_scheduling", "kidney_exchange",
        };
    }

    auto build_problem(const std::string & problem, const std::string & params_json) -> Instance
    {
        json j;
        try
        {
            j = json::parse(params_json);
        }
        catch (const std::exception & e)
        {
            throw BuildError("bad parameter json for " + problem + ": " + e.what());
        }

        try
        {
            if (problem == "another_magic_square")
                return another_magic_square(param_n(j));
            if (problem == "antimagic_square")
                return antimagic_square(param_n(j));
            if (problem == "binary_puzzle")
                return binary_puzzle(param_n(j), param_variant(j, "main"));
            if (problem == "calvin_puzzle")
                return calvin_puzzle(param_n(j), param_variant(j, "main"));
            if (problem == "coloring")
            {
                ColoringData data;
                data.n = as_int(field(j, "n"), "n");
                data.n_colors = as_int(field(j, "nColors"), "nColors");
                data.edges = int_pairs(field(j, "edges"), "edges");
                return coloring(data);
            }
            if (problem == "covering_array")
            {
                if (j.is_array() && j.size() == 4)
                    return covering_array(as_int(j[0], "t"), as_int(j[1], "k"),
                        as_int(j[2], "g"), as_int(j[3], "b"));
                return covering_array(as_int(field(j, "t"), "t"), as_int(field(j, "k"), "k"),
                    as_int(field(j, "g"), "g"), as_int(field(j, "b"), "b"));
            }
            if (problem == "dominoes")
                return dominoes(int_matrix(field(j, "grid"), "grid"));
            if (problem == "non_transitive_dice")
            {
                if (j.is_array() && j.size() == 3)
                    return non_transitive_dice(as_int(j[0], "n"), as_int(j[1], "m"), as_int(j[2], "d"));
                int d = j.contains("d") ? as_int(j.at("d"), "d") : 0;
                return non_transitive_dice(as_int(field(j, "n"), "n"), as_int(field(j, "m"), "m"), d);
            }
            if (problem == "pythagorean_triples")
                return pythagorean_triples(param_n(j));
            if (problem == "slant")
                return slant(int_matrix(field(j, "grid"), "grid"));
            if (problem == "square_packing")
                return square_packing(param_n(j));
            if (problem == "word_design")
                return word_design(param_n(j));
            if (problem == "beer_jugs")
            {
                if (j.is_array() && j.size() == 2)
                    return beer_jugs(as_int(j[0], "A"), as_int(j[1], "B"));
                return beer_jugs(as_int(field(j, "A"), "A"), as_int(field(j, "B"), "B"));
            }
            if (problem == "sonet")
            {
                SonetData data;
                data.n = as_int(field(j, "n"), "n");
                data.m = as_int(field(j, "m"), "m");
                data.r = as_int(field(j, "r"), "r");
                data.connections = int_pairs(field(j, "connections"), "connections");
                return sonet(data);
            }
            if (problem == "k_median")
                return k_median(value_matrix(field(j, "distances"), "distances"),
                    as_int(field(j, "k"), "k"));
            if (problem == "generalized_mkp")
            {
                GmkpData data;
                data.profits = value_list(field(j, "profits"), "profits");
                data.wmatrix = value_matrix(field(j, "wmatrix"), "wmatrix");
                data.capacities = value_list(field(j, "capacities"), "capacities");
                if (j.contains("pmatrix"))
                    data.pmatrix = value_matrix(j.at("pmatrix"), "pmatrix");
                return generalized_mkp(data);
            }
            if (problem == "tsptw")
            {
                auto win = value_matrix(field(j, "windows"), "windows");
                std::vector<std::pair<Value, Value>> windows;
                for (const auto & row : win)
                {
                    if (row.size() != 2)
                        throw BuildError("tsptw: windows must be [lo,hi] pairs");
                    windows.emplace_back(row[0], row[1]);
                }
                return tsptw(value_matrix(field(j, "distances"), "distances"), windows);
            }
            if (problem == "rip")
            {
                const auto & jj = field(j, "jobs");
                if (!jj.is_array())
                    throw BuildError("rip: jobs must be an array");
                std::vector<RipJob> jobs;
                for (const auto & item : jj)
                {
                    RipJob job;
                    job.duration = as_value(field(item, "duration"), "duration");
                    for (const auto & s : field(item, "successors"))
                        job.successors.push_back(as_int(s, "successors"));
                    job.requirements = value_list(field(item, "requirements"), "requirements");
                    jobs.push_back(std::move(job));
                }
                return rip(as_value(field(j, "horizon"), "horizon"),
                    value_list(field(j, "costs"), "costs"), jobs);
            }
            if (problem == "large_scale_scheduling")
                return large_scale_scheduling(as_value(field(j, "limit"), "limit"),
                    value_list(field(j, "durations"), "durations"),
                    value_list(field(j, "heights"), "heights"));
            if (problem == "kidney_exchange")
                return kidney_exchange(value_matrix(field(j, "weights"), "weights"),
                    as_int(field(j, "k"), "k"));
        }
        catch (const json::exception & e)
        {
            throw BuildError("bad parameters for " + problem + ": " + e.what());
        }

        throw BuildError("unknown problem id: " + problem);
    }
}
