// Programmatic builders for the bundled problem catalog. Every builder is
// deterministic: the same parameters always produce a structurally identical
// instance (same variable order, same constraint order, same tables).
//
// Constraints that only break symmetry carry tag "symmetry-breaking";
// redundant strengthening constraints carry tag "redundant-constraints".
// strip_tagged() removes either class without changing the solution set
// (up to symmetry for the former).
#pragma once

#include <xcore/instance.hpp>

#include <array>
#include <string>
#include <utility>
#include <vector>

namespace xcore
{
    // ---- CSP models ------------------------------------------------------

    // n*n grid of distinct values 1..n*n; the sum of the up-to-8 neighbors of
    // each cell is divisible by the cell value.
    auto another_magic_square(int n) -> Instance;

    // n*n grid of distinct values 1..n*n whose 2n+2 line sums are all distinct
    // and consecutive (max - min == 2n+1). Frenicle symmetry breaking.
    auto antimagic_square(int n) -> Instance;

    // n*n binary grid, n even: every row and column has n/2 ones and no three
    // equal cells in a row; all rows distinct, all columns distinct.
    // variant "main" posts window sums, variant "regular" posts row automata.
    auto binary_puzzle(int n, const std::string & variant = "main") -> Instance;

    // Place 1..n*n on an n*n grid; consecutive numbers must be a knight-like
    // (3,0)/(2,2) step apart. variant "main" posts implications, variant
    // "table" posts starred tables.
    auto calvin_puzzle(int n, const std::string & variant = "main") -> Instance;

    struct ColoringData
    {
        int n = 0;
        int n_colors = 0;
        std::vector<std::pair<int, int>> edges;
    };

    // Graph coloring: adjacent nodes get different colors.
    auto coloring(const ColoringData & data) -> Instance;

    // Covering array CA(t, k, g, b): b columns over alphabet g such that every
    // t of the k rows cover all g^t patterns. Dual model with per-combination
    // position and value vectors linked by channels.
    auto covering_array(int t, int k, int g, int b) -> Instance;

    // Tile a grid of values with each domino (i,j), i <= j, exactly once.
    auto dominoes(const std::vector<std::vector<int>> & grid) -> Instance;

    // n dice with m faces valued 0..d-1 such that every die beats the next one
    // cyclically. d == 0 means d = 2m.
    auto non_transitive_dice(int n, int m, int d) -> Instance;

    // 2-color 1..n so that no Pythagorean triple a^2 + b^2 == c^2 is
    // monochromatic.
    auto pythagorean_triples(int n) -> Instance;

    // Slant puzzle on an (n+1)x(n+1) node grid given as clue matrix with -1
    // for blank nodes: every cell holds one diagonal, clue nodes count
    // incident diagonals, and no cycle exists (acyclicity via distance
    // labels).
    auto slant(const std::vector<std::vector<int>> & grid) -> Instance;

    // Pack squares of sizes 1..n into the known minimal-area container for n
    // (6 <= n <= 27).
    auto square_packing(int n) -> Instance;

    // Choose n DNA-like words of length 8 over {0,1,2,3}, pairwise distance
    // >= 4, with the reverse/complement crossing constraints of word design.
    auto word_design(int n) -> Instance;

    // ---- COP models ------------------------------------------------------

    // Two jugs of capacities a and b: maximize the number of distinct
    // reachable states before stopping.
    auto beer_jugs(int a, int b) -> Instance;

    struct SonetData
    {
        int n = 0;  // nodes
        int m = 0;  // rings
        int r = 0;  // capacity per ring
        std::vector<std::pair<int, int>> connections;
    };

    // SONET ring design: minimize installed node-ring interfaces.
    auto sonet(const SonetData & data) -> Instance;

    // Choose k medians among n points minimizing the sum over points of the
    // distance to the closest median.
    auto k_median(const std::vector<std::vector<Value>> & distances, int k) -> Instance;

    struct GmkpData
    {
        std::vector<Value> profits;
        std::vector<std::vector<Value>> wmatrix;  // one weight row per bin
        std::vector<Value> capacities;            // one capacity per bin
        std::vector<std::vector<Value>> pmatrix;  // optional; defaults to profits per bin
    };

    // Generalized multidimensional knapsack: maximize profit subject to one
    // knapsack per bin.
    auto generalized_mkp(const GmkpData & data) -> Instance;

    // Traveling salesman with time windows (successor model): minimize travel
    // cost of a single circuit respecting arrival windows.
    auto tsptw(const std::vector<std::vector<Value>> & distances,
        const std::vector<std::pair<Value, Value>> & windows) -> Instance;

    struct RipJob
    {
        Value duration = 0;
        std::vector<int> successors;      // 0-based job indexes
        std::vector<Value> requirements;  // one entry per resource
    };

    // Resource investment: minimize the cost-weighted resource capacities
    // needed to finish all precedence-constrained jobs by the horizon.
    auto rip(Value horizon, const std::vector<Value> & costs,
        const std::vector<RipJob> & jobs) -> Instance;

    // One cumulative resource: minimize the makespan of all tasks under a
    // capacity limit.
    auto large_scale_scheduling(Value limit, const std::vector<Value> & durations,
        const std::vector<Value> & heights) -> Instance;

    // Kidney exchange: cover patients by disjoint cycles of length <= k along
    // feasible arcs (weights[i][j] < 0 disables the arc), maximizing total
    // arc weight.
    auto kidney_exchange(const std::vector<std::vector<Value>> & weights, int k) -> Instance;

    // ---- Catalog helpers ---------------------------------------------------

    // The word-design alphabet-{0,1,2,3} words of length 8 with exactly four
    // symbols in {1,2} whose reverse differs from their complement in at
    // least four positions, in lexicographic order.
    auto word_design_words() -> std::vector<std::array<int, 8>>;

    // The beer-jugs transition table for capacities a, b: rows
    // (q1, q2, action, q1', q2') for every legal action in every state,
    // preceded by the absorbing row (-1,-1,-1,-1,-1). Actions: -1 stop,
    // 0 fill A, 1 fill B, 2 drop A, 3 drop B, 4 pour A->B, 5 pour B->A.
    auto beer_jugs_transitions(int a, int b) -> std::vector<std::vector<Value>>;

    // All Pythagorean triples (i, j, k), i < j, with i^2 + j^2 == k^2 and
    // k <= n.
    auto pythagorean_conflicts(int n) -> std::vector<std::array<int, 3>>;

    struct ManifestEntry
    {
        std::string problem;      // catalog id, e.g. "covering_array"
        std::string params;       // JSON parameter record
        bool series = false;      // true for the published benchmark series
        bool desk_scale = false;  // small enough to solve interactively
    };

    // The full generation manifest: every published series tuple plus a
    // desk-scale example for each data-driven problem.
    auto manifest() -> const std::vector<ManifestEntry> &;

    // Build a catalog instance from its id and a JSON parameter record.
    // Accepts either the record object (e.g. {"n": 4, "variant": "regular"})
    // or a bare value/array shorthand for single- and multi-parameter models.
    auto build_problem(const std::string & problem, const std::string & params_json) -> Instance;

    // Catalog ids accepted by build_problem, in manifest order.
    auto problem_catalog() -> std::vector<std::string>;
}
