#include "awsalm/assignment.hpp"

#include <algorithm>
#include <limits>
#include <tuple>

namespace awsalm::pipeline {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Potentials formulation; assigns every row when n_rows <= n_cols.
std::vector<int> hungarian_rows_le_cols(const std::vector<double>& cost, int n,
                                        int m) {
    // 1-based arrays per the classic formulation.
    std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
    std::vector<int> p(m + 1, 0), way(m + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(m + 1, kInf);
        std::vector<char> used(m + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            double delta = kInf;
            int j1 = 0;
            for (int j = 1; j <= m; ++j) {
                if (used[j]) continue;
                const double cur =
                    cost[static_cast<std::size_t>(i0 - 1) * m + (j - 1)] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= m; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<int> row_to_col(n, -1);
    for (int j = 1; j <= m; ++j)
        if (p[j] != 0) row_to_col[p[j] - 1] = j - 1;
    return row_to_col;
}

}  // namespace

std::vector<int> solve_assignment(const std::vector<double>& cost, int n_rows,
                                  int n_cols, double forbidden_above) {
    if (n_rows == 0 || n_cols == 0) return std::vector<int>(n_rows, -1);

    std::vector<int> result(n_rows, -1);
    if (n_rows <= n_cols) {
        result = hungarian_rows_le_cols(cost, n_rows, n_cols);
    } else {
        std::vector<double> t(static_cast<std::size_t>(n_cols) * n_rows);
        for (int i = 0; i < n_rows; ++i)
            for (int j = 0; j < n_cols; ++j)
                t[static_cast<std::size_t>(j) * n_rows + i] =
                    cost[static_cast<std::size_t>(i) * n_cols + j];
        const auto col_to_row = hungarian_rows_le_cols(t, n_cols, n_rows);
        for (int j = 0; j < n_cols; ++j)
            if (col_to_row[j] >= 0) result[col_to_row[j]] = j;
    }
    for (int i = 0; i < n_rows; ++i) {
        if (result[i] >= 0 &&
            cost[static_cast<std::size_t>(i) * n_cols + result[i]] >= forbidden_above)
            result[i] = -1;
    }
    return result;
}

std::vector<int> solve_assignment_greedy(const std::vector<double>& cost,
                                         int n_rows, int n_cols,
                                         double forbidden_above) {
    struct Entry {
        double c;
        int i, j;
    };
    std::vector<Entry> entries;
    entries.reserve(static_cast<std::size_t>(n_rows) * n_cols);
    for (int i = 0; i < n_rows; ++i)
        for (int j = 0; j < n_cols; ++j) {
            const double c = cost[static_cast<std::size_t>(i) * n_cols + j];
            if (c < forbidden_above) entries.push_back({c, i, j});
        }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        return std::tie(a.c, a.i, a.j) < std::tie(b.c, b.i, b.j);
    });
    std::vector<int> result(n_rows, -1);
    std::vector<char> col_used(n_cols, 0);
    for (const auto& e : entries) {
        if (result[e.i] >= 0 || col_used[e.j]) continue;
        result[e.i] = e.j;
        col_used[e.j] = 1;
    }
    return result;
}

}  // namespace awsalm::pipeline
