#pragma once

#include <vector>

namespace awsalm::pipeline {

// Minimum-cost one-to-one assignment (Hungarian algorithm with potentials,
// O(n^2 m)). `cost` is row-major n_rows x n_cols. Returns, per row, the
// assigned column or -1. Pairs with cost >= forbidden_above stay unassigned.
std::vector<int> solve_assignment(const std::vector<double>& cost, int n_rows,
                                  int n_cols, double forbidden_above);

// Greedy fallback: repeatedly picks the cheapest remaining admissible pair.
std::vector<int> solve_assignment_greedy(const std::vector<double>& cost,
                                         int n_rows, int n_cols,
                                         double forbidden_above);

}  // namespace awsalm::pipeline
