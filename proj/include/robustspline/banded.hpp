#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace robustspline {

/// Symmetric positive-definite matrix with two off-diagonal bands, stored by
/// diagonals: main[i] = A(i,i), upper1[i] = A(i,i+1), upper2[i] = A(i,i+2).
struct PentadiagonalMatrix {
    std::vector<double> main;
    std::vector<double> upper1;
    std::vector<double> upper2;

    explicit PentadiagonalMatrix(std::size_t m)
        : main(m, 0.0), upper1(m > 0 ? m - 1 : 0, 0.0), upper2(m > 1 ? m - 2 : 0, 0.0) {}

    std::size_t size() const { return main.size(); }
};

/// Banded LDLᵀ factorisation of a PentadiagonalMatrix. O(m) time and memory.
/// Throws NumericalError if a pivot is not positive (matrix not SPD).
class PentadiagonalLdlt {
public:
    explicit PentadiagonalLdlt(const PentadiagonalMatrix& a);

    std::size_t size() const { return d_.size(); }
    void solve_in_place(std::span<double> rhs) const;

private:
    std::vector<double> d_;
    std::vector<double> l1_; // L(i+1, i)
    std::vector<double> l2_; // L(i+2, i)
};

} // namespace robustspline
