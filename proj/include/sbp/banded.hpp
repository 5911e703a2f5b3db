#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace sbp {

// Square matrix stored as one contiguous column segment per row. Interior rows
// carry the stencil; boundary rows carry whatever width the closure needs.
class BandedMatrix {
public:
    BandedMatrix() = default;
    explicit BandedMatrix(int n);

    // Builds row i from entry(i, j) for j in [lo(i), hi(i)], clipped to [0, n).
    static BandedMatrix from_entries(int n, const std::function<int(int)>& lo,
                                     const std::function<int(int)>& hi,
                                     const std::function<double(int, int)>& entry);

    int size() const { return n_; }
    int first_col(int i) const { return first_[i]; }
    std::span<const double> row(int i) const
    {
        return {vals_.data() + ptr_[i], static_cast<size_t>(ptr_[i + 1] - ptr_[i])};
    }
    double at(int i, int j) const;
    // Widest reach to the left and right of the diagonal over all rows.
    int lower_bandwidth() const;
    int upper_bandwidth() const;

    void apply(std::span<const double> v, std::span<double> out) const;
    std::vector<double> apply(const std::vector<double>& v) const;
    // out[i*stride + c] += alpha * sum_j A(i,j) v[j*stride + c] for c < ncomp.
    // Lets one matrix act along a line of an interleaved multi-dimensional array.
    void apply_add_strided(const double* v, double* out, std::ptrdiff_t stride, int ncomp,
                           double alpha) const;

    BandedMatrix transpose() const;
    BandedMatrix scaled_rows(const std::vector<double>& s) const;
    // a*this + b*other, band is the union of both.
    BandedMatrix combine(double a, const BandedMatrix& other, double b) const;
    Eigen::MatrixXd to_dense() const;
    // Copy whose diagonal is shifted so every row sums to zero in extended
    // precision. Rows without a stored diagonal entry are left alone.
    BandedMatrix with_zero_row_sums() const;

private:
    int n_ = 0;
    std::vector<int> first_;
    std::vector<int> ptr_;
    std::vector<double> vals_;
};

} // namespace sbp
