#include "sbp/banded.hpp"

#include "sbp/error.hpp"

#include <algorithm>
#include <string>

namespace sbp {

BandedMatrix::BandedMatrix(int n) : n_(n), first_(n, 0), ptr_(n + 1, 0) {}

BandedMatrix BandedMatrix::from_entries(int n, const std::function<int(int)>& lo,
                                        const std::function<int(int)>& hi,
                                        const std::function<double(int, int)>& entry)
{
    BandedMatrix a(n);
    for (int i = 0; i < n; ++i) {
        const int l = std::max(0, lo(i));
        const int r = std::min(n - 1, hi(i));
        a.first_[i] = l;
        for (int j = l; j <= r; ++j)
            a.vals_.push_back(entry(i, j));
        a.ptr_[i + 1] = static_cast<int>(a.vals_.size());
    }
    return a;
}

double BandedMatrix::at(int i, int j) const
{
    const int k = j - first_[i];
    if (k < 0 || k >= ptr_[i + 1] - ptr_[i])
        return 0.0;
    return vals_[ptr_[i] + k];
}

int BandedMatrix::lower_bandwidth() const
{
    int b = 0;
    for (int i = 0; i < n_; ++i)
        if (ptr_[i + 1] > ptr_[i])
            b = std::max(b, i - first_[i]);
    return b;
}

int BandedMatrix::upper_bandwidth() const
{
    int b = 0;
    for (int i = 0; i < n_; ++i)
        if (ptr_[i + 1] > ptr_[i])
            b = std::max(b, first_[i] + (ptr_[i + 1] - ptr_[i]) - 1 - i);
    return b;
}

void BandedMatrix::apply(std::span<const double> v, std::span<double> out) const
{
    if (static_cast<int>(v.size()) != n_ || static_cast<int>(out.size()) != n_)
        throw SizeError("BandedMatrix::apply: length mismatch (expected " +
                        std::to_string(n_) + ")");
    for (int i = 0; i < n_; ++i) {
        const double* a = vals_.data() + ptr_[i];
        const double* x = v.data() + first_[i];
        const int len = ptr_[i + 1] - ptr_[i];
        double s = 0.0;
        for (int k = 0; k < len; ++k)
            s += a[k] * x[k];
        out[i] = s;
    }
}

std::vector<double> BandedMatrix::apply(const std::vector<double>& v) const
{
    std::vector<double> out(n_);
    apply(std::span<const double>(v), std::span<double>(out));
    return out;
}

void BandedMatrix::apply_add_strided(const double* v, double* out, std::ptrdiff_t stride,
                                     int ncomp, double alpha) const
{
    double acc[8];
    if (ncomp > 8)
        throw SizeError("BandedMatrix::apply_add_strided: at most 8 components");
    for (int i = 0; i < n_; ++i) {
        const double* a = vals_.data() + ptr_[i];
        const int len = ptr_[i + 1] - ptr_[i];
        const double* x = v + first_[i] * stride;
        for (int c = 0; c < ncomp; ++c)
            acc[c] = 0.0;
        for (int k = 0; k < len; ++k, x += stride)
            for (int c = 0; c < ncomp; ++c)
                acc[c] += a[k] * x[c];
        double* o = out + i * stride;
        for (int c = 0; c < ncomp; ++c)
            o[c] += alpha * acc[c];
    }
}

BandedMatrix BandedMatrix::with_zero_row_sums() const
{
    BandedMatrix a = *this;
    for (int i = 0; i < n_; ++i) {
        const int k = i - first_[i];
        const int len = ptr_[i + 1] - ptr_[i];
        if (k < 0 || k >= len)
            continue;
        long double off = 0.0L;
        for (int q = 0; q < len; ++q)
            if (q != k)
                off += vals_[ptr_[i] + q];
        a.vals_[ptr_[i] + k] = static_cast<double>(-off);
    }
    return a;
}

BandedMatrix BandedMatrix::transpose() const
{
    std::vector<int> lo(n_, n_), hi(n_, -1);
    for (int i = 0; i < n_; ++i)
        for (int k = 0; k < ptr_[i + 1] - ptr_[i]; ++k) {
            const int j = first_[i] + k;
            lo[j] = std::min(lo[j], i);
            hi[j] = std::max(hi[j], i);
        }
    return from_entries(
        n_, [&](int i) { return lo[i]; }, [&](int i) { return hi[i]; },
        [&](int i, int j) { return at(j, i); });
}

BandedMatrix BandedMatrix::scaled_rows(const std::vector<double>& s) const
{
    BandedMatrix a = *this;
    for (int i = 0; i < n_; ++i)
        for (int k = ptr_[i]; k < ptr_[i + 1]; ++k)
            a.vals_[k] *= s[i];
    return a;
}

BandedMatrix BandedMatrix::combine(double a, const BandedMatrix& other, double b) const
{
    if (other.n_ != n_)
        throw SizeError("BandedMatrix::combine: size mismatch");
    auto lo = [&](int i) { return std::min(first_[i], other.first_[i]); };
    auto hi = [&](int i) {
        return std::max(first_[i] + ptr_[i + 1] - ptr_[i],
                        other.first_[i] + other.ptr_[i + 1] - other.ptr_[i]) - 1;
    };
    return from_entries(n_, lo, hi,
                        [&](int i, int j) { return a * at(i, j) + b * other.at(i, j); });
}

Eigen::MatrixXd BandedMatrix::to_dense() const
{
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n_, n_);
    for (int i = 0; i < n_; ++i)
        for (int k = 0; k < ptr_[i + 1] - ptr_[i]; ++k)
            d(i, first_[i] + k) = vals_[ptr_[i] + k];
    return d;
}

} // namespace sbp
