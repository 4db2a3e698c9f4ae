#include "mbs/coeff_matrix.hpp"

#include <cmath>
#include <cstdio>

namespace mbs {

CoefficientMatrixView::CoefficientMatrixView(const ModeTensor& state) : state_(&state) {
    if (state.modes < 2)
        throw Error(ErrorCode::InvalidArgument, "matrix view needs at least two modes");
    rows_ = state.dim;
    cols_ = static_cast<long>(state.size() / static_cast<std::size_t>(state.dim));
}

Complex CoefficientMatrixView::entry(int row, long col) const {
    if (row < 0 || row >= rows_ || col < 0 || col >= cols_)
        throw Error(ErrorCode::InvalidArgument, "matrix index out of range");
    return state_->amp[static_cast<std::size_t>(row) * static_cast<std::size_t>(cols_) +
                       static_cast<std::size_t>(col)];
}

Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
CoefficientMatrixView::matrix() const {
    return {state_->amp.data(), rows_, cols_};
}

CoefficientMatrixView::Block CoefficientMatrixView::block(long first_col) const {
    if (first_col < 0 || first_col >= cols_ || first_col % rows_ != 0)
        throw Error(ErrorCode::BadBlockIndex,
                    "block column " + std::to_string(first_col) +
                        " must be a multiple of " + std::to_string(rows_) +
                        " below " + std::to_string(cols_));
    Block b;
    b.entries.resize(rows_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < rows_; ++j) b.entries(i, j) = entry(i, first_col + j);
    // The mode-m digit of first_col is zero, so this is the frozen-mode total.
    b.shell = column_shell(first_col);
    return b;
}

int CoefficientMatrixView::column_shell(long col) const {
    if (col < 0 || col >= cols_)
        throw Error(ErrorCode::InvalidArgument, "column index out of range");
    int s = 0;
    while (col > 0) {
        s += static_cast<int>(col % rows_);
        col /= rows_;
    }
    return s;
}

BlockPatternReport verify_uniform_block_structure(const ModeTensor& state,
                                                  const std::vector<Complex>& h,
                                                  double tol) {
    CoefficientMatrixView view(state);
    BlockPatternReport rep;
    const int d = view.rows();
    const int level = static_cast<int>(h.size()) - 1;
    for (long col0 = 0; col0 < view.cols(); col0 += d) {
        auto blk = view.block(col0);
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j) {
                const int total = blk.shell + i + j;
                Complex expected{0.0, 0.0};
                if (total <= level) expected = h[static_cast<std::size_t>(total)];
                if (std::abs(blk.entries(i, j) - expected) > tol) {
                    rep.ok = false;
                    rep.block = col0;
                    rep.row = i;
                    rep.col = j;
                    rep.expected = expected;
                    rep.actual = blk.entries(i, j);
                    return rep;
                }
            }
        }
    }
    return rep;
}

namespace {

std::string format_complex(Complex z) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g%+.12gj", z.real(), z.imag());
    return buf;
}

} // namespace

std::string dump_matrix(const Eigen::MatrixXcd& m) {
    std::string out;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j > 0) out += ' ';
            out += format_complex(m(i, j));
        }
        out += '\n';
    }
    return out;
}

std::string dump_blocks(const CoefficientMatrixView& view) {
    std::string out;
    for (long col0 = 0; col0 < view.cols(); col0 += view.rows()) {
        if (col0 > 0) out += "|\n";
        out += dump_matrix(view.block(col0).entries);
    }
    return out;
}

} // namespace mbs
