#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "mbs/errors.hpp"
#include "mbs/mode_tensor.hpp"

namespace mbs {

// d x d^{m-1} matrix view of a state: row = occupation of mode 1, column =
// flattened occupations of modes 2..m.  Zero-copy; the tensor's row-major
// layout with mode 1 slowest is exactly this matrix in row-major order.
class CoefficientMatrixView {
public:
    explicit CoefficientMatrixView(const ModeTensor& state);

    int rows() const { return rows_; }
    long cols() const { return cols_; }

    Complex entry(int row, long col) const;

    Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
    matrix() const;

    // Columns come in d x d blocks: the block starting at column k (k a
    // multiple of d) freezes modes 2..m-1 at the digits of k and sweeps mode m
    // over 0..d-1.
    long block_count() const { return cols_ / rows_; }

    struct Block {
        Eigen::MatrixXcd entries;
        int shell = 0; // base-d digit sum of the frozen modes 2..m-1
    };

    // first_col must be a multiple of d and < d^{m-1}; throws BadBlockIndex.
    Block block(long first_col) const;

    // Digit sum of the flattened column index: total occupation of modes 2..m.
    int column_shell(long col) const;

private:
    const ModeTensor* state_;
    int rows_ = 0;
    long cols_ = 0;
};

// Mismatch report for the shifted-Hankel block pattern of a weighted sum of
// uniform shell states: entry (i,j) of a block with frozen-shell s must be
// h[s+i+j] when s+i+j <= N (N = h.size()-1) and 0 above.
struct BlockPatternReport {
    bool ok = true;
    long block = -1; // first column of the offending block
    int row = -1;
    int col = -1;
    Complex expected{0.0, 0.0};
    Complex actual{0.0, 0.0};

    explicit operator bool() const { return ok; }
};

BlockPatternReport verify_uniform_block_structure(const ModeTensor& state,
                                                  const std::vector<Complex>& h,
                                                  double tol = 1e-10);

// One row per matrix row, entries "a+bj" separated by single spaces.
std::string dump_matrix(const Eigen::MatrixXcd& m);

// Blocks in index order, each dumped as above, separated by a line "|".
std::string dump_blocks(const CoefficientMatrixView& view);

} // namespace mbs
