#pragma once

#include "hsd/common.hpp"

namespace hsd {

// One direction of one recurrent layer. Gate order everywhere is i, f, g, o
// (input, forget, cell candidate, output); i/f/o squash through the logistic,
// g through tanh.
struct LstmDirParams {
    Mat w_in[4];   // hidden × input
    Mat w_rec[4];  // hidden × hidden
    Vec bias[4];   // hidden

    int hidden() const { return static_cast<int>(bias[0].size()); }
    int input_dim() const { return static_cast<int>(w_in[0].cols()); }
};

// One recurrence step from (h_prev, c_prev).
void lstm_cell(const LstmDirParams& p, const Vec& x, const Vec& h_prev, const Vec& c_prev,
               Vec& h, Vec& c);

// Every intermediate a backward pass needs, rows indexed by processing step.
struct LstmTrace {
    Mat inputs;                      // steps × input
    Mat i, f, g, o, c, tanh_c, h;    // steps × hidden
};

// Runs the recurrence over `inputs` (rows are consecutive steps) starting
// from zero state. The caller reverses rows to scan a sequence backwards.
LstmTrace lstm_scan(const LstmDirParams& p, const Mat& inputs);

// Backpropagates `d_h` (gradient on every step's hidden output, same row
// order as the trace) through the scan. Parameter gradients accumulate into
// `grads`; the return value is the gradient on `inputs`.
Mat lstm_scan_backward(const LstmDirParams& p, const LstmTrace& trace,
                       const Mat& d_h, LstmDirParams& grads);

}  // namespace hsd
